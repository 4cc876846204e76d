#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "maxflow/problem.hpp"
#include "maxflow/solver.hpp"

namespace maxflow {

enum class ParseErrorCode {
  syntax_error,
  missing_problem_line,
  multiple_source_lines,
  multiple_sink_lines,
  id_out_of_range,
  negative_capacity,
  capacity_out_of_range,
  invalid_terminal_arc,
  bad_magic,
};

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorCode c, uint64_t line_number, const std::string& what)
      : std::runtime_error(what), code(c), line(line_number) {}
  ParseErrorCode code;
  uint64_t line;
};

struct ParseInfo {
  uint64_t self_loops_dropped = 0;
};

// DIMACS max-flow text: `c` comments, one `p max N M` line, `n <id> s` /
// `n <id> t` designators, `a <u> <v> <cap>` arcs. Arcs incident to the
// terminals become terminal capacities, everything else internal edges.
// Opposite arcs between the same vertex pair fold into one two-sided edge
// (earliest unpaired first) so the pre-merge residual count matches one
// pair per original edge; repeated arcs over the same ordered pair stay
// duplicates for the merge step to collapse. Arcs into s, out of t, or
// s->t directly are rejected; internal self loops are dropped and counted.
// The stream is consumed line by line, only the Problem is materialized.
Problem parse_dimacs(std::istream& in, ParseInfo* info = nullptr);

// Writes a parseable equivalent: vertices 1..n, source n+1, sink n+2, one
// arc per nonzero capacity direction.
void write_dimacs(const Problem& problem, std::ostream& out);

// One line per vertex: `<id> <0|1>`, 0 = source side.
void write_cut(const CutAssignment& cut, std::ostream& out);

// Repo binary container (little endian): magic "MFPROB01", u32 version,
// u64 n, u64 arc count, n pairs of u32 terminal caps (from-source,
// to-sink), then arcs as (u64 u, u64 v, u32 cap). Arcs pair up on read
// exactly like DIMACS arcs.
void write_problem_binary(const Problem& problem, std::ostream& out);
Problem read_problem_binary(std::istream& in);

// Everything the stats JSON reports about one solve.
struct StatsReport {
  std::string algo;
  std::string mode;
  uint64_t n = 0;
  uint64_t m_i = 0;
  uint64_t m_i_plus = 0;
  uint64_t memory_bytes = 0;
  int64_t initial_flow = 0;
  SolveStats solve;
  double build_ms = 0.0;
  double solve_ms = 0.0;
};

// Fixed-key JSON document; see docs/FORMATS.md. Includes the byte budgets
// of the other representations computed from their published formulas.
void write_stats_json(const StatsReport& report, std::ostream& out);

}  // namespace maxflow
