#include "maxflow/io.hpp"

#include <array>
#include <cstring>
#include <deque>
#include <istream>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace maxflow {

namespace {

constexpr uint64_t kNoId = ~0ull;

struct PairKeyHash {
  size_t operator()(const std::pair<uint64_t, uint64_t>& k) const {
    uint64_t h = k.first * 0x9E3779B97F4A7C15ull ^ (k.second + 0x517CC1B727220A95ull);
    h ^= h >> 29;
    return static_cast<size_t>(h * 0xBF58476D1CE4E5B9ull);
  }
};

// Folds directed arcs into two-sided problem edges: an arc (u,v) first
// fills the open v->u side of the earliest unpaired (v,u) edge, otherwise
// it opens a new edge. Duplicate arcs over the same ordered pair therefore
// stay separate edges.
class ArcAccumulator {
 public:
  explicit ArcAccumulator(std::vector<ProblemEdge>& edges) : edges_(edges) {}

  void add(uint64_t u, uint64_t v, uint32_t cap) {
    auto it = open_.find({v, u});
    if (it != open_.end() && !it->second.empty()) {
      size_t idx = it->second.front();
      it->second.pop_front();
      edges_[idx].cap_vu = cap;
      return;
    }
    open_[{u, v}].push_back(edges_.size());
    edges_.push_back(ProblemEdge{u, v, cap, 0});
  }

 private:
  std::vector<ProblemEdge>& edges_;
  std::unordered_map<std::pair<uint64_t, uint64_t>, std::deque<size_t>, PairKeyHash> open_;
};

uint64_t checked_id(int64_t raw, uint64_t n_file, uint64_t line) {
  if (raw < 1 || static_cast<uint64_t>(raw) > n_file)
    throw ParseError(ParseErrorCode::id_out_of_range, line, "vertex id out of range");
  return static_cast<uint64_t>(raw);
}

}  // namespace

Problem parse_dimacs(std::istream& in, ParseInfo* info) {
  Problem problem;
  ParseInfo local;
  uint64_t n_file = 0;
  uint64_t source = kNoId, sink = kNoId;
  bool have_problem_line = false;
  std::vector<std::array<uint64_t, 2>> terminal_caps;  // accumulated 64-bit
  std::unique_ptr<ArcAccumulator> arcs;
  std::vector<std::pair<std::array<uint64_t, 3>, uint64_t>> pending;  // arcs before n-lines

  std::string line;
  uint64_t line_no = 0;

  auto remap = [&](uint64_t id) {
    // drop the two terminal ids, keep everything else in order
    return id - 1 - (id > source ? 1 : 0) - (id > sink ? 1 : 0);
  };
  auto handle_arc = [&](uint64_t u, uint64_t v, uint64_t cap, uint64_t at_line) {
    if (v == source || u == sink || (u == source && v == sink))
      throw ParseError(ParseErrorCode::invalid_terminal_arc, at_line,
                       "arc into the source or out of the sink");
    if (u == source) {
      terminal_caps[remap(v)][0] += cap;
      if (terminal_caps[remap(v)][0] > std::numeric_limits<uint32_t>::max())
        throw ParseError(ParseErrorCode::capacity_out_of_range, at_line,
                         "accumulated terminal capacity exceeds 32 bits");
      return;
    }
    if (v == sink) {
      terminal_caps[remap(u)][1] += cap;
      if (terminal_caps[remap(u)][1] > std::numeric_limits<uint32_t>::max())
        throw ParseError(ParseErrorCode::capacity_out_of_range, at_line,
                         "accumulated terminal capacity exceeds 32 bits");
      return;
    }
    if (u == v) {
      ++local.self_loops_dropped;  // cannot affect the cut value
      return;
    }
    arcs->add(remap(u), remap(v), static_cast<uint32_t>(cap));
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    char kind;
    if (!(ls >> kind)) continue;
    switch (kind) {
      case 'c':
        break;
      case 'p': {
        std::string tag;
        int64_t n_raw = -1, m_raw = -1;
        if (!(ls >> tag >> n_raw >> m_raw) || tag != "max" || n_raw < 2 || m_raw < 0)
          throw ParseError(ParseErrorCode::syntax_error, line_no, "bad problem line");
        if (have_problem_line)
          throw ParseError(ParseErrorCode::syntax_error, line_no, "repeated problem line");
        have_problem_line = true;
        n_file = static_cast<uint64_t>(n_raw);
        break;
      }
      case 'n': {
        if (!have_problem_line)
          throw ParseError(ParseErrorCode::missing_problem_line, line_no,
                           "node designator before the problem line");
        int64_t id_raw;
        char which;
        if (!(ls >> id_raw >> which))
          throw ParseError(ParseErrorCode::syntax_error, line_no, "bad node designator");
        uint64_t id = checked_id(id_raw, n_file, line_no);
        if (which == 's') {
          if (source != kNoId)
            throw ParseError(ParseErrorCode::multiple_source_lines, line_no,
                             "second source designator");
          source = id;
        } else if (which == 't') {
          if (sink != kNoId)
            throw ParseError(ParseErrorCode::multiple_sink_lines, line_no,
                             "second sink designator");
          sink = id;
        } else {
          throw ParseError(ParseErrorCode::syntax_error, line_no, "bad node designator");
        }
        break;
      }
      case 'a': {
        if (!have_problem_line)
          throw ParseError(ParseErrorCode::missing_problem_line, line_no,
                           "arc before the problem line");
        int64_t u_raw, v_raw, cap_raw;
        if (!(ls >> u_raw >> v_raw >> cap_raw))
          throw ParseError(ParseErrorCode::syntax_error, line_no, "bad arc line");
        if (cap_raw < 0)
          throw ParseError(ParseErrorCode::negative_capacity, line_no,
                           "negative arc capacity");
        if (static_cast<uint64_t>(cap_raw) > std::numeric_limits<uint32_t>::max())
          throw ParseError(ParseErrorCode::capacity_out_of_range, line_no,
                           "arc capacity exceeds 32 bits");
        uint64_t u = checked_id(u_raw, n_file, line_no);
        uint64_t v = checked_id(v_raw, n_file, line_no);
        if (source == kNoId || sink == kNoId) {
          pending.push_back({{u, v, static_cast<uint64_t>(cap_raw)}, line_no});
          break;
        }
        if (arcs == nullptr) {
          problem.n = n_file - 2;
          terminal_caps.assign(problem.n, {0, 0});
          arcs = std::make_unique<ArcAccumulator>(problem.edges);
          for (auto& [a, at_line] : pending) handle_arc(a[0], a[1], a[2], at_line);
          pending.clear();
        }
        handle_arc(u, v, static_cast<uint64_t>(cap_raw), line_no);
        break;
      }
      default:
        throw ParseError(ParseErrorCode::syntax_error, line_no, "unknown line kind");
    }
  }
  if (!have_problem_line)
    throw ParseError(ParseErrorCode::missing_problem_line, line_no, "no problem line");
  if (source == kNoId || sink == kNoId)
    throw ParseError(ParseErrorCode::syntax_error, line_no,
                     "missing source or sink designator");
  if (arcs == nullptr) {
    problem.n = n_file - 2;
    terminal_caps.assign(problem.n, {0, 0});
    arcs = std::make_unique<ArcAccumulator>(problem.edges);
    for (auto& [a, at_line] : pending) handle_arc(a[0], a[1], a[2], at_line);
    pending.clear();
  }

  problem.terminal_caps.resize(problem.n);
  for (uint64_t v = 0; v < problem.n; ++v) {
    problem.terminal_caps[v].from_source = static_cast<uint32_t>(terminal_caps[v][0]);
    problem.terminal_caps[v].to_sink = static_cast<uint32_t>(terminal_caps[v][1]);
  }
  if (info) *info = local;
  return problem;
}

void write_dimacs(const Problem& problem, std::ostream& out) {
  uint64_t arcs = 0;
  for (uint64_t v = 0; v < problem.n; ++v) {
    arcs += (problem.terminal_caps[v].from_source > 0) +
            (problem.terminal_caps[v].to_sink > 0);
  }
  for (const ProblemEdge& e : problem.edges) arcs += (e.cap_uv > 0) + (e.cap_vu > 0);

  const uint64_t s = problem.n + 1, t = problem.n + 2;
  out << "p max " << problem.n + 2 << ' ' << arcs << '\n';
  out << "n " << s << " s\n";
  out << "n " << t << " t\n";
  for (uint64_t v = 0; v < problem.n; ++v) {
    if (problem.terminal_caps[v].from_source > 0)
      out << "a " << s << ' ' << v + 1 << ' ' << problem.terminal_caps[v].from_source
          << '\n';
    if (problem.terminal_caps[v].to_sink > 0)
      out << "a " << v + 1 << ' ' << t << ' ' << problem.terminal_caps[v].to_sink << '\n';
  }
  for (const ProblemEdge& e : problem.edges) {
    if (e.cap_uv > 0) out << "a " << e.u + 1 << ' ' << e.v + 1 << ' ' << e.cap_uv << '\n';
    if (e.cap_vu > 0) out << "a " << e.v + 1 << ' ' << e.u + 1 << ' ' << e.cap_vu << '\n';
  }
}

void write_cut(const CutAssignment& cut, std::ostream& out) {
  for (size_t v = 0; v < cut.side.size(); ++v)
    out << v << ' ' << (cut.side[v] ? 1 : 0) << '\n';
}

namespace {

constexpr char kMagic[8] = {'M', 'F', 'P', 'R', 'O', 'B', '0', '1'};

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<unsigned char, sizeof(T)> buf;
  for (size_t i = 0; i < sizeof(T); ++i) buf[i] = (value >> (8 * i)) & 0xFF;
  out.write(reinterpret_cast<const char*>(buf.data()), buf.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> buf;
  in.read(reinterpret_cast<char*>(buf.data()), buf.size());
  if (!in) throw ParseError(ParseErrorCode::syntax_error, 0, "truncated binary problem");
  T value = 0;
  for (size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(buf[i]) << (8 * i);
  return value;
}

}  // namespace

void write_problem_binary(const Problem& problem, std::ostream& out) {
  uint64_t arcs = 0;
  for (const ProblemEdge& e : problem.edges) arcs += (e.cap_uv > 0) + (e.cap_vu > 0);
  out.write(kMagic, sizeof(kMagic));
  put_le<uint32_t>(out, 1);
  put_le<uint64_t>(out, problem.n);
  put_le<uint64_t>(out, arcs);
  for (const TerminalCaps& tc : problem.terminal_caps) {
    put_le<uint32_t>(out, tc.from_source);
    put_le<uint32_t>(out, tc.to_sink);
  }
  for (const ProblemEdge& e : problem.edges) {
    if (e.cap_uv > 0) {
      put_le<uint64_t>(out, e.u);
      put_le<uint64_t>(out, e.v);
      put_le<uint32_t>(out, e.cap_uv);
    }
    if (e.cap_vu > 0) {
      put_le<uint64_t>(out, e.v);
      put_le<uint64_t>(out, e.u);
      put_le<uint32_t>(out, e.cap_vu);
    }
  }
}

Problem read_problem_binary(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw ParseError(ParseErrorCode::bad_magic, 0, "not a binary problem file");
  uint32_t version = get_le<uint32_t>(in);
  if (version != 1)
    throw ParseError(ParseErrorCode::bad_magic, 0, "unsupported binary problem version");
  Problem problem;
  problem.n = get_le<uint64_t>(in);
  uint64_t arcs = get_le<uint64_t>(in);
  problem.terminal_caps.resize(problem.n);
  for (uint64_t v = 0; v < problem.n; ++v) {
    problem.terminal_caps[v].from_source = get_le<uint32_t>(in);
    problem.terminal_caps[v].to_sink = get_le<uint32_t>(in);
  }
  ArcAccumulator acc(problem.edges);
  for (uint64_t i = 0; i < arcs; ++i) {
    uint64_t u = get_le<uint64_t>(in);
    uint64_t v = get_le<uint64_t>(in);
    uint32_t cap = get_le<uint32_t>(in);
    if (u >= problem.n || v >= problem.n)
      throw ParseError(ParseErrorCode::id_out_of_range, 0, "arc id out of range");
    if (u == v) continue;
    acc.add(u, v, cap);
  }
  return problem;
}

void write_stats_json(const StatsReport& r, std::ostream& out) {
  const uint64_t n = r.n, m = r.m_i;
  nlohmann::ordered_json j{
      {"algo", r.algo},
      {"mode", r.mode},
      {"flow", r.solve.flow},
      {"n", n},
      {"m_i", m},
      {"m_i_plus", r.m_i_plus},
      {"memory_bytes", r.memory_bytes},
      {"initial_flow", r.initial_flow},
      {"augmentations", r.solve.augmentations},
      {"orphans_processed", r.solve.orphans_processed},
      {"growth_edge_scans", r.solve.growth_edge_scans},
      {"findroot_traversals_total", r.solve.findroot_traversals_total},
      {"findroot_traversals_stage_max", r.solve.findroot_traversals_stage_max},
      {"adoption_stages", r.solve.adoption_stages},
      {"flags_set", r.solve.flags_set},
      {"flags_cleared", r.solve.flags_cleared},
      {"external_queue_pushes", r.solve.external_queue_pushes},
      {"build_ms", r.build_ms},
      {"solve_ms", r.solve_ms},
      // Published byte budgets of the other layouts, for comparison only.
      {"memory_model_bytes",
       {{"fcbk_cbk", 16 * n + 8 * m},
        {"bk_small", 28 * n + 16 * m},
        {"bk_large", 48 * n + 32 * m},
        {"mbk_small_large", 23 * n + 12 * m},
        {"mbk_extra_large", 35 * n + 20 * m},
        {"mbk_r_small_large", 23 * n + 13 * m},
        {"mbk_r_extra_large", 35 * n + 21 * m}}},
  };
  out << j.dump(2) << '\n';
}

}  // namespace maxflow
