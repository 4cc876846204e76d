#pragma once

#include <stdexcept>
#include <string>

#include "maxflow/problem.hpp"
#include "maxflow/word_store.hpp"

namespace maxflow {

enum class BuildErrorCode {
  capacity_overflow,
  degree_overflow,
  relative_index_overflow,
  self_loop,
  terminal_edge_in_internal_list,
  word_index_overflow,
};

class BuildError : public std::runtime_error {
 public:
  BuildError(BuildErrorCode c, const std::string& what) : std::runtime_error(what), code(c) {}
  BuildErrorCode code;
};

enum class BuildMode { auto_select, absolute, relative };

struct BuildOptions {
  // Skip the merge pass and trust that the edge list has no duplicate
  // vertex pairs (asserted in debug builds).
  bool assume_merged = false;
};

struct BuildResult {
  WordStore store;
  int64_t initial_flow = 0;  // flow pre-pushed through the terminal edges

  // Internal residual edge count before merging, 2 per problem edge.
  uint64_t m_i_plus = 0;
};

// Packs a Problem into the interleaved word layout. Parallel edges are
// merged per direction, pairs with no capacity either way are dropped, and
// min(cap_s, cap_t) is pre-pushed through every vertex so each keeps a
// one-sided terminal residual. Vertices with a remaining terminal cap start
// as terminal-parented tree vertices at distance 1; everything else starts
// free. auto_select uses absolute references whenever word indices fit in
// 32 bits.
BuildResult build(const Problem& problem, BuildMode mode = BuildMode::auto_select,
                  const BuildOptions& options = {});

}  // namespace maxflow
