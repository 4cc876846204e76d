#pragma once

#include <cstdint>
#include <deque>
#include <optional>

#include "maxflow/build.hpp"
#include "maxflow/word_store.hpp"

namespace maxflow {

enum class Algo { cbk, fcbk };

struct SolveOptions {
  Algo algo = Algo::cbk;
  // Re-validate the forest structure, mirror flags and (for fcbk) the
  // orphan-path flag invariants after every stage. Throws std::logic_error
  // on the first violation.
  bool debug_invariants = false;
  // Relative-mode next-active links with a larger absolute offset go
  // through the external queue. Tests shrink this to force that path.
  uint32_t rel_next_active_limit = 0x7FFFFFFFu;
};

struct SolveStats {
  int64_t flow = 0;
  uint64_t augmentations = 0;
  uint64_t orphans_processed = 0;
  uint64_t growth_edge_scans = 0;
  uint64_t growth_edge_scans_stage_max = 0;
  uint64_t findroot_traversals_total = 0;   // parent edges walked
  uint64_t findroot_traversals_stage_max = 0;
  uint64_t adoption_stages = 0;
  uint64_t flags_set = 0;
  uint64_t flags_cleared = 0;
  uint64_t external_queue_pushes = 0;
  double solve_ms = 0.0;
};

// A non-saturated residual edge from the source tree into the sink tree.
struct Bridge {
  uint64_t tail;  // word index of the S-side endpoint
  uint32_t slot;  // edge ordinal at the tail
};

struct RootResult {
  bool reached_terminal = false;
  uint32_t dist = 0;  // hops to the terminal, counting the terminal edge
};

// One solver run owns the store exclusively. The stage-level entry points
// are public because they are meaningful operations on their own (and are
// exercised directly by tests); solve() is the normal interface.
class BkSolver {
 public:
  BkSolver(WordStore& store, SolveOptions options = {});

  int64_t solve();

  // Scans active vertices, adopting free neighbors, until it either finds
  // a bridge (the discovering vertex stays at the head of the active list
  // and is rescanned from slot 0 afterwards) or exhausts the active list.
  std::optional<Bridge> growth_stage();

  struct AugmentResult {
    uint32_t delta = 0;
    uint64_t orphans = 0;
  };
  // Pushes the bottleneck along the terminal-to-terminal path through the
  // bridge and queues every vertex whose tree edge saturates as an orphan.
  AugmentResult augment(const Bridge& bridge);

  // Runs one adoption stage: bumps the clock and processes the orphan
  // queues until none remain.
  void adopt();

  // Walks parent edges from `start` until a terminal-parented or marked
  // vertex (reached), or an orphan / free vertex / orphan-path flag
  // (disconnected). Marks the walked path on success; in fcbk mode flags
  // it on failure.
  RootResult findroot(uint64_t start);

  const SolveStats& stats() const { return stats_; }
  uint32_t global_time() const { return global_time_; }

  // Test hooks.
  void debug_set_global_time(uint32_t t) { global_time_ = t; }
  void seed_orphan(uint64_t v);
  uint64_t active_peek() const { return active_.peek(); }

 private:
  void advance_time();
  void process_orphan(uint64_t o);
  void make_orphan(uint64_t v);
  void clear_flags_dfs(uint64_t root);
  void push_along_s_chain(uint64_t from, uint32_t delta);
  void push_along_t_chain(uint64_t from, uint32_t delta);
  void validate(bool adoption_finished);

  WordStore& s_;
  SolveOptions opt_;
  ActiveList active_;
  std::deque<uint64_t> orphan_fifo_;
  std::vector<uint64_t> orphan_lifo_;  // orphans spawned by a processed orphan
  uint32_t global_time_ = 1;
  int64_t live_flags_ = 0;
  SolveStats stats_;
  uint64_t stage_traversals_ = 0;
  uint64_t stage_scans_ = 0;
};

// Convenience wrappers used by the CLI and tests.
inline int64_t solve_cbk(WordStore& store, SolveStats* stats = nullptr,
                         bool debug_invariants = false) {
  BkSolver solver(store, {Algo::cbk, debug_invariants});
  int64_t flow = solver.solve();
  if (stats) *stats = solver.stats();
  return flow;
}

inline int64_t solve_fcbk(WordStore& store, SolveStats* stats = nullptr,
                          bool debug_invariants = false) {
  BkSolver solver(store, {Algo::fcbk, debug_invariants});
  int64_t flow = solver.solve();
  if (stats) *stats = solver.stats();
  return flow;
}

// Reads the finished trees out of the store: source side for non-free
// vertices of S, sink side for everything else (free vertices land on the
// sink side). Throws std::logic_error if the store was never solved.
CutAssignment extract_cut(const WordStore& store);

// Debug validators, also used directly by tests.
void validate_forests(const WordStore& store);
void validate_mirror_flags(const WordStore& store);
void validate_prepush(const WordStore& store);
// Every flagged vertex must sit in an orphan-rooted tree.
void validate_orphan_flags(const WordStore& store);
uint64_t count_flags(const WordStore& store);

}  // namespace maxflow
