#pragma once

#include <cstdint>

#include "maxflow/problem.hpp"

namespace maxflow {

// Reference max-flow via breadth-first shortest augmenting paths.
// Deliberately shares no code with the packed-graph solvers: it works on
// its own adjacency built straight from the Problem, without merging
// parallel edges. Deterministic and independent of edge-list order.
int64_t oracle_max_flow(const Problem& problem);

// Capacity of the cut induced by `assignment` over the original problem:
// internal capacities crossing source->sink, plus source caps of sink-side
// vertices and sink caps of source-side vertices.
int64_t oracle_cut_value(const Problem& problem, const CutAssignment& assignment);

// SplitMix64. Fixed here so instances regenerate identically from seeds
// in any port of the generator.
struct SplitMix64 {
  uint64_t state = 0;

  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform value in [0, bound). Uses the modulo reduction; the tiny bias
  // is irrelevant for test instances and keeps the sequence portable.
  uint64_t below(uint64_t bound) { return bound == 0 ? 0 : next() % bound; }
};

// Seeded random instance. Draw order is fixed: for each vertex, one draw
// deciding whether it has a source cap, then (if so) the cap, then the
// same two draws for the sink cap; afterwards m edges, each as endpoint u,
// endpoint v (resampled to differ from u by shifting), then cap_uv and
// cap_vu, all uniform in [0, cap_max]. n < 2 yields no edges.
Problem gen_random(uint64_t seed, uint64_t n, uint64_t m, uint32_t cap_max,
                   double terminal_density);

// The differential-test family: one seed fixes both the shape (n up to 50,
// m up to 300 with duplicates, caps up to 20, varying terminal density)
// and the instance. Shared by the test suites and the check subcommand.
inline Problem gen_differential_instance(uint64_t seed) {
  return gen_random(seed, 2 + seed % 49, (seed * 13) % 301,
                    static_cast<uint32_t>((seed * 7) % 21),
                    static_cast<double>(seed % 10 + 1) / 10.0);
}

}  // namespace maxflow
