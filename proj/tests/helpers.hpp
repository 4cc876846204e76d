#pragma once

#include <cstdint>

#include "maxflow/oracle.hpp"
#include "maxflow/problem.hpp"

namespace maxflow::testing {

// The worked four-vertex example used across the suite: a=0, b=1, c=2,
// d=3, source caps on a and c, sink caps on b and d, five internal edges.
// Max flow 9, minimum cut {a, c}.
inline Problem fig1_problem() {
  Problem p;
  p.n = 4;
  p.terminal_caps = {{5, 0}, {0, 9}, {5, 0}, {0, 2}};
  p.add_edge(2, 0, 4, 0);
  p.add_edge(0, 1, 7, 0);
  p.add_edge(2, 3, 2, 3);
  p.add_edge(1, 2, 5, 0);
  p.add_edge(3, 1, 4, 0);
  return p;
}

inline Problem family_instance(uint64_t seed) { return gen_differential_instance(seed); }

// Adversarial family for the adoption-stage work bound. A sink-side comb
// (spine a_1..a_L under the terminal anchor r, one tooth per spine vertex)
// is probed by the orphan o, whose candidate parents are all L teeth. One
// unit augmentation through o and r orphans both at once, with o processed
// first, so every tooth triggers a findroot down the dead spine. Without
// orphan-path flags each probe walks to the spine root; with them only the
// first one does. A source-side chain g_0..g_p paces the growth so the
// comb is fully grown before the bridge appears.
//
// Layout: r = 0 (sink cap 1), spine a_i = i, teeth u_i = L + i,
// o = 2L + 1, chain g_j = 2L + 2 + j with p = 2L + 8, so n = 4L + 11.
// The max flow is exactly 1.
inline Problem comb_instance(uint64_t spine_len) {
  const uint64_t L = spine_len;
  const uint64_t p_len = 2 * L + 8;
  const uint32_t C = 100;
  const uint64_t o = 2 * L + 1;
  const uint64_t g0 = 2 * L + 2;

  Problem p;
  p.n = 4 * L + 11;
  p.terminal_caps.resize(p.n);
  p.terminal_caps[0].to_sink = 1;
  p.terminal_caps[g0].from_source = C;

  p.add_edge(o, 0, 1, 0);
  p.add_edge(1, 0, C, 0);
  for (uint64_t i = 1; i < L; ++i) p.add_edge(i + 1, i, C, 0);
  for (uint64_t i = 1; i <= L; ++i) p.add_edge(L + i, i, C, 0);
  for (uint64_t i = 1; i <= L; ++i) p.add_edge(o, L + i, C, 0);
  for (uint64_t j = 0; j < p_len; ++j) p.add_edge(g0 + j, g0 + j + 1, C, 0);
  p.add_edge(g0 + p_len, o, C, 0);
  return p;
}

// Exhaustive minimum cut over all 2^n side assignments; only sane for
// n <= ~20.
inline int64_t exhaustive_min_cut(const Problem& p) {
  int64_t best = -1;
  CutAssignment cut;
  cut.side.resize(p.n);
  for (uint64_t mask = 0; mask < (1ull << p.n); ++mask) {
    for (uint64_t v = 0; v < p.n; ++v) cut.side[v] = (mask >> v) & 1;
    int64_t value = oracle_cut_value(p, cut);
    if (best < 0 || value < best) best = value;
  }
  return best;
}

}  // namespace maxflow::testing
