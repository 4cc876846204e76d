#include <doctest.h>

#include "helpers.hpp"
#include "maxflow/solver.hpp"

using namespace maxflow;
using namespace maxflow::testing;

namespace {

uint32_t slot_of(const WordStore& s, uint64_t tail, uint64_t head) {
  for (uint32_t j = 0; j < s.degree(tail); ++j)
    if (s.resolve_head(tail, j) == head) return j;
  REQUIRE(false);
  return ~0u;
}

// A source-rooted chain v0 <- v1 <- ... <- v(k-1) ready for scripted
// adoption tests.
struct Chain {
  BuildResult built;
  std::vector<uint64_t> w;
};

Chain grown_chain(uint64_t k) {
  Problem p;
  p.n = k;
  p.terminal_caps.resize(k);
  p.terminal_caps[0].from_source = 50;
  for (uint64_t v = 0; v + 1 < k; ++v) p.add_edge(v, v + 1, 5, 5);
  Chain c{build(p), {}};
  for (VertexRef v : iterate_vertices(c.built.store)) c.w.push_back(v.word);
  return c;
}

}  // namespace

TEST_CASE("failed searches flag the walked path and later searches stop early") {
  Chain c = grown_chain(5);
  WordStore& s = c.built.store;
  BkSolver solver(s, {Algo::fcbk});
  CHECK_FALSE(solver.growth_stage().has_value());
  solver.debug_set_global_time(9);

  // Orphan the second vertex: everything above it hangs off an orphan.
  solver.seed_orphan(c.w[1]);
  RootResult r = solver.findroot(c.w[4]);
  CHECK_FALSE(r.reached_terminal);
  CHECK(solver.stats().findroot_traversals_total == 3);  // v4 -> v3 -> v2 -> v1
  CHECK(s.ts_or_trcap(c.w[4]) == kFlagTimestamp);
  CHECK(s.ts_or_trcap(c.w[3]) == kFlagTimestamp);
  CHECK(s.ts_or_trcap(c.w[2]) == kFlagTimestamp);
  CHECK(s.ts_or_trcap(c.w[1]) != kFlagTimestamp);  // the terminator keeps its state

  // A second search from anywhere on the chain walks zero parent edges.
  RootResult again = solver.findroot(c.w[3]);
  CHECK_FALSE(again.reached_terminal);
  CHECK(solver.stats().findroot_traversals_total == 3);

  // Starting at a flagged vertex is free too.
  RootResult at_flag = solver.findroot(c.w[4]);
  CHECK_FALSE(at_flag.reached_terminal);
  CHECK(solver.stats().findroot_traversals_total == 3);
  CHECK(solver.stats().flags_set == 3);
}

TEST_CASE("successful searches mark and never flag") {
  Chain c = grown_chain(4);
  WordStore& s = c.built.store;
  BkSolver solver(s, {Algo::fcbk});
  CHECK_FALSE(solver.growth_stage().has_value());
  solver.debug_set_global_time(5);
  RootResult r = solver.findroot(c.w[3]);
  CHECK(r.reached_terminal);
  CHECK(r.dist == 4);
  CHECK(solver.stats().flags_set == 0);
  CHECK(s.ts_or_trcap(c.w[3]) == 5);
}

TEST_CASE("reconnecting an orphan clears and marks its flagged subtree") {
  // v0 (terminal) - v1 - v2 - v3 - v4 chain plus a helper edge v0 -> v2
  // so the orphan v2 can reconnect after v1's edge is cut.
  Problem p;
  p.n = 5;
  p.terminal_caps.resize(5);
  p.terminal_caps[0].from_source = 50;
  p.add_edge(0, 1, 5, 5);
  p.add_edge(1, 2, 5, 5);
  p.add_edge(2, 3, 5, 5);
  p.add_edge(3, 4, 5, 5);
  p.add_edge(0, 2, 5, 5);
  BuildResult r = build(p);
  WordStore& s = r.store;
  BkSolver solver(s, {Algo::fcbk, true});
  CHECK_FALSE(solver.growth_stage().has_value());
  std::vector<uint64_t> w;
  for (VertexRef v : iterate_vertices(s)) w.push_back(v.word);

  // Force the chain parents regardless of what growth built, flag the
  // tail of the subtree, orphan v2.
  set_parent(s, w[2], slot_of(s, w[2], w[1]));
  set_parent(s, w[3], slot_of(s, w[3], w[2]));
  set_parent(s, w[4], slot_of(s, w[4], w[3]));
  solver.debug_set_global_time(30);
  solver.seed_orphan(w[2]);
  RootResult probe = solver.findroot(w[4]);
  CHECK_FALSE(probe.reached_terminal);
  CHECK(s.ts_or_trcap(w[4]) == kFlagTimestamp);
  CHECK(s.ts_or_trcap(w[3]) == kFlagTimestamp);

  // adopt() reconnects v2 through v0 (helper edge) or v1 and must clear
  // the flags below it, marking the subtree as terminal-connected.
  solver.adopt();
  const uint32_t now = solver.global_time();
  CHECK(s.has_internal_parent(w[2]));
  CHECK(count_flags(s) == 0);
  CHECK(s.ts_or_trcap(w[3]) == now);
  CHECK(s.ts_or_trcap(w[4]) == now);
  CHECK(s.distance(w[3]) == s.distance(w[2]) + 1);
  CHECK(s.distance(w[4]) == s.distance(w[2]) + 2);

  // Marked subtree: findroot from the former tail walks zero edges.
  uint64_t before = solver.stats().findroot_traversals_total;
  RootResult again = solver.findroot(w[4]);
  CHECK(again.reached_terminal);
  CHECK(solver.stats().findroot_traversals_total == before);
}

TEST_CASE("a freed orphan drops its own flag") {
  // Orphan v1 with its terminal edge cut: the candidate probe from v2
  // fails through v1 and flags v2; then v1 dissolves and the now-flagged
  // orphan v2 is freed, which must clear its flag.
  Chain c = grown_chain(3);
  WordStore& s = c.built.store;
  BkSolver solver(s, {Algo::fcbk, true});
  CHECK_FALSE(solver.growth_stage().has_value());
  uint32_t j01 = slot_of(s, c.w[0], c.w[1]);
  s.set_edge_cap(s.edge_word(c.w[0], j01), 0);
  s.set_mirror_saturated(s.edge_word(c.w[1], slot_of(s, c.w[1], c.w[0])), true);
  solver.seed_orphan(c.w[1]);
  solver.adopt();
  CHECK(s.is_free(c.w[1]));
  CHECK(s.is_free(c.w[2]));
  CHECK(solver.stats().flags_set == 1);      // v2, flagged by its own failed probe
  CHECK(solver.stats().flags_cleared == 1);  // dropped when v2 was freed
  CHECK(count_flags(s) == 0);
}

TEST_CASE("reconnection with an unflagged subtree visits nothing") {
  // v2 has no capacity back toward v1, so it is never probed as a
  // potential parent and never picks up a flag.
  Problem p;
  p.n = 3;
  p.terminal_caps.resize(3);
  p.terminal_caps[0].from_source = 50;
  p.add_edge(0, 1, 5, 5);
  p.add_edge(1, 2, 5, 0);
  BuildResult r = build(p);
  WordStore& s = r.store;
  BkSolver solver(s, {Algo::fcbk, true});
  CHECK_FALSE(solver.growth_stage().has_value());
  std::vector<uint64_t> w;
  for (VertexRef v : iterate_vertices(s)) w.push_back(v.word);
  solver.seed_orphan(w[1]);
  solver.adopt();  // v1 reconnects through v0's residual pair
  CHECK(s.has_internal_parent(w[1]));
  CHECK(solver.stats().flags_set == 0);
  CHECK(solver.stats().flags_cleared == 0);  // no flagged child to visit
}

TEST_CASE("three-way differential including flag hygiene") {
  for (uint64_t seed = 300; seed < 420; ++seed) {
    Problem p = family_instance(seed);
    int64_t expected = oracle_max_flow(p);
    BuildResult rc = build(p);
    BuildResult rf = build(p);
    int64_t cbk = solve_cbk(rc.store);
    SolveStats fs;
    int64_t fcbk = solve_fcbk(rf.store, &fs, true);  // Lemma 1 checked per orphan
    CAPTURE(seed);
    CHECK(cbk == expected);
    CHECK(fcbk == expected);
    CHECK(count_flags(rf.store) == 0);
    CHECK(fs.flags_set == fs.flags_cleared);
    CHECK(extract_cut(rf.store).flow == expected);
    CHECK(oracle_cut_value(p, extract_cut(rf.store)) == expected);
  }
}

TEST_CASE("comb family separates the adoption work of the two engines") {
  const uint64_t L = 120;
  Problem p = comb_instance(L);
  const uint64_t n = p.n;

  BuildResult rc = build(p);
  SolveStats sc;
  CHECK(solve_cbk(rc.store, &sc, true) == 1);

  BuildResult rf = build(p);
  SolveStats sf;
  CHECK(solve_fcbk(rf.store, &sf, true) == 1);

  // Without flags the dead spine is rewalked per tooth: quadratic in one
  // stage. With flags every stage stays within n parent-edge traversals.
  CHECK(sc.findroot_traversals_stage_max >= L * (L + 1) / 2);
  CHECK(sc.findroot_traversals_stage_max > 10 * n);
  CHECK(sf.findroot_traversals_stage_max <= n);
  CHECK(sf.flags_set > 0);
  CHECK(sf.flags_set == sf.flags_cleared);
}
