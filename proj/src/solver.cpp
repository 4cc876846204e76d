#include "maxflow/solver.hpp"

#include <chrono>
#include <stdexcept>

namespace maxflow {

BkSolver::BkSolver(WordStore& store, SolveOptions options) : s_(store), opt_(options) {
  active_.set_rel_limit(opt_.rel_next_active_limit);
  for (VertexRef v : iterate_vertices(s_)) {
    if (s_.is_terminal_parented(v.word)) active_.push(s_, v.word);
  }
}

void BkSolver::advance_time() {
  if (++global_time_ == kFlagTimestamp) {
    // Timestamp wraparound: invalidate every stored timestamp and restart
    // the clock below the reserved flag value.
    for (VertexRef v : iterate_vertices(s_)) {
      if (!s_.is_terminal_parented(v.word)) s_.set_ts_or_trcap(v.word, 0);
    }
    global_time_ = 1;
  }
}

void BkSolver::seed_orphan(uint64_t v) {
  if (s_.is_terminal_parented(v)) s_.set_ts_or_trcap(v, 0);
  s_.set_parent_code(v, kParentOrphan);
  orphan_fifo_.push_back(v);
}

void BkSolver::make_orphan(uint64_t v) {
  if (s_.is_terminal_parented(v)) s_.set_ts_or_trcap(v, 0);  // trcap word becomes a stale timestamp
  s_.set_parent_code(v, kParentOrphan);
  orphan_fifo_.push_back(v);
}

std::optional<Bridge> BkSolver::growth_stage() {
  stage_scans_ = 0;
  while (!active_.empty()) {
    uint64_t v = active_.peek();
    if (s_.is_free(v)) {  // freed after it was queued
      active_.pop(s_);
      continue;
    }
    assert(!s_.is_orphan(v) && "orphans must not survive into a growth stage");
    const bool v_in_s = !s_.in_sink_tree(v);
    const bool v_terminal = s_.is_terminal_parented(v);
    const uint32_t deg = s_.degree(v);
    for (uint32_t slot = 0; slot < deg; ++slot) {
      ++stats_.growth_edge_scans;
      ++stage_scans_;
      const uint64_t e = s_.edge_word(v, slot);
      // S grows along outgoing residual edges, T along incoming ones (the
      // mirror-saturated flag stands in for the mirror's capacity).
      const bool usable = v_in_s ? s_.edge_cap(e) > 0 : !s_.mirror_saturated(e);
      if (!usable) continue;
      const uint64_t u = s_.resolve_head(v, slot);
      const uint32_t upc = s_.parent_code(u);
      if (upc == kParentFree) {
        MirrorRef back = mirror_scan(s_, v, slot);
        set_parent(s_, u, back.slot, slot);
        s_.set_distance(u, s_.distance(v) + 1);
        s_.set_ts_or_trcap(u, v_terminal ? global_time_ : s_.ts_or_trcap(v));
        active_.push(s_, u);
      } else if (s_.in_sink_tree(u) != s_.in_sink_tree(v)) {
        stats_.growth_edge_scans_stage_max =
            std::max(stats_.growth_edge_scans_stage_max, stage_scans_);
        if (v_in_s) return Bridge{v, slot};
        // v is in T; the bridge runs from u's side of this edge.
        MirrorRef back = mirror_scan(s_, v, slot);
        active_.push(s_, u);  // the bridge tail stays active
        return Bridge{u, back.slot};
      } else if (!v_terminal && upc < kParentTerminal) {
        // Same tree: re-parent u through v if both carry a current mark
        // and that shortcuts the tree.
        if (s_.ts_or_trcap(v) == global_time_ && s_.ts_or_trcap(u) == global_time_ &&
            s_.distance(v) + 1 < s_.distance(u)) {
          MirrorRef back = mirror_scan(s_, v, slot);
          set_parent(s_, u, back.slot, slot);
          s_.set_distance(u, s_.distance(v) + 1);
        }
      }
    }
    active_.pop(s_);  // fully scanned: passive
  }
  stats_.growth_edge_scans_stage_max =
      std::max(stats_.growth_edge_scans_stage_max, stage_scans_);
  return std::nullopt;
}

BkSolver::AugmentResult BkSolver::augment(const Bridge& bridge) {
  const uint64_t e_bridge = s_.edge_word(bridge.tail, bridge.slot);
  const uint64_t q = s_.resolve_head(bridge.tail, bridge.slot);

  // Bottleneck pass over both chains, the bridge, and the terminal caps.
  uint32_t delta = s_.edge_cap(e_bridge);
  uint64_t x = bridge.tail;
  while (!s_.is_terminal_parented(x)) {
    MirrorRef up = mirror_by_parent_code(s_, x);
    delta = std::min(delta, s_.edge_cap(s_.edge_word(up.head, up.slot)));
    x = up.head;
  }
  delta = std::min(delta, s_.ts_or_trcap(x));
  x = q;
  while (!s_.is_terminal_parented(x)) {
    delta = std::min(delta, s_.edge_cap(s_.edge_word(x, 0)));
    x = s_.resolve_head(x, 0);
  }
  delta = std::min(delta, s_.ts_or_trcap(x));
  assert(delta >= 1);

  const uint64_t orphans_before = orphan_fifo_.size();

  // Push pass: bridge edge first, then both chains outward.
  MirrorRef bm = mirror_scan(s_, bridge.tail, bridge.slot);
  const uint64_t e_mirror = s_.edge_word(bm.head, bm.slot);
  s_.set_edge_cap(e_bridge, s_.edge_cap(e_bridge) - delta);
  s_.set_edge_cap(e_mirror, s_.edge_cap(e_mirror) + delta);
  s_.set_mirror_saturated(e_mirror, s_.edge_cap(e_bridge) == 0);
  s_.set_mirror_saturated(e_bridge, false);

  push_along_s_chain(bridge.tail, delta);
  push_along_t_chain(q, delta);

  s_.flow += delta;
  ++stats_.augmentations;
  return {delta, orphan_fifo_.size() - orphans_before};
}

void BkSolver::push_along_s_chain(uint64_t from, uint32_t delta) {
  uint64_t x = from;
  while (!s_.is_terminal_parented(x)) {
    MirrorRef up = mirror_by_parent_code(s_, x);
    const uint64_t e_par = s_.edge_word(up.head, up.slot);  // parent -> x
    const uint64_t e_child = s_.edge_word(x, 0);            // x -> parent
    s_.set_edge_cap(e_par, s_.edge_cap(e_par) - delta);
    s_.set_edge_cap(e_child, s_.edge_cap(e_child) + delta);
    s_.set_mirror_saturated(e_child, s_.edge_cap(e_par) == 0);
    s_.set_mirror_saturated(e_par, false);
    const bool saturated = s_.edge_cap(e_par) == 0;
    uint64_t parent = up.head;
    if (saturated) make_orphan(x);
    x = parent;
  }
  const uint32_t trcap = s_.ts_or_trcap(x);
  assert(trcap >= delta);
  s_.set_ts_or_trcap(x, trcap - delta);
  if (trcap == delta) make_orphan(x);
}

void BkSolver::push_along_t_chain(uint64_t from, uint32_t delta) {
  uint64_t x = from;
  while (!s_.is_terminal_parented(x)) {
    MirrorRef up = mirror_by_parent_code(s_, x);
    const uint64_t e_child = s_.edge_word(x, 0);            // x -> parent, carries the flow
    const uint64_t e_par = s_.edge_word(up.head, up.slot);  // parent -> x
    s_.set_edge_cap(e_child, s_.edge_cap(e_child) - delta);
    s_.set_edge_cap(e_par, s_.edge_cap(e_par) + delta);
    s_.set_mirror_saturated(e_par, s_.edge_cap(e_child) == 0);
    s_.set_mirror_saturated(e_child, false);
    const bool saturated = s_.edge_cap(e_child) == 0;
    uint64_t parent = up.head;
    if (saturated) make_orphan(x);
    x = parent;
  }
  const uint32_t trcap = s_.ts_or_trcap(x);
  assert(trcap >= delta);
  s_.set_ts_or_trcap(x, trcap - delta);
  if (trcap == delta) make_orphan(x);
}

RootResult BkSolver::findroot(uint64_t start) {
  const bool fc = opt_.algo == Algo::fcbk;
  uint64_t x = start;
  bool reached = false;
  uint32_t total = 0;
  while (true) {
    const uint32_t pc = s_.parent_code(x);
    if (pc == kParentTerminal) {
      reached = true;
      total += 1;
      break;
    }
    if (pc == kParentOrphan || pc == kParentFree) break;
    const uint32_t ts = s_.ts_or_trcap(x);
    if (fc && ts == kFlagTimestamp) break;  // confirmed orphan-rooted
    if (ts == global_time_) {               // marked: trusted distance
      reached = true;
      total += s_.distance(x);
      break;
    }
    x = s_.resolve_head(x, 0);
    ++total;
    ++stats_.findroot_traversals_total;
    ++stage_traversals_;
  }

  if (reached) {
    // Mark the walked path with its true remaining distances.
    uint32_t d = total;
    for (uint64_t y = start; y != x; y = s_.resolve_head(y, 0)) {
      s_.set_ts_or_trcap(y, global_time_);
      s_.set_distance(y, d--);
    }
    if (s_.is_terminal_parented(x)) s_.set_distance(x, 1);
    return {true, total};
  }
  if (fc) {
    // Flag the searched path; the terminator keeps its own state.
    for (uint64_t y = start; y != x; y = s_.resolve_head(y, 0)) {
      s_.set_ts_or_trcap(y, kFlagTimestamp);
      ++stats_.flags_set;
      ++live_flags_;
    }
  }
  return {false, 0};
}

void BkSolver::clear_flags_dfs(uint64_t root) {
  std::vector<uint64_t> stack{root};
  while (!stack.empty()) {
    uint64_t w = stack.back();
    stack.pop_back();
    const uint32_t deg = s_.degree(w);
    for (uint32_t slot = 0; slot < deg; ++slot) {
      const uint64_t u = s_.resolve_head(w, slot);
      if (!s_.has_internal_parent(u)) continue;
      if (s_.ts_or_trcap(u) != kFlagTimestamp) continue;
      if (s_.resolve_head(u, 0) != w) continue;  // not a child of w
      s_.set_ts_or_trcap(u, global_time_);  // now confirmed terminal-connected
      s_.set_distance(u, s_.distance(w) + 1);
      ++stats_.flags_cleared;
      --live_flags_;
      stack.push_back(u);
    }
  }
}

void BkSolver::process_orphan(uint64_t o) {
  ++stats_.orphans_processed;
  const bool fc = opt_.algo == Algo::fcbk;
  const bool o_in_s = !s_.in_sink_tree(o);
  const uint32_t deg = s_.degree(o);

  int64_t best_slot = -1;
  uint32_t best_dist = ~0u;
  for (uint32_t slot = 0; slot < deg; ++slot) {
    const uint64_t e = s_.edge_word(o, slot);
    // A potential parent for an S orphan needs a non-saturated edge toward
    // o (the mirror of o's edge); for a T orphan, o's own edge must carry
    // capacity toward the parent.
    const bool usable = o_in_s ? !s_.mirror_saturated(e) : s_.edge_cap(e) > 0;
    if (!usable) continue;
    const uint64_t u = s_.resolve_head(o, slot);
    if (s_.is_free(u)) continue;
    if (s_.in_sink_tree(u) != s_.in_sink_tree(o)) continue;
    RootResult r = findroot(u);
    if (r.reached_terminal && r.dist < best_dist) {
      best_dist = r.dist;
      best_slot = slot;
    }
  }

  if (best_slot >= 0) {
    const bool was_flagged = fc && s_.ts_or_trcap(o) == kFlagTimestamp;
    set_parent(s_, o, static_cast<uint32_t>(best_slot));
    s_.set_ts_or_trcap(o, global_time_);
    s_.set_distance(o, best_dist + 1);
    if (was_flagged) {
      ++stats_.flags_cleared;
      --live_flags_;
    }
    if (fc) clear_flags_dfs(o);
    if (opt_.debug_invariants && fc) validate_orphan_flags(s_);
    return;
  }

  // No terminal-connected potential parent: dissolve. Same-tree neighbors
  // with a usable edge toward o are activated (they may have to re-adopt
  // the freed vertex later), and that includes o's children, which then
  // become orphans handled right away.
  for (uint32_t slot = 0; slot < deg; ++slot) {
    const uint64_t u = s_.resolve_head(o, slot);
    const uint32_t upc = s_.parent_code(u);
    if (upc == kParentFree) continue;
    if (s_.in_sink_tree(u) != s_.in_sink_tree(o)) continue;
    const uint64_t e = s_.edge_word(o, slot);
    const bool usable = o_in_s ? !s_.mirror_saturated(e) : s_.edge_cap(e) > 0;
    if (usable) active_.push(s_, u);
    if (upc < kParentTerminal && s_.resolve_head(u, 0) == o) {
      s_.set_parent_code(u, kParentOrphan);
      orphan_lifo_.push_back(u);
    }
  }
  if (fc && s_.ts_or_trcap(o) == kFlagTimestamp) {
    s_.set_ts_or_trcap(o, 0);
    ++stats_.flags_cleared;
    --live_flags_;
  }
  s_.set_parent_code(o, kParentFree);
  if (opt_.debug_invariants && fc) validate_orphan_flags(s_);
}

void BkSolver::adopt() {
  advance_time();
  ++stats_.adoption_stages;
  stage_traversals_ = 0;
  while (!orphan_lifo_.empty() || !orphan_fifo_.empty()) {
    uint64_t o;
    if (!orphan_lifo_.empty()) {
      o = orphan_lifo_.back();
      orphan_lifo_.pop_back();
    } else {
      o = orphan_fifo_.front();
      orphan_fifo_.pop_front();
    }
    process_orphan(o);
  }
  stats_.findroot_traversals_stage_max =
      std::max(stats_.findroot_traversals_stage_max, stage_traversals_);
  if (opt_.algo == Algo::fcbk && live_flags_ != 0)
    throw std::logic_error("orphan-path flags left over after an adoption stage");
  if (opt_.debug_invariants) validate(true);
}

int64_t BkSolver::solve() {
  const auto t0 = std::chrono::steady_clock::now();
  while (true) {
    std::optional<Bridge> bridge = growth_stage();
    if (!bridge) break;
    augment(*bridge);
    adopt();
  }
  s_.solved = true;
  stats_.flow = s_.flow;
  stats_.external_queue_pushes = active_.external_pushes();
  stats_.solve_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
          .count();
  if (opt_.debug_invariants) validate(true);
  return s_.flow;
}

void BkSolver::validate(bool adoption_finished) {
  validate_mirror_flags(s_);
  validate_prepush(s_);
  if (adoption_finished) validate_forests(s_);
  if (opt_.algo == Algo::fcbk) {
    validate_orphan_flags(s_);
    if (adoption_finished && count_flags(s_) != 0)
      throw std::logic_error("orphan-path flags must be clear between stages");
  }
}

CutAssignment extract_cut(const WordStore& store) {
  if (!store.solved) throw std::logic_error("extract_cut: store has not been solved");
  CutAssignment cut;
  cut.flow = store.flow;
  cut.side.resize(store.n);
  for (VertexRef v : iterate_vertices(store)) {
    const bool source_side = store.is_tree_vertex(v.word) && !store.in_sink_tree(v.word);
    cut.side[v.id] = source_side ? 0 : 1;
  }
  return cut;
}

void validate_forests(const WordStore& store) {
  for (VertexRef v : iterate_vertices(store)) {
    const uint32_t pc = store.parent_code(v.word);
    if (pc == kParentFree || pc == kParentTerminal) continue;
    if (pc == kParentOrphan)
      throw std::logic_error("orphan present between stages");
    MirrorRef by_code = mirror_by_parent_code(store, v.word);
    MirrorRef by_scan = mirror_scan(store, v.word, 0);
    if (by_code.head != by_scan.head || by_code.slot != by_scan.slot)
      throw std::logic_error("parent code disagrees with the mirror scan");
    if (store.in_sink_tree(v.word) != store.in_sink_tree(by_code.head))
      throw std::logic_error("child and parent are in different trees");
    // The tree edge must be non-saturated in the tree's orientation.
    if (!store.in_sink_tree(v.word)) {
      if (store.edge_cap(store.edge_word(by_code.head, by_code.slot)) == 0)
        throw std::logic_error("saturated parent edge in the source forest");
    } else {
      if (store.edge_cap(store.edge_word(v.word, 0)) == 0)
        throw std::logic_error("saturated parent edge in the sink forest");
    }
    // Parent chains must reach a terminal within n hops.
    uint64_t x = v.word;
    uint64_t hops = 0;
    while (store.has_internal_parent(x)) {
      x = store.resolve_head(x, 0);
      if (++hops > store.n) throw std::logic_error("parent chain does not terminate");
    }
    if (!store.is_terminal_parented(x))
      throw std::logic_error("parent chain ends away from a terminal");
  }
}

void validate_mirror_flags(const WordStore& store) {
  for (VertexRef v : iterate_vertices(store)) {
    const uint32_t deg = store.degree(v.word);
    for (uint32_t slot = 0; slot < deg; ++slot) {
      MirrorRef m = mirror_scan(store, v.word, slot);
      const bool mirror_empty = store.edge_cap(store.edge_word(m.head, m.slot)) == 0;
      if (store.mirror_saturated(store.edge_word(v.word, slot)) != mirror_empty)
        throw std::logic_error("mirror-saturated flag out of sync");
    }
  }
}

void validate_prepush(const WordStore& store) {
  for (VertexRef v : iterate_vertices(store)) {
    if (store.is_terminal_parented(v.word) && store.ts_or_trcap(v.word) == 0)
      throw std::logic_error("terminal-parented vertex without terminal capacity");
  }
}

void validate_orphan_flags(const WordStore& store) {
  for (VertexRef v : iterate_vertices(store)) {
    if (store.is_terminal_parented(v.word)) continue;  // word holds the terminal cap
    if (store.ts_or_trcap(v.word) != kFlagTimestamp) continue;
    if (store.is_free(v.word))
      throw std::logic_error("free vertex holds an orphan-path flag");
    // Flagged: the parent chain must hit an orphan without passing a
    // terminal (an orphan carrying its own flag is fine by definition).
    uint64_t x = v.word;
    uint64_t hops = 0;
    while (store.has_internal_parent(x)) {
      x = store.resolve_head(x, 0);
      if (++hops > store.n) throw std::logic_error("flagged chain does not terminate");
    }
    if (!store.is_orphan(x))
      throw std::logic_error("flagged vertex is not in an orphan-rooted tree");
  }
}

uint64_t count_flags(const WordStore& store) {
  uint64_t flags = 0;
  for (VertexRef v : iterate_vertices(store)) {
    if (!store.is_terminal_parented(v.word) &&
        store.ts_or_trcap(v.word) == kFlagTimestamp)
      ++flags;
  }
  return flags;
}

}  // namespace maxflow
