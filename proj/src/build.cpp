#include "maxflow/build.hpp"

#include <algorithm>
#include <unordered_map>

namespace maxflow {

uint64_t memory_bytes(const WordStore& store) {
  uint64_t bytes = 16 * store.n + 8 * store.m_i;
  assert(bytes == 4 * store.word_count());
  return bytes;
}

MirrorRef mirror_scan(const WordStore& store, uint64_t tail, uint32_t slot) {
  uint64_t head = store.resolve_head(tail, slot);
  uint32_t deg = store.degree(head);
  for (uint32_t j = 0; j < deg; ++j) {
    if (store.resolve_head(head, j) == tail) return {head, j};
  }
  throw std::logic_error("mirror_scan: no edge back to tail; store is corrupted");
}

MirrorRef mirror_by_parent_code(const WordStore& store, uint64_t v) {
  uint32_t code = store.parent_code(v);
  if (code >= kParentTerminal)
    throw std::logic_error("mirror_by_parent_code: vertex has no internal parent");
  return {store.resolve_head(v, 0), code};
}

void set_parent(WordStore& store, uint64_t child, uint32_t slot_to_parent,
                int64_t mirror_slot_hint) {
  if (slot_to_parent != 0) {
    // If slot 0 held an edge to one of child's own children (possible when
    // child was terminal-parented while it grew, so its first edge was
    // never constrained), that child's stored mirror ordinal moves along
    // with the record.
    uint64_t displaced = store.resolve_head(child, 0);
    if (store.has_internal_parent(displaced) && store.parent_code(displaced) == 0 &&
        store.resolve_head(displaced, 0) == child)
      store.set_parent_code(displaced, slot_to_parent);
    uint64_t a = store.edge_word(child, 0);
    uint64_t b = store.edge_word(child, slot_to_parent);
    std::swap(store.words[a], store.words[b]);
    std::swap(store.words[a + 1], store.words[b + 1]);
  }
  uint32_t mirror_slot;
  if (mirror_slot_hint >= 0) {
    mirror_slot = static_cast<uint32_t>(mirror_slot_hint);
    assert(mirror_scan(store, child, 0).slot == mirror_slot);
  } else {
    mirror_slot = mirror_scan(store, child, 0).slot;
  }
  store.set_parent_code(child, mirror_slot);
  store.set_sink_tree(child, store.in_sink_tree(store.resolve_head(child, 0)));
}

namespace {

struct MergedPair {
  uint64_t a, b;          // a < b not required; order of first encounter
  uint64_t cap_ab = 0;    // accumulated in 64 bits, range-checked later
  uint64_t cap_ba = 0;
};

struct PairKeyHash {
  size_t operator()(const std::pair<uint64_t, uint64_t>& k) const {
    uint64_t h = k.first * 0x9E3779B97F4A7C15ull ^ (k.second + 0x517CC1B727220A95ull);
    h ^= h >> 29;
    return static_cast<size_t>(h * 0xBF58476D1CE4E5B9ull);
  }
};

}  // namespace

BuildResult build(const Problem& problem, BuildMode mode, const BuildOptions& options) {
  const uint64_t n = problem.n;
  if (problem.terminal_caps.size() != n)
    throw BuildError(BuildErrorCode::terminal_edge_in_internal_list,
                     "terminal_caps must have one entry per vertex");

  // Temporary edge structure: merge parallel pairs by direction.
  std::vector<MergedPair> pairs;
  pairs.reserve(problem.edges.size());
  std::unordered_map<std::pair<uint64_t, uint64_t>, size_t, PairKeyHash> index;
  if (!options.assume_merged) index.reserve(problem.edges.size() * 2);

  for (const ProblemEdge& e : problem.edges) {
    if (e.u == e.v)
      throw BuildError(BuildErrorCode::self_loop, "self loop in internal edge list");
    if (e.u >= n || e.v >= n)
      throw BuildError(BuildErrorCode::terminal_edge_in_internal_list,
                       "internal edge references a vertex id out of range");
    if (options.assume_merged) {
      assert(index.emplace(std::minmax(e.u, e.v), pairs.size()).second &&
             "assume_merged build saw a duplicate vertex pair");
      pairs.push_back({e.u, e.v, e.cap_uv, e.cap_vu});
      continue;
    }
    auto key = std::minmax(e.u, e.v);
    auto [it, fresh] = index.emplace(key, pairs.size());
    if (fresh) {
      pairs.push_back({e.u, e.v, e.cap_uv, e.cap_vu});
    } else {
      MergedPair& p = pairs[it->second];
      if (p.a == e.u) {
        p.cap_ab += e.cap_uv;
        p.cap_ba += e.cap_vu;
      } else {
        p.cap_ab += e.cap_vu;
        p.cap_ba += e.cap_uv;
      }
    }
  }

  // Drop pairs that have no capacity in either direction; a pair with one
  // zero side stays, the zero side is the mirror for return flow.
  size_t kept = 0;
  for (const MergedPair& p : pairs) {
    if (p.cap_ab == 0 && p.cap_ba == 0) continue;
    if (p.cap_ab > kMaxEdgeCap || p.cap_ba > kMaxEdgeCap)
      throw BuildError(BuildErrorCode::capacity_overflow,
                       "merged capacity does not fit in 31 bits");
    pairs[kept++] = p;
  }
  pairs.resize(kept);

  BuildResult result;
  WordStore& store = result.store;
  store.n = n;
  store.m_i = 2 * pairs.size();
  result.m_i_plus = 2 * problem.edges.size();

  std::vector<uint32_t> deg(n, 0);
  for (const MergedPair& p : pairs) {
    if (++deg[p.a] > kMaxDegree || ++deg[p.b] > kMaxDegree)
      throw BuildError(BuildErrorCode::degree_overflow, "vertex degree exceeds 2^23 - 4");
  }

  const uint64_t total_words = 4 * n + 2 * store.m_i;
  switch (mode) {
    case BuildMode::absolute:
      if (total_words >= (1ull << 32))
        throw BuildError(BuildErrorCode::word_index_overflow,
                         "absolute mode needs word indices to fit in 32 bits");
      store.mode = RefMode::absolute;
      break;
    case BuildMode::relative:
      store.mode = RefMode::relative;
      break;
    case BuildMode::auto_select:
      store.mode = total_words < (1ull << 32) ? RefMode::absolute : RefMode::relative;
      break;
  }

  std::vector<uint64_t> offset(n + 1);  // build-time only, not part of the store
  uint64_t off = 0;
  for (uint64_t v = 0; v < n; ++v) {
    offset[v] = off;
    off += 4 + 2ull * deg[v];
  }
  offset[n] = off;

  if (store.mode == RefMode::relative) {
    for (const MergedPair& p : pairs) {
      int64_t d = static_cast<int64_t>(offset[p.a]) - static_cast<int64_t>(offset[p.b]);
      if (d > static_cast<int64_t>(kMaxEdgeCap) || d < -static_cast<int64_t>(kMaxEdgeCap))
        throw BuildError(BuildErrorCode::relative_index_overflow,
                         "relative vertex reference does not fit in a signed 32-bit word");
    }
  }

  store.words.assign(total_words, 0);

  // Vertex records with the terminal pre-push.
  for (uint64_t v = 0; v < n; ++v) {
    const uint64_t w = offset[v];
    const TerminalCaps& tc = problem.terminal_caps[v];
    const uint32_t push = std::min(tc.from_source, tc.to_sink);
    result.initial_flow += push;
    const uint32_t net_s = tc.from_source - push;
    const uint32_t net_t = tc.to_sink - push;

    store.set_next_active(w, kNextNone);
    store.set_degree(w, deg[v]);
    if (net_s > 0) {
      store.set_ts_or_trcap(w, net_s);
      store.set_parent_code(w, kParentTerminal);
      store.set_sink_tree(w, false);
      store.set_distance(w, 1);
    } else if (net_t > 0) {
      store.set_ts_or_trcap(w, net_t);
      store.set_parent_code(w, kParentTerminal);
      store.set_sink_tree(w, true);
      store.set_distance(w, 1);
    } else {
      store.set_ts_or_trcap(w, 0);
      store.set_parent_code(w, kParentFree);
      store.set_sink_tree(w, false);
      store.set_distance(w, 0);
    }
  }

  // Edge records, packed per vertex in pair encounter order.
  std::vector<uint32_t> next_slot(n, 0);
  auto emit = [&](uint64_t tail, uint64_t head, uint64_t cap_out, uint64_t cap_in) {
    uint64_t e = store.edge_word(offset[tail], next_slot[tail]++);
    if (store.mode == RefMode::absolute) {
      store.set_head_ref(e, static_cast<uint32_t>(offset[head]));
    } else {
      int64_t d = static_cast<int64_t>(offset[head]) - static_cast<int64_t>(offset[tail]);
      store.set_head_ref(e, static_cast<uint32_t>(static_cast<int32_t>(d)));
    }
    store.set_edge_cap(e, static_cast<uint32_t>(cap_out));
    store.set_mirror_saturated(e, cap_in == 0);
  };
  for (const MergedPair& p : pairs) {
    emit(p.a, p.b, p.cap_ab, p.cap_ba);
    emit(p.b, p.a, p.cap_ba, p.cap_ab);
  }

  store.flow = result.initial_flow;
  return result;
}

}  // namespace maxflow
