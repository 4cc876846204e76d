#pragma once

#include <cassert>
#include <cstdint>
#include <deque>
#include <vector>

namespace maxflow {

// How vertex references stored in the words are interpreted.
enum class RefMode { absolute, relative };

// The whole residual graph lives in one flat array of 32-bit words:
// vertex records interleaved with their outgoing edge records, ordered by
// vertex id. A vertex takes 4 words, an edge 2, so the graph costs
// 16n + 8m_i bytes.
//
//   vertex record
//     w0  next active vertex. kNextNone when the vertex is not linked into
//         the active list, kNextEnd when it is the last linked vertex. In
//         relative mode the link is a signed word offset (successor minus
//         this vertex); kNextExternal means the successor index did not fit
//         and sits at the front of the external queue.
//     w1  timestamp, overloaded with the terminal residual capacity while
//         parent_code == kParentTerminal. The all-ones timestamp is
//         reserved as the orphan-path flag.
//     w2  bits 31..15 distance-to-terminal (17 bits, saturating),
//         bits 14..0 high bits of the degree
//     w3  bits 31..24 low bits of the degree, bits 23..1 parent code,
//         bit 0 tree bit (0 = source tree, 1 = sink tree)
//
//   edge record
//     w0  head reference: absolute word index of the head vertex, or the
//         signed word offset head minus tail in relative mode
//     w1  bit 31 mirror-saturated flag, bits 30..0 residual capacity
//
// The parent code is either one of the three sentinels below or the
// ordinal of the mirror edge inside the parent's outgoing block; in the
// latter case the vertex's first outgoing edge points at its parent, which
// set_parent maintains by swapping edge records.
inline constexpr uint32_t kParentFree = 0x7FFFFFu;      // 2^23 - 1
inline constexpr uint32_t kParentOrphan = 0x7FFFFEu;    // 2^23 - 2
inline constexpr uint32_t kParentTerminal = 0x7FFFFDu;  // 2^23 - 3
inline constexpr uint32_t kMaxDegree = 0x7FFFFCu;       // 2^23 - 4
inline constexpr uint32_t kMaxDistance = 0x1FFFFu;      // 17 bits
inline constexpr uint32_t kMaxEdgeCap = 0x7FFFFFFFu;    // 31 bits
inline constexpr uint32_t kFlagTimestamp = 0xFFFFFFFFu;

inline constexpr uint32_t kNextNone = 0xFFFFFFFFu;
inline constexpr uint32_t kNextEnd = 0xFFFFFFFEu;
inline constexpr uint32_t kNextExternal = 0xFFFFFFFDu;

inline constexpr uint64_t kNoVertex = ~0ull;

class WordStore {
 public:
  std::vector<uint32_t> words;
  uint64_t n = 0;
  uint64_t m_i = 0;  // directed internal residual edges, after merging
  RefMode mode = RefMode::absolute;
  int64_t flow = 0;       // pre-push plus every augmentation so far
  bool solved = false;

  uint64_t word_count() const { return words.size(); }

  // --- vertex fields (v is the word index of the vertex record) ---

  uint32_t next_active(uint64_t v) const { return words[v]; }
  void set_next_active(uint64_t v, uint32_t x) { words[v] = x; }

  uint32_t ts_or_trcap(uint64_t v) const { return words[v + 1]; }
  void set_ts_or_trcap(uint64_t v, uint32_t x) { words[v + 1] = x; }

  uint32_t distance(uint64_t v) const { return words[v + 2] >> 15; }
  void set_distance(uint64_t v, uint32_t d) {
    if (d > kMaxDistance) d = kMaxDistance;  // heuristic value, saturate
    words[v + 2] = (d << 15) | (words[v + 2] & 0x7FFFu);
  }

  uint32_t degree(uint64_t v) const {
    return ((words[v + 2] & 0x7FFFu) << 8) | (words[v + 3] >> 24);
  }
  void set_degree(uint64_t v, uint32_t deg) {
    assert(deg <= kMaxDegree);
    words[v + 2] = (words[v + 2] & ~0x7FFFu) | (deg >> 8);
    words[v + 3] = (words[v + 3] & 0x00FFFFFFu) | ((deg & 0xFFu) << 24);
  }

  uint32_t parent_code(uint64_t v) const { return (words[v + 3] >> 1) & 0x7FFFFFu; }
  void set_parent_code(uint64_t v, uint32_t code) {
    assert(code <= kParentFree);
    words[v + 3] = (words[v + 3] & 0xFF000001u) | (code << 1);
  }

  bool in_sink_tree(uint64_t v) const { return words[v + 3] & 1u; }
  void set_sink_tree(uint64_t v, bool sink) {
    words[v + 3] = (words[v + 3] & ~1u) | (sink ? 1u : 0u);
  }

  bool is_free(uint64_t v) const { return parent_code(v) == kParentFree; }
  bool is_orphan(uint64_t v) const { return parent_code(v) == kParentOrphan; }
  bool is_terminal_parented(uint64_t v) const { return parent_code(v) == kParentTerminal; }
  bool is_tree_vertex(uint64_t v) const { return parent_code(v) != kParentFree; }
  // parent_code is an edge ordinal, i.e. the parent is a non-terminal vertex
  bool has_internal_parent(uint64_t v) const { return parent_code(v) < kParentTerminal; }

  // --- edge fields (e is the word index of the edge record) ---

  uint64_t edge_word(uint64_t v, uint32_t slot) const { return v + 4 + 2ull * slot; }

  uint32_t edge_cap(uint64_t e) const { return words[e + 1] & kMaxEdgeCap; }
  void set_edge_cap(uint64_t e, uint32_t cap) {
    assert(cap <= kMaxEdgeCap);
    words[e + 1] = (words[e + 1] & 0x80000000u) | cap;
  }

  bool mirror_saturated(uint64_t e) const { return words[e + 1] >> 31; }
  void set_mirror_saturated(uint64_t e, bool sat) {
    words[e + 1] = (words[e + 1] & kMaxEdgeCap) | (sat ? 0x80000000u : 0u);
  }

  uint32_t head_ref(uint64_t e) const { return words[e]; }
  void set_head_ref(uint64_t e, uint32_t r) { words[e] = r; }

  // Absolute word index of the head of edge `slot` of the vertex at `v`.
  uint64_t resolve_head(uint64_t v, uint32_t slot) const {
    uint32_t r = words[edge_word(v, slot)];
    if (mode == RefMode::absolute) return r;
    return v + static_cast<int64_t>(static_cast<int32_t>(r));
  }

  uint64_t record_size(uint64_t v) const { return 4 + 2ull * degree(v); }
};

// Total bytes of the packed representation: 16n + 8m_i, which also equals
// four times the word count.
uint64_t memory_bytes(const WordStore& store);

struct MirrorRef {
  uint64_t head;  // word index of the edge's head vertex
  uint32_t slot;  // ordinal of the mirror edge in the head's outgoing block
};

// Scan-based mirror lookup: walks the head's contiguous edge block for the
// edge pointing back at `tail`. Requires the parallel-free invariant the
// builder guarantees. Throws std::logic_error on a corrupted store.
MirrorRef mirror_scan(const WordStore& store, uint64_t tail, uint32_t slot);

// Index-based mirror lookup through the stored parent code: the parent is
// the head of the vertex's first outgoing edge, the mirror ordinal is the
// code itself. Throws std::logic_error if the vertex has no internal parent.
MirrorRef mirror_by_parent_code(const WordStore& store, uint64_t v);

// Makes the edge at `slot_to_parent` the vertex's first outgoing edge (the
// implicit parent pointer), stores the mirror's ordinal as the parent code
// and copies the parent's tree bit. `mirror_slot_hint` skips the mirror
// scan when the caller already knows the ordinal.
void set_parent(WordStore& store, uint64_t child, uint32_t slot_to_parent,
                int64_t mirror_slot_hint = -1);

struct VertexRef {
  uint64_t id;
  uint64_t word;
};

// Sequential pass over vertex records in id order; the per-record degree
// field replaces any id-to-offset table.
class VertexRange {
 public:
  explicit VertexRange(const WordStore& store) : store_(&store) {}

  class iterator {
   public:
    iterator(const WordStore* s, uint64_t id, uint64_t word) : s_(s), ref_{id, word} {}
    VertexRef operator*() const { return ref_; }
    iterator& operator++() {
      ref_.word += s_->record_size(ref_.word);
      ++ref_.id;
      return *this;
    }
    bool operator!=(const iterator& o) const { return ref_.id != o.ref_.id; }

   private:
    const WordStore* s_;
    VertexRef ref_;
  };

  iterator begin() const { return iterator(store_, 0, 0); }
  iterator end() const { return iterator(store_, store_->n, store_->word_count()); }

 private:
  const WordStore* store_;
};

inline VertexRange iterate_vertices(const WordStore& store) { return VertexRange(store); }

// FIFO of active vertices threaded through the next-active words. In
// relative mode a link whose offset exceeds `rel_limit` (or 31 bits) is
// stored as kNextExternal with the absolute index parked in the external
// queue. rel_limit is narrowed by tests to exercise that path.
class ActiveList {
 public:
  void set_rel_limit(uint32_t limit) { rel_limit_ = limit; }
  uint64_t external_pushes() const { return external_pushes_; }

  bool empty() const { return head_ == kNoVertex; }
  uint64_t peek() const { return head_; }

  // No-op if v is already linked.
  void push(WordStore& store, uint64_t v) {
    if (store.next_active(v) != kNextNone) return;
    store.set_next_active(v, kNextEnd);
    if (head_ == kNoVertex) {
      head_ = tail_ = v;
      return;
    }
    link(store, tail_, v);
    tail_ = v;
  }

  // Unlinks and returns the head, or kNoVertex when empty.
  uint64_t pop(WordStore& store) {
    if (head_ == kNoVertex) return kNoVertex;
    uint64_t v = head_;
    uint32_t nx = store.next_active(v);
    store.set_next_active(v, kNextNone);
    if (v == tail_) {
      assert(nx == kNextEnd);
      head_ = tail_ = kNoVertex;
    } else if (nx == kNextExternal) {
      assert(!external_.empty());
      head_ = external_.front();
      external_.pop_front();
    } else if (store.mode == RefMode::absolute) {
      head_ = nx;
    } else {
      head_ = v + static_cast<int64_t>(static_cast<int32_t>(nx));
    }
    return v;
  }

 private:
  void link(WordStore& store, uint64_t from, uint64_t to) {
    if (store.mode == RefMode::absolute) {
      store.set_next_active(from, static_cast<uint32_t>(to));
      return;
    }
    int64_t diff = static_cast<int64_t>(to) - static_cast<int64_t>(from);
    if (diff > static_cast<int64_t>(rel_limit_) ||
        diff < -static_cast<int64_t>(rel_limit_)) {
      store.set_next_active(from, kNextExternal);
      external_.push_back(to);
      ++external_pushes_;
      return;
    }
    uint32_t enc = static_cast<uint32_t>(static_cast<int32_t>(diff));
    // Offsets -1..-3 would collide with the sentinels, but vertex records
    // are at least 4 words apart, so they cannot occur.
    assert(enc < kNextExternal || enc > kNextNone);
    store.set_next_active(from, enc);
  }

  uint64_t head_ = kNoVertex;
  uint64_t tail_ = kNoVertex;
  std::deque<uint64_t> external_;
  uint32_t rel_limit_ = 0x7FFFFFFFu;
  uint64_t external_pushes_ = 0;
};

}  // namespace maxflow
