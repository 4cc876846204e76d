#pragma once

#include <cstdint>
#include <vector>

namespace maxflow {

// Capacities of the two terminal edges of one vertex (s->v and v->t).
struct TerminalCaps {
  uint32_t from_source = 0;
  uint32_t to_sink = 0;
};

// One capacity pair between two non-terminal vertices. cap_uv is the
// capacity from u to v, cap_vu the capacity from v to u. Either side may
// be zero.
struct ProblemEdge {
  uint64_t u = 0;
  uint64_t v = 0;
  uint32_t cap_uv = 0;
  uint32_t cap_vu = 0;
};

// Portable description of a max-flow instance. Terminals are implicit:
// only their edge capacities are stored, one pair per vertex. Duplicate
// internal edges are allowed; merging them is the graph builder's job.
struct Problem {
  uint64_t n = 0;
  std::vector<TerminalCaps> terminal_caps;  // size n
  std::vector<ProblemEdge> edges;

  void add_edge(uint64_t u, uint64_t v, uint32_t cap_uv, uint32_t cap_vu = 0) {
    edges.push_back(ProblemEdge{u, v, cap_uv, cap_vu});
  }
};

// Side labels of a finished cut. side[v] == 0 means v is on the source
// side, 1 on the sink side.
struct CutAssignment {
  std::vector<uint8_t> side;
  int64_t flow = 0;
};

}  // namespace maxflow
