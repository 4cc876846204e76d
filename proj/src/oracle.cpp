#include "maxflow/oracle.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace maxflow {

namespace {

struct ResidualEdge {
  uint64_t to;
  int64_t cap;
  size_t rev;  // index of the mirror in adj[to]
};

struct ResidualGraph {
  std::vector<std::vector<ResidualEdge>> adj;

  explicit ResidualGraph(uint64_t vertices) : adj(vertices) {}

  void add(uint64_t u, uint64_t v, int64_t cap_uv, int64_t cap_vu) {
    adj[u].push_back({v, cap_uv, adj[v].size()});
    adj[v].push_back({u, cap_vu, adj[u].size() - 1});
  }
};

}  // namespace

int64_t oracle_max_flow(const Problem& problem) {
  const uint64_t n = problem.n;
  const uint64_t s = n;
  const uint64_t t = n + 1;
  ResidualGraph g(n + 2);

  for (uint64_t v = 0; v < n; ++v) {
    const TerminalCaps& tc = problem.terminal_caps[v];
    if (tc.from_source > 0) g.add(s, v, tc.from_source, 0);
    if (tc.to_sink > 0) g.add(v, t, tc.to_sink, 0);
  }
  for (const ProblemEdge& e : problem.edges) {
    if (e.u >= n || e.v >= n || e.u == e.v)
      throw std::invalid_argument("oracle_max_flow: invalid problem edge");
    g.add(e.u, e.v, e.cap_uv, e.cap_vu);
  }

  int64_t flow = 0;
  std::vector<std::pair<uint64_t, size_t>> pred(n + 2);  // (vertex, edge index)
  std::vector<uint8_t> seen(n + 2);
  while (true) {
    std::fill(seen.begin(), seen.end(), 0);
    std::queue<uint64_t> bfs;
    bfs.push(s);
    seen[s] = 1;
    while (!bfs.empty() && !seen[t]) {
      uint64_t u = bfs.front();
      bfs.pop();
      for (size_t i = 0; i < g.adj[u].size(); ++i) {
        const ResidualEdge& e = g.adj[u][i];
        if (e.cap <= 0 || seen[e.to]) continue;
        seen[e.to] = 1;
        pred[e.to] = {u, i};
        if (e.to == t) break;
        bfs.push(e.to);
      }
    }
    if (!seen[t]) break;

    int64_t delta = std::numeric_limits<int64_t>::max();
    for (uint64_t v = t; v != s;) {
      auto [u, i] = pred[v];
      delta = std::min(delta, g.adj[u][i].cap);
      v = u;
    }
    for (uint64_t v = t; v != s;) {
      auto [u, i] = pred[v];
      ResidualEdge& e = g.adj[u][i];
      e.cap -= delta;
      g.adj[e.to][e.rev].cap += delta;
      v = u;
    }
    flow += delta;
  }
  return flow;
}

int64_t oracle_cut_value(const Problem& problem, const CutAssignment& assignment) {
  if (assignment.side.size() != problem.n)
    throw std::invalid_argument("oracle_cut_value: assignment does not cover all vertices");
  int64_t total = 0;
  for (uint64_t v = 0; v < problem.n; ++v) {
    const TerminalCaps& tc = problem.terminal_caps[v];
    if (assignment.side[v] != 0) total += tc.from_source;  // s in A, v in B
    if (assignment.side[v] == 0) total += tc.to_sink;      // v in A, t in B
  }
  for (const ProblemEdge& e : problem.edges) {
    if (assignment.side[e.u] == 0 && assignment.side[e.v] != 0) total += e.cap_uv;
    if (assignment.side[e.v] == 0 && assignment.side[e.u] != 0) total += e.cap_vu;
  }
  return total;
}

Problem gen_random(uint64_t seed, uint64_t n, uint64_t m, uint32_t cap_max,
                   double terminal_density) {
  if (n < 1) throw std::invalid_argument("gen_random: n must be >= 1");
  SplitMix64 rng(seed);
  const uint64_t density_millis =
      static_cast<uint64_t>(std::llround(terminal_density * 1000.0));

  Problem p;
  p.n = n;
  p.terminal_caps.resize(n);
  for (uint64_t v = 0; v < n; ++v) {
    if (rng.below(1000) < density_millis)
      p.terminal_caps[v].from_source = static_cast<uint32_t>(rng.below(cap_max + 1ull));
    if (rng.below(1000) < density_millis)
      p.terminal_caps[v].to_sink = static_cast<uint32_t>(rng.below(cap_max + 1ull));
  }
  if (n >= 2) {
    for (uint64_t i = 0; i < m; ++i) {
      uint64_t u = rng.below(n);
      uint64_t v = rng.below(n - 1);
      if (v >= u) ++v;
      uint32_t cap_uv = static_cast<uint32_t>(rng.below(cap_max + 1ull));
      uint32_t cap_vu = static_cast<uint32_t>(rng.below(cap_max + 1ull));
      p.add_edge(u, v, cap_uv, cap_vu);
    }
  }
  return p;
}

}  // namespace maxflow
