#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "cmperc/cmp.hpp"
#include "cmperc/graph.hpp"
#include "cmperc/rng.hpp"

namespace testutil {

using namespace cmperc;

inline WeightedGraph path_graph(int n) {
  WeightedGraph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

// Recursive word over {0,1}: W1 = "11", W_{k+1} = W_k 0^{2^k - 1} W_k.
inline std::string merging_word(int n) {
  std::string w = "11";
  for (int k = 1; k < n; ++k) {
    w = w + std::string((1u << k) - 1, '0') + w;
  }
  return w;
}

inline WeightedGraph word_graph(const std::string& w) {
  WeightedGraph g = path_graph(static_cast<int>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i) g.weights[i] = w[i] == '1' ? 1.0 : 0.0;
  return g;
}

// True iff partition a refines partition b (every cluster of a inside one of b).
inline bool refines(const Partition& a, const Partition& b) {
  for (Vertex v = 0; v < a.n(); ++v) {
    if (!b.same(v, a.find(v))) return false;
  }
  return true;
}

// All set partitions of [0, n) as root-label vectors, via restricted growth.
inline void enumerate_partitions(int n, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> label(n, 0);
  std::function<void(int, int)> rec = [&](int i, int max_used) {
    if (i == n) {
      f(label);
      return;
    }
    for (int b = 0; b <= max_used + 1; ++b) {
      label[i] = b;
      rec(i + 1, std::max(max_used, b));
    }
  };
  if (n > 0) rec(0, -1);
}

// Definition-level admissibility check: every pair of distinct clusters is
// farther apart than the smaller influence radius.
inline bool admissible_by_definition(const WeightedGraph& g, const std::vector<int>& label,
                                     const std::vector<std::vector<int>>& dist,
                                     const Thresholds& th) {
  int n = g.n;
  int blocks = 0;
  for (int v = 0; v < n; ++v) blocks = std::max(blocks, label[v] + 1);
  std::vector<double> weight(blocks, 0.0);
  for (int v = 0; v < n; ++v) weight[label[v]] += g.weights[v];
  std::vector<int> pair_dist(blocks * blocks, kUnreachable);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (label[u] == label[v]) continue;
      int d = dist[u][v];
      if (d == kUnreachable) continue;
      int& slot = pair_dist[label[u] * blocks + label[v]];
      if (slot == kUnreachable || d < slot) slot = d;
    }
  }
  for (int a = 0; a < blocks; ++a) {
    for (int b = a + 1; b < blocks; ++b) {
      int d = pair_dist[a * blocks + b];
      if (d == kUnreachable) continue;
      double wmin = std::min(weight[a], weight[b]);
      if (th.le_pow(d, wmin)) return false;  // d <= min^alpha violates strictness
    }
  }
  return true;
}

inline std::vector<std::vector<int>> all_pairs(const WeightedGraph& g) {
  std::vector<std::vector<int>> dist(g.n, std::vector<int>(g.n, kUnreachable));
  BfsScratch bfs(g.n);
  for (Vertex s = 0; s < g.n; ++s) {
    bfs.run(g, {s}, -1, [&](Vertex v, int d) { dist[s][v] = d; });
  }
  return dist;
}

inline WeightedGraph random_connected_graph(int n, Rng& rng) {
  WeightedGraph g(n);
  for (int v = 1; v < n; ++v) g.add_edge(static_cast<int>(rng.uniform_int(v)), v);
  int extra = static_cast<int>(rng.uniform_int(n + 1));
  for (int e = 0; e < extra; ++e) {
    int u = static_cast<int>(rng.uniform_int(n));
    int v = static_cast<int>(rng.uniform_int(n));
    if (u != v && !g.has_edge(u, v)) g.add_edge(u, v);
  }
  return g;
}

// Interval duality property: if the endpoints of the 0/1 word share a cluster,
// the interval (embedded in a long padded path) is stable for the flipped
// weights. Returns true when the property holds for this word.
inline bool interval_duality_holds(const std::string& w, bool& applicable) {
  const int L = static_cast<int>(w.size());
  CmpConfig cfg = CmpConfig::make(1.0);
  WeightedGraph g = word_graph(w);
  Partition p = compute_cmp_partition(g, cfg);
  // The duality argument follows the merge that joins the endpoint clusters,
  // so the shared cluster must actually carry weight; the lone weightless
  // site is degenerate (its flip, a bare weight-1 site, is not stable).
  applicable = p.same(0, L - 1) && p.weight_of(0) > 0.0;
  if (!applicable) return true;
  const int pad = L + 2;  // larger than any influence ball the interval can cast
  WeightedGraph big = path_graph(L + 2 * pad);
  VertexSet h;
  for (int i = 0; i < L; ++i) {
    big.weights[pad + i] = w[i] == '1' ? 0.0 : 1.0;
    h.push_back(pad + i);
  }
  return is_stable(big, h, cfg);
}

}  // namespace testutil
