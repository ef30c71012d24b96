#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace cmperc {

using Vertex = int;

inline constexpr int kUnreachable = -1;

// Sorted list of distinct vertex ids.
using VertexSet = std::vector<Vertex>;

// Finite simple undirected graph with non-negative vertex weights and,
// optionally, an embedding in R^d.
struct WeightedGraph {
  int n = 0;
  std::vector<std::vector<Vertex>> adj;   // per-vertex sorted neighbor lists
  std::vector<double> weights;            // r(x) >= 0
  int coord_dim = 0;                      // 0 when no embedding stored
  std::vector<std::array<double, 3>> coords;

  explicit WeightedGraph(int vertices = 0)
      : n(vertices), adj(vertices), weights(vertices, 0.0) {}

  // Inserts {u, v}; throws on loops, duplicates and invalid ids.
  void add_edge(Vertex u, Vertex v);

  bool has_edge(Vertex u, Vertex v) const;
  int degree(Vertex v) const { return static_cast<int>(adj[v].size()); }
  std::size_t edge_count() const;

  // True when every weight is a non-negative integer (exact-threshold mode).
  bool integer_weights() const;

  void check_vertex(Vertex v) const;
};

// Graph metric, BFS on demand.
int distance(const WeightedGraph& g, Vertex u, Vertex v);

// d(A, B) = min over pairs; BFS from the smaller set. A, B nonempty.
int set_distance(const WeightedGraph& g, const VertexSet& a, const VertexSet& b);

// B(A, l) = { z : d(z, A) <= l }. The metric is integer-valued so the
// effective radius is floor(l). A nonempty, l >= 0.
VertexSet ball(const WeightedGraph& g, const VertexSet& a, double l);

// Integer-radius variant used by the partition machinery.
VertexSet ball_radius(const WeightedGraph& g, const VertexSet& a, long long radius);

// Max pairwise distance, measured in g. A must lie in one component.
int diam_set(const WeightedGraph& g, const VertexSet& a);

// Reusable scratch for repeated bounded BFS sweeps on one graph.
class BfsScratch {
 public:
  explicit BfsScratch(int n) : dist_(n, -1), queue_(), epoch_(n, 0), cur_epoch_(0) {}

  // Multi-source BFS from `sources` out to `radius` (unbounded if < 0).
  // Calls visit(vertex, dist) for every reached vertex including sources.
  // When `domain` is non-null only vertices with domain[v] true are traversed.
  template <typename Visit>
  void run(const WeightedGraph& g, const VertexSet& sources, long long radius,
           Visit&& visit, const std::vector<char>* domain = nullptr) {
    ++cur_epoch_;
    queue_.clear();
    for (Vertex s : sources) {
      if (domain && !(*domain)[s]) continue;
      if (epoch_[s] == cur_epoch_) continue;
      epoch_[s] = cur_epoch_;
      dist_[s] = 0;
      queue_.push_back(s);
    }
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      Vertex x = queue_[head];
      int dx = dist_[x];
      visit(x, dx);
      if (radius >= 0 && dx >= radius) continue;
      for (Vertex y : g.adj[x]) {
        if (epoch_[y] == cur_epoch_) continue;
        if (domain && !(*domain)[y]) continue;
        epoch_[y] = cur_epoch_;
        dist_[y] = dx + 1;
        queue_.push_back(y);
      }
    }
  }

 private:
  std::vector<int> dist_;
  std::vector<Vertex> queue_;
  std::vector<unsigned> epoch_;
  unsigned cur_epoch_;
};

// wgraph v1 text format:
//   line 1: "n m"
//   next m lines: "u v" with 0 <= u < v < n
//   next n lines: one decimal weight per vertex
//   optional: "#coords d" directive followed by n coordinate lines.
WeightedGraph read_wgraph(std::istream& in);
WeightedGraph read_wgraph_file(const std::string& path);
void write_wgraph(const WeightedGraph& g, std::ostream& out);
void write_wgraph_file(const WeightedGraph& g, const std::string& path);

// Set helpers (inputs sorted).
VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_intersection(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);
bool set_contains(const VertexSet& a, Vertex v);
bool is_subset(const VertexSet& a, const VertexSet& b);  // a subset of b

}  // namespace cmperc
