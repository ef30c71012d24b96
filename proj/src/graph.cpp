#include "cmperc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cmperc {

void WeightedGraph::check_vertex(Vertex v) const {
  if (v < 0 || v >= n) {
    throw std::invalid_argument("invalid vertex id " + std::to_string(v) +
                                " (n = " + std::to_string(n) + ")");
  }
}

void WeightedGraph::add_edge(Vertex u, Vertex v) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
  auto& nu = adj[u];
  auto it = std::lower_bound(nu.begin(), nu.end(), v);
  if (it != nu.end() && *it == v) {
    throw std::invalid_argument("duplicate edge " + std::to_string(u) + " " +
                                std::to_string(v));
  }
  nu.insert(it, v);
  auto& nv = adj[v];
  nv.insert(std::lower_bound(nv.begin(), nv.end(), u), u);
}

bool WeightedGraph::has_edge(Vertex u, Vertex v) const {
  check_vertex(u);
  check_vertex(v);
  return std::binary_search(adj[u].begin(), adj[u].end(), v);
}

std::size_t WeightedGraph::edge_count() const {
  std::size_t deg_sum = 0;
  for (const auto& nb : adj) deg_sum += nb.size();
  return deg_sum / 2;
}

bool WeightedGraph::integer_weights() const {
  for (double w : weights) {
    if (!(w >= 0.0) || w != std::floor(w) || w > 9.0e15) return false;
  }
  return true;
}

int distance(const WeightedGraph& g, Vertex u, Vertex v) {
  g.check_vertex(u);
  g.check_vertex(v);
  if (u == v) return 0;
  BfsScratch bfs(g.n);
  int found = kUnreachable;
  bfs.run(g, {u}, -1, [&](Vertex x, int d) {
    if (x == v) found = d;
  });
  return found;
}

int set_distance(const WeightedGraph& g, const VertexSet& a, const VertexSet& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("set_distance: empty input set");
  const VertexSet& src = a.size() <= b.size() ? a : b;
  const VertexSet& dst = a.size() <= b.size() ? b : a;
  std::vector<char> target(g.n, 0);
  for (Vertex v : dst) {
    g.check_vertex(v);
    target[v] = 1;
  }
  BfsScratch bfs(g.n);
  int best = kUnreachable;
  bfs.run(g, src, -1, [&](Vertex x, int d) {
    if (target[x] && (best == kUnreachable || d < best)) best = d;
  });
  return best;
}

VertexSet ball(const WeightedGraph& g, const VertexSet& a, double l) {
  if (a.empty()) throw std::invalid_argument("ball: empty center set");
  if (l < 0.0) throw std::invalid_argument("ball: negative radius");
  return ball_radius(g, a, static_cast<long long>(std::floor(l)));
}

VertexSet ball_radius(const WeightedGraph& g, const VertexSet& a, long long radius) {
  for (Vertex v : a) g.check_vertex(v);
  BfsScratch bfs(g.n);
  VertexSet out;
  bfs.run(g, a, radius, [&](Vertex x, int) { out.push_back(x); });
  std::sort(out.begin(), out.end());
  return out;
}

int diam_set(const WeightedGraph& g, const VertexSet& a) {
  if (a.empty()) throw std::invalid_argument("diam_set: empty set");
  BfsScratch bfs(g.n);
  std::vector<char> in_a(g.n, 0);
  for (Vertex v : a) {
    g.check_vertex(v);
    in_a[v] = 1;
  }
  int diam = 0;
  for (Vertex s : a) {
    int reached = 0;
    bfs.run(g, {s}, -1, [&](Vertex x, int d) {
      if (in_a[x]) {
        ++reached;
        diam = std::max(diam, d);
      }
    });
    if (reached != static_cast<int>(a.size())) {
      throw std::invalid_argument("diam_set: set spans multiple components");
    }
  }
  return diam;
}

WeightedGraph read_wgraph(std::istream& in) {
  int n, m;
  if (!(in >> n >> m) || n < 0 || m < 0) {
    throw std::runtime_error("wgraph: bad header, expected 'n m'");
  }
  WeightedGraph g(n);
  for (int i = 0; i < m; ++i) {
    int u, v;
    if (!(in >> u >> v)) throw std::runtime_error("wgraph: truncated edge list");
    if (u >= v) throw std::runtime_error("wgraph: edge must satisfy u < v");
    g.add_edge(u, v);
  }
  for (int i = 0; i < n; ++i) {
    double w;
    if (!(in >> w)) throw std::runtime_error("wgraph: truncated weight list");
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::runtime_error("wgraph: weight must be finite and >= 0");
    g.weights[i] = w;
  }
  std::string tok;
  if (in >> tok) {
    if (tok != "#coords") throw std::runtime_error("wgraph: unexpected token '" + tok + "'");
    int d;
    if (!(in >> d) || d < 1 || d > 3) throw std::runtime_error("wgraph: bad coordinate dimension");
    g.coord_dim = d;
    g.coords.assign(n, {0.0, 0.0, 0.0});
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < d; ++k) {
        if (!(in >> g.coords[i][k])) throw std::runtime_error("wgraph: truncated coordinates");
      }
    }
  }
  return g;
}

WeightedGraph read_wgraph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_wgraph(in);
}

void write_wgraph(const WeightedGraph& g, std::ostream& out) {
  out.precision(17);
  out << g.n << ' ' << g.edge_count() << '\n';
  for (Vertex u = 0; u < g.n; ++u) {
    for (Vertex v : g.adj[u]) {
      if (u < v) out << u << ' ' << v << '\n';
    }
  }
  for (double w : g.weights) out << w << '\n';
  if (g.coord_dim > 0) {
    out << "#coords " << g.coord_dim << '\n';
    for (const auto& p : g.coords) {
      for (int k = 0; k < g.coord_dim; ++k) out << (k ? " " : "") << p[k];
      out << '\n';
    }
  }
}

void write_wgraph_file(const WeightedGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_wgraph(g, out);
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool set_contains(const VertexSet& a, Vertex v) {
  return std::binary_search(a.begin(), a.end(), v);
}

bool is_subset(const VertexSet& a, const VertexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace cmperc
