#include "cmperc/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cmperc {

void ModelSpec::validate() const {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("p must lie in [0, 1]");
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  if (delta < 0.0) throw std::invalid_argument("delta must be >= 0");
  if (pareto_a <= 0.0) throw std::invalid_argument("pareto tail index must be > 0");
  if (dim < 1 || dim > 3) throw std::invalid_argument("dim must be 1, 2 or 3");
  if (side < 1) throw std::invalid_argument("side must be >= 1");
  if (radius <= 0.0) throw std::invalid_argument("radius must be > 0");
  if (intensity <= 0.0) throw std::invalid_argument("intensity must be > 0");
  if (graph_kind == GraphKind::delaunay && dim != 2) {
    throw std::invalid_argument("delaunay requires dim = 2");
  }
}

WeightedGraph lattice_box(int d, long long side) {
  if (d < 1) throw std::invalid_argument("lattice_box: dimension must be >= 1");
  if (side < 1) throw std::invalid_argument("lattice_box: side must be >= 1");
  long long n = 1;
  for (int k = 0; k < d; ++k) {
    if (n > std::numeric_limits<int>::max() / side) {
      throw std::invalid_argument("lattice_box: side^d overflows vertex ids");
    }
    n *= side;
  }
  WeightedGraph g(static_cast<int>(n));
  // Row-major: id = sum_k c_k * side^k; neighbor along axis k is id +- side^k.
  long long stride = 1;
  for (int k = 0; k < d; ++k) {
    for (long long id = 0; id < n; ++id) {
      long long coord = (id / stride) % side;
      if (coord + 1 < side) {
        g.add_edge(static_cast<Vertex>(id), static_cast<Vertex>(id + stride));
      }
    }
    stride *= side;
  }
  return g;
}

WeightedGraph bernoulli_weights(WeightedGraph g, double p, Rng& rng) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("bernoulli_weights: p must lie in [0, 1]");
  for (auto& w : g.weights) w = rng.next_double() < p ? 1.0 : 0.0;
  return g;
}

WeightedGraph continuum_weights(WeightedGraph g, double lambda, ContinuumDist dist,
                                double pareto_a, Rng& rng) {
  if (lambda < 0.0) throw std::invalid_argument("continuum_weights: lambda must be >= 0");
  if (dist == ContinuumDist::pareto && pareto_a <= 0.0) {
    throw std::invalid_argument("continuum_weights: pareto tail index must be > 0");
  }
  for (auto& w : g.weights) {
    double z = 1.0;
    switch (dist) {
      case ContinuumDist::constant:
        z = 1.0;
        break;
      case ContinuumDist::exponential:
        z = rng.exponential(1.0);
        break;
      case ContinuumDist::pareto:
        // support [1, inf), P{Z > z} = z^{-a}
        z = std::pow(1.0 - rng.next_double(), -1.0 / pareto_a);
        break;
    }
    w = lambda * z;
  }
  return g;
}

WeightedGraph degree_weights(WeightedGraph g, double delta) {
  if (delta < 0.0) throw std::invalid_argument("degree_weights: delta must be >= 0");
  for (Vertex v = 0; v < g.n; ++v) {
    double deg = static_cast<double>(g.degree(v));
    g.weights[v] = deg >= delta ? deg : 0.0;
  }
  return g;
}

PointCloud poisson_points(int d, double box_side, double intensity, Rng& rng) {
  if (d < 1 || d > 3) throw std::invalid_argument("poisson_points: d must be 1, 2 or 3");
  if (box_side < 0.0) throw std::invalid_argument("poisson_points: box side must be >= 0");
  if (intensity < 0.0) throw std::invalid_argument("poisson_points: intensity must be >= 0");
  PointCloud pc;
  pc.dim = d;
  pc.box_side = box_side;
  double volume = std::pow(box_side, d);
  std::uint64_t count = rng.poisson(intensity * volume);
  pc.points.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::array<double, 3> pt{0.0, 0.0, 0.0};
    for (int k = 0; k < d; ++k) pt[k] = rng.next_double() * box_side;
    pc.points.push_back(pt);
  }
  return pc;
}

WeightedGraph geometric_graph(const PointCloud& pc, double R) {
  if (R <= 0.0) throw std::invalid_argument("geometric_graph: R must be > 0");
  const int n = static_cast<int>(pc.points.size());
  WeightedGraph g(n);
  g.coord_dim = pc.dim;
  g.coords = pc.points;
  if (n == 0) return g;

  // Uniform grid with cell size R; candidates live in adjacent cells.
  const int d = pc.dim;
  auto cell_of = [&](const std::array<double, 3>& p) {
    std::array<long long, 3> c{0, 0, 0};
    for (int k = 0; k < d; ++k) c[k] = static_cast<long long>(std::floor(p[k] / R));
    return c;
  };
  long long span = static_cast<long long>(std::floor(pc.box_side / R)) + 2;
  auto cell_key = [&](const std::array<long long, 3>& c) {
    return (c[0] * span + c[1]) * span + c[2];
  };
  std::vector<std::pair<long long, int>> order(n);
  for (int i = 0; i < n; ++i) order[i] = {cell_key(cell_of(pc.points[i])), i};
  std::sort(order.begin(), order.end());

  auto bucket_range = [&](long long key) {
    auto lo = std::lower_bound(order.begin(), order.end(), std::make_pair(key, -1));
    auto hi = std::lower_bound(order.begin(), order.end(),
                               std::make_pair(key, std::numeric_limits<int>::max()));
    return std::make_pair(lo, hi);
  };

  const double r2 = R * R;
  std::array<long long, 3> off{0, 0, 0};
  for (int i = 0; i < n; ++i) {
    auto ci = cell_of(pc.points[i]);
    int lim1 = d >= 2 ? 1 : 0, lim2 = d >= 3 ? 1 : 0;
    for (off[0] = -1; off[0] <= 1; ++off[0]) {
      for (off[1] = -lim1; off[1] <= lim1; ++off[1]) {
        for (off[2] = -lim2; off[2] <= lim2; ++off[2]) {
          std::array<long long, 3> c{ci[0] + off[0], ci[1] + off[1], ci[2] + off[2]};
          auto [lo, hi] = bucket_range(cell_key(c));
          for (auto it = lo; it != hi; ++it) {
            int j = it->second;
            if (j <= i) continue;
            double s = 0.0;
            for (int k = 0; k < d; ++k) {
              double dx = pc.points[i][k] - pc.points[j][k];
              s += dx * dx;
            }
            if (s < r2) g.add_edge(i, j);
          }
        }
      }
    }
  }
  return g;
}

WeightedGraph build_instance(const ModelSpec& spec, Rng& rng) {
  spec.validate();
  WeightedGraph g;
  switch (spec.graph_kind) {
    case GraphKind::lattice:
      g = lattice_box(spec.dim, spec.side);
      break;
    case GraphKind::rgg: {
      PointCloud pc = poisson_points(spec.dim, static_cast<double>(spec.side),
                                     spec.intensity, rng);
      g = geometric_graph(pc, spec.radius);
      break;
    }
    case GraphKind::delaunay: {
      PointCloud pc = poisson_points(2, static_cast<double>(spec.side), spec.intensity, rng);
      g = delaunay_2d(pc);
      break;
    }
  }
  switch (spec.model) {
    case Model::bernoulli:
      g = bernoulli_weights(std::move(g), spec.p, rng);
      break;
    case Model::continuum:
      g = continuum_weights(std::move(g), spec.lambda, spec.dist, spec.pareto_a, rng);
      break;
    case Model::degree:
      g = degree_weights(std::move(g), spec.delta);
      break;
  }
  return g;
}

std::vector<char> largest_component_mask(const WeightedGraph& g) {
  std::vector<int> comp(g.n, -1);
  std::vector<int> comp_size;
  BfsScratch bfs(g.n);
  for (Vertex s = 0; s < g.n; ++s) {
    if (comp[s] != -1) continue;
    int id = static_cast<int>(comp_size.size());
    int size = 0;
    bfs.run(g, {s}, -1, [&](Vertex v, int) {
      comp[v] = id;
      ++size;
    });
    comp_size.push_back(size);
  }
  std::vector<char> mask(g.n, 0);
  if (comp_size.empty()) return mask;
  int best = static_cast<int>(std::max_element(comp_size.begin(), comp_size.end()) -
                              comp_size.begin());
  for (Vertex v = 0; v < g.n; ++v) mask[v] = comp[v] == best;
  return mask;
}

std::string to_string(Model m) {
  switch (m) {
    case Model::bernoulli: return "bernoulli";
    case Model::continuum: return "continuum";
    case Model::degree: return "degree";
  }
  return "?";
}

std::string to_string(ContinuumDist d) {
  switch (d) {
    case ContinuumDist::constant: return "constant";
    case ContinuumDist::exponential: return "exponential";
    case ContinuumDist::pareto: return "pareto";
  }
  return "?";
}

std::string to_string(GraphKind k) {
  switch (k) {
    case GraphKind::lattice: return "lattice";
    case GraphKind::rgg: return "rgg";
    case GraphKind::delaunay: return "delaunay";
  }
  return "?";
}

Model model_from_string(const std::string& s) {
  if (s == "bernoulli") return Model::bernoulli;
  if (s == "continuum") return Model::continuum;
  if (s == "degree") return Model::degree;
  throw std::invalid_argument("unknown model '" + s + "' (bernoulli|continuum|degree)");
}

ContinuumDist dist_from_string(const std::string& s) {
  if (s == "constant") return ContinuumDist::constant;
  if (s == "exponential") return ContinuumDist::exponential;
  if (s == "pareto") return ContinuumDist::pareto;
  throw std::invalid_argument("unknown distribution '" + s +
                              "' (constant|exponential|pareto)");
}

GraphKind graph_kind_from_string(const std::string& s) {
  if (s == "lattice" || s == "z") return GraphKind::lattice;
  if (s == "rgg") return GraphKind::rgg;
  if (s == "delaunay") return GraphKind::delaunay;
  throw std::invalid_argument("unknown graph kind '" + s + "' (lattice|rgg|delaunay)");
}

}  // namespace cmperc
