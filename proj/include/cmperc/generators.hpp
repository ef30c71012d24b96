#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cmperc/graph.hpp"
#include "cmperc/rng.hpp"

namespace cmperc {

// Weight models: Bernoulli(p), i.i.d. lambda * Z, and degree-threshold
// r(x) = deg(x) * 1{deg(x) >= delta}.
enum class Model { bernoulli, continuum, degree };
enum class ContinuumDist { constant, exponential, pareto };
enum class GraphKind { lattice, rgg, delaunay };

struct ModelSpec {
  Model model = Model::bernoulli;
  GraphKind graph_kind = GraphKind::lattice;
  // weight parameters
  double p = 0.5;
  double lambda = 1.0;
  ContinuumDist dist = ContinuumDist::exponential;
  double pareto_a = 3.0;  // tail index, > 0
  double delta = 0.0;
  // graph parameters
  int dim = 1;
  long long side = 100;      // lattice side; box side for rgg/delaunay
  double radius = 1.0;       // rgg connection radius R
  double intensity = 1.0;    // points per unit volume
  bool largest_component_only = false;

  void validate() const;  // throws std::invalid_argument
};

struct PointCloud {
  int dim = 2;
  double box_side = 0.0;
  std::vector<std::array<double, 3>> points;
};

// ⟦0; side-1⟧^d nearest-neighbor box, row-major vertex ids, weights zero.
WeightedGraph lattice_box(int d, long long side);

WeightedGraph bernoulli_weights(WeightedGraph g, double p, Rng& rng);
WeightedGraph continuum_weights(WeightedGraph g, double lambda, ContinuumDist dist,
                                double pareto_a, Rng& rng);
WeightedGraph degree_weights(WeightedGraph g, double delta);

// Poisson(intensity * side^d) points uniform in the box, d in {1,2,3}.
PointCloud poisson_points(int d, double box_side, double intensity, Rng& rng);

// Edge iff ||x - y|| < R strictly; grid spatial hash with cell size R.
WeightedGraph geometric_graph(const PointCloud& pc, double R);

// Bowyer-Watson triangulation of a 2-D cloud; exact-arithmetic fallback
// predicates, cocircular ties broken toward the lexicographically smaller
// diagonal (by sorted point indices). Throws on < 3 points, duplicates or
// all-collinear input.
WeightedGraph delaunay_2d(const PointCloud& pc);

// Triangles of the same triangulation, for oracle checks.
std::vector<std::array<int, 3>> delaunay_2d_triangles(const PointCloud& pc);

// One sampled instance: graph + weights, deterministic in (spec, rng state).
WeightedGraph build_instance(const ModelSpec& spec, Rng& rng);

// Mask of the largest connected component (ties to the smallest root id).
std::vector<char> largest_component_mask(const WeightedGraph& g);

// Round-trip helpers for CLI / config parsing.
std::string to_string(Model m);
std::string to_string(ContinuumDist d);
std::string to_string(GraphKind k);
Model model_from_string(const std::string& s);
ContinuumDist dist_from_string(const std::string& s);
GraphKind graph_kind_from_string(const std::string& s);

}  // namespace cmperc
