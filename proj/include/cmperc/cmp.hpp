#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmperc/graph.hpp"
#include "cmperc/rng.hpp"

namespace cmperc {

// Expansion exponent alpha >= 1. When alpha is a small rational p/q and the
// weights are integers, threshold tests d <= r^alpha are decided exactly in
// big integers (d <= r^{p/q}  <=>  d^q <= r^p); otherwise plain doubles with
// no epsilon.
struct CmpConfig {
  double alpha = 1.0;
  long long alpha_num = 1;
  long long alpha_den = 1;
  bool rational_alpha = true;

  static CmpConfig make(double alpha);
};

// eta in (0, 1] stored as a rational for exact scaled-threshold tests,
// plus the additive offset of the shifted weight r~(C) = r(C) + offset.
struct EtaConfig {
  double eta = 1.0;
  long long eta_num = 1;
  long long eta_den = 1;
  double r_tilde_offset = 2.0;

  static EtaConfig make(double eta, double r_tilde_offset = 2.0);
};

// Threshold comparisons for one (graph, config) pair.
class Thresholds {
 public:
  Thresholds(const CmpConfig& cfg, bool integer_weights);

  bool exact() const { return exact_; }

  // floor(r^alpha), clamped to a safe BFS-radius range.
  long long floor_pow(double r) const;

  // floor((num/den) * r^alpha)
  long long floor_scaled_pow(double r, long long num, long long den) const;

  // d <= r^alpha for integer d
  bool le_pow(long long d, double r) const { return d <= floor_pow(r); }

  // (num/den) * r^alpha <= d for integer d
  bool scaled_pow_le(double r, long long num, long long den, long long d) const;

 private:
  double alpha_;
  long long num_, den_;
  bool exact_;
};

// Disjoint-set partition of [0, n) carrying per-cluster total weight and an
// intrusive member list. The canonical root of a cluster is its minimum
// vertex id, so root maps are comparable across runs and merge schedules.
class Partition {
 public:
  explicit Partition(int n);
  explicit Partition(const std::vector<double>& weights);

  int n() const { return static_cast<int>(parent_.size()); }
  Vertex find(Vertex x) const;
  bool same(Vertex x, Vertex y) const { return find(x) == find(y); }
  double weight_of(Vertex x) const { return weight_[find(x)]; }
  double root_weight(Vertex root) const { return weight_[root]; }
  int cluster_size(Vertex x) const { return size_[find(x)]; }
  int cluster_count() const { return count_; }

  // Only valid while x is still a singleton root (lazy weight loading).
  void set_vertex_weight(Vertex x, double w);

  // Merges the clusters of x and y unconditionally; returns the new root.
  Vertex unite(Vertex x, Vertex y);

  template <typename F>
  void for_each_member(Vertex root, F&& f) const {
    for (Vertex v = root; v != -1; v = next_[v]) f(v);
  }
  VertexSet members(Vertex root) const;

  std::vector<Vertex> roots() const;        // sorted canonical roots
  std::vector<Vertex> root_of_all() const;  // canonical root per vertex

  bool operator==(const Partition& other) const;

 private:
  mutable std::vector<Vertex> parent_;
  std::vector<int> size_;
  std::vector<double> weight_;
  std::vector<Vertex> next_, tail_;
  int count_;
};

struct CmpResult {
  Partition partition;
  std::vector<std::pair<Vertex, Vertex>> oriented_edges;  // (C, C') root pairs, C descends to C'
  std::vector<Vertex> cluster_index;                      // sorted roots
};

// One application of the merging operator: merges the clusters of x and y
// iff they differ and d(x, y) <= min(r(Cx), r(Cy))^alpha. Returns whether a
// merge happened.
bool merge_step(const WeightedGraph& g, Partition& p, Vertex x, Vertex y,
                const CmpConfig& cfg);
bool merge_step_with_distance(Partition& p, Vertex x, Vertex y, long long d,
                              const CmpConfig& cfg, const Thresholds& th);

// Runs cluster merging to its fixed point on `p`. With a `domain`, only
// vertices inside it merge, but distances are still measured in the whole
// graph: that restricted merging is the one the splitting theorems talk
// about. `induced_distances` additionally confines paths to the domain
// (the literal induced-subgraph partition). `seeds` limits the initial
// worklist; omit it unless every cluster outside is known inert.
// `stop_cluster_size` > 0 aborts as soon as any cluster reaches that many
// vertices: cluster sizes only grow under merging, so for threshold events
// the abort decides "some final cluster is at least this large" early.
void run_merging(const WeightedGraph& g, Partition& p, const CmpConfig& cfg,
                 const std::vector<char>* domain = nullptr,
                 const std::vector<Vertex>* seeds = nullptr,
                 bool induced_distances = false, int stop_cluster_size = 0);

// The finest admissible partition, with the oriented cluster graph.
CmpResult compute_cmp(const WeightedGraph& g, const CmpConfig& cfg);
Partition compute_cmp_partition(const WeightedGraph& g, const CmpConfig& cfg,
                                const std::vector<char>* domain = nullptr,
                                bool induced_distances = false);

// Same fixed point via merge_step over randomly scheduled vertex pairs
// (order-independence checks). Requires all-pairs BFS, keep n small.
Partition compute_cmp_randomized(const WeightedGraph& g, const CmpConfig& cfg, Rng& rng);

// True iff every pair of distinct clusters satisfies the strict distance
// inequality; bounded BFS per cluster, not all pairs.
bool is_admissible(const WeightedGraph& g, const Partition& p, const CmpConfig& cfg,
                   const std::vector<char>* domain = nullptr);

// Diameter bound f(r): alpha = 1 branch max(r log2 r / 2, 0), else r^alpha / (2^alpha - 2).
double diameter_bound_f(double r, const CmpConfig& cfg);

// All pairs C -> C' with d(C, C') <= r(C)^alpha, as canonical root pairs.
std::vector<std::pair<Vertex, Vertex>> oriented_edges(const WeightedGraph& g,
                                                      const Partition& p,
                                                      const CmpConfig& cfg,
                                                      const std::vector<char>* domain = nullptr);

enum class StableBallMode {
  ambient,  // balls measured in g (default reading of the containment test)
  induced,  // balls measured inside the induced subgraph, for comparison
};

// H is stable iff every cluster of the CMP computed inside H keeps its
// influence ball within H.
bool is_stable(const WeightedGraph& g, const VertexSet& h, const CmpConfig& cfg,
               StableBallMode mode = StableBallMode::ambient);

// Smallest stable set containing W, from the global partition, by iterated
// ball expansion.
VertexSet stabiliser_iterative(const WeightedGraph& g, const Partition& global,
                               const VertexSet& w, const CmpConfig& cfg);

struct ExploreResult {
  bool budget_exceeded = false;
  VertexSet stabiliser;      // valid when not budget_exceeded
  Partition local_partition; // trace of the CMP on the stabiliser
  VertexSet touched;         // vertices whose weight was evaluated
};

// Grows H^0 = {x0} by influence balls, re-merging locally, until stable.
// Never evaluates weights outside the returned `touched` set; stops with
// budget_exceeded once |H| passes `budget`.
ExploreResult explore_stabiliser(const WeightedGraph& g, Vertex x0, const CmpConfig& cfg,
                                 std::size_t budget,
                                 const std::function<double(Vertex)>* weight_override = nullptr);

// Union of cluster C and its descendants under C ->eta C'
// (d(C, C') <= eta * r(C)^alpha).
VertexSet eta_stabiliser(const WeightedGraph& g, const Partition& p, Vertex cluster_root,
                         const EtaConfig& eta, const CmpConfig& cfg);

// gamma(alpha, eta) = 1/(2^alpha - 2) + eta/(1 - eta) (1 + 1/(2^alpha - 2)); alpha > 1.
double eta_gamma(double alpha, double eta);

struct EtaBoundViolation {
  Vertex x, y;
  int dist;
  double lower, upper;
};

// For every vertex x with weighted cluster and every y on the outer boundary
// of its eta-stabiliser, checks eta r^alpha <= d(x, y) <= 1 + gamma r^alpha.
std::vector<EtaBoundViolation> check_eta_distance_bounds(const WeightedGraph& g,
                                                         const Partition& p,
                                                         const EtaConfig& eta,
                                                         const CmpConfig& cfg);

struct ChainReport {
  bool exhaustive = true;
  std::size_t chains_checked = 0;
  std::size_t weak_violations = 0;
  std::size_t strong_violations = 0;
  std::size_t strong_chains = 0;  // chains meeting the strong-form endpoints
  bool strong_applicable = false; // r(C) >= 100 and parameters in range
  double weak_min_margin = 0.0;   // min of lhs - rhs over checked chains
  double strong_min_margin = 0.0;
};

// Chain-cost inequalities along the stabiliser-boundary relation inside the
// eta-stabiliser of cluster C. Enumerates simple chains exhaustively when
// few, otherwise samples with restarts.
ChainReport check_chain_costs(const WeightedGraph& g, const Partition& p,
                              const EtaConfig& eta, const CmpConfig& cfg, double beta,
                              Vertex cluster_root, std::size_t chain_budget, Rng& rng,
                              std::size_t exhaustive_limit = 1000);

// JSON serialization of a CmpResult (clusters keyed by canonical root,
// weights, oriented edges as root pairs). Deterministic output.
std::string cmp_result_to_json(const WeightedGraph& g, const CmpResult& result,
                               const CmpConfig& cfg, int indent = 2);

}  // namespace cmperc
