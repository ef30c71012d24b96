#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "cmperc/graph.hpp"
#include "cmperc/rng.hpp"

namespace cmperc {

inline constexpr std::uint64_t kDefaultEventBudget = 100'000'000ULL;

// One simulated trajectory of the contact process restricted to W: infected
// sites recover at rate 1 and push infection along each incident oriented
// edge at rate lambda; arrows leaving W are counted but never re-enter.
struct ContactRun {
  double extinction_time = 0.0;  // meaningful when !censored && !blew_up
  bool censored = false;         // still infected at the horizon
  bool blew_up = false;          // event budget exceeded
  std::uint64_t event_count = 0;
  std::uint64_t total_infections = 0;  // infection events inside W
  std::uint64_t exit_total = 0;        // arrows from an infected vertex out of W
  std::map<std::pair<Vertex, Vertex>, std::uint64_t> exit_counts;
};

ContactRun run_contact(const WeightedGraph& g, const VertexSet& w, const VertexSet& a,
                       double lambda, double horizon, Rng& rng,
                       std::uint64_t event_budget = kDefaultEventBudget);

// Infected set at time t (sorted); empty if extinct by then.
VertexSet contact_state_at(const WeightedGraph& g, const VertexSet& w, const VertexSet& a,
                           double lambda, double t, Rng& rng,
                           std::uint64_t event_budget = kDefaultEventBudget);

// Materialized Poisson marks for coupled runs: recovery marks per vertex and
// infection arrows per oriented edge at rate lambda_max, each arrow carrying
// a uniform so any lambda <= lambda_max is recovered by thinning.
struct GraphicalConstruction {
  double t_max = 0.0;
  double lambda_max = 0.0;
  struct Event {
    double t;
    Vertex x;        // recovery site, or arrow source
    Vertex y;        // arrow target, or -1 for a recovery mark
    double u;        // thinning uniform (arrows only)
  };
  std::vector<Event> events;  // sorted by time

  static GraphicalConstruction sample(const WeightedGraph& g, double lambda_max,
                                      double t_max, Rng& rng);
};

// Deterministic replay of the construction with rate lambda <= lambda_max.
ContactRun run_on_construction(const WeightedGraph& g, const GraphicalConstruction& gc,
                               const VertexSet& w, const VertexSet& a, double lambda);

// Couples (W, A) and (W', A') on one construction; true iff the smaller run's
// infected set stays inside the larger one at every event time.
bool coupling_monotonicity_check(const WeightedGraph& g, const VertexSet& w,
                                 const VertexSet& w_big, const VertexSet& a,
                                 const VertexSet& a_big, double lambda, double horizon,
                                 Rng& rng);

struct DualityResult {
  double p_forward = 0.0, p_backward = 0.0;
  double fwd_lo = 0.0, fwd_hi = 0.0;
  double bwd_lo = 0.0, bwd_hi = 0.0;
  std::uint64_t trials = 0;
  bool ci_overlap() const { return fwd_lo <= bwd_hi && bwd_lo <= fwd_hi; }
};

// Monte Carlo check of P{xi^A(t) hits B} = P{xi^B(t) hits A} with Wilson CIs.
DualityResult duality_estimate(const WeightedGraph& g, const VertexSet& a,
                               const VertexSet& b, double t, double lambda,
                               std::uint64_t trials, std::uint64_t seed);

}  // namespace cmperc
