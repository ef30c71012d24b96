#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cmperc/cmp.hpp"
#include "cmperc/generators.hpp"
#include "cmperc/graph.hpp"
#include "cmperc/rng.hpp"

namespace cmperc {

struct WilsonInterval {
  double lo = 0.0, hi = 1.0;
};
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                               double z = 1.96);

// Thread count resolution: explicit value, else CMPERC_THREADS, else 1.
int resolve_threads(int requested);

// Runs fn(trial_index, rng) for every trial on `threads` workers. Per-trial
// substreams are derived from (seed, index), so results are identical for any
// thread count; fn must write only to its own slot.
void parallel_trials(std::uint64_t trials, std::uint64_t seed, int threads,
                     const std::function<void(std::uint64_t, Rng&)>& fn);

// Finite-size percolation probe. The primary event is stabiliser escape from
// the box center: the exploration exceeds its budget (box volume) or reaches
// the boundary layer. Boundary spanning (one cluster meeting two opposite
// faces) is the secondary cross-check and needs the full partition.
struct ProbeResult {
  std::string param_name;
  double param_value = 0.0;
  long long size = 0;
  std::uint64_t trials = 0;
  double escape_freq = 0.0, escape_lo = 0.0, escape_hi = 1.0;
  double span_freq = 0.0, span_lo = 0.0, span_hi = 1.0;
  bool span_computed = false;
  double mean_largest_fraction = 0.0;  // largest explored cluster / n
  double censor_rate = 0.0;            // fraction of trials hitting the budget
};

// Frequency of "the interval CMP contains a cluster of >= gamma*n vertices"
// under Bernoulli(p) weights on the path 0..n.
ProbeResult good_event_prob(long long n, double gamma, double p, double alpha,
                            std::uint64_t trials, std::uint64_t seed, int threads = 1);

// `size` is the lattice side for lattice graphs and the expected vertex count
// for rgg/delaunay (the box side is derived from the intensity).
ProbeResult spanning_probe(const ModelSpec& spec, double alpha, long long size,
                           std::uint64_t trials, std::uint64_t seed, int threads = 1,
                           bool with_span = false);

struct PcEstimate {
  double lower = 0.0, upper = 1.0;
  std::vector<long long> sizes;
  std::uint64_t trials_per_point = 0;
  double tol = 0.0;
  std::vector<std::pair<long long, double>> per_size_crossing;
  bool monotone_ok = true;  // false when frequencies defy monotonicity beyond noise
};

// Observable driving the bisection: stabiliser escape from the box center,
// or the interval good event (a cluster of >= gamma*n vertices). The good
// event is defined for 1-d Bernoulli lattice families only, where it is the
// sharper finite-size signal: escape from a fixed center saturates near p
// above the transition, biasing its 0.5-crossing upward.
enum class PcObservable { escape, good_event };

// Bisection on the model's free parameter (p, lambda, or delta) until the
// observable's crossing at frequency 0.5 is bracketed within tol at every
// size.
PcEstimate estimate_pc(const ModelSpec& family, double alpha,
                       const std::vector<long long>& sizes, std::uint64_t trials,
                       double tol, std::uint64_t seed, int threads = 1,
                       PcObservable observable = PcObservable::escape,
                       double gamma = 0.05);

struct SweepConfig {
  ModelSpec spec;
  double alpha = 1.0;
  std::vector<double> values;  // grid over the model's free parameter
  std::vector<long long> sizes;
  std::uint64_t trials = 100;
  std::uint64_t seed = 1;
  int threads = 1;
  bool with_span = false;
  std::string out_path;       // CSV destination
  std::string manifest_path;  // completed-row manifest, enables resume
};

// Runs the grid, appending rows to the CSV (header if new) and keys to the
// manifest; already-manifested points are skipped. Returns a JSON summary
// with the config echo and a content hash of the CSV.
std::string run_sweep(const SweepConfig& cfg);

// Name of the free parameter of a model ("p", "lambda", "delta").
std::string free_param_name(Model m);

// FNV-1a 64-bit, hex string; used for sweep content hashes.
std::string fnv1a_hex(const std::string& data);

}  // namespace cmperc
