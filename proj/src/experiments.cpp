#include "cmperc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace cmperc {

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  double n = static_cast<double>(trials);
  double p = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2.0 * n)) / denom;
  double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CMPERC_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

void parallel_trials(std::uint64_t trials, std::uint64_t seed, int threads,
                     const std::function<void(std::uint64_t, Rng&)>& fn) {
  threads = resolve_threads(threads);
  if (threads <= 1 || trials < 2) {
    for (std::uint64_t i = 0; i < trials; ++i) {
      Rng rng = Rng::stream(seed, i);
      fn(i, rng);
    }
    return;
  }
  std::atomic<std::uint64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::uint64_t i = next.fetch_add(1);
      if (i >= trials) return;
      Rng rng = Rng::stream(seed, i);
      fn(i, rng);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

std::string free_param_name(Model m) {
  switch (m) {
    case Model::bernoulli: return "p";
    case Model::continuum: return "lambda";
    case Model::degree: return "delta";
  }
  return "?";
}

namespace {

void set_free_param(ModelSpec& spec, double v) {
  switch (spec.model) {
    case Model::bernoulli: spec.p = v; break;
    case Model::continuum: spec.lambda = v; break;
    case Model::degree: spec.delta = v; break;
  }
}

ModelSpec sized_spec(const ModelSpec& base, long long size) {
  ModelSpec spec = base;
  if (spec.graph_kind == GraphKind::lattice) {
    spec.side = size;
  } else {
    double side = std::pow(static_cast<double>(size) / spec.intensity,
                           1.0 / static_cast<double>(spec.dim));
    spec.side = std::max<long long>(1, std::llround(side));
  }
  return spec;
}

double boundary_margin(const ModelSpec& spec) {
  switch (spec.graph_kind) {
    case GraphKind::lattice: return 0.5;  // exact face membership
    case GraphKind::rgg: return spec.radius;
    case GraphKind::delaunay: return 2.0 / std::sqrt(spec.intensity);
  }
  return 0.0;
}

// Per-axis face membership of a vertex: -1 low face, +1 high face, 0 neither.
int face_side(const ModelSpec& spec, const WeightedGraph& g, Vertex v, int axis) {
  if (spec.graph_kind == GraphKind::lattice) {
    long long stride = 1;
    for (int k = 0; k < axis; ++k) stride *= spec.side;
    long long coord = (static_cast<long long>(v) / stride) % spec.side;
    if (coord == 0) return -1;
    if (coord == spec.side - 1) return 1;
    return 0;
  }
  double m = boundary_margin(spec);
  double x = g.coords[v][axis];
  if (x <= m) return -1;
  if (x >= static_cast<double>(spec.side) - m) return 1;
  return 0;
}

bool on_boundary(const ModelSpec& spec, const WeightedGraph& g, Vertex v) {
  int dims = spec.graph_kind == GraphKind::lattice ? spec.dim : g.coord_dim;
  for (int axis = 0; axis < dims; ++axis) {
    if (face_side(spec, g, v, axis) != 0) return true;
  }
  return false;
}

// The probe vertex nearest the box centre. A weightless site is always its
// own stable singleton, so when the centre carries no weight the probe moves
// to a weighted immediate neighbour (smallest id) if one exists. The search
// stays within one hop: the probe measures the cluster density at a fixed
// location, and scanning farther would instead find some weighted vertex
// almost surely, a size-biased observable.
Vertex pick_center(const ModelSpec& spec, const WeightedGraph& g,
                   const std::vector<char>* mask) {
  Vertex c = -1;
  if (spec.graph_kind == GraphKind::lattice) {
    long long id = 0, stride = 1;
    for (int k = 0; k < spec.dim; ++k) {
      id += (spec.side / 2) * stride;
      stride *= spec.side;
    }
    c = static_cast<Vertex>(id);
  } else {
    double mid = static_cast<double>(spec.side) / 2.0;
    double best_d = 0.0;
    for (Vertex v = 0; v < g.n; ++v) {
      if (mask && !(*mask)[v]) continue;
      double s = 0.0;
      for (int k = 0; k < g.coord_dim; ++k) {
        double dx = g.coords[v][k] - mid;
        s += dx * dx;
      }
      if (c < 0 || s < best_d) {
        c = v;
        best_d = s;
      }
    }
  }
  if (c < 0 || g.weights[c] > 0.0) return c;
  for (Vertex u : g.adj[c]) {
    if (g.weights[u] > 0.0 && (!mask || (*mask)[u])) return u;
  }
  return c;
}

struct TrialOutcome {
  char escape = 0, span = 0, censored = 0;
  double frac = 0.0;
};

TrialOutcome run_probe_trial(const ModelSpec& spec, const CmpConfig& cfg, Rng& rng,
                             bool with_span) {
  TrialOutcome out;
  WeightedGraph g = build_instance(spec, rng);
  if (g.n == 0) return out;
  std::vector<char> mask;
  const std::vector<char>* maskp = nullptr;
  if (spec.largest_component_only && spec.graph_kind != GraphKind::lattice) {
    mask = largest_component_mask(g);
    maskp = &mask;
  }
  Vertex center = pick_center(spec, g, maskp);
  if (center < 0) return out;
  ExploreResult er = explore_stabiliser(g, center, cfg, static_cast<std::size_t>(g.n));
  out.censored = er.budget_exceeded;
  const VertexSet& s = er.budget_exceeded ? er.touched : er.stabiliser;
  for (Vertex v : s) {
    if (on_boundary(spec, g, v)) {
      out.escape = 1;
      break;
    }
  }
  if (er.budget_exceeded) out.escape = 1;
  int largest = 0;
  for (Vertex v : s) {
    if (er.local_partition.find(v) == v) {
      largest = std::max(largest, er.local_partition.cluster_size(v));
    }
  }
  out.frac = static_cast<double>(largest) / static_cast<double>(g.n);

  if (with_span) {
    Partition p = compute_cmp_partition(g, cfg);
    int dims = spec.graph_kind == GraphKind::lattice ? spec.dim : g.coord_dim;
    // per root, bitmask of faces touched: 2 bits per axis
    std::vector<unsigned> faces(g.n, 0);
    for (Vertex v = 0; v < g.n; ++v) {
      Vertex r = p.find(v);
      for (int axis = 0; axis < dims; ++axis) {
        int f = face_side(spec, g, v, axis);
        if (f == -1) faces[r] |= 1u << (2 * axis);
        if (f == 1) faces[r] |= 2u << (2 * axis);
      }
      for (int axis = 0; axis < dims; ++axis) {
        unsigned m = 3u << (2 * axis);
        if ((faces[p.find(v)] & m) == m) out.span = 1;
      }
    }
  }
  return out;
}

ProbeResult aggregate(std::vector<TrialOutcome>& results, bool with_span) {
  ProbeResult pr;
  pr.trials = results.size();
  std::uint64_t esc = 0, span = 0, cens = 0;
  double frac = 0.0;
  for (const auto& r : results) {
    esc += r.escape;
    span += r.span;
    cens += r.censored;
    frac += r.frac;
  }
  double n = std::max<double>(1.0, static_cast<double>(results.size()));
  pr.escape_freq = static_cast<double>(esc) / n;
  auto ci = wilson_interval(esc, pr.trials);
  pr.escape_lo = ci.lo;
  pr.escape_hi = ci.hi;
  pr.span_computed = with_span;
  if (with_span) {
    pr.span_freq = static_cast<double>(span) / n;
    auto cs = wilson_interval(span, pr.trials);
    pr.span_lo = cs.lo;
    pr.span_hi = cs.hi;
  }
  pr.mean_largest_fraction = frac / n;
  pr.censor_rate = static_cast<double>(cens) / n;
  return pr;
}

}  // namespace

ProbeResult good_event_prob(long long n, double gamma, double p, double alpha,
                            std::uint64_t trials, std::uint64_t seed, int threads) {
  if (n < 1) throw std::invalid_argument("good_event_prob: n must be >= 1");
  if (!(gamma > 0.0) || gamma > 1.0) {
    throw std::invalid_argument("good_event_prob: gamma must lie in (0, 1]");
  }
  CmpConfig cfg = CmpConfig::make(alpha);
  WeightedGraph base = lattice_box(1, n + 1);
  std::vector<TrialOutcome> results(trials);
  // Cluster sizes only grow, so merging may stop at the event threshold;
  // when that cutoff fires the reported largest fraction is a lower bound.
  const int stop_size =
      static_cast<int>(std::min<double>(std::ceil(gamma * static_cast<double>(n)),
                                        static_cast<double>(n) + 1.0));
  parallel_trials(trials, seed, threads, [&](std::uint64_t i, Rng& rng) {
    WeightedGraph g = bernoulli_weights(base, p, rng);
    Partition part(g.weights);
    run_merging(g, part, cfg, nullptr, nullptr, false, std::max(stop_size, 1));
    int largest = 0;
    for (Vertex v = 0; v < g.n; ++v) {
      if (part.find(v) == v) largest = std::max(largest, part.cluster_size(v));
    }
    TrialOutcome& out = results[i];
    out.escape = static_cast<double>(largest) >= gamma * static_cast<double>(n);
    out.frac = static_cast<double>(largest) / static_cast<double>(g.n);
  });
  ProbeResult pr = aggregate(results, false);
  pr.param_name = "p";
  pr.param_value = p;
  pr.size = n;
  return pr;
}

ProbeResult spanning_probe(const ModelSpec& spec, double alpha, long long size,
                           std::uint64_t trials, std::uint64_t seed, int threads,
                           bool with_span) {
  ModelSpec s = sized_spec(spec, size);
  s.validate();
  CmpConfig cfg = CmpConfig::make(alpha);
  std::vector<TrialOutcome> results(trials);
  parallel_trials(trials, seed, threads, [&](std::uint64_t i, Rng& rng) {
    results[i] = run_probe_trial(s, cfg, rng, with_span);
  });
  ProbeResult pr = aggregate(results, with_span);
  pr.param_name = free_param_name(spec.model);
  switch (spec.model) {
    case Model::bernoulli: pr.param_value = spec.p; break;
    case Model::continuum: pr.param_value = spec.lambda; break;
    case Model::degree: pr.param_value = spec.delta; break;
  }
  pr.size = size;
  return pr;
}

PcEstimate estimate_pc(const ModelSpec& family, double alpha,
                       const std::vector<long long>& sizes, std::uint64_t trials,
                       double tol, std::uint64_t seed, int threads,
                       PcObservable observable, double gamma) {
  if (sizes.empty()) throw std::invalid_argument("estimate_pc: need at least one size");
  if (!(tol > 0.0)) throw std::invalid_argument("estimate_pc: tol must be > 0");
  if (observable == PcObservable::good_event &&
      (family.model != Model::bernoulli || family.graph_kind != GraphKind::lattice ||
       family.dim != 1)) {
    throw std::invalid_argument(
        "estimate_pc: the good-event observable needs a 1-d Bernoulli lattice family");
  }
  const bool increasing = family.model != Model::degree;
  double dom_lo = 0.0;
  double dom_hi = 1.0;
  switch (family.model) {
    case Model::bernoulli: dom_hi = 1.0; break;
    case Model::continuum: dom_hi = 8.0; break;
    case Model::degree: dom_hi = 32.0; break;
  }

  PcEstimate est;
  est.sizes = sizes;
  est.trials_per_point = trials;
  est.tol = tol;

  std::uint64_t eval_counter = 0;
  struct Eval {
    double v, freq;
    std::uint64_t hits;
  };
  std::vector<Eval> evals;
  auto freq_at = [&](double v, long long size) {
    ModelSpec spec = family;
    set_free_param(spec, v);
    std::uint64_t s = Rng::stream(seed, ++eval_counter).next_u64();
    ProbeResult pr = observable == PcObservable::good_event
                         ? good_event_prob(size, gamma, v, alpha, trials, s, threads)
                         : spanning_probe(spec, alpha, size, trials, s, threads, false);
    evals.push_back({v, pr.escape_freq,
                     static_cast<std::uint64_t>(std::llround(
                         pr.escape_freq * static_cast<double>(trials)))});
    return pr.escape_freq;
  };

  for (long long size : sizes) {
    evals.clear();
    double lo = dom_lo, hi = dom_hi;
    double flo = freq_at(lo, size), fhi = freq_at(hi, size);
    // Orient so "above" means escape frequency >= 0.5.
    double f_low_side = increasing ? flo : fhi;
    double f_high_side = increasing ? fhi : flo;
    if (f_low_side > 0.5 || f_high_side < 0.5) {
      est.monotone_ok = false;
      est.per_size_crossing.emplace_back(size, f_low_side > 0.5 ? lo : hi);
      continue;
    }
    while (hi - lo > tol) {
      double mid = 0.5 * (lo + hi);
      double fm = freq_at(mid, size);
      bool above = fm >= 0.5;
      if (above == increasing) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    est.per_size_crossing.emplace_back(size, 0.5 * (lo + hi));
    est.lower = lo;
    est.upper = hi;
    // Monotonicity diagnostic over this size's evaluations.
    std::sort(evals.begin(), evals.end(),
              [](const Eval& a, const Eval& b) { return a.v < b.v; });
    for (std::size_t i = 0; i + 1 < evals.size(); ++i) {
      auto ci = wilson_interval(evals[i].hits, trials, 3.0);
      auto cj = wilson_interval(evals[i + 1].hits, trials, 3.0);
      bool bad = increasing ? ci.lo > cj.hi : cj.lo > ci.hi;
      if (bad) est.monotone_ok = false;
    }
  }
  return est;
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::string format_row(const SweepConfig& cfg, const ProbeResult& pr,
                       const std::string& event, double freq, double lo, double hi,
                       std::uint64_t row_seed) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%s,%s,%.17g,%s,%.17g,%lld,%llu,%s,%.17g,%.17g,%.17g,%llu",
                to_string(cfg.spec.model).c_str(), to_string(cfg.spec.graph_kind).c_str(),
                cfg.alpha, pr.param_name.c_str(), pr.param_value, pr.size,
                static_cast<unsigned long long>(pr.trials), event.c_str(), freq, lo, hi,
                static_cast<unsigned long long>(row_seed));
  return buf;
}

}  // namespace

std::string run_sweep(const SweepConfig& cfg) {
  if (cfg.out_path.empty()) throw std::invalid_argument("sweep: out_path required");
  const std::string header =
      "model,graph_kind,alpha,param_name,param_value,size,trials,event,freq,ci_lo,ci_hi,seed";

  std::set<std::string> done;
  if (!cfg.manifest_path.empty()) {
    std::ifstream mf(cfg.manifest_path);
    std::string line;
    while (std::getline(mf, line)) {
      if (!line.empty()) done.insert(line);
    }
  }

  bool need_header = true;
  {
    std::ifstream existing(cfg.out_path);
    std::string first;
    if (existing && std::getline(existing, first) && first == header) need_header = false;
  }
  std::ofstream out(cfg.out_path, std::ios::app);
  if (!out) throw std::runtime_error("sweep: cannot open " + cfg.out_path);
  std::ofstream manifest;
  if (!cfg.manifest_path.empty()) {
    manifest.open(cfg.manifest_path, std::ios::app);
    if (!manifest) throw std::runtime_error("sweep: cannot open " + cfg.manifest_path);
  }
  if (need_header) out << header << '\n';

  std::uint64_t point_index = 0;
  std::uint64_t points_run = 0, points_skipped = 0;
  for (double v : cfg.values) {
    for (long long size : cfg.sizes) {
      std::uint64_t idx = point_index++;
      char keybuf[128];
      std::snprintf(keybuf, sizeof(keybuf), "%.17g:%lld", v, size);
      std::string key = keybuf;
      if (done.count(key)) {
        ++points_skipped;
        continue;
      }
      ++points_run;
      ModelSpec spec = cfg.spec;
      set_free_param(spec, v);
      std::uint64_t row_seed = Rng::stream(cfg.seed, idx).next_u64();
      ProbeResult pr =
          spanning_probe(spec, cfg.alpha, size, cfg.trials, row_seed, cfg.threads,
                         cfg.with_span);
      out << format_row(cfg, pr, "escape", pr.escape_freq, pr.escape_lo, pr.escape_hi,
                        row_seed)
          << '\n';
      if (cfg.with_span) {
        out << format_row(cfg, pr, "span", pr.span_freq, pr.span_lo, pr.span_hi, row_seed)
            << '\n';
      }
      out.flush();
      if (manifest.is_open()) {
        manifest << key << '\n';
        manifest.flush();
      }
    }
  }
  out.close();

  std::ifstream written(cfg.out_path);
  std::stringstream ss;
  ss << written.rdbuf();
  const std::string csv = ss.str();

  nlohmann::ordered_json j;
  j["model"] = to_string(cfg.spec.model);
  j["graph_kind"] = to_string(cfg.spec.graph_kind);
  j["alpha"] = cfg.alpha;
  j["param_name"] = free_param_name(cfg.spec.model);
  j["values"] = cfg.values;
  j["sizes"] = cfg.sizes;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["with_span"] = cfg.with_span;
  j["out"] = cfg.out_path;
  j["points_run"] = points_run;
  j["points_skipped"] = points_skipped;
  j["csv_fnv1a"] = fnv1a_hex(csv);
  return j.dump(2) + "\n";
}

}  // namespace cmperc
