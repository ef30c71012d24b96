#include "cmperc/contact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cmperc/experiments.hpp"

namespace cmperc {

namespace {

struct State {
  std::vector<char> in_w, infected;
  std::vector<Vertex> list;      // infected vertices, unordered
  std::vector<int> pos;          // vertex -> index in list, -1 when healthy
  long long sum_deg = 0;
  int max_deg = 0;

  State(const WeightedGraph& g, const VertexSet& w, const VertexSet& a)
      : in_w(g.n, 0), infected(g.n, 0), pos(g.n, -1) {
    for (Vertex v : w) {
      g.check_vertex(v);
      in_w[v] = 1;
      max_deg = std::max(max_deg, g.degree(v));
    }
    for (Vertex v : a) {
      g.check_vertex(v);
      if (!in_w[v]) throw std::invalid_argument("contact: initial set must lie inside W");
      if (!infected[v]) add(g, v);
    }
  }

  void add(const WeightedGraph& g, Vertex v) {
    infected[v] = 1;
    pos[v] = static_cast<int>(list.size());
    list.push_back(v);
    sum_deg += g.degree(v);
  }

  void remove(const WeightedGraph& g, Vertex v) {
    infected[v] = 0;
    int i = pos[v];
    Vertex last = list.back();
    list[i] = last;
    pos[last] = i;
    list.pop_back();
    pos[v] = -1;
    sum_deg -= g.degree(v);
  }
};

// Forward Gillespie loop, law-equivalent to the graphical construction
// restricted to W. `on_time` lets callers stop at a fixed observation time.
ContactRun simulate(const WeightedGraph& g, const VertexSet& w, const VertexSet& a,
                    double lambda, double horizon, Rng& rng, std::uint64_t event_budget,
                    State* out_state) {
  if (lambda < 0.0) throw std::invalid_argument("contact: lambda must be >= 0");
  if (!(horizon > 0.0)) throw std::invalid_argument("contact: horizon must be > 0");
  ContactRun run;
  State st(g, w, a);
  double t = 0.0;
  while (!st.list.empty()) {
    double total = static_cast<double>(st.list.size()) +
                   lambda * static_cast<double>(st.sum_deg);
    t += rng.exponential(total);
    if (t > horizon) {
      run.censored = true;
      break;
    }
    if (++run.event_count > event_budget) {
      run.blew_up = true;
      break;
    }
    double pick = rng.next_double() * total;
    if (pick < static_cast<double>(st.list.size()) || st.sum_deg == 0) {
      Vertex v = st.list[rng.uniform_int(st.list.size())];
      st.remove(g, v);
      if (st.list.empty()) run.extinction_time = t;
    } else {
      // Arrow from a degree-weighted infected source to a uniform neighbor.
      Vertex src;
      for (;;) {
        src = st.list[rng.uniform_int(st.list.size())];
        if (rng.uniform_int(static_cast<std::uint64_t>(st.max_deg)) <
            static_cast<std::uint64_t>(g.degree(src))) {
          break;
        }
      }
      Vertex dst = g.adj[src][rng.uniform_int(g.adj[src].size())];
      if (!st.in_w[dst]) {
        ++run.exit_total;
        ++run.exit_counts[{src, dst}];
      } else if (!st.infected[dst]) {
        st.add(g, dst);
        ++run.total_infections;
      }
    }
  }
  if (out_state) *out_state = std::move(st);
  return run;
}

}  // namespace

ContactRun run_contact(const WeightedGraph& g, const VertexSet& w, const VertexSet& a,
                       double lambda, double horizon, Rng& rng,
                       std::uint64_t event_budget) {
  return simulate(g, w, a, lambda, horizon, rng, event_budget, nullptr);
}

VertexSet contact_state_at(const WeightedGraph& g, const VertexSet& w, const VertexSet& a,
                           double lambda, double t, Rng& rng,
                           std::uint64_t event_budget) {
  State st(g, w, a);
  simulate(g, w, a, lambda, t, rng, event_budget, &st);
  VertexSet out = st.list;
  std::sort(out.begin(), out.end());
  return out;
}

GraphicalConstruction GraphicalConstruction::sample(const WeightedGraph& g,
                                                    double lambda_max, double t_max,
                                                    Rng& rng) {
  if (lambda_max < 0.0) throw std::invalid_argument("contact: lambda_max must be >= 0");
  if (!(t_max > 0.0)) throw std::invalid_argument("contact: t_max must be > 0");
  GraphicalConstruction gc;
  gc.t_max = t_max;
  gc.lambda_max = lambda_max;
  for (Vertex v = 0; v < g.n; ++v) {
    for (double t = rng.exponential(1.0); t <= t_max; t += rng.exponential(1.0)) {
      gc.events.push_back({t, v, -1, 0.0});
    }
    if (lambda_max > 0.0) {
      for (Vertex y : g.adj[v]) {
        for (double t = rng.exponential(lambda_max); t <= t_max;
             t += rng.exponential(lambda_max)) {
          gc.events.push_back({t, v, y, rng.next_double()});
        }
      }
    }
  }
  std::sort(gc.events.begin(), gc.events.end(),
            [](const Event& a, const Event& b) { return a.t < b.t; });
  return gc;
}

ContactRun run_on_construction(const WeightedGraph& g, const GraphicalConstruction& gc,
                               const VertexSet& w, const VertexSet& a, double lambda) {
  if (lambda > gc.lambda_max) {
    throw std::invalid_argument("contact: lambda exceeds the construction's lambda_max");
  }
  ContactRun run;
  State st(g, w, a);
  const double keep = gc.lambda_max > 0.0 ? lambda / gc.lambda_max : 0.0;
  for (const auto& ev : gc.events) {
    if (st.list.empty()) break;
    ++run.event_count;
    if (ev.y < 0) {
      if (st.infected[ev.x]) {
        st.remove(g, ev.x);
        if (st.list.empty()) run.extinction_time = ev.t;
      }
    } else {
      if (ev.u >= keep) continue;  // thinning to rate lambda
      if (!st.infected[ev.x] || !st.in_w[ev.x]) continue;
      if (!st.in_w[ev.y]) {
        ++run.exit_total;
        ++run.exit_counts[{ev.x, ev.y}];
      } else if (!st.infected[ev.y]) {
        st.add(g, ev.y);
        ++run.total_infections;
      }
    }
  }
  if (!st.list.empty()) run.censored = true;
  return run;
}

bool coupling_monotonicity_check(const WeightedGraph& g, const VertexSet& w,
                                 const VertexSet& w_big, const VertexSet& a,
                                 const VertexSet& a_big, double lambda, double horizon,
                                 Rng& rng) {
  if (!is_subset(w, w_big) || !is_subset(a, a_big)) {
    throw std::invalid_argument("coupling_monotonicity_check: need W <= W' and A <= A'");
  }
  GraphicalConstruction gc = GraphicalConstruction::sample(g, lambda, horizon, rng);
  State small(g, w, a), big(g, w_big, a_big);
  auto contained = [&]() {
    for (Vertex v : small.list) {
      if (!big.infected[v]) return false;
    }
    return true;
  };
  if (!contained()) return false;
  for (const auto& ev : gc.events) {
    auto step = [&](State& st) {
      if (ev.y < 0) {
        if (st.infected[ev.x]) st.remove(g, ev.x);
      } else {
        if (!st.infected[ev.x] || !st.in_w[ev.x]) return;
        if (st.in_w[ev.y] && !st.infected[ev.y]) st.add(g, ev.y);
      }
    };
    step(small);
    step(big);
    if (!contained()) return false;
  }
  return true;
}

DualityResult duality_estimate(const WeightedGraph& g, const VertexSet& a,
                               const VertexSet& b, double t, double lambda,
                               std::uint64_t trials, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("duality_estimate: trials must be > 0");
  VertexSet all(g.n);
  for (Vertex v = 0; v < g.n; ++v) all[v] = v;
  std::uint64_t hit_fwd = 0, hit_bwd = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    if (t <= 0.0) {
      bool hit = !set_intersection(a, b).empty();
      hit_fwd += hit;
      hit_bwd += hit;
      continue;
    }
    Rng r1 = Rng::stream(seed, 2 * i);
    Rng r2 = Rng::stream(seed, 2 * i + 1);
    VertexSet xa = contact_state_at(g, all, a, lambda, t, r1);
    VertexSet xb = contact_state_at(g, all, b, lambda, t, r2);
    if (!set_intersection(xa, b).empty()) ++hit_fwd;
    if (!set_intersection(xb, a).empty()) ++hit_bwd;
  }
  DualityResult res;
  res.trials = trials;
  res.p_forward = static_cast<double>(hit_fwd) / static_cast<double>(trials);
  res.p_backward = static_cast<double>(hit_bwd) / static_cast<double>(trials);
  auto ci_f = wilson_interval(hit_fwd, trials);
  auto ci_b = wilson_interval(hit_bwd, trials);
  res.fwd_lo = ci_f.lo;
  res.fwd_hi = ci_f.hi;
  res.bwd_lo = ci_b.lo;
  res.bwd_hi = ci_b.hi;
  return res;
}

}  // namespace cmperc
