#include "cmperc/cmp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace cmperc {

using boost::multiprecision::cpp_int;

namespace {

constexpr long long kRadiusCap = 1LL << 62;

cpp_int ipow(cpp_int base, long long exp) {
  cpp_int out = 1;
  while (exp > 0) {
    if (exp & 1) out *= base;
    base *= base;
    exp >>= 1;
  }
  return out;
}

// Smallest-denominator rational exactly equal to the given double, or nullopt.
std::optional<std::pair<long long, long long>> as_rational(double x, long long max_den) {
  for (long long den = 1; den <= max_den; ++den) {
    long long num = std::llround(x * static_cast<double>(den));
    if (static_cast<double>(num) / static_cast<double>(den) == x) return {{num, den}};
  }
  return std::nullopt;
}

}  // namespace

CmpConfig CmpConfig::make(double alpha) {
  if (!(alpha >= 1.0)) {
    throw std::invalid_argument("alpha must satisfy alpha >= 1");
  }
  CmpConfig cfg;
  cfg.alpha = alpha;
  if (auto r = as_rational(alpha, 64)) {
    cfg.alpha_num = r->first;
    cfg.alpha_den = r->second;
    cfg.rational_alpha = true;
  } else {
    cfg.rational_alpha = false;
  }
  return cfg;
}

EtaConfig EtaConfig::make(double eta, double r_tilde_offset) {
  if (!(eta > 0.0) || !(eta <= 1.0)) {
    throw std::invalid_argument("eta must lie in (0, 1]");
  }
  EtaConfig e;
  e.eta = eta;
  e.r_tilde_offset = r_tilde_offset;
  if (auto r = as_rational(eta, 1000)) {
    e.eta_num = r->first;
    e.eta_den = r->second;
  } else {
    e.eta_num = 0;  // float-only
    e.eta_den = 1;
  }
  return e;
}

Thresholds::Thresholds(const CmpConfig& cfg, bool integer_weights)
    : alpha_(cfg.alpha),
      num_(cfg.alpha_num),
      den_(cfg.alpha_den),
      exact_(cfg.rational_alpha && integer_weights) {}

long long Thresholds::floor_pow(double r) const {
  if (!(r > 0.0)) return 0;
  if (exact_ && den_ == 1 && num_ == 1 && r <= 9.0e15) {
    return std::min(std::llround(r), kRadiusCap);
  }
  double est = std::pow(r, alpha_);
  if (est >= static_cast<double>(kRadiusCap)) return kRadiusCap;
  if (!exact_ || r > 9.0e15) {
    return static_cast<long long>(std::floor(est));
  }
  const long long ri = std::llround(r);
  long long t = static_cast<long long>(std::floor(est));
  // Exact adjustment of the float estimate. Native 128-bit covers every
  // realistic magnitude; the big-integer fallback keeps it exact beyond.
  if (den_ <= 2 && (ri < 2 || num_ * std::log2(static_cast<double>(ri)) < 126.0)) {
    auto upow = [](unsigned __int128 b, long long e) {
      unsigned __int128 out = 1;
      while (e > 0) {
        if (e & 1) out *= b;
        if (e > 1) b *= b;
        e >>= 1;
      }
      return out;
    };
    const unsigned __int128 rp = upow(static_cast<unsigned __int128>(ri), num_);
    while (t > 0 && upow(static_cast<unsigned __int128>(t), den_) > rp) --t;
    while (upow(static_cast<unsigned __int128>(t) + 1, den_) <= rp) ++t;
    return t;
  }
  const cpp_int rp = ipow(ri, num_);
  while (t > 0 && ipow(t, den_) > rp) --t;
  while (ipow(t + 1, den_) <= rp) ++t;
  return t;
}

long long Thresholds::floor_scaled_pow(double r, long long num, long long den) const {
  if (!(r > 0.0) || num <= 0) return 0;
  double est = (static_cast<double>(num) / static_cast<double>(den)) * std::pow(r, alpha_);
  if (est >= static_cast<double>(kRadiusCap)) return kRadiusCap;
  if (!exact_ || num == 0 || r > 9.0e15) {
    return static_cast<long long>(std::floor(est));
  }
  const long long ri = std::llround(r);
  const cpp_int rhs = ipow(num, den_) * ipow(ri, num_);
  const cpp_int dq = ipow(den, den_);
  long long t = static_cast<long long>(std::floor(est));
  while (t > 0 && ipow(t, den_) * dq > rhs) --t;
  while (ipow(t + 1, den_) * dq <= rhs) ++t;
  return t;
}

bool Thresholds::scaled_pow_le(double r, long long num, long long den, long long d) const {
  if (!(r > 0.0) || num <= 0) return d >= 0;
  if (!exact_ || num == 0 || r > 9.0e15) {
    return (static_cast<double>(num) / static_cast<double>(den)) * std::pow(r, alpha_) <=
           static_cast<double>(d);
  }
  const long long ri = std::llround(r);
  return ipow(num, den_) * ipow(ri, num_) <= ipow(cpp_int(d) * den, den_);
}

Partition::Partition(int n)
    : parent_(n), size_(n, 1), weight_(n, 0.0), next_(n, -1), tail_(n), count_(n) {
  std::iota(parent_.begin(), parent_.end(), 0);
  std::iota(tail_.begin(), tail_.end(), 0);
}

Partition::Partition(const std::vector<double>& weights)
    : Partition(static_cast<int>(weights.size())) {
  weight_ = weights;
}

Vertex Partition::find(Vertex x) const {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];  // path halving
    x = parent_[x];
  }
  return x;
}

void Partition::set_vertex_weight(Vertex x, double w) {
  if (parent_[x] != x || size_[x] != 1) {
    throw std::logic_error("set_vertex_weight: vertex is no longer a singleton root");
  }
  weight_[x] = w;
}

Vertex Partition::unite(Vertex x, Vertex y) {
  Vertex rx = find(x), ry = find(y);
  if (rx == ry) return rx;
  if (ry < rx) std::swap(rx, ry);  // canonical root keeps the minimum id
  parent_[ry] = rx;
  size_[rx] += size_[ry];
  weight_[rx] += weight_[ry];
  next_[tail_[rx]] = ry;
  tail_[rx] = tail_[ry];
  --count_;
  return rx;
}

VertexSet Partition::members(Vertex root) const {
  VertexSet out;
  out.reserve(size_[root]);
  for_each_member(root, [&](Vertex v) { out.push_back(v); });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Vertex> Partition::roots() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < n(); ++v) {
    if (parent_[v] == v) out.push_back(v);
  }
  return out;
}

std::vector<Vertex> Partition::root_of_all() const {
  std::vector<Vertex> out(n());
  for (Vertex v = 0; v < n(); ++v) out[v] = find(v);
  return out;
}

bool Partition::operator==(const Partition& other) const {
  if (n() != other.n()) return false;
  return root_of_all() == other.root_of_all();
}

bool merge_step_with_distance(Partition& p, Vertex x, Vertex y, long long d,
                              const CmpConfig& cfg, const Thresholds& th) {
  (void)cfg;
  if (d < 0) return false;
  Vertex rx = p.find(x), ry = p.find(y);
  if (rx == ry) return false;
  double wmin = std::min(p.root_weight(rx), p.root_weight(ry));
  if (!th.le_pow(d, wmin)) return false;
  p.unite(rx, ry);
  return true;
}

bool merge_step(const WeightedGraph& g, Partition& p, Vertex x, Vertex y,
                const CmpConfig& cfg) {
  g.check_vertex(x);
  g.check_vertex(y);
  Thresholds th(cfg, g.integer_weights());
  return merge_step_with_distance(p, x, y, distance(g, x, y), cfg, th);
}

void run_merging(const WeightedGraph& g, Partition& p, const CmpConfig& cfg,
                 const std::vector<char>* domain, const std::vector<Vertex>* seeds,
                 bool induced_distances, int stop_cluster_size) {
  const int n = g.n;
  Thresholds th(cfg, g.integer_weights());

  // Weights of every mergeable root, kept current so a scan can be capped at
  // the heaviest potential partner: a pair merges only when
  // d <= min(r, r')^alpha, so nothing past the second-heaviest weight can
  // ever be a hit for the current heaviest cluster. This keeps a dominant
  // cluster from re-walking its whole (possibly graph-sized) influence ball
  // after every absorption. Lazy max-heap: merges push the new weight and
  // stale entries (dead roots, outdated weights) are dropped at the top.
  std::priority_queue<std::pair<double, Vertex>> weight_heap;
  for (Vertex v = 0; v < n; ++v) {
    if (domain && !(*domain)[v]) continue;
    if (p.find(v) == v) weight_heap.emplace(p.root_weight(v), v);
  }
  auto heap_clean = [&] {
    while (!weight_heap.empty()) {
      auto [w, r] = weight_heap.top();
      if (p.find(r) == r && p.root_weight(r) == w) break;
      weight_heap.pop();
    }
  };
  auto max_other_weight = [&](Vertex self) {
    heap_clean();
    if (weight_heap.empty()) return 0.0;
    auto top = weight_heap.top();
    if (top.second != self) return top.first;
    weight_heap.pop();
    heap_clean();
    double w = weight_heap.empty() ? 0.0 : weight_heap.top().first;
    weight_heap.push(top);
    return w;
  };

  // Smallest influence radius first: light clusters resolve their merges
  // before a heavy cluster scans, so its repeated re-activations collapse
  // into one pass. Any fair schedule yields the same partition.
  std::vector<char> in_queue(n, 0);
  using Entry = std::pair<long long, Vertex>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
  auto push = [&](Vertex r) {
    if (!in_queue[r]) {
      in_queue[r] = 1;
      queue.emplace(th.floor_pow(p.root_weight(r)), r);
    }
  };
  if (seeds) {
    for (Vertex v : *seeds) push(p.find(v));
  } else {
    for (Vertex v = 0; v < n; ++v) {
      if (domain && !(*domain)[v]) continue;
      if (p.find(v) == v) push(v);
    }
  }

  BfsScratch bfs(n);
  std::vector<int> partner_dist(n, 0);
  std::vector<unsigned> partner_epoch(n, 0);
  unsigned epoch = 0;
  std::vector<Vertex> partners, sources;

  while (!queue.empty()) {
    Vertex c = queue.top().second;
    queue.pop();
    if (p.find(c) != c) continue;  // absorbed since enqueued
    if (!in_queue[c]) continue;    // duplicate heap entry
    in_queue[c] = 0;
    double own = p.root_weight(c);
    long long radius =
        std::min(th.floor_pow(own), th.floor_pow(max_other_weight(c)));
    if (radius < 1) continue;

    sources.clear();
    p.for_each_member(c, [&](Vertex v) { sources.push_back(v); });
    ++epoch;
    partners.clear();
    bfs.run(
        g, sources, radius,
        [&](Vertex v, int d) {
          if (domain && !(*domain)[v]) return;  // passed through, never merged
          Vertex r = p.find(v);
          if (r == c) return;
          if (partner_epoch[r] != epoch) {
            partner_epoch[r] = epoch;
            partner_dist[r] = d;  // BFS order: first hit is the min distance
            partners.push_back(r);
          }
        },
        induced_distances ? domain : nullptr);

    Vertex cur = c;
    bool merged = false;
    for (Vertex r : partners) {
      if (p.find(r) != r) continue;
      if (p.same(cur, r)) continue;
      double w_cur = p.root_weight(cur), w_r = p.root_weight(r);
      if (th.le_pow(partner_dist[r], std::min(w_cur, w_r))) {
        cur = p.unite(cur, r);
        weight_heap.emplace(p.root_weight(cur), cur);
        merged = true;
        if (stop_cluster_size > 0 && p.cluster_size(cur) >= stop_cluster_size) return;
      }
    }
    if (merged) push(cur);
  }
}

Partition compute_cmp_partition(const WeightedGraph& g, const CmpConfig& cfg,
                                const std::vector<char>* domain,
                                bool induced_distances) {
  Partition p(g.weights);
  run_merging(g, p, cfg, domain, nullptr, induced_distances);
  return p;
}

CmpResult compute_cmp(const WeightedGraph& g, const CmpConfig& cfg) {
  Partition p = compute_cmp_partition(g, cfg);
  auto edges = oriented_edges(g, p, cfg);
  auto index = p.roots();
  return CmpResult{std::move(p), std::move(edges), std::move(index)};
}

Partition compute_cmp_randomized(const WeightedGraph& g, const CmpConfig& cfg, Rng& rng) {
  const int n = g.n;
  if (n > 1024) {
    throw std::invalid_argument("compute_cmp_randomized: all-pairs schedule needs n <= 1024");
  }
  Thresholds th(cfg, g.integer_weights());
  // All-pairs distances, one BFS per vertex.
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, kUnreachable));
  BfsScratch bfs(n);
  for (Vertex s = 0; s < n; ++s) {
    bfs.run(g, {s}, -1, [&](Vertex v, int d) { dist[s][v] = d; });
  }
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (dist[u][v] != kUnreachable) pairs.emplace_back(u, v);
    }
  }
  Partition p(g.weights);
  bool merged_any = true;
  while (merged_any) {
    merged_any = false;
    for (std::size_t i = pairs.size(); i > 1; --i) {
      std::swap(pairs[i - 1], pairs[rng.uniform_int(i)]);
    }
    for (auto [u, v] : pairs) {
      if (merge_step_with_distance(p, u, v, dist[u][v], cfg, th)) merged_any = true;
    }
  }
  return p;
}

bool is_admissible(const WeightedGraph& g, const Partition& p, const CmpConfig& cfg,
                   const std::vector<char>* domain) {
  const int n = g.n;
  Thresholds th(cfg, g.integer_weights());
  BfsScratch bfs(n);
  std::vector<int> partner_dist(n, 0);
  std::vector<unsigned> partner_epoch(n, 0);
  unsigned epoch = 0;
  std::vector<Vertex> sources;
  for (Vertex c = 0; c < n; ++c) {
    if (domain && !(*domain)[c]) continue;
    if (p.find(c) != c) continue;
    long long radius = th.floor_pow(p.root_weight(c));
    if (radius < 1) continue;
    sources.clear();
    p.for_each_member(c, [&](Vertex v) { sources.push_back(v); });
    ++epoch;
    bool ok = true;
    bfs.run(g, sources, radius, [&](Vertex v, int d) {
      if (domain && !(*domain)[v]) return;
      Vertex r = p.find(v);
      if (r == c) return;
      if (partner_epoch[r] != epoch) {
        partner_epoch[r] = epoch;
        partner_dist[r] = d;
        double wmin = std::min(p.root_weight(c), p.root_weight(r));
        if (th.le_pow(d, wmin)) ok = false;
      }
    });
    if (!ok) return false;
  }
  return true;
}

double diameter_bound_f(double r, const CmpConfig& cfg) {
  if (!(r >= 0.0)) throw std::invalid_argument("diameter_bound_f: r must be >= 0");
  if (cfg.alpha == 1.0) {
    if (r <= 0.0) return 0.0;
    return std::max(r * std::log2(r) / 2.0, 0.0);
  }
  return std::pow(r, cfg.alpha) / (std::pow(2.0, cfg.alpha) - 2.0);
}

std::vector<std::pair<Vertex, Vertex>> oriented_edges(const WeightedGraph& g,
                                                      const Partition& p,
                                                      const CmpConfig& cfg,
                                                      const std::vector<char>* domain) {
  const int n = g.n;
  Thresholds th(cfg, g.integer_weights());
  BfsScratch bfs(n);
  std::vector<unsigned> partner_epoch(n, 0);
  unsigned epoch = 0;
  std::vector<Vertex> sources;
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex c = 0; c < n; ++c) {
    if (domain && !(*domain)[c]) continue;
    if (p.find(c) != c) continue;
    long long radius = th.floor_pow(p.root_weight(c));
    if (radius < 1) continue;
    sources.clear();
    p.for_each_member(c, [&](Vertex v) { sources.push_back(v); });
    ++epoch;
    bfs.run(g, sources, radius, [&](Vertex v, int) {
      if (domain && !(*domain)[v]) return;
      Vertex r = p.find(v);
      if (r == c) return;
      if (partner_epoch[r] != epoch) {
        partner_epoch[r] = epoch;
        edges.emplace_back(c, r);  // any hit within radius means d <= r(C)^alpha
      }
    });
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

bool is_stable(const WeightedGraph& g, const VertexSet& h, const CmpConfig& cfg,
               StableBallMode mode) {
  if (h.empty()) return true;  // vacuous
  const int n = g.n;
  std::vector<char> in_h(n, 0);
  for (Vertex v : h) {
    g.check_vertex(v);
    in_h[v] = 1;
  }
  Partition p =
      compute_cmp_partition(g, cfg, &in_h, mode == StableBallMode::induced);
  Thresholds th(cfg, g.integer_weights());
  BfsScratch bfs(n);
  std::vector<Vertex> sources;
  for (Vertex v : h) {
    if (p.find(v) != v) continue;
    long long radius = th.floor_pow(p.root_weight(v));
    if (radius < 1) continue;
    sources.clear();
    p.for_each_member(v, [&](Vertex m) { sources.push_back(m); });
    bool contained = true;
    if (mode == StableBallMode::ambient) {
      bfs.run(g, sources, radius, [&](Vertex z, int) {
        if (!in_h[z]) contained = false;
      });
    } else {
      // Induced-distance variant: paths stay inside H except possibly the
      // final step, i.e. outside vertices are absorbing.
      bfs.run(
          g, sources, radius,
          [&](Vertex z, int d) {
            if (d >= radius) return;
            for (Vertex y : g.adj[z]) {
              if (!in_h[y]) contained = false;
            }
          },
          &in_h);
    }
    if (!contained) return false;
  }
  return true;
}

VertexSet stabiliser_iterative(const WeightedGraph& g, const Partition& global,
                               const VertexSet& w, const CmpConfig& cfg) {
  const int n = g.n;
  Thresholds th(cfg, g.integer_weights());
  std::vector<char> in_s(n, 0);
  std::vector<Vertex> worklist;
  for (Vertex v : w) {
    g.check_vertex(v);
    if (!in_s[v]) {
      in_s[v] = 1;
      worklist.push_back(v);
    }
  }
  BfsScratch bfs(n);
  while (!worklist.empty()) {
    Vertex x = worklist.back();
    worklist.pop_back();
    long long radius = th.floor_pow(global.weight_of(x));
    if (radius < 1) continue;
    bfs.run(g, {x}, radius, [&](Vertex z, int) {
      if (!in_s[z]) {
        in_s[z] = 1;
        worklist.push_back(z);
      }
    });
  }
  VertexSet out;
  for (Vertex v = 0; v < n; ++v) {
    if (in_s[v]) out.push_back(v);
  }
  return out;
}

ExploreResult explore_stabiliser(const WeightedGraph& g, Vertex x0, const CmpConfig& cfg,
                                 std::size_t budget,
                                 const std::function<double(Vertex)>* weight_override) {
  g.check_vertex(x0);
  const int n = g.n;
  Thresholds th(cfg, g.integer_weights());
  auto weight_at = [&](Vertex v) -> double {
    return weight_override ? (*weight_override)(v) : g.weights[v];
  };

  ExploreResult res{false, {}, Partition(n), {}};
  Partition& p = res.local_partition;
  std::vector<char> in_h(n, 0);
  std::vector<Vertex> h;

  auto admit = [&](Vertex v) {
    in_h[v] = 1;
    h.push_back(v);
    p.set_vertex_weight(v, weight_at(v));
    res.touched.push_back(v);
  };
  admit(x0);

  BfsScratch bfs(n);
  std::vector<Vertex> sources, fresh;
  for (;;) {
    // Expansion: union of B(C, floor(r(C)^alpha)) over clusters of H.
    fresh.clear();
    for (Vertex v : h) {
      if (p.find(v) != v) continue;
      long long radius = th.floor_pow(p.root_weight(v));
      if (radius < 1) continue;
      sources.clear();
      p.for_each_member(v, [&](Vertex m) { sources.push_back(m); });
      bfs.run(g, sources, radius, [&](Vertex z, int) {
        if (!in_h[z]) {
          in_h[z] = 2;  // marked, weight not yet read
          fresh.push_back(z);
        }
      });
    }
    if (fresh.empty()) break;
    if (h.size() + fresh.size() > budget) {
      for (Vertex z : fresh) in_h[z] = 0;
      res.budget_exceeded = true;
      std::sort(res.touched.begin(), res.touched.end());
      return res;
    }
    for (Vertex z : fresh) admit(z);
    run_merging(g, p, cfg, &in_h);
  }

  res.stabiliser = h;
  std::sort(res.stabiliser.begin(), res.stabiliser.end());
  std::sort(res.touched.begin(), res.touched.end());
  return res;
}

VertexSet eta_stabiliser(const WeightedGraph& g, const Partition& p, Vertex cluster_root,
                         const EtaConfig& eta, const CmpConfig& cfg) {
  g.check_vertex(cluster_root);
  Vertex c0 = p.find(cluster_root);
  const int n = g.n;
  Thresholds th(cfg, g.integer_weights());
  std::vector<char> seen_root(n, 0);
  std::vector<Vertex> worklist{c0};
  seen_root[c0] = 1;
  BfsScratch bfs(n);
  std::vector<char> in_s(n, 0);
  std::vector<Vertex> sources;
  while (!worklist.empty()) {
    Vertex c = worklist.back();
    worklist.pop_back();
    p.for_each_member(c, [&](Vertex v) { in_s[v] = 1; });
    long long radius = eta.eta_num > 0
                           ? th.floor_scaled_pow(p.root_weight(c), eta.eta_num, eta.eta_den)
                           : static_cast<long long>(
                                 std::floor(eta.eta * std::pow(p.root_weight(c), cfg.alpha)));
    if (radius < 1) continue;
    sources.clear();
    p.for_each_member(c, [&](Vertex v) { sources.push_back(v); });
    bfs.run(g, sources, radius, [&](Vertex v, int) {
      Vertex r = p.find(v);
      if (r != c && !seen_root[r]) {
        seen_root[r] = 1;
        worklist.push_back(r);
      }
    });
  }
  VertexSet out;
  for (Vertex v = 0; v < n; ++v) {
    if (in_s[v]) out.push_back(v);
  }
  return out;
}

double eta_gamma(double alpha, double eta) {
  if (!(alpha > 1.0)) {
    throw std::invalid_argument("eta_gamma: undefined at alpha = 1 (denominator 2^alpha - 2)");
  }
  double inv = 1.0 / (std::pow(2.0, alpha) - 2.0);
  return inv + eta / (1.0 - eta) * (1.0 + inv);
}

std::vector<EtaBoundViolation> check_eta_distance_bounds(const WeightedGraph& g,
                                                         const Partition& p,
                                                         const EtaConfig& eta,
                                                         const CmpConfig& cfg) {
  if (!(cfg.alpha > 1.0)) {
    throw std::invalid_argument("check_eta_distance_bounds requires alpha > 1");
  }
  const int n = g.n;
  const double gamma = eta_gamma(cfg.alpha, eta.eta);
  Thresholds th(cfg, g.integer_weights());
  std::vector<EtaBoundViolation> out;
  BfsScratch bfs(n);
  std::vector<int> dist(n);
  for (Vertex c = 0; c < n; ++c) {
    if (p.find(c) != c) continue;
    double w = p.root_weight(c);
    if (!(w > 0.0)) continue;
    VertexSet s = eta_stabiliser(g, p, c, eta, cfg);
    std::vector<char> in_s(n, 0);
    for (Vertex v : s) in_s[v] = 1;
    VertexSet boundary;
    for (Vertex v : s) {
      for (Vertex y : g.adj[v]) {
        if (!in_s[y]) boundary.push_back(y);
      }
    }
    std::sort(boundary.begin(), boundary.end());
    boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
    if (boundary.empty()) continue;
    const double upper_base = 1.0 + gamma * std::pow(w, cfg.alpha);
    p.for_each_member(c, [&](Vertex x) {
      std::fill(dist.begin(), dist.end(), kUnreachable);
      bfs.run(g, {x}, -1, [&](Vertex v, int d) { dist[v] = d; });
      for (Vertex y : boundary) {
        int d = dist[y];
        double lower = eta.eta * std::pow(w, cfg.alpha);
        bool lower_ok = eta.eta_num > 0 ? th.scaled_pow_le(w, eta.eta_num, eta.eta_den, d)
                                        : lower <= static_cast<double>(d) + 1e-9;
        bool upper_ok = d != kUnreachable &&
                        static_cast<double>(d) <= upper_base * (1.0 + 1e-12) + 1e-9;
        if (!lower_ok || !upper_ok) {
          out.push_back({x, y, d, lower, upper_base});
        }
      }
    });
  }
  return out;
}

namespace {

// Shared context for chain-cost checking inside one eta-stabiliser.
struct ChainContext {
  const WeightedGraph& g;
  const Partition& p;
  const EtaConfig& eta;
  const CmpConfig& cfg;
  double beta;
  Vertex c0;                         // cluster under scrutiny
  std::vector<char> in_c, in_s, in_u;  // C, S = S^eta_C, U = S \ C
  std::vector<VertexSet> succ_cache;   // successor lists keyed by cluster root
  std::vector<char> succ_ready;
  ChainReport report;
  double strong_rhs = 0.0;
  std::vector<std::vector<int>> dist_from;  // per chain start
  std::vector<int> dist_index;              // start vertex -> row, -1 if absent

  ChainContext(const WeightedGraph& graph, const Partition& part, const EtaConfig& e,
               const CmpConfig& c, double b, Vertex root)
      : g(graph), p(part), eta(e), cfg(c), beta(b), c0(part.find(root)),
        in_c(graph.n, 0), in_s(graph.n, 0), in_u(graph.n, 0),
        succ_cache(graph.n), succ_ready(graph.n, 0), dist_index(graph.n, -1) {}

  const VertexSet& successors(Vertex x) {
    Vertex r = p.find(x);
    if (!succ_ready[r]) {
      VertexSet s = eta_stabiliser(g, p, r, eta, cfg);
      std::vector<char> flag(g.n, 0);
      for (Vertex v : s) flag[v] = 1;
      VertexSet b;
      for (Vertex v : s) {
        for (Vertex y : g.adj[v]) {
          if (!flag[y]) b.push_back(y);
        }
      }
      std::sort(b.begin(), b.end());
      b.erase(std::unique(b.begin(), b.end()), b.end());
      succ_cache[r] = std::move(b);
      succ_ready[r] = 1;
    }
    return succ_cache[r];
  }

  const std::vector<int>& dist_row(Vertex x0) {
    if (dist_index[x0] < 0) {
      dist_index[x0] = static_cast<int>(dist_from.size());
      dist_from.emplace_back(g.n, kUnreachable);
      auto& row = dist_from.back();
      BfsScratch bfs(g.n);
      bfs.run(g, {x0}, -1, [&](Vertex v, int d) { row[v] = d; });
    }
    return dist_from[dist_index[x0]];
  }

  double step_cost(Vertex x) const {
    return std::pow(p.weight_of(x) + eta.r_tilde_offset, beta);
  }

  // Evaluate the chain (path[0] .. path[k-1], tail), tail = path.back().
  void evaluate(const std::vector<Vertex>& path, double cost_prefix) {
    const Vertex x0 = path.front();
    const Vertex xn = path.back();
    ++report.chains_checked;
    int d = dist_row(x0)[xn];
    double rhs = d <= 0 ? 0.0 : std::pow(static_cast<double>(d), beta / cfg.alpha);
    double margin = cost_prefix - rhs;
    if (report.chains_checked == 1 || margin < report.weak_min_margin) {
      report.weak_min_margin = margin;
    }
    if (margin < -1e-9) ++report.weak_violations;
    if (report.strong_applicable) {
      // endpoints: x0 adjacent to C, xn just outside S.
      bool x0_ok = false;
      for (Vertex y : g.adj[x0]) {
        if (in_c[y]) x0_ok = true;
      }
      bool xn_ok = !in_s[xn];
      if (xn_ok && xn != x0) {
        bool adj_s = false;
        for (Vertex y : g.adj[xn]) {
          if (in_s[y]) adj_s = true;
        }
        xn_ok = adj_s;
      } else {
        xn_ok = false;
      }
      if (x0_ok && xn_ok) {
        double smargin = cost_prefix - strong_rhs;
        if (report.strong_chains == 0 || smargin < report.strong_min_margin) {
          report.strong_min_margin = smargin;
        }
        ++report.strong_chains;
        if (smargin < -1e-9) ++report.strong_violations;
      }
    }
  }
};

}  // namespace

ChainReport check_chain_costs(const WeightedGraph& g, const Partition& p,
                              const EtaConfig& eta, const CmpConfig& cfg, double beta,
                              Vertex cluster_root, std::size_t chain_budget, Rng& rng,
                              std::size_t exhaustive_limit) {
  if (!(beta >= 1.0) || !(beta <= cfg.alpha)) {
    throw std::invalid_argument("check_chain_costs: beta must lie in [1, alpha]");
  }
  ChainContext ctx(g, p, eta, cfg, beta, cluster_root);
  VertexSet s = eta_stabiliser(g, p, ctx.c0, eta, cfg);
  for (Vertex v : s) ctx.in_s[v] = 1;
  p.for_each_member(ctx.c0, [&](Vertex v) { ctx.in_c[v] = 1; });
  VertexSet u;
  for (Vertex v : s) {
    if (!ctx.in_c[v]) {
      ctx.in_u[v] = 1;
      u.push_back(v);
    }
  }
  const double rc = p.root_weight(ctx.c0);
  ctx.report.strong_applicable = std::fabs(cfg.alpha - 2.5) < 1e-12 &&
                                 std::fabs(eta.eta - 0.1) < 1e-12 && rc >= 100.0 &&
                                 beta <= 1.01;
  ctx.strong_rhs = beta * std::pow(rc + eta.r_tilde_offset, beta);

  if (u.empty()) return ctx.report;

  // Exhaustive pass over simple chains; bail out to sampling if too many.
  bool overflow = false;
  std::vector<Vertex> path;
  std::vector<char> on_path(g.n, 0);
  std::function<void(Vertex, double)> dfs = [&](Vertex x, double cost) {
    if (overflow) return;
    double c = cost + ctx.step_cost(x);
    for (Vertex y : ctx.successors(x)) {
      if (on_path[y]) continue;
      path.push_back(y);
      ctx.evaluate(path, c);
      if (ctx.report.chains_checked > exhaustive_limit) {
        overflow = true;
        path.pop_back();
        return;
      }
      if (ctx.in_u[y]) {
        on_path[y] = 1;
        dfs(y, c);
        on_path[y] = 0;
      }
      path.pop_back();
      if (overflow) return;
    }
  };
  for (Vertex x0 : u) {
    path.assign(1, x0);
    on_path[x0] = 1;
    dfs(x0, 0.0);
    on_path[x0] = 0;
    if (overflow) break;
  }
  if (!overflow) return ctx.report;

  // Sampling mode: uniform random chain extension with restart.
  ctx.report = ChainReport{};
  ctx.report.exhaustive = false;
  ctx.report.strong_applicable = std::fabs(cfg.alpha - 2.5) < 1e-12 &&
                                 std::fabs(eta.eta - 0.1) < 1e-12 && rc >= 100.0 &&
                                 beta <= 1.01;
  std::fill(on_path.begin(), on_path.end(), 0);
  while (ctx.report.chains_checked < chain_budget) {
    Vertex x0 = u[rng.uniform_int(u.size())];
    path.assign(1, x0);
    on_path[x0] = 1;
    double cost = 0.0;
    Vertex x = x0;
    for (;;) {
      const VertexSet& succ = ctx.successors(x);
      if (succ.empty()) break;
      Vertex y = succ[rng.uniform_int(succ.size())];
      if (on_path[y]) break;
      cost += ctx.step_cost(x);
      path.push_back(y);
      ctx.evaluate(path, cost);
      if (!ctx.in_u[y] || ctx.report.chains_checked >= chain_budget) break;
      on_path[y] = 1;
      x = y;
    }
    for (Vertex v : path) on_path[v] = 0;
  }
  return ctx.report;
}

}  // namespace cmperc
