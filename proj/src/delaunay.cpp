#include "cmperc/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace cmperc {

namespace {

using Rational = boost::multiprecision::cpp_rational;

struct P2 {
  double x, y;
};

// Sign of the orientation determinant, exact fallback past the float filter.
int orient2d(const P2& a, const P2& b, const P2& c) {
  double detl = (a.x - c.x) * (b.y - c.y);
  double detr = (a.y - c.y) * (b.x - c.x);
  double det = detl - detr;
  double mag = std::fabs(detl) + std::fabs(detr);
  if (std::fabs(det) > 1.0e-12 * mag + 1.0e-300) return det > 0 ? 1 : -1;
  Rational ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
  Rational r = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx);
  return r.sign();
}

// Sign of the in-circle determinant for counterclockwise (a, b, c):
// positive iff d lies strictly inside the circumcircle.
int in_circle(const P2& a, const P2& b, const P2& c, const P2& d) {
  double adx = a.x - d.x, ady = a.y - d.y;
  double bdx = b.x - d.x, bdy = b.y - d.y;
  double cdx = c.x - d.x, cdy = c.y - d.y;
  double ad = adx * adx + ady * ady;
  double bd = bdx * bdx + bdy * bdy;
  double cd = cdx * cdx + cdy * cdy;
  double det = adx * (bdy * cd - cdy * bd) - ady * (bdx * cd - cdx * bd) +
               ad * (bdx * cdy - cdx * bdy);
  double mag = std::fabs(adx) * (std::fabs(bdy) * cd + std::fabs(cdy) * bd) +
               std::fabs(ady) * (std::fabs(bdx) * cd + std::fabs(cdx) * bd) +
               ad * (std::fabs(bdx) * std::fabs(cdy) + std::fabs(cdx) * std::fabs(bdy));
  if (std::fabs(det) > 1.0e-11 * mag + 1.0e-300) return det > 0 ? 1 : -1;
  Rational Adx = Rational(a.x) - Rational(d.x), Ady = Rational(a.y) - Rational(d.y);
  Rational Bdx = Rational(b.x) - Rational(d.x), Bdy = Rational(b.y) - Rational(d.y);
  Rational Cdx = Rational(c.x) - Rational(d.x), Cdy = Rational(c.y) - Rational(d.y);
  Rational Ad = Adx * Adx + Ady * Ady;
  Rational Bd = Bdx * Bdx + Bdy * Bdy;
  Rational Cd = Cdx * Cdx + Cdy * Cdy;
  Rational r = Adx * (Bdy * Cd - Cdy * Bd) - Ady * (Bdx * Cd - Cdx * Bd) +
               Ad * (Bdx * Cdy - Cdx * Bdy);
  return r.sign();
}

struct Triangle {
  int a, b, c;   // counterclockwise
  bool alive = true;
};

struct Builder {
  std::vector<P2> pts;  // input points then 3 super-triangle vertices
  int n = 0;
  std::vector<Triangle> tris;

  int strict_in_circle(const Triangle& t, int p) const {
    return in_circle(pts[t.a], pts[t.b], pts[t.c], pts[p]);
  }

  void add_ccw(int a, int b, int c) {
    int o = orient2d(pts[a], pts[b], pts[c]);
    if (o == 0) return;  // degenerate sliver, skip
    if (o < 0) std::swap(b, c);
    tris.push_back({a, b, c, true});
  }

  void insert(int p) {
    // Bad triangles: circumcircle strictly contains p.
    std::map<std::pair<int, int>, int> edge_count;
    std::vector<std::pair<int, int>> boundary;
    for (auto& t : tris) {
      if (!t.alive) continue;
      if (strict_in_circle(t, p) > 0) {
        t.alive = false;
        std::pair<int, int> es[3] = {{t.a, t.b}, {t.b, t.c}, {t.c, t.a}};
        for (auto e : es) {
          auto key = std::minmax(e.first, e.second);
          ++edge_count[{key.first, key.second}];
        }
      }
    }
    bool any_bad = false;
    for (std::size_t i = 0; i < tris.size(); ++i) {
      if (tris[i].alive) continue;
      any_bad = true;
      const Triangle& t = tris[i];
      std::pair<int, int> es[3] = {{t.a, t.b}, {t.b, t.c}, {t.c, t.a}};
      for (auto e : es) {
        auto key = std::minmax(e.first, e.second);
        if (edge_count[{key.first, key.second}] == 1) boundary.push_back(e);
      }
    }
    if (!any_bad) {
      // p is on or outside every circumcircle: with a far super-triangle this
      // only happens for exact duplicates, which are rejected upstream.
      throw std::runtime_error("delaunay_2d: point insertion found no cavity");
    }
    tris.erase(std::remove_if(tris.begin(), tris.end(),
                              [](const Triangle& t) { return !t.alive; }),
               tris.end());
    for (auto [u, v] : boundary) add_ccw(u, v, p);
  }
};

}  // namespace

static std::vector<std::array<int, 3>> triangulate(const PointCloud& pc) {
  if (pc.dim != 2) throw std::invalid_argument("delaunay_2d: 2-D point cloud required");
  const int n = static_cast<int>(pc.points.size());
  if (n < 3) throw std::invalid_argument("delaunay_2d: need at least 3 points");

  Builder bld;
  bld.n = n;
  bld.pts.reserve(n + 3);
  for (const auto& p : pc.points) bld.pts.push_back({p[0], p[1]});

  {
    std::vector<std::pair<double, double>> sorted;
    sorted.reserve(n);
    for (const auto& p : bld.pts) sorted.emplace_back(p.x, p.y);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("delaunay_2d: duplicate points");
    }
  }

  double xmin = bld.pts[0].x, xmax = xmin, ymin = bld.pts[0].y, ymax = ymin;
  for (const auto& p : bld.pts) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  double span = std::max({xmax - xmin, ymax - ymin, 1.0});
  double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
  double m = 1.0e6 * span;
  bld.pts.push_back({cx - 3 * m, cy - m});
  bld.pts.push_back({cx + 3 * m, cy - m});
  bld.pts.push_back({cx, cy + 3 * m});
  bld.tris.push_back({n, n + 1, n + 2, true});
  if (orient2d(bld.pts[n], bld.pts[n + 1], bld.pts[n + 2]) < 0) {
    std::swap(bld.tris[0].b, bld.tris[0].c);
  }

  for (int p = 0; p < n; ++p) bld.insert(p);

  std::vector<std::array<int, 3>> out;
  for (const auto& t : bld.tris) {
    if (t.a >= n || t.b >= n || t.c >= n) continue;
    out.push_back({t.a, t.b, t.c});
  }
  if (out.empty()) throw std::invalid_argument("delaunay_2d: all points collinear");

  // Cocircular tie-break: flip interior edges of exactly-cocircular quads so
  // the diagonal is the lexicographically smaller sorted index pair.
  auto tri_key = [](int a, int b, int c) {
    std::array<int, 3> k{a, b, c};
    std::sort(k.begin(), k.end());
    return k;
  };
  for (int pass = 0; pass < 64; ++pass) {
    // edge -> (triangle index, opposite vertex)
    std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> inc;
    for (std::size_t i = 0; i < out.size(); ++i) {
      auto [a, b, c] = out[i];
      int vs[3] = {a, b, c};
      for (int e = 0; e < 3; ++e) {
        int u = vs[e], v = vs[(e + 1) % 3], w = vs[(e + 2) % 3];
        auto key = std::minmax(u, v);
        inc[{key.first, key.second}].push_back({static_cast<int>(i), w});
      }
    }
    bool flipped = false;
    for (auto& [edge, ts] : inc) {
      if (ts.size() != 2) continue;
      auto [u, v] = edge;
      int w1 = ts[0].second, w2 = ts[1].second;
      // Quad u, v, w1, w2; current diagonal is (u, v), other is (w1, w2).
      P2 A = bld.pts[u], B = bld.pts[v], C = bld.pts[w1], D = bld.pts[w2];
      int o = orient2d(A, B, C);
      if (o == 0) continue;
      P2 a = A, b = B, c = C;
      if (o < 0) std::swap(b, c);
      if (in_circle(a, b, c, D) != 0) continue;  // not cocircular
      auto cur = std::minmax(u, v);
      auto alt = std::minmax(w1, w2);
      if (std::make_pair(alt.first, alt.second) >= std::make_pair(cur.first, cur.second)) {
        continue;
      }
      // Only flip convex quads (the alternative diagonal must cross (u,v)).
      if (orient2d(bld.pts[w1], bld.pts[w2], bld.pts[u]) == 0 ||
          orient2d(bld.pts[w1], bld.pts[w2], bld.pts[v]) == 0) {
        continue;
      }
      if (orient2d(bld.pts[w1], bld.pts[w2], bld.pts[u]) ==
          orient2d(bld.pts[w1], bld.pts[w2], bld.pts[v])) {
        continue;
      }
      auto k1 = tri_key(u, v, w1), k2 = tri_key(u, v, w2);
      for (auto& t : out) {
        auto k = tri_key(t[0], t[1], t[2]);
        if (k == k1) t = {u, w1, w2};
        if (k == k2) t = {v, w1, w2};
      }
      flipped = true;
      break;  // incidence map is stale after a flip
    }
    if (!flipped) break;
  }
  return out;
}

std::vector<std::array<int, 3>> delaunay_2d_triangles(const PointCloud& pc) {
  return triangulate(pc);
}

WeightedGraph delaunay_2d(const PointCloud& pc) {
  auto tris = triangulate(pc);
  const int n = static_cast<int>(pc.points.size());
  WeightedGraph g(n);
  g.coord_dim = 2;
  g.coords = pc.points;
  std::vector<std::pair<int, int>> edges;
  for (auto [a, b, c] : tris) {
    edges.push_back(std::minmax(a, b));
    edges.push_back(std::minmax(b, c));
    edges.push_back(std::minmax(a, c));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

}  // namespace cmperc
