#pragma once

#include <cmath>
#include <vector>

#include "cmperc/contact.hpp"
#include "cmperc/graph.hpp"

namespace testutil {

// Dense matrix exponential (scaling and squaring + Taylor) for the exact
// continuous-time-chain oracle on <= 4 sites (<= 16 states).
using Mat = std::vector<std::vector<double>>;

inline Mat identity(int n) {
  Mat m(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) m[i][i] = 1.0;
  return m;
}

inline Mat mul(const Mat& a, const Mat& b) {
  int n = static_cast<int>(a.size());
  Mat c(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      double aik = a[i][k];
      if (aik == 0.0) continue;
      for (int j = 0; j < n; ++j) c[i][j] += aik * b[k][j];
    }
  }
  return c;
}

inline Mat matexp(Mat q, double t) {
  int n = static_cast<int>(q.size());
  double norm = 0.0;
  for (auto& row : q) {
    double s = 0.0;
    for (double v : row) s += std::fabs(v) * t;
    norm = std::max(norm, s);
  }
  int k = 0;
  while (norm > 0.5) {
    norm /= 2.0;
    ++k;
  }
  double scale = t / std::pow(2.0, k);
  Mat term = identity(n), sum = identity(n);
  Mat qs(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) qs[i][j] = q[i][j] * scale;
  }
  for (int m = 1; m <= 20; ++m) {
    term = mul(term, qs);
    for (auto& row : term) {
      for (double& v : row) v /= m;
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) sum[i][j] += term[i][j];
    }
  }
  for (int s = 0; s < k; ++s) sum = mul(sum, sum);
  return sum;
}

// Exact state distribution of the contact process on W at time t.
inline std::vector<double> exact_distribution(const cmperc::WeightedGraph& g,
                                              const cmperc::VertexSet& w,
                                              const cmperc::VertexSet& a, double lambda,
                                              double t) {
  using cmperc::Vertex;
  int k = static_cast<int>(w.size());
  int states = 1 << k;
  auto idx_of = [&](Vertex v) {
    for (int i = 0; i < k; ++i) {
      if (w[i] == v) return i;
    }
    return -1;
  };
  Mat q(states, std::vector<double>(states, 0.0));
  for (int s = 0; s < states; ++s) {
    for (int i = 0; i < k; ++i) {
      if (!(s & (1 << i))) continue;
      // recovery of w[i]
      q[s][s ^ (1 << i)] += 1.0;
      // infection arrows from w[i] to each neighbor inside W
      for (Vertex y : g.adj[w[i]]) {
        int j = idx_of(y);
        if (j < 0 || (s & (1 << j))) continue;
        q[s][s | (1 << j)] += lambda;
      }
    }
    double out = 0.0;
    for (int s2 = 0; s2 < states; ++s2) {
      if (s2 != s) out += q[s][s2];
    }
    q[s][s] = -out;
  }
  Mat p = matexp(q, t);
  int init = 0;
  for (Vertex v : a) init |= 1 << idx_of(v);
  return p[init];
}

}  // namespace testutil
