// Copyright 2026 The Softlimb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "softlimb/numeric/smoothing_spline.hpp"

#include <cmath>
#include <random>

#include "softlimb/errors.hpp"

namespace softlimb::numeric {

namespace {

// Symmetric pentadiagonal SPD system stored by diagonals; in-place
// Cholesky (bandwidth 2) and solve.
struct Penta {
  Eigen::VectorXd d0, d1, d2;  // main, first, second subdiagonal

  void factor() {
    const Eigen::Index n = d0.size();
    for (Eigen::Index i = 0; i < n; ++i) {
      double v = d0(i);
      if (i >= 1) v -= d1(i - 1) * d1(i - 1);
      if (i >= 2) v -= d2(i - 2) * d2(i - 2);
      d0(i) = std::sqrt(v);
      if (i + 1 < n) {
        double w = d1(i);
        if (i >= 1) w -= d1(i - 1) * d2(i - 1);
        d1(i) = w / d0(i);
      }
      if (i + 2 < n) d2(i) /= d0(i);
    }
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    const Eigen::Index n = d0.size();
    Eigen::VectorXd x = b;
    for (Eigen::Index i = 0; i < n; ++i) {
      double v = x(i);
      if (i >= 1) v -= d1(i - 1) * x(i - 1);
      if (i >= 2) v -= d2(i - 2) * x(i - 2);
      x(i) = v / d0(i);
    }
    for (Eigen::Index i = n; i-- > 0;) {
      double v = x(i);
      if (i + 1 < n) v -= d1(i) * x(i + 1);
      if (i + 2 < n) v -= d2(i) * x(i + 2);
      x(i) = v / d0(i);
    }
    return x;
  }
};

// Q^T y where Q is the n x (n-2) second-difference matrix (uniform h).
Eigen::VectorXd apply_qt(const Eigen::VectorXd& y, double h) {
  const Eigen::Index m = y.size() - 2;
  Eigen::VectorXd out(m);
  for (Eigen::Index i = 0; i < m; ++i) out(i) = (y(i) - 2.0 * y(i + 1) + y(i + 2)) / h;
  return out;
}

// Q gamma (length n) from interior gamma (length n-2).
Eigen::VectorXd apply_q(const Eigen::VectorXd& g, double h, Eigen::Index n) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    out(i) += g(i) / h;
    out(i + 1) -= 2.0 * g(i) / h;
    out(i + 2) += g(i) / h;
  }
  return out;
}

// B = R + alpha Q^T Q as diagonals; R tridiagonal (2h/3, h/6),
// Q^T Q pentadiagonal with stencil (1, -4, 6, -4, 1)/h^2 in the interior.
Penta build_system(Eigen::Index m, double h, double alpha) {
  Penta p;
  p.d0.resize(m);
  p.d1.resize(std::max<Eigen::Index>(m - 1, 0));
  p.d2.resize(std::max<Eigen::Index>(m - 2, 0));
  const double q2 = alpha / (h * h);
  for (Eigen::Index i = 0; i < m; ++i) p.d0(i) = 2.0 * h / 3.0 + q2 * 6.0;
  for (Eigen::Index i = 0; i + 1 < m; ++i) p.d1(i) = h / 6.0 + q2 * (-4.0);
  for (Eigen::Index i = 0; i + 2 < m; ++i) p.d2(i) = q2 * 1.0;
  return p;
}

double gcv_score(const Eigen::VectorXd& y, double h, double alpha, std::mt19937_64& rng) {
  const Eigen::Index n = y.size();
  const Eigen::Index m = n - 2;
  Penta B = build_system(m, h, alpha);
  B.factor();
  const Eigen::VectorXd gamma = B.solve(apply_qt(y, h));
  const Eigen::VectorXd f = y - alpha * apply_q(gamma, h, n);
  const double rss = (y - f).squaredNorm();

  // tr(A) = n - alpha tr(B^{-1} Q^T Q), Hutchinson estimate
  std::uniform_int_distribution<int> coin(0, 1);
  const int probes = 8;
  double tr = 0.0;
  for (int pr = 0; pr < probes; ++pr) {
    Eigen::VectorXd z(m);
    for (Eigen::Index i = 0; i < m; ++i) z(i) = coin(rng) ? 1.0 : -1.0;
    // z' Q^T Q B^{-1} z
    const Eigen::VectorXd w = B.solve(z);
    tr += apply_qt(apply_q(w, h, n), h).dot(z);
  }
  tr /= probes;
  const double trace_a = static_cast<double>(n) - alpha * tr;
  const double denom = std::max(1e-9, static_cast<double>(n) - trace_a);
  return static_cast<double>(n) * rss / (denom * denom);
}

}  // namespace

SmoothingSpline SmoothingSpline::fit(const Eigen::VectorXd& y, double spacing, double alpha) {
  if (y.size() < 5) throw InvalidArgument("SmoothingSpline: need at least 5 samples");
  if (!(spacing > 0.0)) throw InvalidArgument("SmoothingSpline: spacing must be positive");

  SmoothingSpline s;
  s.h_ = spacing;
  const Eigen::Index n = y.size();

  if (alpha < 0.0) {
    // GCV over a log grid; the scale h^3 makes the grid dimensionless.
    std::mt19937_64 rng(0x5eed5eedULL);
    double best = std::numeric_limits<double>::infinity();
    double best_alpha = spacing * spacing * spacing;
    for (int e = -4; e <= 10; ++e) {
      const double a = spacing * spacing * spacing * std::pow(10.0, e);
      const double score = gcv_score(y, spacing, a, rng);
      if (score < best) {
        best = score;
        best_alpha = a;
      }
    }
    alpha = best_alpha;
  }
  s.alpha_ = alpha;

  Penta B = build_system(n - 2, spacing, alpha);
  B.factor();
  s.gamma_ = B.solve(apply_qt(y, spacing));
  s.f_ = y - alpha * apply_q(s.gamma_, spacing, n);
  return s;
}

Eigen::VectorXd SmoothingSpline::derivative() const {
  const Eigen::Index n = f_.size();
  // natural spline second derivatives at all knots
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  g.segment(1, n - 2) = gamma_;
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    d(i) = (f_(i + 1) - f_(i)) / h_ - h_ * (2.0 * g(i) + g(i + 1)) / 6.0;
  d(n - 1) = (f_(n - 1) - f_(n - 2)) / h_ + h_ * (2.0 * g(n - 1) + g(n - 2)) / 6.0;
  return d;
}

}  // namespace softlimb::numeric
