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

#include <algorithm>
#include <cmath>

#include "softlimb/calibration.hpp"
#include "softlimb/numeric/levenberg_marquardt.hpp"

namespace softlimb {

namespace {

struct PeakInit {
  double A, zeta, omega_d, b;
  int extrema = 0;
};

PeakInit initial_guess(const Eigen::VectorXd& t, const Eigen::VectorXd& phi) {
  PeakInit g{};
  const Eigen::Index m = t.size();
  g.b = phi.tail(std::max<Eigen::Index>(m / 10, 1)).mean();
  Eigen::VectorXd y = phi.array() - g.b;
  g.A = y.cwiseAbs().maxCoeff();

  // alternating-sign local extrema of the detrended series
  std::vector<double> ext_t, ext_a;
  for (Eigen::Index i = 1; i + 1 < m; ++i) {
    const double a = std::abs(y(i));
    if (a >= std::abs(y(i - 1)) && a >= std::abs(y(i + 1)) && a > 0.05 * g.A) {
      if (ext_a.empty() || (y(i) > 0) != (ext_a.back() > 0)) {
        ext_t.push_back(t(i));
        ext_a.push_back(y(i));
      }
    }
  }
  g.extrema = static_cast<int>(ext_t.size());
  g.zeta = 0.05;
  g.omega_d = 6.0;
  if (g.extrema >= 3) {
    double dsum = 0.0;
    for (size_t i = 1; i < ext_t.size(); ++i) dsum += ext_t[i] - ext_t[i - 1];
    const double period = 2.0 * dsum / static_cast<double>(ext_t.size() - 1);
    g.omega_d = 2.0 * M_PI / period;
    // log decrement across same-sign peaks
    double lsum = 0.0;
    int cnt = 0;
    for (size_t i = 0; i + 2 < ext_a.size(); ++i) {
      const double r = std::abs(ext_a[i] / ext_a[i + 2]);
      if (std::isfinite(r) && r > 1.0) {
        lsum += std::log(r);
        ++cnt;
      }
    }
    if (cnt > 0) {
      const double delta = lsum / cnt;
      g.zeta = std::clamp(delta / std::sqrt(4.0 * M_PI * M_PI + delta * delta), 1e-4, 0.95);
    }
  }
  return g;
}

}  // namespace

DampedSinusoidFit fit_damped_sinusoid(const Eigen::VectorXd& t_in, const Eigen::VectorXd& phi) {
  if (t_in.size() != phi.size() || t_in.size() < 8)
    throw InvalidArgument("fit_damped_sinusoid: bad series");
  // fit in series-relative time so the envelope parameters are anchored
  // at the first sample regardless of the log's time origin
  const Eigen::VectorXd t = t_in.array() - t_in(0);

  // oscillation gate: sign changes about the tail trend
  const double trend = phi.tail(std::max<Eigen::Index>(phi.size() / 10, 1)).mean();
  int sign_changes = 0;
  for (Eigen::Index i = 1; i < phi.size(); ++i)
    if ((phi(i) > trend) != (phi(i - 1) > trend)) ++sign_changes;
  if (sign_changes < 2)
    throw UnfittableSeries("fit_damped_sinusoid: no detectable oscillation about the trend");

  const PeakInit init = initial_guess(t, phi);

  const auto model = [&t](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
    const double A = p(0), zeta = p(1), wn = p(2), ph = p(3), b = p(4);
    const double wd = wn * std::sqrt(1.0 - zeta * zeta);
    for (Eigen::Index i = 0; i < t.size(); ++i)
      r(i) = A * std::exp(-zeta * wn * t(i)) * std::sin(wd * t(i) + ph) + b;
  };
  Eigen::VectorXd scratch(t.size());
  const numeric::LmResidualFn residual = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
    model(p, r);
    r -= phi;
  };
  const numeric::LmJacobianFn jacobian = [&t](const Eigen::VectorXd& p, Eigen::MatrixXd& J) {
    const double A = p(0), zeta = p(1), wn = p(2), ph = p(3);
    const double root = std::sqrt(1.0 - zeta * zeta);
    const double wd = wn * root;
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      const double ti = t(i);
      const double E = std::exp(-zeta * wn * ti);
      const double arg = wd * ti + ph;
      const double S = std::sin(arg), C = std::cos(arg);
      J(i, 0) = E * S;
      J(i, 1) = A * E * (-wn * ti * S + C * ti * wn * (-zeta / root));
      J(i, 2) = A * E * (-zeta * ti * S + C * ti * root);
      J(i, 3) = A * E * C;
      J(i, 4) = 1.0;
    }
  };
  const numeric::LmProjectFn project = [](Eigen::VectorXd& p) {
    p(1) = std::clamp(p(1), 1e-6, 0.999);
    p(2) = std::max(p(2), 1e-9);
  };

  Eigen::VectorXd p0(5);
  const double wn0 = init.omega_d / std::sqrt(1.0 - init.zeta * init.zeta);
  p0 << init.A, init.zeta, wn0, M_PI / 2.0, init.b;
  numeric::LmOptions lm_opts;
  lm_opts.max_iterations = 400;
  const numeric::LmResult lm =
      numeric::levenberg_marquardt(residual, t.size(), p0, lm_opts, jacobian, project);

  DampedSinusoidFit out;
  out.A = lm.params(0);
  out.zeta = lm.params(1);
  out.omega_n = lm.params(2);
  out.varphi = lm.params(3);
  out.b = lm.params(4);
  // a negative amplitude is the same curve with shifted phase; normalize
  if (out.A < 0.0) {
    out.A = -out.A;
    out.varphi += M_PI;
  }
  out.varphi = std::remainder(out.varphi, 2.0 * M_PI);
  out.sigma_star = out.zeta * out.omega_n;
  out.rms_residual = std::sqrt(2.0 * lm.cost / static_cast<double>(t.size()));
  out.iterations = lm.iterations;
  out.converged = lm.converged;
  out.cost_history = lm.cost_history;
  const double duration = t(t.size() - 1) - t(0);
  const double wd = out.omega_n * std::sqrt(1.0 - out.zeta * out.zeta);
  out.short_series = duration * wd / (2.0 * M_PI) < 4.0;
  return out;
}

}  // namespace softlimb
