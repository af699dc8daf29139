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
#include "softlimb/io.hpp"
#include "softlimb/numeric/levenberg_marquardt.hpp"
#include "softlimb/numeric/smoothing_spline.hpp"

namespace softlimb {

namespace {

// Sliding-window linear-regression slope; window is (2*half+1) samples.
Eigen::VectorXd windowed_slope(const Eigen::VectorXd& y, double dt, int half) {
  const Eigen::Index m = y.size();
  Eigen::VectorXd out(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, i - half);
    const Eigen::Index hi = std::min<Eigen::Index>(m - 1, i + half);
    const Eigen::Index w = hi - lo + 1;
    double tm = 0.0, ym = 0.0;
    for (Eigen::Index j = lo; j <= hi; ++j) {
      tm += static_cast<double>(j) * dt;
      ym += y(j);
    }
    tm /= static_cast<double>(w);
    ym /= static_cast<double>(w);
    double num = 0.0, den = 0.0;
    for (Eigen::Index j = lo; j <= hi; ++j) {
      const double dtj = static_cast<double>(j) * dt - tm;
      num += dtj * (y(j) - ym);
      den += dtj * dtj;
    }
    out(i) = den > 0.0 ? num / den : 0.0;
  }
  return out;
}

void check_single_sided(const CalibrationDataset& ds, int side) {
  const Eigen::VectorXd& other = side == 0 ? ds.D_r : ds.D_l;
  if (other.size() == 0 || other.cwiseAbs().maxCoeff() != 0.0)
    throw InvalidArgument("expected a single-sided dataset (other duty identically zero)");
}

}  // namespace

ThermalFitResult fit_thermal_params(const CalibrationDataset& ds, int side, double T0,
                                    const ThermalFitOptions& opts) {
  ds.validate();
  if (side != 0 && side != 1) throw InvalidArgument("fit_thermal_params: side must be 0 or 1");
  check_single_sided(ds, side);
  const double dt = ds.dt();
  const Eigen::Index m = ds.rows();
  const Eigen::VectorXd& V = side == 0 ? ds.V_l : ds.V_r;
  const Eigen::VectorXd& D = side == 0 ? ds.D_l : ds.D_r;
  const Eigen::VectorXd phi = ds.phi_rad();
  const Eigen::VectorXd phi_eq = ds.phi_eq_rad();

  ThermalFitResult out;

  // equilibrium scaling point: smoothed |Vdot| below threshold, largest
  // setpoint magnitude among the passers
  const int half = std::max(1, static_cast<int>(std::round(0.5 * opts.vdot_window_s / dt)));
  const Eigen::VectorXd vdot_s = windowed_slope(V, dt, half);
  const double min_phi = opts.min_phi_deg * io::kRadPerDeg;
  Eigen::Index star = -1;
  double best_mag = 0.0;
  for (Eigen::Index i = half; i < m - half; ++i) {
    if (std::abs(vdot_s(i)) > opts.vdot_threshold) continue;
    if (std::abs(phi(i)) < min_phi) continue;
    if (std::abs(phi_eq(i)) > best_mag) {
      best_mag = std::abs(phi_eq(i));
      star = i;
    }
  }
  if (star < 0)
    throw DatasetInsufficient(
        "fit_thermal_params: no near-equilibrium point (min |Vdot| above threshold)");

  // average the point over the smoothing window for noise robustness
  double phi_star = 0.0, V_star = 0.0;
  for (Eigen::Index j = star - half; j <= star + half; ++j) {
    phi_star += phi(j);
    V_star += V(j);
  }
  phi_star /= static_cast<double>(2 * half + 1);
  V_star /= static_cast<double>(2 * half + 1);
  out.phi_eq_star = phi_star;
  out.V_eq_star = V_star;
  out.b = (V_star - T0) / phi_star;

  // stage 1: spline-smoothed series, regressed ODE coefficients
  const Eigen::VectorXd T_approx = out.b * phi.array() + T0;
  const numeric::SmoothingSpline spl_V = numeric::SmoothingSpline::fit(V, dt);
  const numeric::SmoothingSpline spl_T = numeric::SmoothingSpline::fit(T_approx, dt);
  const Eigen::VectorXd Vs = spl_V.values(), Vds = spl_V.derivative();
  const Eigen::VectorXd Ts = spl_T.values(), Tds = spl_T.derivative();

  const Eigen::Index trim = std::max<Eigen::Index>(2, m / 50);
  double s_ww = 0.0, s_wv = 0.0;
  double a11 = 0.0, a12 = 0.0, a22 = 0.0, r1 = 0.0, r2 = 0.0;
  for (Eigen::Index i = trim; i < m - trim; ++i) {
    const double w = Ts(i) - Vs(i);
    s_ww += w * w;
    s_wv += w * Vds(i);
    const double x1 = Ts(i) - T0, x2 = D(i);
    a11 += x1 * x1;
    a12 += x1 * x2;
    a22 += x2 * x2;
    r1 += x1 * Tds(i);
    r2 += x2 * Tds(i);
  }
  double a3_1 = s_ww > 0.0 ? s_wv / s_ww : 0.1;
  const double det = a11 * a22 - a12 * a12;
  double a1_1 = -0.05, a2_1 = 1.0;
  if (std::abs(det) > 1e-12) {
    a1_1 = (a22 * r1 - a12 * r2) / det;
    a2_1 = (-a12 * r1 + a11 * r2) / det;
  }
  out.a1_stage1 = a1_1;
  out.a2_stage1 = a2_1;
  out.a3_stage1 = a3_1;

  // clamp into the admissible signs before refining
  a1_1 = std::min(a1_1, -1e-4);
  a2_1 = std::max(a2_1, 1e-4);
  a3_1 = std::max(a3_1, 1e-4);

  const int substeps = std::max(1, static_cast<int>(std::round(dt / opts.dt_integration)));
  const auto simulate_V = [&](double a1, double a2, double a3) {
    ThermalParams p;
    p.a1 = a1;
    p.a2 = a2;
    p.a3 = a3;
    p.T0 = T0;
    return thermal_rollout(p, D, dt, substeps, T0, T0).V;
  };

  const numeric::LmResidualFn residual = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
    r = simulate_V(p(0), p(1), p(2)) - V;
  };
  const numeric::LmProjectFn project = [](Eigen::VectorXd& p) {
    p(0) = std::min(p(0), -1e-6);
    p(1) = std::max(p(1), 1e-6);
    p(2) = std::max(p(2), 1e-6);
  };
  Eigen::VectorXd p0(3);
  p0 << a1_1, a2_1, a3_1;
  {
    Eigen::VectorXd r0(m);
    residual(p0, r0);
    out.stage1_residual = std::sqrt(r0.squaredNorm() / static_cast<double>(m));
  }
  numeric::LmOptions lm_opts;
  lm_opts.max_iterations = opts.max_refine_iterations;
  const numeric::LmResult lm =
      numeric::levenberg_marquardt(residual, m, p0, lm_opts, nullptr, project);

  out.params.a1 = lm.params(0);
  out.params.a2 = lm.params(1);
  out.params.a3 = lm.params(2);
  out.params.T0 = T0;
  out.refined_residual = std::sqrt(2.0 * lm.cost / static_cast<double>(m));
  out.refine_iterations = lm.iterations;
  out.converged = lm.converged;
  return out;
}

}  // namespace softlimb
