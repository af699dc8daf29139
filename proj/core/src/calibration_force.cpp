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
#include <vector>

#include "softlimb/calibration.hpp"
#include "softlimb/io.hpp"

namespace softlimb {

namespace {

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

ForceFitResult fit_force_coeffs(const CalibrationDataset& ds, int side,
                                const ThermalParams& thermal, double k, int n,
                                const ForceFitOptions& opts) {
  ds.validate();
  if (side != 0 && side != 1) throw InvalidArgument("fit_force_coeffs: side must be 0 or 1");
  check_single_sided(ds, side);
  if (!(k > 0.0) || n < 1) throw InvalidArgument("fit_force_coeffs: bad k or n");
  const double dt = ds.dt();
  const Eigen::Index m = ds.rows();
  const Eigen::VectorXd& D = side == 0 ? ds.D_l : ds.D_r;
  const Eigen::VectorXd phi = ds.phi_rad();
  const double sgn = side == 0 ? -1.0 : 1.0;

  const int substeps = std::max(1, static_cast<int>(std::round(dt / opts.dt_integration)));
  const Eigen::VectorXd T =
      thermal_rollout(thermal, D, dt, substeps, thermal.T0, thermal.T0).T;

  // smoothed |phidot| quasi-static gate
  const int half = std::max(1, static_cast<int>(std::round(0.5 * opts.window_s / dt)));
  const Eigen::VectorXd phidot = windowed_slope(phi, dt, half);
  const double min_phi = opts.min_phi_deg * io::kRadPerDeg;

  // one averaged sample per unique setpoint: least squares onto ones is
  // then invariant to repeating an equilibrium observation
  std::vector<double> keys;
  std::vector<double> sums;
  std::vector<int> counts;
  for (Eigen::Index i = half; i < m - half; ++i) {
    if (std::abs(phidot(i)) > opts.phidot_threshold) continue;
    if (std::abs(phi(i)) < min_phi) continue;
    double Tbar = 0.0;
    for (Eigen::Index j = i - half; j <= i + half; ++j) Tbar += T(j);
    Tbar /= static_cast<double>(2 * half + 1);
    if (Tbar - thermal.T0 < opts.min_dT) continue;
    const double theta_eq = 2.0 * phi(i) / (n + 1);
    const double gamma = sgn * k * theta_eq / (Tbar - thermal.T0);

    const double key = ds.phi_eq_deg(i);
    bool found = false;
    for (size_t q = 0; q < keys.size(); ++q) {
      if (keys[q] == key) {
        sums[q] += gamma;
        counts[q] += 1;
        found = true;
        break;
      }
    }
    if (!found) {
      keys.push_back(key);
      sums.push_back(gamma);
      counts.push_back(1);
    }
  }
  if (keys.size() < 3)
    throw DatasetInsufficient("fit_force_coeffs: fewer than 3 quasi-static equilibrium points");

  ForceFitResult out;
  out.points_used = static_cast<int>(keys.size());
  double beta = 0.0;
  for (size_t q = 0; q < keys.size(); ++q) beta += sums[q] / counts[q];
  beta /= static_cast<double>(keys.size());
  out.beta = beta;
  double res2 = 0.0;
  for (size_t q = 0; q < keys.size(); ++q) {
    const double g = sums[q] / counts[q] - beta;
    res2 += g * g;
  }
  out.residual_rms = std::sqrt(res2 / static_cast<double>(keys.size()));
  return out;
}

}  // namespace softlimb
