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

#ifndef SOFTLIMB_CALIBRATION_HPP_
#define SOFTLIMB_CALIBRATION_HPP_

#include <vector>

#include "softlimb/dataset.hpp"
#include "softlimb/datagen.hpp"
#include "softlimb/sim.hpp"

namespace softlimb {

/// Spring-constant fit with the bending-profile correction factor.
struct SpringFitResult {
  double k = 0.0;       ///< N m / rad
  double lambda = 1.0;  ///< dimensionless profile correction
  int iterations = 0;
  double residual = 0.0;  ///< RMS static-balance residual, N m
  bool converged = false;
  std::vector<double> k_history, lambda_history;
};

/// Alternate between mapping the measured droop angles to joint angles
/// through the corrected bending profile, least-squares fitting k against
/// the gravity force, and re-estimating the correction factor from the
/// model's own simulated equilibrium. Starts at lambda = 1.
SpringFitResult fit_spring_constant(const std::vector<double>& phi_eq_obs,
                                    const ManipulatorParams& mp, int max_iterations = 50);

/// Damped-sinusoid parameters of a ring-down trace.
struct DampedSinusoidFit {
  double A = 0.0;        ///< rad
  double zeta = 0.0;     ///< damping ratio, in (0, 1)
  double omega_n = 0.0;  ///< rad/s
  double varphi = 0.0;   ///< rad
  double b = 0.0;        ///< rad offset
  double sigma_star = 0.0;  ///< zeta * omega_n, 1/s
  double rms_residual = 0.0;
  bool short_series = false;  ///< fewer than 4 observed periods
  bool converged = false;
  int iterations = 0;
  std::vector<double> cost_history;
};

/// Nonlinear least squares A e^{-zeta w t} sin(w sqrt(1-zeta^2) t + phi) + b
/// with initial guesses from the peak envelope; A and varphi are anchored
/// at the first sample, making the fit invariant to the time origin.
/// Throws UnfittableSeries when the trace shows no oscillation about its
/// trend.
DampedSinusoidFit fit_damped_sinusoid(const Eigen::VectorXd& t, const Eigen::VectorXd& phi);

struct DampingFitOptions {
  int max_outer_evals = 80;
  double rel_xtol = 1e-6;
  /// Optional explicit bracket upper end; <= 0 selects automatically from
  /// the modal scale 2 k sigma*_d / omega_n^2, capped by the integration
  /// stability limit.
  double sigma_hi = 0.0;
  double dt_integration = 0.0025;
};

struct DampingFitResult {
  double sigma_mdl = 0.0;       ///< N m s / rad, the recovered joint damping
  double sigma_star_data = 0.0; ///< 1/s, fitDS of the input trace
  double sigma_star_model = 0.0;///< 1/s, fitDS of the matched model trace
  double objective = 0.0;
  int outer_evaluations = 0;
  bool converged = false;
  double bracket_lo = 0.0, bracket_hi = 0.0;
};

/// Nested damping identification: an outer scalar search over the joint
/// damping sigma matches the damped-sinusoid rate fitted to model ring-down
/// rollouts against the rate fitted to the recorded trace.
DampingFitResult fit_damping(const PhiTrace& trace, const ManipulatorParams& mp,
                             const DampingFitOptions& opts = {});

struct ThermalFitOptions {
  double vdot_window_s = 2.0;      ///< smoothing window for the Vdot estimate
  double vdot_threshold = 0.02;    ///< degC/s equilibrium gate
  double min_phi_deg = 2.0;        ///< signal floor for the scaling point
  double dt_integration = 0.0025;  ///< stage-2 simulation substep
  int max_refine_iterations = 120;
};

struct ThermalFitResult {
  ThermalParams params;  ///< fitted a1, a2, a3 (T0 copied; beta left at input default)
  double b = 0.0;        ///< degC/rad temperature-angle scaling
  double phi_eq_star = 0.0, V_eq_star = 0.0;  ///< selected equilibrium point
  double a1_stage1 = 0.0, a2_stage1 = 0.0, a3_stage1 = 0.0;
  double stage1_residual = 0.0, refined_residual = 0.0;  ///< RMS degC
  int refine_iterations = 0;
  bool converged = false;
};

/// Two-stage heat-coefficient identification on a single-sided dataset:
/// a spline-collocation regression on smoothed series seeds a simulation
/// refinement against the measured readings.
ThermalFitResult fit_thermal_params(const CalibrationDataset& ds, int side, double T0,
                                    const ThermalFitOptions& opts = {});

struct ForceFitOptions {
  double phidot_threshold = 0.5 * M_PI / 180.0;  ///< rad/s quasi-static gate
  double window_s = 0.5;                         ///< averaging half-window
  double min_dT = 5.0;                           ///< degC signal floor
  double min_phi_deg = 2.0;
  double dt_integration = 0.0025;
};

struct ForceFitResult {
  double beta = 0.0;  ///< N m / degC
  int points_used = 0;
  double residual_rms = 0.0;
};

/// Force-gain fit from quasi-static points: wire temperatures simulated
/// from the logged duty, joint angles from the constant-curvature map,
/// one averaged sample per unique setpoint, least squares onto ones.
ForceFitResult fit_force_coeffs(const CalibrationDataset& ds, int side,
                                const ThermalParams& thermal, double k, int n,
                                const ForceFitOptions& opts = {});

struct ValidationReport {
  Eigen::VectorXd t;
  Eigen::VectorXd phi_meas, phi_sim;  ///< rad
  Eigen::VectorXd abs_err;            ///< rad
  double rms = 0.0, mean_abs = 0.0, median_abs = 0.0, p90_abs = 0.0;  ///< rad
};

/// Open-loop replay of a logged duty sequence against the logged bend
/// angle, with summary error statistics.
ValidationReport validate_model(const CalibrationDataset& ds, const ModelParams& params,
                                const SimConfig& sim);

}  // namespace softlimb

#endif  // SOFTLIMB_CALIBRATION_HPP_
