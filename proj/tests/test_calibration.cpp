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

#include "softlimb/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "softlimb/curvature.hpp"

namespace softlimb {
namespace {

constexpr double kDeg = M_PI / 180.0;

ModelParams default_model() {
  ModelParams mp;
  mp.left.a1 = -0.055;
  mp.left.a2 = 4.6;
  mp.left.a3 = 0.22;
  mp.left.beta = 4.2e-3;
  mp.right.a1 = -0.06;
  mp.right.a2 = 5.0;
  mp.right.a3 = 0.25;
  mp.right.beta = 4.5e-3;
  return mp;
}

// ---------------------------------------------------------------- spring

TEST(SpringFit, RoundTripRecoversKnownConstant) {
  ManipulatorParams truth;  // k = 1.0 default
  truth.gravity_on = true;
  const auto obs = generate_droop_observations(truth, 5, 0.0, 0);

  ManipulatorParams guess = truth;
  guess.k = 0.3;  // the fit must not depend on the seed value
  const SpringFitResult fit = fit_spring_constant(obs, guess);
  EXPECT_TRUE(fit.converged);
  EXPECT_LE(fit.iterations, 50);
  EXPECT_LT(std::abs(fit.k - truth.k) / truth.k, 0.01);
  // lambda lands at the model's own fixed point; sanity band only
  EXPECT_GT(fit.lambda, 0.2);
  EXPECT_LT(fit.lambda, 3.0);
}

TEST(SpringFit, ScaleEquivariance) {
  ManipulatorParams truth;
  truth.gravity_on = true;
  const auto obs1 = generate_droop_observations(truth, 3, 0.0, 1);
  ManipulatorParams doubled = truth;
  doubled.k = 2.0 * truth.k;
  const auto obs2 = generate_droop_observations(doubled, 3, 0.0, 1);

  const double k1 = fit_spring_constant(obs1, truth).k;
  const double k2 = fit_spring_constant(obs2, truth).k;
  EXPECT_LT(std::abs(k2 / k1 - 2.0) / 2.0, 0.01);
}

TEST(SpringFit, LambdaIterationContracts) {
  ManipulatorParams truth;
  truth.gravity_on = true;
  const auto obs = generate_droop_observations(truth, 1, 0.0, 2);
  const SpringFitResult fit = fit_spring_constant(obs, truth);
  ASSERT_GE(fit.lambda_history.size(), 3u);
  const double lam_star = fit.lambda_history.back();
  double prev = std::abs(1.0 - lam_star);  // starts from lambda = 1
  for (size_t i = 0; i + 1 < fit.lambda_history.size(); ++i) {
    const double err = std::abs(fit.lambda_history[i] - lam_star);
    EXPECT_LT(err, prev + 1e-15) << "iterate " << i;
    prev = err;
  }
}

TEST(SpringFit, EmptyObservationsRejected) {
  ManipulatorParams p;
  EXPECT_THROW(fit_spring_constant({}, p), DatasetInsufficient);
}

// ------------------------------------------------------- damped sinusoid

TEST(SinusoidFit, ExactSyntheticRecovery) {
  const double zeta = 0.1, wn = 6.0, A = 0.5, ph = 1.0, b = 0.02;
  const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(600, 0.0, 5.99);
  Eigen::VectorXd phi(t.size());
  const double wd = wn * std::sqrt(1.0 - zeta * zeta);
  for (Eigen::Index i = 0; i < t.size(); ++i)
    phi(i) = A * std::exp(-zeta * wn * t(i)) * std::sin(wd * t(i) + ph) + b;

  const DampedSinusoidFit fit = fit_damped_sinusoid(t, phi);
  EXPECT_LT(std::abs(fit.zeta - zeta) / zeta, 1e-6);
  EXPECT_LT(std::abs(fit.omega_n - wn) / wn, 1e-6);
  EXPECT_LT(std::abs(fit.A - A) / A, 1e-6);
  EXPECT_LT(std::abs(fit.b - b), 1e-8);
  EXPECT_FALSE(fit.short_series);
}

TEST(SinusoidFit, NoisyRecoveryOfSigmaStar) {
  // median recovery of zeta*omega over seeds with 0.5 degree noise
  const double zeta = 0.08, wn = 12.0;
  const double sig_true = zeta * wn;
  const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(800, 0.0, 7.99);
  const double wd = wn * std::sqrt(1.0 - zeta * zeta);
  std::vector<double> errs;
  for (int seed = 0; seed < 24; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 0.5 * kDeg);
    Eigen::VectorXd phi(t.size());
    for (Eigen::Index i = 0; i < t.size(); ++i)
      phi(i) = 0.6 * std::exp(-zeta * wn * t(i)) * std::sin(wd * t(i) + 0.9) + gauss(rng);
    const DampedSinusoidFit fit = fit_damped_sinusoid(t, phi);
    errs.push_back(std::abs(fit.sigma_star - sig_true) / sig_true);
  }
  std::sort(errs.begin(), errs.end());
  EXPECT_LT(errs[errs.size() / 2], 0.03);
}

TEST(SinusoidFit, ModelReleaseTraceFitsWell) {
  const ModelParams mp = default_model();
  const PhiTrace tr = generate_release_trace(mp, 45.0 * kDeg, 8.0, 0.01, 0.0025, 0.0, 0);
  const DampedSinusoidFit fit = fit_damped_sinusoid(tr.t, tr.phi);
  EXPECT_LT(fit.rms_residual, 0.05 * 45.0 * kDeg);
  EXPECT_GT(fit.sigma_star, 0.0);
}

TEST(SinusoidFit, TimeOriginInvariance) {
  const ModelParams mp = default_model();
  const PhiTrace tr = generate_release_trace(mp, 40.0 * kDeg, 8.0, 0.01, 0.0025, 0.0, 0);
  const DampedSinusoidFit a = fit_damped_sinusoid(tr.t, tr.phi);
  const Eigen::VectorXd t_shift = tr.t.array() + 17.3;
  const DampedSinusoidFit b = fit_damped_sinusoid(t_shift, tr.phi);
  EXPECT_LT(std::abs(a.sigma_star - b.sigma_star) / a.sigma_star, 1e-6);
}

TEST(SinusoidFit, RejectsNonOscillatorySeries) {
  const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(100, 0.0, 9.9);
  Eigen::VectorXd phi(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) phi(i) = std::exp(-0.3 * t(i));  // pure decay
  EXPECT_THROW(fit_damped_sinusoid(t, phi), UnfittableSeries);
}

// ---------------------------------------------------------------- damping

TEST(DampingFit, RoundTripRecoversJointDamping) {
  ModelParams mp = default_model();
  mp.manip.sigma = 0.002;
  const PhiTrace tr = generate_release_trace(mp, 45.0 * kDeg, 8.0, 0.01, 0.0025, 0.0, 0);
  const DampingFitResult fit = fit_damping(tr, mp.manip);
  EXPECT_TRUE(fit.converged);
  EXPECT_LT(std::abs(fit.sigma_mdl - 0.002) / 0.002, 0.02);
}

TEST(DampingFit, NaiveRateAssignmentMismatches) {
  // using the data-fit rate directly as the joint damping constant does
  // not reproduce the observed damping rate
  ModelParams mp = default_model();
  mp.manip.sigma = 0.002;
  const PhiTrace tr = generate_release_trace(mp, 45.0 * kDeg, 8.0, 0.01, 0.0025, 0.0, 0);
  const DampedSinusoidFit data_fit = fit_damped_sinusoid(tr.t, tr.phi);
  // sigma*_d is O(0.1..1) 1/s while the joint damping is O(1e-3); a
  // stable rollout at that sigma is overdamped by orders of magnitude
  EXPECT_GT(data_fit.sigma_star / 0.002, 50.0);
}

TEST(DampingFit, ZeroDampingTraceGivesZero) {
  ModelParams mp = default_model();
  mp.manip.sigma = 0.0;
  const PhiTrace tr = generate_release_trace(mp, 30.0 * kDeg, 6.0, 0.01, 0.0025, 0.0, 0);
  const DampingFitResult fit = fit_damping(tr, mp.manip);
  EXPECT_LT(fit.sigma_mdl, 5e-5);
}

// ---------------------------------------------------------------- thermal

CalibrationDataset right_dataset(const ModelParams& mp, double sigma_V, double sigma_phi,
                                 std::uint64_t seed) {
  DatagenConfig cfg;
  cfg.noise.sigma_V = sigma_V;
  cfg.noise.sigma_phi = sigma_phi;
  SetpointSchedule sched{{12.0 * kDeg, 30.0 * kDeg, 20.0 * kDeg, 38.0 * kDeg, 8.0 * kDeg,
                          26.0 * kDeg},
                         50.0};
  return generate_calibration_dataset(CalibrationDataset::Kind::right, sched, cfg, mp, seed);
}

TEST(ThermalFit, NoiseFreeRoundTrip) {
  const ModelParams mp = default_model();
  const CalibrationDataset ds = right_dataset(mp, 0.0, 0.0, 7);
  const ThermalFitResult fit = fit_thermal_params(ds, 1, mp.right.T0);
  EXPECT_LT(std::abs(fit.params.a1 - mp.right.a1) / std::abs(mp.right.a1), 0.02);
  EXPECT_LT(std::abs(fit.params.a2 - mp.right.a2) / mp.right.a2, 0.02);
  EXPECT_LT(std::abs(fit.params.a3 - mp.right.a3) / mp.right.a3, 0.02);
  EXPECT_LE(fit.refined_residual, fit.stage1_residual);
  EXPECT_LT(fit.refined_residual, 0.01);
}

TEST(ThermalFit, LeftSideRoundTrip) {
  const ModelParams mp = default_model();
  DatagenConfig cfg;
  SetpointSchedule sched{{-12.0 * kDeg, -30.0 * kDeg, -20.0 * kDeg, -36.0 * kDeg, -26.0 * kDeg},
                         50.0};
  const CalibrationDataset ds =
      generate_calibration_dataset(CalibrationDataset::Kind::left, sched, cfg, mp, 8);
  const ThermalFitResult fit = fit_thermal_params(ds, 0, mp.left.T0);
  EXPECT_LT(std::abs(fit.params.a1 - mp.left.a1) / std::abs(mp.left.a1), 0.02);
  EXPECT_LT(std::abs(fit.params.a2 - mp.left.a2) / mp.left.a2, 0.02);
  EXPECT_LT(std::abs(fit.params.a3 - mp.left.a3) / mp.left.a3, 0.02);
  // the left-side temperature-angle scaling is negative (negative bends)
  EXPECT_LT(fit.b, 0.0);
}

TEST(ThermalFit, RefinementNeverWorsensResidual) {
  const ModelParams mp = default_model();
  for (unsigned seed : {11u, 12u, 13u}) {
    const CalibrationDataset ds = right_dataset(mp, 0.3, 0.15 * kDeg, seed);
    const ThermalFitResult fit = fit_thermal_params(ds, 1, mp.right.T0);
    EXPECT_LE(fit.refined_residual, fit.stage1_residual + 1e-12);
  }
}

TEST(ThermalFit, RejectsMixedDataset) {
  const ModelParams mp = default_model();
  DatagenConfig cfg;
  SetpointSchedule sched{{15.0 * kDeg, -15.0 * kDeg}, 20.0};
  const CalibrationDataset ds =
      generate_calibration_dataset(CalibrationDataset::Kind::mixed, sched, cfg, mp, 5);
  EXPECT_THROW(fit_thermal_params(ds, 1, mp.right.T0), InvalidArgument);
}

TEST(ThermalFit, InsufficientDatasetDetected) {
  // too-short dwells never settle: no near-equilibrium point
  const ModelParams mp = default_model();
  DatagenConfig cfg;
  ThermalFitOptions opts;
  opts.vdot_threshold = 1e-4;
  SetpointSchedule sched{{30.0 * kDeg, 10.0 * kDeg, 40.0 * kDeg}, 3.0};
  const CalibrationDataset ds =
      generate_calibration_dataset(CalibrationDataset::Kind::right, sched, cfg, mp, 5);
  EXPECT_THROW(fit_thermal_params(ds, 1, mp.right.T0, opts), DatasetInsufficient);
}

// ------------------------------------------------------------------ force

TEST(ForceFit, NoiseFreeRoundTrip) {
  const ModelParams mp = default_model();
  const CalibrationDataset ds = right_dataset(mp, 0.0, 0.0, 21);
  const ForceFitResult fit = fit_force_coeffs(ds, 1, mp.right, mp.manip.k, mp.manip.n);
  EXPECT_GE(fit.points_used, 3);
  EXPECT_LT(std::abs(fit.beta - mp.right.beta) / mp.right.beta, 0.03);
}

TEST(ForceFit, LeftSidePositiveBeta) {
  const ModelParams mp = default_model();
  DatagenConfig cfg;
  SetpointSchedule sched{{-12.0 * kDeg, -30.0 * kDeg, -20.0 * kDeg, -36.0 * kDeg}, 50.0};
  const CalibrationDataset ds =
      generate_calibration_dataset(CalibrationDataset::Kind::left, sched, cfg, mp, 22);
  const ForceFitResult fit = fit_force_coeffs(ds, 0, mp.left, mp.manip.k, mp.manip.n);
  EXPECT_GT(fit.beta, 0.0);
  EXPECT_LT(std::abs(fit.beta - mp.left.beta) / mp.left.beta, 0.03);
}

TEST(ForceFit, LinearInSpringConstant) {
  const ModelParams mp = default_model();
  const CalibrationDataset ds = right_dataset(mp, 0.0, 0.0, 23);
  const double b1 = fit_force_coeffs(ds, 1, mp.right, mp.manip.k, mp.manip.n).beta;
  const double b2 = fit_force_coeffs(ds, 1, mp.right, 0.5 * mp.manip.k, mp.manip.n).beta;
  EXPECT_NEAR(b2, 0.5 * b1, 1e-12);
}

TEST(ForceFit, InvariantToDuplicatedEquilibriumObservation) {
  const ModelParams mp = default_model();
  DatagenConfig cfg;
  SetpointSchedule once{{12.0 * kDeg, 24.0 * kDeg, 36.0 * kDeg}, 60.0};
  SetpointSchedule twice{{12.0 * kDeg, 24.0 * kDeg, 36.0 * kDeg, 24.0 * kDeg}, 60.0};
  const CalibrationDataset a =
      generate_calibration_dataset(CalibrationDataset::Kind::right, once, cfg, mp, 31);
  const CalibrationDataset b =
      generate_calibration_dataset(CalibrationDataset::Kind::right, twice, cfg, mp, 31);
  const double beta_a = fit_force_coeffs(a, 1, mp.right, mp.manip.k, mp.manip.n).beta;
  const double beta_b = fit_force_coeffs(b, 1, mp.right, mp.manip.k, mp.manip.n).beta;
  // the repeated 24-degree dwell reaches the same equilibrium; grouping by
  // setpoint keeps the estimate unchanged up to transient differences
  EXPECT_LT(std::abs(beta_b - beta_a) / beta_a, 2e-3);
}

TEST(ForceFit, TooFewPointsRejected) {
  const ModelParams mp = default_model();
  DatagenConfig cfg;
  SetpointSchedule sched{{25.0 * kDeg}, 60.0};
  const CalibrationDataset ds =
      generate_calibration_dataset(CalibrationDataset::Kind::right, sched, cfg, mp, 33);
  EXPECT_THROW(fit_force_coeffs(ds, 1, mp.right, mp.manip.k, mp.manip.n), DatasetInsufficient);
}

// --------------------------------------------------------------- validate

TEST(ValidateModel, SelfReplayIsExact) {
  const ModelParams mp = default_model();
  DatagenConfig cfg;
  SetpointSchedule sched{{15.0 * kDeg, -18.0 * kDeg, 28.0 * kDeg}, 30.0};
  const CalibrationDataset ds =
      generate_calibration_dataset(CalibrationDataset::Kind::mixed, sched, cfg, mp, 40);
  const ValidationReport rep = validate_model(ds, mp, cfg.sim);
  EXPECT_LT(rep.rms, 0.2 * kDeg);
}

TEST(ValidateModel, PerturbedForceGainIncreasesError) {
  const ModelParams mp = default_model();
  DatagenConfig cfg;
  SetpointSchedule sched{{15.0 * kDeg, -18.0 * kDeg, 28.0 * kDeg}, 30.0};
  const CalibrationDataset ds =
      generate_calibration_dataset(CalibrationDataset::Kind::mixed, sched, cfg, mp, 41);
  const double rms0 = validate_model(ds, mp, cfg.sim).rms;
  ModelParams bad = mp;
  bad.right.beta *= 1.2;
  const double rms1 = validate_model(ds, bad, cfg.sim).rms;
  EXPECT_GT(rms1, rms0);
}

TEST(ValidateModel, EmptyDatasetRejected) {
  const ModelParams mp = default_model();
  CalibrationDataset empty;
  EXPECT_THROW(validate_model(empty, mp, SimConfig{}), InvalidArgument);
}

}  // namespace
}  // namespace softlimb
