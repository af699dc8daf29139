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

#include "softlimb/datagen.hpp"

#include <cmath>
#include <random>

#include "softlimb/curvature.hpp"
#include "softlimb/io.hpp"

namespace softlimb {

namespace {

constexpr double kMaxSetpoint = 45.0 * M_PI / 180.0;

void check_schedule(CalibrationDataset::Kind kind, const SetpointSchedule& schedule) {
  if (schedule.phi_eq.empty())
    throw InvalidArgument("generate_calibration_dataset: empty setpoint schedule");
  if (!(schedule.dwell_s > 0.0))
    throw InvalidArgument("generate_calibration_dataset: dwell must be positive");
  for (double phi : schedule.phi_eq) {
    const double mag = std::abs(phi);
    if (!(mag > 0.0) || mag > kMaxSetpoint + 1e-12)
      throw InvalidArgument("generate_calibration_dataset: |phi_eq| must lie in (0, 45] deg");
    if (kind == CalibrationDataset::Kind::right && phi <= 0.0)
      throw InvalidArgument("generate_calibration_dataset: right-side setpoints must be positive");
    if (kind == CalibrationDataset::Kind::left && phi >= 0.0)
      throw InvalidArgument("generate_calibration_dataset: left-side setpoints must be negative");
  }
}

}  // namespace

CalibrationDataset generate_calibration_dataset(CalibrationDataset::Kind kind,
                                                const SetpointSchedule& schedule,
                                                const DatagenConfig& cfg,
                                                const ModelParams& params, std::uint64_t seed) {
  check_schedule(kind, schedule);
  cfg.gains.validate();
  params.validate();
  const int substeps = cfg.sim.substeps();

  PiMode mode = PiMode::both;
  if (kind == CalibrationDataset::Kind::right) mode = PiMode::right_only;
  if (kind == CalibrationDataset::Kind::left) mode = PiMode::left_only;

  SimModel model(params);
  Eigen::VectorXd x = FullState::ambient(params.manip.n, cfg.sim.T0).x;
  PiState pi;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const int per_setpoint = static_cast<int>(std::round(schedule.dwell_s / cfg.sim.dt_sample));
  const Eigen::Index total =
      static_cast<Eigen::Index>(per_setpoint) * static_cast<Eigen::Index>(schedule.phi_eq.size());

  CalibrationDataset ds;
  ds.kind = kind;
  ds.t.resize(total);
  ds.phi_deg.resize(total);
  ds.phi_eq_deg.resize(total);
  ds.V_l.resize(total);
  ds.V_r.resize(total);
  ds.D_l.resize(total);
  ds.D_r.resize(total);

  Eigen::Index row = 0;
  double t = 0.0;
  for (double phi_eq : schedule.phi_eq) {
    for (int s = 0; s < per_setpoint; ++s, ++row) {
      const double phi_meas = model.phi(x) + cfg.noise.sigma_phi * gauss(rng);
      const ControlInput u =
          pi_controller_step(phi_meas, phi_eq, cfg.gains, pi, mode, cfg.sim.dt_sample);
      ds.t(row) = t;
      ds.phi_deg(row) = phi_meas * io::kDegPerRad;
      ds.phi_eq_deg(row) = phi_eq * io::kDegPerRad;
      ds.V_l(row) = x(params.manip.n) + cfg.noise.sigma_V * gauss(rng);
      ds.V_r(row) = x(params.manip.n + 1) + cfg.noise.sigma_V * gauss(rng);
      ds.D_l(row) = u.D_l;
      ds.D_r(row) = u.D_r;
      model.step(x, u.vec(), cfg.sim.dt_sample, substeps, row * substeps);
      t += cfg.sim.dt_sample;
    }
  }
  return ds;
}

PhiTrace generate_release_trace(const ModelParams& params, double phi0, double duration,
                                double dt_sample, double dt_integration, double sigma_phi,
                                std::uint64_t seed) {
  ModelParams p = params;
  p.manip.gravity_on = false;
  SimConfig cfg;
  cfg.dt_sample = dt_sample;
  cfg.dt_integration = dt_integration;
  cfg.T0 = params.left.T0;
  const int substeps = cfg.substeps();

  SimModel model(p);
  Eigen::VectorXd x = FullState::ambient(p.manip.n, cfg.T0).x;
  x.segment(0, p.manip.n) = theta_from_phi_cc(phi0, p.manip.n);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const Eigen::Index m = static_cast<Eigen::Index>(std::round(duration / dt_sample));
  PhiTrace trace;
  trace.t.resize(m + 1);
  trace.phi.resize(m + 1);
  for (Eigen::Index i = 0; i <= m; ++i) {
    trace.t(i) = static_cast<double>(i) * dt_sample;
    trace.phi(i) = model.phi(x) + sigma_phi * gauss(rng);
    if (i < m) model.step(x, Eigen::Vector2d::Zero(), dt_sample, substeps, i * substeps);
  }
  return trace;
}

std::vector<double> generate_droop_observations(const ManipulatorParams& mp, int trials,
                                                double sigma_phi, std::uint64_t seed) {
  if (trials < 1) throw InvalidArgument("generate_droop_observations: trials must be >= 1");
  ManipulatorParams p = mp;
  p.gravity_on = true;
  const Eigen::VectorXd th_eq = static_equilibrium(p);
  const double phi_eq = tip_bend_angle(th_eq, p).phi;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> obs(static_cast<size_t>(trials));
  for (auto& o : obs) o = phi_eq + sigma_phi * gauss(rng);
  return obs;
}

PhiTrace generate_teach_trace(double duration, double dt, double phi_lo, double phi_hi,
                              int waypoints, std::uint64_t seed) {
  if (waypoints < 2) throw InvalidArgument("generate_teach_trace: need at least 2 waypoints");
  if (!(phi_hi > phi_lo)) throw InvalidArgument("generate_teach_trace: empty angle range");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(phi_lo, phi_hi);

  std::vector<double> wp(static_cast<size_t>(waypoints));
  wp[0] = 0.0;  // the limb starts at rest
  for (int i = 1; i < waypoints; ++i) wp[static_cast<size_t>(i)] = uni(rng);

  const Eigen::Index m = static_cast<Eigen::Index>(std::round(duration / dt));
  PhiTrace trace;
  trace.t.resize(m + 1);
  trace.phi.resize(m + 1);
  const double seg = duration / (waypoints - 1);
  for (Eigen::Index i = 0; i <= m; ++i) {
    const double t = static_cast<double>(i) * dt;
    trace.t(i) = t;
    int k = std::min(static_cast<int>(t / seg), waypoints - 2);
    const double s = (t - k * seg) / seg;
    const double w = 0.5 - 0.5 * std::cos(M_PI * std::clamp(s, 0.0, 1.0));
    trace.phi(i) = (1.0 - w) * wp[static_cast<size_t>(k)] + w * wp[static_cast<size_t>(k + 1)];
  }
  return trace;
}

}  // namespace softlimb
