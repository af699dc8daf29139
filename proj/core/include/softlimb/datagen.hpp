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

#ifndef SOFTLIMB_DATAGEN_HPP_
#define SOFTLIMB_DATAGEN_HPP_

#include <cstdint>
#include <vector>

#include "softlimb/dataset.hpp"
#include "softlimb/pi_controller.hpp"
#include "softlimb/sim.hpp"

namespace softlimb {

/// Additive Gaussian measurement noise on the logged channels.
struct NoiseConfig {
  double sigma_phi = 0.0;  ///< rad
  double sigma_V = 0.0;    ///< degC
};

/// Everything the closed-loop dataset generator needs besides the plant.
struct DatagenConfig {
  SimConfig sim;
  PiGains gains;
  NoiseConfig noise;
};

/// Setpoint program: hold each bend-angle target for dwell_s seconds.
struct SetpointSchedule {
  std::vector<double> phi_eq;  ///< rad
  double dwell_s = 50.0;
};

/// Closed-loop dataset generation: the PI loop holds each setpoint on the
/// simulated limb while every sample is logged. Single-sided kinds require
/// setpoints of the matching sign with magnitude in (0, 45] degrees.
/// Seeded noise makes generation bit-reproducible.
CalibrationDataset generate_calibration_dataset(CalibrationDataset::Kind kind,
                                                const SetpointSchedule& schedule,
                                                const DatagenConfig& cfg,
                                                const ModelParams& params, std::uint64_t seed);

/// A bare bend-angle time series.
struct PhiTrace {
  Eigen::VectorXd t;    ///< s
  Eigen::VectorXd phi;  ///< rad
};

/// Passive release from a constant-curvature deflection at phi0: the limb
/// rings down under springs and damping alone (no gravity, no actuation).
PhiTrace generate_release_trace(const ModelParams& params, double phi0, double duration,
                                double dt_sample, double dt_integration, double sigma_phi,
                                std::uint64_t seed);

/// Repeated static droop measurements under gravity for the spring fit.
std::vector<double> generate_droop_observations(const ManipulatorParams& mp, int trials,
                                                double sigma_phi, std::uint64_t seed);

/// Smooth random hand-motion trace through uniformly drawn waypoints,
/// starting at zero; cosine-ramp interpolation between waypoints.
PhiTrace generate_teach_trace(double duration, double dt, double phi_lo, double phi_hi,
                              int waypoints, std::uint64_t seed);

}  // namespace softlimb

#endif  // SOFTLIMB_DATAGEN_HPP_
