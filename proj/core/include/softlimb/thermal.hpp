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

#ifndef SOFTLIMB_THERMAL_HPP_
#define SOFTLIMB_THERMAL_HPP_

#include <Eigen/Core>

#include "softlimb/errors.hpp"

namespace softlimb {

/// Per-actuator heating, measurement-lag, and force-gain coefficients.
/// One instance per actuator side (left, right).
///
/// Wire temperature follows Tdot = a1 (T - T0) + a2 D. The thermocouple
/// reading V relaxes toward T at rate a3: Vdot = a3 (T - V). The stable
/// relaxation sign is used throughout, so the algebraic inversion reads
/// T = V + Vdot / a3.
struct ThermalParams {
  double a1 = -0.06;   ///< 1/s, convective decay (negative)
  double a2 = 5.0;     ///< degC/s at full duty
  double a3 = 0.25;    ///< 1/s, measurement lag rate (positive)
  double beta = 4.5e-3;  ///< N m / degC force gain
  double T0 = 25.0;    ///< degC ambient

  void validate() const;
};

/// Wire and measured temperature of one actuator.
struct ActuatorState {
  double T = 25.0;  ///< degC, wire
  double V = 25.0;  ///< degC, thermocouple reading
};

/// Tdot = a1 (T - T0) + a2 D. D must lie in [0, 1].
double wire_temp_derivative(double T, double D, const ThermalParams& p);

/// Vdot = a3 (T - V): first-order relaxation of the reading toward the wire.
double measured_temp_derivative(double V, double T, const ThermalParams& p);

/// Algebraic inversion of the measurement lag: T = V + Vdot / a3.
double wire_temp_from_measurement(double V, double V_dot, const ThermalParams& p);

/// Antagonistic generalized force, uniform across the n joints:
/// f = [beta_r (T_r - T0) - beta_l (T_l - T0)] 1_n.
Eigen::VectorXd actuation_force(double T_l, double T_r, const ThermalParams& p_l,
                                const ThermalParams& p_r, int n);

/// Wire and measured temperature series of one actuator.
struct ThermalTrajectory {
  Eigen::VectorXd T;
  Eigen::VectorXd V;
};

/// RK4 rollout of the (T, V) pair under a zero-order-hold duty sequence.
/// Row k holds the state at sample k before duty(k) is applied, matching
/// the calibration-log convention.
ThermalTrajectory thermal_rollout(const ThermalParams& p, const Eigen::VectorXd& duty,
                                  double dt_sample, int substeps, double T_init, double V_init);

}  // namespace softlimb

#endif  // SOFTLIMB_THERMAL_HPP_
