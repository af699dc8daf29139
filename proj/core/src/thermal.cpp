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

#include "softlimb/thermal.hpp"

#include <cmath>

namespace softlimb {

void ThermalParams::validate() const {
  if (!(a1 < 0.0)) throw InvalidArgument("ThermalParams: a1 must be negative");
  if (!(a2 > 0.0)) throw InvalidArgument("ThermalParams: a2 must be positive");
  if (!(a3 > 0.0)) throw InvalidArgument("ThermalParams: a3 must be positive");
  if (!(beta > 0.0)) throw InvalidArgument("ThermalParams: beta must be positive");
  if (!std::isfinite(T0)) throw InvalidArgument("ThermalParams: T0 must be finite");
}

double wire_temp_derivative(double T, double D, const ThermalParams& p) {
  if (!(D >= 0.0 && D <= 1.0))
    throw InvalidArgument("wire_temp_derivative: duty cycle outside [0, 1]");
  if (!std::isfinite(T)) throw InvalidArgument("wire_temp_derivative: non-finite temperature");
  return p.a1 * (T - p.T0) + p.a2 * D;
}

double measured_temp_derivative(double V, double T, const ThermalParams& p) {
  return p.a3 * (T - V);
}

double wire_temp_from_measurement(double V, double V_dot, const ThermalParams& p) {
  return V + V_dot / p.a3;
}

Eigen::VectorXd actuation_force(double T_l, double T_r, const ThermalParams& p_l,
                                const ThermalParams& p_r, int n) {
  if (!std::isfinite(T_l) || !std::isfinite(T_r))
    throw InvalidArgument("actuation_force: non-finite temperature");
  const double f = p_r.beta * (T_r - p_r.T0) - p_l.beta * (T_l - p_l.T0);
  return Eigen::VectorXd::Constant(n, f);
}

ThermalTrajectory thermal_rollout(const ThermalParams& p, const Eigen::VectorXd& duty,
                                  double dt_sample, int substeps, double T_init, double V_init) {
  p.validate();
  if (substeps < 1 || !(dt_sample > 0.0))
    throw InvalidArgument("thermal_rollout: bad integration grid");
  const Eigen::Index m = duty.size();
  ThermalTrajectory out;
  out.T.resize(m);
  out.V.resize(m);
  double T = T_init, V = V_init;
  const double h = dt_sample / substeps;
  for (Eigen::Index k = 0; k < m; ++k) {
    out.T(k) = T;
    out.V(k) = V;
    const double D = duty(k);
    if (!(D >= 0.0 && D <= 1.0)) throw InvalidArgument("thermal_rollout: duty outside [0, 1]");
    for (int s = 0; s < substeps; ++s) {
      const double kT1 = p.a1 * (T - p.T0) + p.a2 * D;
      const double kV1 = p.a3 * (T - V);
      const double T2 = T + 0.5 * h * kT1, V2 = V + 0.5 * h * kV1;
      const double kT2 = p.a1 * (T2 - p.T0) + p.a2 * D;
      const double kV2 = p.a3 * (T2 - V2);
      const double T3 = T + 0.5 * h * kT2, V3 = V + 0.5 * h * kV2;
      const double kT3 = p.a1 * (T3 - p.T0) + p.a2 * D;
      const double kV3 = p.a3 * (T3 - V3);
      const double T4 = T + h * kT3, V4 = V + h * kV3;
      const double kT4 = p.a1 * (T4 - p.T0) + p.a2 * D;
      const double kV4 = p.a3 * (T4 - V4);
      T += h / 6.0 * (kT1 + 2 * kT2 + 2 * kT3 + kT4);
      V += h / 6.0 * (kV1 + 2 * kV2 + 2 * kV3 + kV4);
    }
  }
  return out;
}

}  // namespace softlimb
