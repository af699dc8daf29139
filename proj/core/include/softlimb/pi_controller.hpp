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

#ifndef SOFTLIMB_PI_CONTROLLER_HPP_
#define SOFTLIMB_PI_CONTROLLER_HPP_

#include "softlimb/state.hpp"

namespace softlimb {

/// Gains of the bend-angle PI loop used to hold calibration setpoints.
/// Defaults were frozen after simulation tuning: a 30 degree setpoint
/// settles within 1 degree in under 60 s on the default limb.
struct PiGains {
  double kp = 2.0;   ///< duty per rad
  double ki = 0.15;  ///< duty per rad s
  /// Anti-windup clamp on the integral contribution ki * integral, in
  /// duty units.
  double integrator_limit = 0.8;

  void validate() const {
    if (!(kp > 0.0) || !(ki > 0.0) || !(integrator_limit > 0.0))
      throw InvalidArgument("PiGains: gains must be positive");
  }
};

/// Which actuator(s) the loop is allowed to drive.
enum class PiMode { left_only, right_only, both };

/// Integrator memory between calls.
struct PiState {
  double integral = 0.0;  ///< rad s, clamped
};

/// One PI update on the bend-angle error. Positive effort heats the right
/// actuator, negative the left; the disallowed side is clamped to zero in
/// the single-sided modes. Output saturates to [0, 1] per side.
ControlInput pi_controller_step(double phi, double phi_eq, const PiGains& gains, PiState& state,
                                PiMode mode, double dt);

}  // namespace softlimb

#endif  // SOFTLIMB_PI_CONTROLLER_HPP_
