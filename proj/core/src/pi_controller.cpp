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

#include "softlimb/pi_controller.hpp"

#include <algorithm>
#include <cmath>

namespace softlimb {

ControlInput pi_controller_step(double phi, double phi_eq, const PiGains& gains, PiState& state,
                                PiMode mode, double dt) {
  gains.validate();
  if (!(dt > 0.0)) throw InvalidArgument("pi_controller_step: dt must be positive");
  const double e = phi_eq - phi;

  state.integral += e * dt;
  const double integ_cap = gains.integrator_limit / gains.ki;
  state.integral = std::clamp(state.integral, -integ_cap, integ_cap);

  const double v = gains.kp * e + gains.ki * state.integral;
  const auto sat = [](double d) { return std::clamp(d, 0.0, 1.0); };

  ControlInput u;
  switch (mode) {
    case PiMode::right_only:
      u.D_r = sat(v);
      u.D_l = 0.0;
      break;
    case PiMode::left_only:
      u.D_l = sat(-v);
      u.D_r = 0.0;
      break;
    case PiMode::both:
      u.D_r = sat(v);
      u.D_l = sat(-v);
      break;
  }
  return u;
}

}  // namespace softlimb
