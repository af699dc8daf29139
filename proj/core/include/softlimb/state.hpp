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

#ifndef SOFTLIMB_STATE_HPP_
#define SOFTLIMB_STATE_HPP_

#include <Eigen/Core>

#include "softlimb/errors.hpp"

namespace softlimb {

/// Index bookkeeping for the packed simulation state
///   x = [theta(n), V_l, V_r, theta_dot(n), Vdot_l, Vdot_r],
/// dimension 2n + 4.
struct StateLayout {
  int n = 0;

  constexpr int dim() const { return 2 * n + 4; }
  constexpr int theta() const { return 0; }
  constexpr int v(int side) const { return n + side; }        // side: 0 = left, 1 = right
  constexpr int theta_dot() const { return n + 2; }
  constexpr int vdot(int side) const { return 2 * n + 2 + side; }
};

/// PWM duty cycles for the two actuators, each in [0, 1].
struct ControlInput {
  double D_l = 0.0;
  double D_r = 0.0;

  void validate() const {
    if (!(D_l >= 0.0 && D_l <= 1.0 && D_r >= 0.0 && D_r <= 1.0))
      throw InvalidArgument("ControlInput: duty cycles must lie in [0, 1]");
  }
  Eigen::Vector2d vec() const { return {D_l, D_r}; }
};

/// Packed state with named segment views.
struct FullState {
  Eigen::VectorXd x;
  int n = 0;

  FullState() = default;
  FullState(Eigen::VectorXd data, int links) : x(std::move(data)), n(links) {
    if (x.size() != 2 * n + 4) throw InvalidArgument("FullState: wrong vector length");
  }

  /// Resting state at ambient temperature: theta = 0, V = T0, rates zero.
  static FullState ambient(int n, double T0) {
    FullState s;
    s.n = n;
    s.x = Eigen::VectorXd::Zero(2 * n + 4);
    s.x(n) = T0;
    s.x(n + 1) = T0;
    return s;
  }

  StateLayout layout() const { return StateLayout{n}; }

  auto theta() { return x.segment(0, n); }
  auto theta() const { return x.segment(0, n); }
  auto theta_dot() { return x.segment(n + 2, n); }
  auto theta_dot() const { return x.segment(n + 2, n); }
  double& V_l() { return x(n); }
  double V_l() const { return x(n); }
  double& V_r() { return x(n + 1); }
  double V_r() const { return x(n + 1); }
  double& Vdot_l() { return x(2 * n + 2); }
  double Vdot_l() const { return x(2 * n + 2); }
  double& Vdot_r() { return x(2 * n + 3); }
  double Vdot_r() const { return x(2 * n + 3); }
};

}  // namespace softlimb

#endif  // SOFTLIMB_STATE_HPP_
