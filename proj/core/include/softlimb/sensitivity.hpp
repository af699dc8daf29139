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

#ifndef SOFTLIMB_SENSITIVITY_HPP_
#define SOFTLIMB_SENSITIVITY_HPP_

#include <Eigen/Core>

#include "softlimb/sim.hpp"

namespace softlimb::detail {

/// Forward-sensitivity and adjoint propagation through the RK4 knot step
/// x_{k+1} = F(x_k, u_k). Stage states recorded during the forward pass
/// feed exact vector-Jacobian products for the reverse pass; the dynamics
/// Jacobians at the stage points are analytic.
class StepSensitivity {
 public:
  explicit StepSensitivity(SimModel& model);

  /// Advances x across one knot, storing the four stage states of every
  /// substep into `stages` (dim x 4*substeps, resized as needed).
  void forward_record(Eigen::VectorXd& x, const Eigen::Vector2d& u, double dt_knot, int substeps,
                      Eigen::MatrixXd& stages);

  /// Reverse pass over recorded stages: accumulates
  ///   xbar += (dF/dx)^T w,  ubar += (dF/du)^T w.
  void vjp(const Eigen::MatrixXd& stages, double dt_knot, int substeps, const Eigen::VectorXd& w,
           Eigen::VectorXd& xbar, Eigen::Vector2d& ubar);

  /// Forward directional derivative: out = (dF/dx) vx + (dF/du) vu.
  /// Advances a local copy of x internally.
  void jvp(const Eigen::VectorXd& x, const Eigen::Vector2d& u, double dt_knot, int substeps,
           const Eigen::VectorXd& vx, const Eigen::Vector2d& vu, Eigen::VectorXd& out);

 private:
  SimModel* model_;
  Eigen::MatrixXd Jx_, Ju_;
  Eigen::VectorXd k1_, k2_, k3_, k4_;
  Eigen::VectorXd bk_, bs_, wacc_;
  Eigen::VectorXd d1_, d2_, d3_, d4_, v_, xt_, vt_;
};

}  // namespace softlimb::detail

#endif  // SOFTLIMB_SENSITIVITY_HPP_
