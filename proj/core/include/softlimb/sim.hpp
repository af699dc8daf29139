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

#ifndef SOFTLIMB_SIM_HPP_
#define SOFTLIMB_SIM_HPP_

#include <vector>

#include <Eigen/Core>

#include "softlimb/chain.hpp"
#include "softlimb/manipulator.hpp"
#include "softlimb/state.hpp"
#include "softlimb/thermal.hpp"

namespace softlimb {

/// Everything the combined dynamics need: the chain and both actuators.
struct ModelParams {
  ManipulatorParams manip;
  ThermalParams left;
  ThermalParams right;

  void validate() const {
    manip.validate();
    left.validate();
    right.validate();
  }
};

/// Fixed-step integration setup. dt_sample is the zero-order-hold input
/// period (one discrete step); dt_integration subdivides it for RK4.
struct SimConfig {
  double dt_integration = 0.0025;  ///< s
  double dt_sample = 0.1;          ///< s
  double T0 = 25.0;                ///< degC, ambient used for initial states

  void validate() const;
  int substeps() const;  ///< dt_sample / dt_integration, validated integer
};

/// Combined-dynamics evaluator with preallocated workspaces. Copyable;
/// methods mutate only internal scratch, so use one instance per thread.
class SimModel {
 public:
  explicit SimModel(const ModelParams& params);

  const ModelParams& params() const { return params_; }
  int n() const { return coeffs_.n; }
  int dim() const { return 2 * coeffs_.n + 4; }
  StateLayout layout() const { return StateLayout{coeffs_.n}; }

  /// Continuous-time right-hand side of the packed state. Wire
  /// temperatures are recovered from (V, Vdot) algebraically.
  void deriv(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Vector2d& u,
             Eigen::VectorXd& dx);

  /// One RK4 substep of size dt, in place.
  void rk4_substep(Eigen::VectorXd& x, const Eigen::Vector2d& u, double dt);

  /// Advance x across one sample period with zero-order-hold input.
  /// Throws IntegrationDiverged (with substep index offset by step_base)
  /// if the state leaves the finite range.
  void step(Eigen::VectorXd& x, const Eigen::Vector2d& u, double dt_sample, int substeps,
            long step_base = 0);

  /// Jacobians of the continuous dynamics at (x, u): Jx is dim x dim,
  /// Ju is dim x 2. Exact up to the factorization.
  void deriv_jacobian(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Vector2d& u,
                      Eigen::MatrixXd& Jx, Eigen::MatrixXd& Ju);

  /// Wire temperatures (left, right) recovered from the packed state.
  Eigen::Vector2d wire_temps(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// Bend angle of the packed state's joint angles.
  double phi(const Eigen::Ref<const Eigen::VectorXd>& x) const;

 private:
  ModelParams params_;
  detail::ChainCoeffs coeffs_;
  detail::ChainWorkspace ws_;
  Eigen::VectorXd k1_, k2_, k3_, k4_, xt_;    // RK4 scratch
  Eigen::VectorXd thetadd_, bias_, fg_, one_;
  Eigen::MatrixXd dth_, dthd_;                // accel partial scratch
  Eigen::VectorXd minv_one_;
};

/// Rate of the full state per the block-composed dynamics.
FullState state_derivative(const FullState& x, const ControlInput& u,
                           const ManipulatorParams& mp, const ThermalParams& tp_l,
                           const ThermalParams& tp_r);

/// x_{k+1} = f(x_k, u_k): RK4 substeps across dt_sample with ZOH input.
FullState discrete_step(const FullState& x, const ControlInput& u, const SimConfig& cfg,
                        const ModelParams& params);

struct RolloutResult {
  std::vector<FullState> states;  ///< length m + 1 (x0 included)
  Eigen::VectorXd phi;            ///< rad, per state
};

/// Iterated discrete_step over an input sequence.
RolloutResult rollout(const FullState& x0, const std::vector<ControlInput>& u_seq,
                      const SimConfig& cfg, const ModelParams& params);

}  // namespace softlimb

#endif  // SOFTLIMB_SIM_HPP_
