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

#ifndef SOFTLIMB_MANIPULATOR_HPP_
#define SOFTLIMB_MANIPULATOR_HPP_

#include <Eigen/Core>

#include "softlimb/errors.hpp"

namespace softlimb {

/// Fixed-base planar serial chain with a linear torsional spring and a
/// viscous damper at every joint. Link properties are uniform; the spring
/// constant k and damping sigma are single scalars shared across joints.
struct ManipulatorParams {
  int n = 5;                      ///< link count
  double link_length = 0.04;      ///< m
  double link_mass = 0.02;        ///< kg
  double link_com_offset = 0.02;  ///< m, COM distance from the proximal joint
  double link_inertia = 8.0e-6;   ///< kg m^2 about the link COM
  double k = 1.0;                 ///< N m / rad
  double sigma = 0.002;           ///< N m s / rad

  /// Gravity is only active in the reoriented calibration configuration.
  bool gravity_on = false;
  double g = 9.81;  ///< m / s^2
  /// Direction of gravitational acceleration in the {E1, E2} frame. The
  /// default is transverse to the undeflected chain so that the static
  /// droop used for spring calibration is nonzero.
  Eigen::Vector2d gravity_dir = Eigen::Vector2d(0.0, 1.0);

  /// Throws InvalidArgument when a field is outside its admissible range.
  void validate() const;
};

/// Joint angles and rates, both length n.
struct JointState {
  Eigen::VectorXd theta;      ///< rad
  Eigen::VectorXd theta_dot;  ///< rad/s
};

/// Link COM positions (2 x n) and tip position in the {E1, E2} frame.
struct ChainKinematics {
  Eigen::Matrix2Xd com;
  Eigen::Vector2d tip;
};

/// Tip bend angle with a degeneracy flag for tips on the E2 axis.
struct BendAngle {
  double phi = 0.0;         ///< rad, four-quadrant
  bool on_e2_axis = false;  ///< tip E1 component vanished; phi = +-pi/2
};

/// M(theta), symmetric positive definite, built column by column from
/// unit-acceleration inverse-dynamics passes.
Eigen::MatrixXd mass_matrix(const Eigen::VectorXd& theta, const ManipulatorParams& p);

/// C(theta, theta_dot) * theta_dot: the zero-acceleration, zero-gravity
/// inverse dynamics with springs and damping removed.
Eigen::VectorXd coriolis_vector(const JointState& s, const ManipulatorParams& p);

/// -grad U_g(theta) for U_g = sum_i m g r_i . (potential axis). Requires
/// p.gravity_on; throws ContractViolation otherwise.
Eigen::VectorXd gravity_force(const Eigen::VectorXd& theta, const ManipulatorParams& p);

/// Link COM positions and tip position by cumulative angle sums.
ChainKinematics forward_kinematics(const Eigen::VectorXd& theta, const ManipulatorParams& p);

/// phi = atan2(t.E2, t.E1) of the tip position.
BendAngle tip_bend_angle(const Eigen::VectorXd& theta, const ManipulatorParams& p);

/// Joint accelerations from M(theta) theta_dd = f_act [+ f_g] - C theta_d
/// - k theta - sigma theta_d, solved with an SPD factorization.
Eigen::VectorXd manipulator_accel(const JointState& s, const Eigen::VectorXd& f_act,
                                  const ManipulatorParams& p);

/// Potential energy of the chain in the gravity field (calibration aid).
double gravity_potential(const Eigen::VectorXd& theta, const ManipulatorParams& p);

/// Static droop configuration: solves k theta + f_g(theta) = 0 with a
/// damped Newton iteration. Requires p.gravity_on.
Eigen::VectorXd static_equilibrium(const ManipulatorParams& p);

/// Total mechanical energy 0.5 qd' M qd + 0.5 k q' q (+ U_g when gravity_on).
double mechanical_energy(const JointState& s, const ManipulatorParams& p);

}  // namespace softlimb

#endif  // SOFTLIMB_MANIPULATOR_HPP_
