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

#include "softlimb/manipulator.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "softlimb/chain.hpp"

namespace softlimb {

using detail::ChainCoeffs;
using detail::ChainWorkspace;

void ManipulatorParams::validate() const {
  if (n < 1) throw InvalidArgument("ManipulatorParams: n must be >= 1");
  if (!(link_length > 0.0) || !(link_mass > 0.0) || !(link_com_offset > 0.0) ||
      !(link_inertia > 0.0))
    throw InvalidArgument("ManipulatorParams: lengths, masses, inertias must be positive");
  if (!(k > 0.0)) throw InvalidArgument("ManipulatorParams: k must be positive");
  if (!(sigma >= 0.0)) throw InvalidArgument("ManipulatorParams: sigma must be nonnegative");
  if (!(g > 0.0)) throw InvalidArgument("ManipulatorParams: g must be positive");
  if (!(gravity_dir.norm() > 0.0) || !gravity_dir.allFinite())
    throw InvalidArgument("ManipulatorParams: gravity_dir must be a nonzero finite vector");
}

namespace {

void check_theta(const Eigen::VectorXd& theta, const ManipulatorParams& p, const char* who) {
  if (theta.size() != p.n)
    throw InvalidArgument(std::string(who) + ": theta has wrong length");
  if (!theta.allFinite())
    throw InvalidArgument(std::string(who) + ": non-finite joint angles");
}

void check_state(const JointState& s, const ManipulatorParams& p, const char* who) {
  check_theta(s.theta, p, who);
  if (s.theta_dot.size() != p.n)
    throw InvalidArgument(std::string(who) + ": theta_dot has wrong length");
  if (!s.theta_dot.allFinite())
    throw InvalidArgument(std::string(who) + ": non-finite joint rates");
}

}  // namespace

Eigen::MatrixXd mass_matrix(const Eigen::VectorXd& theta, const ManipulatorParams& p) {
  check_theta(theta, p, "mass_matrix");
  const ChainCoeffs c = ChainCoeffs::build(p);
  ChainWorkspace ws(p.n);
  detail::cum_angles(c, theta, nullptr, ws);

  // Unit-acceleration columns of an inverse-dynamics pass: with zero rates
  // the pass returns M(theta) e_j exactly.
  Eigen::MatrixXd M(p.n, p.n);
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(p.n);
  Eigen::VectorXd ej = Eigen::VectorXd::Zero(p.n);
  Eigen::VectorXd col(p.n);
  for (int j = 0; j < p.n; ++j) {
    ej(j) = 1.0;
    detail::rne(c, ws, zero, ej, col);
    M.col(j) = col;
    ej(j) = 0.0;
  }
  return M;
}

Eigen::VectorXd coriolis_vector(const JointState& s, const ManipulatorParams& p) {
  check_state(s, p, "coriolis_vector");
  const ChainCoeffs c = ChainCoeffs::build(p);
  ChainWorkspace ws(p.n);
  const Eigen::Ref<const Eigen::VectorXd> td_ref(s.theta_dot);
  detail::cum_angles(c, s.theta, &td_ref, ws);
  Eigen::VectorXd tau(p.n);
  detail::rne(c, ws, s.theta_dot, Eigen::VectorXd::Zero(p.n), tau);
  return tau;
}

Eigen::VectorXd gravity_force(const Eigen::VectorXd& theta, const ManipulatorParams& p) {
  check_theta(theta, p, "gravity_force");
  if (!p.gravity_on)
    throw ContractViolation("gravity_force: gravity_on is false (operational orientation)");
  const ChainCoeffs c = ChainCoeffs::build(p);
  ChainWorkspace ws(p.n);
  detail::cum_angles(c, theta, nullptr, ws);
  Eigen::VectorXd out(p.n);
  detail::gravity_closed(c, ws, out);
  return out;
}

double gravity_potential(const Eigen::VectorXd& theta, const ManipulatorParams& p) {
  check_theta(theta, p, "gravity_potential");
  const ChainCoeffs c = ChainCoeffs::build(p);
  ChainWorkspace ws(p.n);
  detail::cum_angles(c, theta, nullptr, ws);
  return detail::gravity_potential_closed(c, ws);
}

ChainKinematics forward_kinematics(const Eigen::VectorXd& theta, const ManipulatorParams& p) {
  check_theta(theta, p, "forward_kinematics");
  ChainKinematics out;
  out.com.resize(2, p.n);
  double q = 0.0, px = 0.0, py = 0.0;
  for (int i = 0; i < p.n; ++i) {
    q += theta(i);
    const double cx = std::cos(q), sy = std::sin(q);
    out.com(0, i) = px + p.link_com_offset * cx;
    out.com(1, i) = py + p.link_com_offset * sy;
    px += p.link_length * cx;
    py += p.link_length * sy;
  }
  out.tip = Eigen::Vector2d(px, py);
  return out;
}

BendAngle tip_bend_angle(const Eigen::VectorXd& theta, const ManipulatorParams& p) {
  const ChainKinematics fk = forward_kinematics(theta, p);
  BendAngle out;
  const double reach = p.n * p.link_length;
  if (std::abs(fk.tip(0)) < 1e-12 * reach) {
    out.phi = std::copysign(M_PI / 2.0, fk.tip(1));
    out.on_e2_axis = true;
    return out;
  }
  out.phi = std::atan2(fk.tip(1), fk.tip(0));
  return out;
}

Eigen::VectorXd manipulator_accel(const JointState& s, const Eigen::VectorXd& f_act,
                                  const ManipulatorParams& p) {
  check_state(s, p, "manipulator_accel");
  if (f_act.size() != p.n || !f_act.allFinite())
    throw InvalidArgument("manipulator_accel: bad actuation force vector");

  const ChainCoeffs c = ChainCoeffs::build(p);
  ChainWorkspace ws(p.n);
  const Eigen::Ref<const Eigen::VectorXd> td_ref(s.theta_dot);
  detail::cum_angles(c, s.theta, &td_ref, ws);

  Eigen::VectorXd rhs = f_act - p.k * s.theta - p.sigma * s.theta_dot;
  Eigen::VectorXd bias(p.n);
  detail::rne(c, ws, s.theta_dot, Eigen::VectorXd::Zero(p.n), bias);
  rhs -= bias;
  if (p.gravity_on) {
    Eigen::VectorXd fg(p.n);
    detail::gravity_closed(c, ws, fg);
    rhs += fg;
  }

  detail::mass_matrix_closed(c, ws);
  ws.llt.compute(ws.M);
  if (ws.llt.info() != Eigen::Success)
    throw SingularDynamics("manipulator_accel: mass matrix factorization failed");
  return ws.llt.solve(rhs);
}

Eigen::VectorXd static_equilibrium(const ManipulatorParams& p) {
  p.validate();
  if (!p.gravity_on)
    throw ContractViolation("static_equilibrium: gravity_on is false");
  const ChainCoeffs c = ChainCoeffs::build(p);
  ChainWorkspace ws(p.n);
  Eigen::VectorXd th = Eigen::VectorXd::Zero(p.n);
  Eigen::VectorXd F(p.n), fg(p.n), step(p.n);
  Eigen::MatrixXd J(p.n, p.n);

  // The droop balances spring torque against the gravity generalized
  // force: k theta = f_g(theta), the stationary point of the total
  // potential 0.5 k theta'theta + U_g.
  auto residual = [&](const Eigen::VectorXd& t, Eigen::VectorXd& out) {
    detail::cum_angles(c, t, nullptr, ws);
    detail::gravity_closed(c, ws, fg);
    out = p.k * t - fg;
  };

  residual(th, F);
  for (int it = 0; it < 100; ++it) {
    detail::cum_angles(c, th, nullptr, ws);
    detail::gravity_hessian_closed(c, ws, J);
    J = -J;
    J += p.k * Eigen::MatrixXd::Identity(p.n, p.n);
    step = J.partialPivLu().solve(-F);
    double alpha = 1.0;
    Eigen::VectorXd Fn(p.n);
    for (int ls = 0; ls < 40; ++ls) {
      residual(th + alpha * step, Fn);
      if (Fn.norm() < F.norm()) break;
      alpha *= 0.5;
    }
    th += alpha * step;
    F.swap(Fn);
    if (step.cwiseAbs().maxCoeff() * alpha < 1e-14 || F.cwiseAbs().maxCoeff() < 1e-14) break;
  }
  if (F.cwiseAbs().maxCoeff() > 1e-10)
    throw SingularDynamics("static_equilibrium: Newton iteration did not converge");
  return th;
}

double mechanical_energy(const JointState& s, const ManipulatorParams& p) {
  check_state(s, p, "mechanical_energy");
  const Eigen::MatrixXd M = mass_matrix(s.theta, p);
  double e = 0.5 * s.theta_dot.dot(M * s.theta_dot) + 0.5 * p.k * s.theta.squaredNorm();
  if (p.gravity_on) e += gravity_potential(s.theta, p);
  return e;
}

}  // namespace softlimb
