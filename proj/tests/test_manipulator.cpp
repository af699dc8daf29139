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
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "softlimb/chain.hpp"

namespace softlimb {
namespace {

ManipulatorParams default_params(int n = 5) {
  ManipulatorParams p;
  p.n = n;
  return p;
}

// Closed-form two-link planar arm with relative joint angles (textbook
// form): independent of the inverse-dynamics implementation under test.
struct TwoLinkOracle {
  double m1, m2, l1, lc1, lc2, I1, I2;

  Eigen::Matrix2d mass(double, double th2) const {
    const double c2 = std::cos(th2);
    Eigen::Matrix2d M;
    M(0, 0) = I1 + I2 + m1 * lc1 * lc1 + m2 * (l1 * l1 + lc2 * lc2 + 2.0 * l1 * lc2 * c2);
    M(0, 1) = I2 + m2 * (lc2 * lc2 + l1 * lc2 * c2);
    M(1, 0) = M(0, 1);
    M(1, 1) = I2 + m2 * lc2 * lc2;
    return M;
  }

  Eigen::Vector2d coriolis(double, double th2, double w1, double w2) const {
    const double h = m2 * l1 * lc2 * std::sin(th2);
    return {-h * (2.0 * w1 * w2 + w2 * w2), h * w1 * w1};
  }
};

TEST(MassMatrix, OneLinkPendulumFormula) {
  ManipulatorParams p = default_params(1);
  Eigen::VectorXd th = Eigen::VectorXd::Zero(1);
  const Eigen::MatrixXd M = mass_matrix(th, p);
  const double expected = p.link_mass * p.link_com_offset * p.link_com_offset + p.link_inertia;
  EXPECT_NEAR(M(0, 0), expected, 1e-15);
}

TEST(MassMatrix, MatchesTwoLinkClosedForm) {
  ManipulatorParams p = default_params(2);
  TwoLinkOracle oracle{p.link_mass, p.link_mass, p.link_length, p.link_com_offset,
                       p.link_com_offset, p.link_inertia, p.link_inertia};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.2, 1.2);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd th(2);
    th << dist(rng), dist(rng);
    const Eigen::MatrixXd M = mass_matrix(th, p);
    const Eigen::Matrix2d Mo = oracle.mass(th(0), th(1));
    EXPECT_LT((M - Mo).cwiseAbs().maxCoeff(), 1e-10) << "theta = " << th.transpose();
  }
  // zero configuration spot check
  Eigen::VectorXd th0 = Eigen::VectorXd::Zero(2);
  EXPECT_LT((mass_matrix(th0, p) - oracle.mass(0, 0)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(MassMatrix, SymmetricPositiveDefinite) {
  ManipulatorParams p = default_params(3);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd th(3);
    th << dist(rng), dist(rng), dist(rng);
    const Eigen::MatrixXd M = mass_matrix(th, p);
    const double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
    EXPECT_LE(asym, 1e-12 * M.cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  }
}

TEST(MassMatrix, RejectsNonFiniteInput) {
  ManipulatorParams p = default_params(2);
  Eigen::VectorXd th(2);
  th << 0.1, std::nan("");
  EXPECT_THROW(mass_matrix(th, p), InvalidArgument);
}

TEST(MassMatrix, AgreesWithClosedFormChain) {
  // inverse-dynamics columns vs the absolute-angle closed form
  ManipulatorParams p = default_params(6);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  detail::ChainCoeffs c = detail::ChainCoeffs::build(p);
  detail::ChainWorkspace ws(p.n);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd th(p.n);
    for (int i = 0; i < p.n; ++i) th(i) = dist(rng);
    detail::cum_angles(c, th, nullptr, ws);
    detail::mass_matrix_closed(c, ws);
    const Eigen::MatrixXd M = mass_matrix(th, p);
    EXPECT_LT((M - ws.M).cwiseAbs().maxCoeff(), 1e-13 * ws.M.cwiseAbs().maxCoeff());
  }
}

TEST(Coriolis, ZeroVelocityGivesZero) {
  ManipulatorParams p = default_params(4);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    JointState s;
    s.theta.resize(4);
    for (int i = 0; i < 4; ++i) s.theta(i) = dist(rng);
    s.theta_dot = Eigen::VectorXd::Zero(4);
    EXPECT_EQ(coriolis_vector(s, p).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Coriolis, MatchesTwoLinkClosedForm) {
  ManipulatorParams p = default_params(2);
  TwoLinkOracle oracle{p.link_mass, p.link_mass, p.link_length, p.link_com_offset,
                       p.link_com_offset, p.link_inertia, p.link_inertia};
  JointState s;
  s.theta.resize(2);
  s.theta << 0.3, -0.2;
  s.theta_dot.resize(2);
  s.theta_dot << 1.0, 0.5;
  const Eigen::VectorXd c = coriolis_vector(s, p);
  const Eigen::Vector2d co = oracle.coriolis(0.3, -0.2, 1.0, 0.5);
  EXPECT_LT((c - co).cwiseAbs().maxCoeff(), 1e-10);

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    s.theta << dist(rng), dist(rng);
    s.theta_dot << 2.0 * dist(rng), 2.0 * dist(rng);
    const Eigen::VectorXd ct = coriolis_vector(s, p);
    const Eigen::Vector2d cot = oracle.coriolis(s.theta(0), s.theta(1), s.theta_dot(0), s.theta_dot(1));
    EXPECT_LT((ct - cot).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Gravity, RequiresGravityFlag) {
  ManipulatorParams p = default_params(3);
  EXPECT_THROW(gravity_force(Eigen::VectorXd::Zero(3), p), ContractViolation);
}

TEST(Gravity, MatchesFiniteDifferencePotential) {
  ManipulatorParams p = default_params(5);
  p.gravity_on = true;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> dist(-0.8, 0.8);
  const double h = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd th(5);
    for (int i = 0; i < 5; ++i) th(i) = dist(rng);
    const Eigen::VectorXd fg = gravity_force(th, p);
    Eigen::VectorXd fd(5);
    for (int j = 0; j < 5; ++j) {
      Eigen::VectorXd tp = th, tm = th;
      tp(j) += h;
      tm(j) -= h;
      fd(j) = -(gravity_potential(tp, p) - gravity_potential(tm, p)) / (2.0 * h);
    }
    const double scale = std::max(fg.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((fg - fd).cwiseAbs().maxCoeff() / scale, 1e-6) << "trial " << trial;
  }
}

TEST(Gravity, AxialOrientationGivesZeroTorqueAtRest) {
  // chain hanging exactly along E1 with gravity along E1
  ManipulatorParams p = default_params(4);
  p.gravity_on = true;
  p.gravity_dir = Eigen::Vector2d(1.0, 0.0);
  const Eigen::VectorXd fg = gravity_force(Eigen::VectorXd::Zero(4), p);
  EXPECT_LT(fg.cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Gravity, LinearInG) {
  ManipulatorParams p = default_params(3);
  p.gravity_on = true;
  Eigen::VectorXd th(3);
  th << 0.2, -0.1, 0.3;
  const Eigen::VectorXd f1 = gravity_force(th, p);
  p.g *= 2.0;
  const Eigen::VectorXd f2 = gravity_force(th, p);
  EXPECT_LT((f2 - 2.0 * f1).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Gravity, OneLinkPendulumTorque) {
  ManipulatorParams p = default_params(1);
  p.gravity_on = true;  // default transverse direction (0, 1)
  Eigen::VectorXd th(1);
  th << 0.4;
  const Eigen::VectorXd fg = gravity_force(th, p);
  // U = -m g lc sin(q) * gdir_y ... => torque = m g lc cos(theta)
  const double expected = p.link_mass * p.g * p.link_com_offset * std::cos(0.4);
  EXPECT_NEAR(fg(0), expected, 1e-14);
}

TEST(ForwardKinematics, StraightChainTip) {
  ManipulatorParams p = default_params(5);
  const ChainKinematics fk = forward_kinematics(Eigen::VectorXd::Zero(5), p);
  EXPECT_NEAR(fk.tip(0), 5 * p.link_length, 1e-15);
  EXPECT_NEAR(fk.tip(1), 0.0, 1e-15);
}

TEST(ForwardKinematics, QuarterTurnSingleLink) {
  ManipulatorParams p = default_params(1);
  Eigen::VectorXd th(1);
  th << M_PI / 2.0;
  const ChainKinematics fk = forward_kinematics(th, p);
  EXPECT_NEAR(fk.tip(0), 0.0, 1e-15);
  EXPECT_NEAR(fk.tip(1), p.link_length, 1e-15);
}

TEST(ForwardKinematics, ReachabilityBound) {
  ManipulatorParams p = default_params(6);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd th(6);
    for (int i = 0; i < 6; ++i) th(i) = dist(rng);
    const ChainKinematics fk = forward_kinematics(th, p);
    EXPECT_LE(fk.tip.norm(), 6 * p.link_length + 1e-12);
  }
}

TEST(TipBendAngle, StraightChainIsZero) {
  ManipulatorParams p = default_params(5);
  const BendAngle b = tip_bend_angle(Eigen::VectorXd::Zero(5), p);
  EXPECT_EQ(b.phi, 0.0);
  EXPECT_FALSE(b.on_e2_axis);
}

TEST(TipBendAngle, MirrorSymmetry) {
  ManipulatorParams p = default_params(5);
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> dist(-0.3, 0.3);
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::VectorXd th(5);
    for (int i = 0; i < 5; ++i) th(i) = dist(rng);
    const BendAngle a = tip_bend_angle(th, p);
    const BendAngle b = tip_bend_angle((-th).eval(), p);
    EXPECT_NEAR(a.phi, -b.phi, 1e-13);
  }
}

TEST(TipBendAngle, DegenerateTipOnE2Axis) {
  ManipulatorParams p = default_params(2);
  Eigen::VectorXd th(2);
  th << M_PI / 2.0, 0.0;  // both links along E2
  const BendAngle b = tip_bend_angle(th, p);
  EXPECT_TRUE(b.on_e2_axis);
  EXPECT_NEAR(b.phi, M_PI / 2.0, 1e-15);
}

TEST(Accel, EquilibriumIsZero) {
  ManipulatorParams p = default_params(5);
  JointState s{Eigen::VectorXd::Zero(5), Eigen::VectorXd::Zero(5)};
  const Eigen::VectorXd a = manipulator_accel(s, Eigen::VectorXd::Zero(5), p);
  EXPECT_LT(a.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Accel, OneLinkScalarFormula) {
  ManipulatorParams p = default_params(1);
  JointState s;
  s.theta.resize(1);
  s.theta << 0.2;
  s.theta_dot.resize(1);
  s.theta_dot << -0.4;
  Eigen::VectorXd f(1);
  f << 0.05;
  const Eigen::VectorXd a = manipulator_accel(s, f, p);
  const double denom = p.link_mass * p.link_com_offset * p.link_com_offset + p.link_inertia;
  const double expected = (0.05 - p.k * 0.2 - p.sigma * (-0.4)) / denom;
  EXPECT_NEAR(a(0), expected, 1e-9 * std::abs(expected));
}

TEST(Accel, EnergyRateIdentity) {
  // d/dt kinetic+spring energy equals applied power in an undamped rollout
  ManipulatorParams p = default_params(4);
  p.sigma = 0.0;
  Eigen::VectorXd f(4);
  f << 0.02, -0.01, 0.015, 0.005;
  JointState s;
  s.theta.resize(4);
  s.theta << 0.1, -0.05, 0.2, 0.02;
  s.theta_dot.resize(4);
  s.theta_dot << 0.3, 0.1, -0.2, 0.05;

  const double dt = 1e-5;
  const int steps = 2000;
  double work = 0.0;
  const double e0 = mechanical_energy(s, p);
  for (int i = 0; i < steps; ++i) {
    // RK4 on (theta, theta_dot) with constant f, accumulating applied power
    auto deriv = [&](const JointState& st) {
      JointState d;
      d.theta = st.theta_dot;
      d.theta_dot = manipulator_accel(st, f, p);
      return d;
    };
    const JointState d1 = deriv(s);
    JointState s2{s.theta + 0.5 * dt * d1.theta, s.theta_dot + 0.5 * dt * d1.theta_dot};
    const JointState d2 = deriv(s2);
    JointState s3{s.theta + 0.5 * dt * d2.theta, s.theta_dot + 0.5 * dt * d2.theta_dot};
    const JointState d3 = deriv(s3);
    JointState s4{s.theta + dt * d3.theta, s.theta_dot + dt * d3.theta_dot};
    const JointState d4 = deriv(s4);
    // Simpson-consistent power accumulation across the step
    work += dt / 6.0 *
            (f.dot(d1.theta) + 2.0 * f.dot(d2.theta) + 2.0 * f.dot(d3.theta) + f.dot(d4.theta));
    s.theta += dt / 6.0 * (d1.theta + 2.0 * d2.theta + 2.0 * d3.theta + d4.theta);
    s.theta_dot += dt / 6.0 * (d1.theta_dot + 2.0 * d2.theta_dot + 2.0 * d3.theta_dot + d4.theta_dot);
  }
  const double e1 = mechanical_energy(s, p);
  EXPECT_NEAR(e1 - e0, work, 1e-8 * std::max(1e-6, std::abs(work)));
}

TEST(Accel, StaticDroopEquilibrium) {
  ManipulatorParams p = default_params(5);
  p.gravity_on = true;
  const Eigen::VectorXd th_eq = static_equilibrium(p);
  JointState s{th_eq, Eigen::VectorXd::Zero(5)};
  const Eigen::VectorXd a = manipulator_accel(s, Eigen::VectorXd::Zero(5), p);
  EXPECT_LT(a.cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Params, ValidationCatchesBadValues) {
  ManipulatorParams p = default_params();
  p.k = 0.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = default_params();
  p.n = 0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = default_params();
  p.link_mass = -1.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
}

}  // namespace
}  // namespace softlimb
