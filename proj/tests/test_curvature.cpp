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

#include "softlimb/curvature.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "softlimb/manipulator.hpp"

namespace softlimb {
namespace {

constexpr double kDeg = M_PI / 180.0;

TEST(ConstantCurvature, ZeroAndArithmetic) {
  EXPECT_EQ(theta_from_phi_cc(0.0, 4).cwiseAbs().maxCoeff(), 0.0);
  const Eigen::VectorXd th = theta_from_phi_cc(20.0 * kDeg, 3);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(th(i), 10.0 * kDeg, 1e-15);
}

TEST(ConstantCurvature, TipAngleRoundTrip) {
  ManipulatorParams p;
  p.n = 5;
  for (double deg : {-45.0, -30.0, -10.0, 5.0, 20.0, 35.0, 45.0}) {
    const double phi = deg * kDeg;
    const double phi_rt = tip_bend_angle(theta_from_phi_cc(phi, 5), p).phi;
    EXPECT_LT(std::abs(phi_rt - phi), 0.02 * std::abs(phi)) << deg;
  }
}

TEST(ConstantCurvature, SmallAngleConsistency) {
  // uniform profile theta_i = 2 phi0/(n+1) reproduces phi0 within 2 % for
  // phi0 up to 20 degrees at n = 5
  ManipulatorParams p;
  p.n = 5;
  for (double deg = 2.0; deg <= 20.0; deg += 2.0) {
    const double phi0 = deg * kDeg;
    const Eigen::VectorXd th = Eigen::VectorXd::Constant(5, 2.0 * phi0 / 6.0);
    EXPECT_LT(std::abs(tip_bend_angle(th, p).phi - phi0), 0.02 * phi0);
  }
}

TEST(SensorMap, Halving) {
  EXPECT_EQ(phi_from_sensor(0.0), 0.0);
  EXPECT_NEAR(phi_from_sensor(90.0 * kDeg), 45.0 * kDeg, 1e-15);
  EXPECT_NEAR(phi_from_sensor(-30.0 * kDeg), -15.0 * kDeg, 1e-15);
}

TEST(BeamProfile, ThreeLinkWeights) {
  // weights (9, 4, 1) / (4 + 1 + 0)
  const Eigen::VectorXd th = beam_theta_distribution(10.0 * kDeg, 1.0, 3);
  EXPECT_NEAR(th(0), 10.0 * kDeg * 9.0 / 5.0, 1e-15);
  EXPECT_NEAR(th(1), 10.0 * kDeg * 4.0 / 5.0, 1e-15);
  EXPECT_NEAR(th(2), 10.0 * kDeg * 1.0 / 5.0, 1e-15);
}

TEST(BeamProfile, SingleLinkFallback) {
  const Eigen::VectorXd th = beam_theta_distribution(0.2, 1.0, 1);
  EXPECT_EQ(th.size(), 1);
  EXPECT_NEAR(th(0), 0.2, 1e-15);
}

TEST(BeamProfile, MonotoneDecreasing) {
  const Eigen::VectorXd th = beam_theta_distribution(0.3, 1.22, 6);
  for (int i = 1; i < 6; ++i) EXPECT_LT(th(i), th(i - 1));
}

TEST(BeamProfile, CorrectionFactorScalesLinearly) {
  const Eigen::VectorXd a = beam_theta_distribution(0.25, 1.0, 5);
  const Eigen::VectorXd b = beam_theta_distribution(0.25, 1.22, 5);
  EXPECT_LT((b - 1.22 * a).cwiseAbs().maxCoeff(), 1e-15);
}

}  // namespace
}  // namespace softlimb
