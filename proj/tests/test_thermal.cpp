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
#include <random>

#include <gtest/gtest.h>

namespace softlimb {
namespace {

ThermalParams params() {
  ThermalParams p;
  p.a1 = -0.06;
  p.a2 = 5.0;
  p.a3 = 0.25;
  p.beta = 4.5e-3;
  p.T0 = 25.0;
  return p;
}

// Closed-form solution of Tdot = a1 (T - T0) + a2 D for constant D.
double wire_temp_exact(double t, double T_init, double D, const ThermalParams& p) {
  const double Tss = p.T0 - p.a2 * D / p.a1;
  return Tss + (T_init - Tss) * std::exp(p.a1 * t);
}

// Simple RK4 on the scalar wire ODE (test-local integrator).
double wire_temp_rk4(double t_end, double dt, double T_init, double D, const ThermalParams& p) {
  double T = T_init;
  const auto f = [&](double Tv) { return wire_temp_derivative(Tv, D, p); };
  const int steps = static_cast<int>(std::round(t_end / dt));
  for (int i = 0; i < steps; ++i) {
    const double k1 = f(T);
    const double k2 = f(T + 0.5 * dt * k1);
    const double k3 = f(T + 0.5 * dt * k2);
    const double k4 = f(T + dt * k3);
    T += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return T;
}

TEST(WireTemp, AmbientRestHasZeroDerivative) {
  const ThermalParams p = params();
  EXPECT_EQ(wire_temp_derivative(p.T0, 0.0, p), 0.0);
}

TEST(WireTemp, SteadyStateFixedPoint) {
  const ThermalParams p = params();
  const double Tss = p.T0 - p.a2 / p.a1;  // D = 1
  EXPECT_NEAR(wire_temp_derivative(Tss, 1.0, p), 0.0, 1e-12);
}

TEST(WireTemp, StepResponseMatchesClosedForm) {
  const ThermalParams p = params();
  for (double D : {0.2, 0.6, 1.0}) {
    const double Trk = wire_temp_rk4(20.0, 0.01, p.T0, D, p);
    const double Tex = wire_temp_exact(20.0, p.T0, D, p);
    EXPECT_NEAR(Trk, Tex, 1e-9);
  }
}

TEST(WireTemp, RejectsDutyOutsideBox) {
  const ThermalParams p = params();
  EXPECT_THROW(wire_temp_derivative(30.0, -0.1, p), InvalidArgument);
  EXPECT_THROW(wire_temp_derivative(30.0, 1.1, p), InvalidArgument);
}

TEST(MeasuredTemp, LagEquilibrium) {
  const ThermalParams p = params();
  EXPECT_EQ(measured_temp_derivative(40.0, 40.0, p), 0.0);
}

TEST(MeasuredTemp, RelaxesTowardWireWithRateA3) {
  const ThermalParams p = params();
  // constant T: V(t) = T + (V0 - T) exp(-a3 t); check the half-life
  const double T = 60.0, V0 = 25.0;
  double V = V0;
  const double dt = 0.001;
  const double t_half = std::log(2.0) / p.a3;
  const int steps = static_cast<int>(std::round(t_half / dt));
  const double t_end = steps * dt;
  const auto f = [&](double Vv) { return measured_temp_derivative(Vv, T, p); };
  for (int i = 0; i < steps; ++i) {
    const double k1 = f(V);
    const double k2 = f(V + 0.5 * dt * k1);
    const double k3 = f(V + 0.5 * dt * k2);
    const double k4 = f(V + dt * k3);
    V += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  EXPECT_NEAR(V - T, (V0 - T) * std::exp(-p.a3 * t_end), 1e-9);
  EXPECT_NEAR((V0 - T) * std::exp(-p.a3 * t_half), 0.5 * (V0 - T), 1e-12);
}

TEST(MeasuredTemp, FastLagTracksWire) {
  ThermalParams p = params();
  p.a3 = 5.0;
  double V = p.T0;
  const double T = 80.0;
  const double dt = 0.001;
  const int steps = static_cast<int>(std::round(5.0 / p.a3 / dt));
  for (int i = 0; i < steps; ++i) {
    const double k1 = measured_temp_derivative(V, T, p);
    const double k2 = measured_temp_derivative(V + 0.5 * dt * k1, T, p);
    const double k3 = measured_temp_derivative(V + 0.5 * dt * k2, T, p);
    const double k4 = measured_temp_derivative(V + dt * k3, T, p);
    V += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  EXPECT_LT(std::abs(V - T) / std::abs(T - p.T0), 0.01);
}

TEST(WireRecovery, EquilibriumReading) {
  const ThermalParams p = params();
  EXPECT_EQ(wire_temp_from_measurement(50.0, 0.0, p), 50.0);
}

TEST(WireRecovery, DirectArithmetic) {
  ThermalParams p = params();
  p.a3 = 0.5;
  // V = 50, Vdot = 2 under the stable relaxation convention: the reading
  // is rising, so the wire must be hotter: T = V + Vdot/a3.
  EXPECT_NEAR(wire_temp_from_measurement(50.0, 2.0, p), 54.0, 1e-15);
}

TEST(WireRecovery, RoundTripThroughSimulation) {
  // Simulate the coupled (T, V) pair, then recover T from (V, Vdot).
  const ThermalParams p = params();
  double T = p.T0, V = p.T0;
  const double dt = 0.005, D = 0.7;
  auto f = [&](double Tv, double Vv) {
    return std::pair<double, double>(wire_temp_derivative(Tv, D, p),
                                     measured_temp_derivative(Vv, Tv, p));
  };
  for (int i = 0; i < 4000; ++i) {
    auto [kT1, kV1] = f(T, V);
    auto [kT2, kV2] = f(T + 0.5 * dt * kT1, V + 0.5 * dt * kV1);
    auto [kT3, kV3] = f(T + 0.5 * dt * kT2, V + 0.5 * dt * kV2);
    auto [kT4, kV4] = f(T + dt * kT3, V + dt * kV3);
    T += dt / 6.0 * (kT1 + 2 * kT2 + 2 * kT3 + kT4);
    V += dt / 6.0 * (kV1 + 2 * kV2 + 2 * kV3 + kV4);
    const double Vdot = measured_temp_derivative(V, T, p);
    EXPECT_NEAR(wire_temp_from_measurement(V, Vdot, p), T, 1e-10);
  }
}

TEST(ActuationForce, AmbientGivesZero) {
  const ThermalParams p = params();
  const Eigen::VectorXd f = actuation_force(p.T0, p.T0, p, p, 4);
  EXPECT_EQ(f.cwiseAbs().maxCoeff(), 0.0);
}

TEST(ActuationForce, AntagonisticCancellation) {
  const ThermalParams p = params();
  const Eigen::VectorXd f = actuation_force(60.0, 60.0, p, p, 5);
  EXPECT_LT(f.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ActuationForce, DirectArithmetic) {
  ThermalParams pl = params(), pr = params();
  pl.beta = 0.001;
  pr.beta = 0.001;
  const Eigen::VectorXd f = actuation_force(pl.T0 + 10.0, pr.T0 + 40.0, pl, pr, 3);
  EXPECT_EQ(f.size(), 3);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(f(i), 0.03, 1e-15);
}

TEST(ActuationForce, AffineSlopeEqualsBeta) {
  const ThermalParams p = params();
  const double h = 1.0;
  const Eigen::VectorXd f0 = actuation_force(40.0, 55.0, p, p, 2);
  const Eigen::VectorXd fr = actuation_force(40.0, 55.0 + h, p, p, 2);
  const Eigen::VectorXd fl = actuation_force(40.0 + h, 55.0, p, p, 2);
  EXPECT_NEAR((fr(0) - f0(0)) / h, p.beta, 1e-12);
  EXPECT_NEAR((fl(0) - f0(0)) / h, -p.beta, 1e-12);
}

TEST(Superposition, WireResponseIsLinearInDuty) {
  const ThermalParams p = params();
  const double D1 = 0.3, D2 = 0.45;
  const double t = 30.0, dt = 0.01;
  const double Ta = wire_temp_rk4(t, dt, p.T0, D1, p);
  const double Tb = wire_temp_rk4(t, dt, p.T0, D2, p);
  const double Tc = wire_temp_rk4(t, dt, p.T0, D1 + D2, p);
  EXPECT_NEAR(Tc - p.T0, (Ta - p.T0) + (Tb - p.T0), 1e-9);
}

TEST(ForwardInvariance, WireStaysInBox) {
  const ThermalParams p = params();
  const double Tmax = p.T0 - p.a2 / p.a1;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double T = p.T0;
  const double dt = 0.01;
  for (int i = 0; i < 20000; ++i) {
    const double D = dist(rng);
    const double k1 = wire_temp_derivative(T, D, p);
    const double k2 = wire_temp_derivative(T + 0.5 * dt * k1, D, p);
    const double k3 = wire_temp_derivative(T + 0.5 * dt * k2, D, p);
    const double k4 = wire_temp_derivative(T + dt * k3, D, p);
    T += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    EXPECT_GE(T, p.T0 - 1e-9);
    EXPECT_LE(T, Tmax + 1e-9);
  }
}

TEST(Params, Validation) {
  ThermalParams p = params();
  p.a1 = 0.01;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = params();
  p.a3 = -0.2;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = params();
  p.beta = 0.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
}

}  // namespace
}  // namespace softlimb
