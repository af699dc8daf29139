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

#ifndef SOFTLIMB_CHAIN_HPP_
#define SOFTLIMB_CHAIN_HPP_

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "softlimb/manipulator.hpp"

namespace softlimb::detail {

// Precomputed coefficients of the planar chain in absolute link angles
// q = L theta (L lower-triangular ones). With u(q) = (cos q, sin q) and
// a_ij = l for j < i, lc for j = i:
//
//   Mbar(j,k) = W(j,k) cos(q_j - q_k) + I delta_jk
//   cbar_j    = sum_k W(j,k) sin(q_j - q_k) qdot_k^2
//   U_g       = -g sum_j gw_j (gdir . u(q_j))
//
// and relative-coordinate quantities follow by congruence with L. These
// closed forms back the simulator hot path and the exact dynamics
// Jacobians; they agree with the inverse-dynamics formulation to roundoff.
struct ChainCoeffs {
  int n = 0;
  double link_length = 0.0;
  double com_offset = 0.0;
  double mass = 0.0;
  double inertia = 0.0;
  Eigen::MatrixXd W;    // n x n mass coupling weights
  Eigen::VectorXd gw;   // gravity weights m (lc + (n-1-j) l)
  double g = 0.0;
  Eigen::Vector2d gdir = Eigen::Vector2d::Zero();
  bool gravity_on = false;
  double k = 0.0;
  double sigma = 0.0;

  static ChainCoeffs build(const ManipulatorParams& p);
};

// Scratch space for allocation-free chain evaluations. One instance per
// thread of execution; all chain routines below are pure given (coeffs,
// inputs) and only mutate the workspace passed in.
struct ChainWorkspace {
  Eigen::VectorXd q, cq, sq;       // cumulative angles and their cos/sin
  Eigen::VectorXd qd;              // cumulative rates
  Eigen::VectorXd tmp, tmp2, rhs;  // length n
  Eigen::MatrixXd Mbar, M, A, B;   // n x n
  Eigen::LLT<Eigen::MatrixXd> llt;

  explicit ChainWorkspace(int n)
      : q(n), cq(n), sq(n), qd(n), tmp(n), tmp2(n), rhs(n),
        Mbar(n, n), M(n, n), A(n, n), B(n, n), llt(n) {}
};

// Fills ws.q/cq/sq (and ws.qd when theta_dot != nullptr).
void cum_angles(const ChainCoeffs& c, const Eigen::Ref<const Eigen::VectorXd>& theta,
                const Eigen::Ref<const Eigen::VectorXd>* theta_dot, ChainWorkspace& ws);

// Relative-coordinate mass matrix into ws.M (also fills ws.Mbar).
// Requires cum_angles.
void mass_matrix_closed(const ChainCoeffs& c, ChainWorkspace& ws);

// Relative-coordinate Coriolis vector C(theta,thetad) thetad into `out`.
// Requires cum_angles with rates.
void coriolis_closed(const ChainCoeffs& c, ChainWorkspace& ws, Eigen::VectorXd& out);

// Gravity generalized force -grad U_g into `out`. Requires cum_angles.
void gravity_closed(const ChainCoeffs& c, ChainWorkspace& ws, Eigen::VectorXd& out);

// Gravity potential U_g. Requires cum_angles.
double gravity_potential_closed(const ChainCoeffs& c, const ChainWorkspace& ws);

// d f_g / d theta (n x n, symmetric) into `out`. Requires cum_angles.
void gravity_hessian_closed(const ChainCoeffs& c, ChainWorkspace& ws, Eigen::MatrixXd& out);

// Congruence Y = L^T X L computed with suffix sums, in place.
void congruence_lt_l(Eigen::MatrixXd& X);

// Partial derivatives of the joint accelerations. Given theta, theta_dot,
// the acceleration thetadd and a factorized mass matrix in ws.llt
// (mass_matrix_closed must have run), fills
//   dqdd_dth  = d thetadd / d theta      (n x n)
//   dqdd_dthd = d thetadd / d theta_dot  (n x n)
//   minv_one  = M^{-1} 1_n
// Gravity terms are included when coeffs.gravity_on.
void accel_partials(const ChainCoeffs& c, ChainWorkspace& ws,
                    const Eigen::Ref<const Eigen::VectorXd>& theta_dot,
                    const Eigen::Ref<const Eigen::VectorXd>& thetadd,
                    Eigen::MatrixXd& dqdd_dth, Eigen::MatrixXd& dqdd_dthd,
                    Eigen::VectorXd& minv_one);

// Inverse dynamics tau = M(theta) thetadd + C(theta, thetad) thetad of the
// bare chain (no springs, damping, or gravity), by a recursive
// Newton-Euler pass over the links. Requires cum_angles with rates.
void rne(const ChainCoeffs& c, const ChainWorkspace& ws,
         const Eigen::Ref<const Eigen::VectorXd>& theta_dot,
         const Eigen::Ref<const Eigen::VectorXd>& thetadd, Eigen::VectorXd& tau);

}  // namespace softlimb::detail

#endif  // SOFTLIMB_CHAIN_HPP_
