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

#include "softlimb/chain.hpp"

#include <cmath>

namespace softlimb::detail {

ChainCoeffs ChainCoeffs::build(const ManipulatorParams& p) {
  p.validate();
  ChainCoeffs c;
  c.n = p.n;
  c.link_length = p.link_length;
  c.com_offset = p.link_com_offset;
  c.inertia = p.link_inertia;
  c.g = p.g;
  c.gdir = p.gravity_dir.normalized();
  c.gravity_on = p.gravity_on;
  c.k = p.k;
  c.sigma = p.sigma;

  const int n = p.n;
  const double l = p.link_length, lc = p.link_com_offset, m = p.link_mass;
  c.mass = m;
  // a_ij = l for j < i, lc for j = i; W(j,k) = m sum_{i >= max(j,k)} a_ij a_ik
  c.W.setZero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int kk = 0; kk < n; ++kk) {
      const int hi = std::max(j, kk);
      double s = 0.0;
      for (int i = hi; i < n; ++i) {
        const double aj = (j == i) ? lc : l;
        const double ak = (kk == i) ? lc : l;
        s += m * aj * ak;
      }
      c.W(j, kk) = s;
    }
  }

  c.gw.resize(n);
  for (int j = 0; j < n; ++j) c.gw(j) = m * (lc + (n - 1 - j) * l);
  return c;
}

void cum_angles(const ChainCoeffs& c, const Eigen::Ref<const Eigen::VectorXd>& theta,
                const Eigen::Ref<const Eigen::VectorXd>* theta_dot, ChainWorkspace& ws) {
  const int n = c.n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += theta(i);
    ws.q(i) = acc;
    ws.cq(i) = std::cos(acc);
    ws.sq(i) = std::sin(acc);
  }
  if (theta_dot != nullptr) {
    double accd = 0.0;
    for (int i = 0; i < n; ++i) {
      accd += (*theta_dot)(i);
      ws.qd(i) = accd;
    }
  } else {
    ws.qd.setZero();
  }
}

void congruence_lt_l(Eigen::MatrixXd& X) {
  const int n = static_cast<int>(X.rows());
  for (int j = 0; j < n; ++j)
    for (int kk = n - 2; kk >= 0; --kk) X(j, kk) += X(j, kk + 1);
  for (int kk = 0; kk < n; ++kk)
    for (int j = n - 2; j >= 0; --j) X(j, kk) += X(j + 1, kk);
}

void mass_matrix_closed(const ChainCoeffs& c, ChainWorkspace& ws) {
  const int n = c.n;
  for (int j = 0; j < n; ++j) {
    for (int kk = 0; kk < n; ++kk) {
      const double cjk = ws.cq(j) * ws.cq(kk) + ws.sq(j) * ws.sq(kk);
      ws.Mbar(j, kk) = c.W(j, kk) * cjk;
    }
    ws.Mbar(j, j) += c.inertia;
  }
  ws.M = ws.Mbar;
  congruence_lt_l(ws.M);
}

void coriolis_closed(const ChainCoeffs& c, ChainWorkspace& ws, Eigen::VectorXd& out) {
  const int n = c.n;
  // cbar_j = sq_j * sum_k W cq_k qd_k^2  -  cq_j * sum_k W sq_k qd_k^2
  for (int kk = 0; kk < n; ++kk) {
    const double qd2 = ws.qd(kk) * ws.qd(kk);
    ws.tmp(kk) = ws.cq(kk) * qd2;
    ws.tmp2(kk) = ws.sq(kk) * qd2;
  }
  for (int j = 0; j < n; ++j) {
    double a = 0.0, b = 0.0;
    for (int kk = 0; kk < n; ++kk) {
      a += c.W(j, kk) * ws.tmp(kk);
      b += c.W(j, kk) * ws.tmp2(kk);
    }
    out(j) = ws.sq(j) * a - ws.cq(j) * b;
  }
  for (int j = n - 2; j >= 0; --j) out(j) += out(j + 1);  // L^T
}

void gravity_closed(const ChainCoeffs& c, ChainWorkspace& ws, Eigen::VectorXd& out) {
  const int n = c.n;
  for (int j = 0; j < n; ++j)
    out(j) = c.g * c.gw(j) * (c.gdir(1) * ws.cq(j) - c.gdir(0) * ws.sq(j));
  for (int j = n - 2; j >= 0; --j) out(j) += out(j + 1);
}

double gravity_potential_closed(const ChainCoeffs& c, const ChainWorkspace& ws) {
  double u = 0.0;
  for (int j = 0; j < c.n; ++j)
    u -= c.g * c.gw(j) * (c.gdir(0) * ws.cq(j) + c.gdir(1) * ws.sq(j));
  return u;
}

void gravity_hessian_closed(const ChainCoeffs& c, ChainWorkspace& ws, Eigen::MatrixXd& out) {
  const int n = c.n;
  // d f_bar_j / d q_l = delta_jl * (-g gw_j (gdir1 cq_j + gdir2 sq_j))
  for (int j = 0; j < n; ++j)
    ws.tmp(j) = -c.g * c.gw(j) * (c.gdir(0) * ws.cq(j) + c.gdir(1) * ws.sq(j));
  // H(a,b) = sum_{j >= max(a,b)} d_j
  ws.tmp2(n - 1) = ws.tmp(n - 1);
  for (int j = n - 2; j >= 0; --j) ws.tmp2(j) = ws.tmp2(j + 1) + ws.tmp(j);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out(a, b) = ws.tmp2(std::max(a, b));
}

void accel_partials(const ChainCoeffs& c, ChainWorkspace& ws,
                    const Eigen::Ref<const Eigen::VectorXd>& theta_dot,
                    const Eigen::Ref<const Eigen::VectorXd>& thetadd,
                    Eigen::MatrixXd& dqdd_dth, Eigen::MatrixXd& dqdd_dthd,
                    Eigen::VectorXd& minv_one) {
  const int n = c.n;
  // vtil = L * thetadd (cumulative sums from the base)
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += thetadd(i);
    ws.tmp(i) = acc;  // vtil
  }
  // Absolute-coordinate G = d(cbar)/dq + d(Mbar vtil)/dq.
  // Precompute row sums sum_k W_jk c_jk qd_k^2 and sum_k W_jk s_jk vtil_k.
  for (int j = 0; j < n; ++j) {
    double diag_c = 0.0, diag_m = 0.0;
    for (int kk = 0; kk < n; ++kk) {
      const double cjk = ws.cq(j) * ws.cq(kk) + ws.sq(j) * ws.sq(kk);
      const double sjk = ws.sq(j) * ws.cq(kk) - ws.cq(j) * ws.sq(kk);
      const double qd2 = ws.qd(kk) * ws.qd(kk);
      diag_c += c.W(j, kk) * cjk * qd2;
      diag_m += c.W(j, kk) * sjk * ws.tmp(kk);
      ws.A(j, kk) = -c.W(j, kk) * cjk * qd2 + c.W(j, kk) * sjk * ws.tmp(kk);
    }
    ws.A(j, j) += diag_c - diag_m;
  }
  congruence_lt_l(ws.A);
  dqdd_dth = -ws.A;
  for (int i = 0; i < n; ++i) dqdd_dth(i, i) -= c.k;
  if (c.gravity_on) {
    gravity_hessian_closed(c, ws, ws.B);
    dqdd_dth += ws.B;
  }
  dqdd_dth = ws.llt.solve(dqdd_dth);

  // d cbar_j / d qd_l = 2 W_jl s_jl qd_l
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < n; ++l) {
      const double sjl = ws.sq(j) * ws.cq(l) - ws.cq(j) * ws.sq(l);
      ws.B(j, l) = -2.0 * c.W(j, l) * sjl * ws.qd(l);
    }
  }
  congruence_lt_l(ws.B);
  dqdd_dthd = ws.B;
  for (int i = 0; i < n; ++i) dqdd_dthd(i, i) -= c.sigma;
  dqdd_dthd = ws.llt.solve(dqdd_dthd);

  minv_one = ws.llt.solve(Eigen::VectorXd::Ones(n));
}

void rne(const ChainCoeffs& c, const ChainWorkspace& ws,
         const Eigen::Ref<const Eigen::VectorXd>& theta_dot,
         const Eigen::Ref<const Eigen::VectorXd>& thetadd, Eigen::VectorXd& tau) {
  const int n = c.n;
  const double l = c.link_length, lc = c.com_offset;
  Eigen::VectorXd alpha(n), om(n);
  double accd = 0.0, acca = 0.0;
  for (int i = 0; i < n; ++i) {
    accd += theta_dot(i);
    acca += thetadd(i);
    om(i) = accd;
    alpha(i) = acca;
  }
  // forward pass: COM accelerations; base is fixed.
  Eigen::VectorXd acx(n), acy(n);
  double apx = 0.0, apy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double ux = ws.cq(i), uy = ws.sq(i);
    const double w2 = om(i) * om(i);
    acx(i) = apx + alpha(i) * (-uy) * lc - w2 * ux * lc;
    acy(i) = apy + alpha(i) * ux * lc - w2 * uy * lc;
    apx += alpha(i) * (-uy) * l - w2 * ux * l;
    apy += alpha(i) * ux * l - w2 * uy * l;
  }
  // backward pass: joint forces and torques.
  const double mass = c.mass;
  double fxn = 0.0, fyn = 0.0, nn = 0.0;
  for (int i = n - 1; i >= 0; --i) {
    const double ux = ws.cq(i), uy = ws.sq(i);
    const double fx = mass * acx(i) + fxn;
    const double fy = mass * acy(i) + fyn;
    double ni = c.inertia * alpha(i) + nn;
    ni += lc * (ux * fy - uy * fx);                 // cross(lc u, F_i)
    ni -= (lc - l) * (ux * fyn - uy * fxn);         // cross((lc-l) u, F_{i+1})
    tau(i) = ni;
    fxn = fx;
    fyn = fy;
    nn = ni;
  }
}

}  // namespace softlimb::detail
