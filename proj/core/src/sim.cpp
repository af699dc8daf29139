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

#include "softlimb/sim.hpp"

#include <cmath>

namespace softlimb {

void SimConfig::validate() const {
  if (!(dt_integration > 0.0) || !(dt_sample > 0.0) || dt_integration > dt_sample)
    throw InvalidArgument("SimConfig: need 0 < dt_integration <= dt_sample");
  const double ratio = dt_sample / dt_integration;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio)
    throw InvalidArgument("SimConfig: dt_sample must be an integer multiple of dt_integration");
}

int SimConfig::substeps() const {
  validate();
  return static_cast<int>(std::round(dt_sample / dt_integration));
}

SimModel::SimModel(const ModelParams& params)
    : params_(params),
      coeffs_(detail::ChainCoeffs::build(params.manip)),
      ws_(params.manip.n),
      k1_(dim()), k2_(dim()), k3_(dim()), k4_(dim()), xt_(dim()),
      thetadd_(n()), bias_(n()), fg_(n()), one_(Eigen::VectorXd::Ones(n())),
      dth_(n(), n()), dthd_(n(), n()), minv_one_(n()) {
  params_.left.validate();
  params_.right.validate();
}

Eigen::Vector2d SimModel::wire_temps(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const int nn = coeffs_.n;
  return {x(nn) + x(2 * nn + 2) / params_.left.a3,
          x(nn + 1) + x(2 * nn + 3) / params_.right.a3};
}

double SimModel::phi(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  double q = 0.0, px = 0.0, py = 0.0;
  for (int i = 0; i < coeffs_.n; ++i) {
    q += x(i);
    px += coeffs_.link_length * std::cos(q);
    py += coeffs_.link_length * std::sin(q);
  }
  if (std::abs(px) < 1e-12 * coeffs_.n * coeffs_.link_length)
    return std::copysign(M_PI / 2.0, py);
  return std::atan2(py, px);
}

void SimModel::deriv(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Vector2d& u,
                     Eigen::VectorXd& dx) {
  const int nn = coeffs_.n;
  const ThermalParams& tl = params_.left;
  const ThermalParams& tr = params_.right;

  const double Vl = x(nn), Vr = x(nn + 1);
  const double Vdl = x(2 * nn + 2), Vdr = x(2 * nn + 3);
  const double Tl = Vl + Vdl / tl.a3;
  const double Tr = Vr + Vdr / tr.a3;

  const auto theta = x.segment(0, nn);
  const auto theta_dot = x.segment(nn + 2, nn);

  // mechanical block
  const double f_act = tr.beta * (Tr - tr.T0) - tl.beta * (Tl - tl.T0);
  const Eigen::Ref<const Eigen::VectorXd> thetad_ref(theta_dot);
  detail::cum_angles(coeffs_, theta, &thetad_ref, ws_);
  detail::coriolis_closed(coeffs_, ws_, bias_);
  ws_.rhs.setConstant(f_act);
  ws_.rhs -= bias_;
  ws_.rhs -= coeffs_.k * theta;
  ws_.rhs -= coeffs_.sigma * theta_dot;
  if (coeffs_.gravity_on) {
    detail::gravity_closed(coeffs_, ws_, fg_);
    ws_.rhs += fg_;
  }
  detail::mass_matrix_closed(coeffs_, ws_);
  ws_.llt.compute(ws_.M);
  if (ws_.llt.info() != Eigen::Success)
    throw SingularDynamics("SimModel::deriv: mass matrix factorization failed");
  thetadd_ = ws_.llt.solve(ws_.rhs);

  // thermal block
  const double Tdl = tl.a1 * (Tl - tl.T0) + tl.a2 * u(0);
  const double Tdr = tr.a1 * (Tr - tr.T0) + tr.a2 * u(1);

  dx.segment(0, nn) = theta_dot;
  dx(nn) = Vdl;
  dx(nn + 1) = Vdr;
  dx.segment(nn + 2, nn) = thetadd_;
  dx(2 * nn + 2) = tl.a3 * (Tdl - Vdl);
  dx(2 * nn + 3) = tr.a3 * (Tdr - Vdr);
}

void SimModel::rk4_substep(Eigen::VectorXd& x, const Eigen::Vector2d& u, double dt) {
  deriv(x, u, k1_);
  xt_ = x + (0.5 * dt) * k1_;
  deriv(xt_, u, k2_);
  xt_ = x + (0.5 * dt) * k2_;
  deriv(xt_, u, k3_);
  xt_ = x + dt * k3_;
  deriv(xt_, u, k4_);
  x += (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
}

void SimModel::step(Eigen::VectorXd& x, const Eigen::Vector2d& u, double dt_sample, int substeps,
                    long step_base) {
  const double h = dt_sample / substeps;
  for (int s = 0; s < substeps; ++s) {
    rk4_substep(x, u, h);
    if (!x.allFinite())
      throw IntegrationDiverged("SimModel::step: state diverged", step_base + s);
  }
}

void SimModel::deriv_jacobian(const Eigen::Ref<const Eigen::VectorXd>& x,
                              const Eigen::Vector2d& u, Eigen::MatrixXd& Jx,
                              Eigen::MatrixXd& Ju) {
  (void)u;  // the continuous dynamics are affine in u with constant gain
  const int nn = coeffs_.n;
  const int d = dim();
  const ThermalParams& tl = params_.left;
  const ThermalParams& tr = params_.right;

  // The factorization and thetadd from deriv() at this state are required.
  Eigen::VectorXd dx(d);
  deriv(x, u, dx);

  Jx.setZero(d, d);
  Ju.setZero(d, 2);

  // d theta / dt rows
  Jx.block(0, nn + 2, nn, nn).setIdentity();
  // dV/dt rows
  Jx(nn, 2 * nn + 2) = 1.0;
  Jx(nn + 1, 2 * nn + 3) = 1.0;

  // thetadd rows
  detail::accel_partials(coeffs_, ws_, x.segment(nn + 2, nn), thetadd_, dth_, dthd_, minv_one_);
  Jx.block(nn + 2, 0, nn, nn) = dth_;
  Jx.block(nn + 2, nn + 2, nn, nn) = dthd_;
  // via wire temperatures: T_l = V_l + Vdot_l / a3_l (left enters with -beta)
  Jx.block(nn + 2, nn, nn, 1) = -tl.beta * minv_one_;
  Jx.block(nn + 2, 2 * nn + 2, nn, 1) = (-tl.beta / tl.a3) * minv_one_;
  Jx.block(nn + 2, nn + 1, nn, 1) = tr.beta * minv_one_;
  Jx.block(nn + 2, 2 * nn + 3, nn, 1) = (tr.beta / tr.a3) * minv_one_;

  // Vddot rows: Vdd = a3 (a1 (T - T0) + a2 D - Vdot), T = V + Vdot/a3
  Jx(2 * nn + 2, nn) = tl.a3 * tl.a1;
  Jx(2 * nn + 2, 2 * nn + 2) = tl.a1 - tl.a3;
  Jx(2 * nn + 3, nn + 1) = tr.a3 * tr.a1;
  Jx(2 * nn + 3, 2 * nn + 3) = tr.a1 - tr.a3;

  Ju(2 * nn + 2, 0) = tl.a3 * tl.a2;
  Ju(2 * nn + 3, 1) = tr.a3 * tr.a2;
}

FullState state_derivative(const FullState& x, const ControlInput& u,
                           const ManipulatorParams& mp, const ThermalParams& tp_l,
                           const ThermalParams& tp_r) {
  u.validate();
  if (!x.x.allFinite()) throw InvalidArgument("state_derivative: non-finite state");
  SimModel model(ModelParams{mp, tp_l, tp_r});
  FullState out;
  out.n = x.n;
  out.x.resize(x.x.size());
  model.deriv(x.x, u.vec(), out.x);
  return out;
}

FullState discrete_step(const FullState& x, const ControlInput& u, const SimConfig& cfg,
                        const ModelParams& params) {
  u.validate();
  if (!x.x.allFinite()) throw InvalidArgument("discrete_step: non-finite state");
  SimModel model(params);
  FullState out = x;
  model.step(out.x, u.vec(), cfg.dt_sample, cfg.substeps());
  return out;
}

RolloutResult rollout(const FullState& x0, const std::vector<ControlInput>& u_seq,
                      const SimConfig& cfg, const ModelParams& params) {
  if (u_seq.empty()) throw InvalidArgument("rollout: empty input sequence");
  const int substeps = cfg.substeps();
  SimModel model(params);

  RolloutResult out;
  out.states.reserve(u_seq.size() + 1);
  out.phi.resize(static_cast<Eigen::Index>(u_seq.size()) + 1);
  out.states.push_back(x0);
  out.phi(0) = model.phi(x0.x);

  Eigen::VectorXd x = x0.x;
  for (size_t k = 0; k < u_seq.size(); ++k) {
    u_seq[k].validate();
    try {
      model.step(x, u_seq[k].vec(), cfg.dt_sample, substeps);
    } catch (const IntegrationDiverged&) {
      throw IntegrationDiverged("rollout: state diverged", static_cast<long>(k));
    }
    out.states.push_back(FullState(x, x0.n));
    out.phi(static_cast<Eigen::Index>(k) + 1) = model.phi(x);
  }
  return out;
}

}  // namespace softlimb
