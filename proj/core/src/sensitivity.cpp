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

#include "softlimb/sensitivity.hpp"

namespace softlimb::detail {

StepSensitivity::StepSensitivity(SimModel& model) : model_(&model) {
  const int d = model.dim();
  Jx_.resize(d, d);
  Ju_.resize(d, 2);
  k1_.resize(d);
  k2_.resize(d);
  k3_.resize(d);
  k4_.resize(d);
  bk_.resize(d);
  bs_.resize(d);
  wacc_.resize(d);
  d1_.resize(d);
  d2_.resize(d);
  d3_.resize(d);
  d4_.resize(d);
  v_.resize(d);
  xt_.resize(d);
  vt_.resize(d);
}

void StepSensitivity::forward_record(Eigen::VectorXd& x, const Eigen::Vector2d& u, double dt_knot,
                                     int substeps, Eigen::MatrixXd& stages) {
  const int d = model_->dim();
  stages.resize(d, 4 * substeps);
  const double h = dt_knot / substeps;
  for (int s = 0; s < substeps; ++s) {
    auto col = [&](int i) { return stages.col(4 * s + i); };
    col(0) = x;
    model_->deriv(x, u, k1_);
    col(1) = x + (0.5 * h) * k1_;
    model_->deriv(col(1), u, k2_);
    col(2) = x + (0.5 * h) * k2_;
    model_->deriv(col(2), u, k3_);
    col(3) = x + h * k3_;
    model_->deriv(col(3), u, k4_);
    x += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    if (!x.allFinite()) throw IntegrationDiverged("StepSensitivity: state diverged", s);
  }
}

void StepSensitivity::vjp(const Eigen::MatrixXd& stages, double dt_knot, int substeps,
                          const Eigen::VectorXd& w, Eigen::VectorXd& xbar, Eigen::Vector2d& ubar) {
  const double h = dt_knot / substeps;
  wacc_ = w;
  for (int s = substeps - 1; s >= 0; --s) {
    auto stage = [&](int i) { return stages.col(4 * s + i); };
    // reverse accumulation through the four stages
    model_->deriv_jacobian(stage(3), Eigen::Vector2d::Zero(), Jx_, Ju_);
    bk_ = (h / 6.0) * wacc_;                                 // bar k4
    ubar += Ju_.transpose() * bk_;
    bs_ = Jx_.transpose() * bk_;                             // bar s4
    Eigen::VectorXd acc = bs_;

    model_->deriv_jacobian(stage(2), Eigen::Vector2d::Zero(), Jx_, Ju_);
    bk_ = (h / 3.0) * wacc_ + h * bs_;                       // bar k3
    ubar += Ju_.transpose() * bk_;
    bs_ = Jx_.transpose() * bk_;                             // bar s3
    acc += bs_;

    model_->deriv_jacobian(stage(1), Eigen::Vector2d::Zero(), Jx_, Ju_);
    bk_ = (h / 3.0) * wacc_ + (0.5 * h) * bs_;               // bar k2
    ubar += Ju_.transpose() * bk_;
    bs_ = Jx_.transpose() * bk_;                             // bar s2
    acc += bs_;

    model_->deriv_jacobian(stage(0), Eigen::Vector2d::Zero(), Jx_, Ju_);
    bk_ = (h / 6.0) * wacc_ + (0.5 * h) * bs_;               // bar k1
    ubar += Ju_.transpose() * bk_;
    bs_ = Jx_.transpose() * bk_;                             // bar s1
    acc += bs_;

    wacc_ += acc;
  }
  xbar += wacc_;
}

void StepSensitivity::jvp(const Eigen::VectorXd& x, const Eigen::Vector2d& u, double dt_knot,
                          int substeps, const Eigen::VectorXd& vx, const Eigen::Vector2d& vu,
                          Eigen::VectorXd& out) {
  const double h = dt_knot / substeps;
  xt_ = x;
  v_ = vx;
  for (int s = 0; s < substeps; ++s) {
    model_->deriv(xt_, u, k1_);
    model_->deriv_jacobian(xt_, u, Jx_, Ju_);
    d1_ = Jx_ * v_ + Ju_ * vu;

    vt_ = xt_ + (0.5 * h) * k1_;
    model_->deriv(vt_, u, k2_);
    model_->deriv_jacobian(vt_, u, Jx_, Ju_);
    d2_ = Jx_ * (v_ + (0.5 * h) * d1_) + Ju_ * vu;

    vt_ = xt_ + (0.5 * h) * k2_;
    model_->deriv(vt_, u, k3_);
    model_->deriv_jacobian(vt_, u, Jx_, Ju_);
    d3_ = Jx_ * (v_ + (0.5 * h) * d2_) + Ju_ * vu;

    vt_ = xt_ + h * k3_;
    model_->deriv(vt_, u, k4_);
    model_->deriv_jacobian(vt_, u, Jx_, Ju_);
    d4_ = Jx_ * (v_ + h * d3_) + Ju_ * vu;

    xt_ += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    v_ += (h / 6.0) * (d1_ + 2.0 * d2_ + 2.0 * d3_ + d4_);
  }
  out = v_;
}

}  // namespace softlimb::detail
