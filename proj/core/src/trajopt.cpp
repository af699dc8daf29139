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

#include "softlimb/trajopt.hpp"

#include <cmath>

#include "softlimb/curvature.hpp"

namespace softlimb {

Eigen::VectorXd TrajOptProblem::default_state_weights(int n) {
  Eigen::VectorXd q = Eigen::VectorXd::Zero(2 * n + 4);
  q.segment(0, n).setConstant(100.0);
  return q;
}

Eigen::VectorXd default_state_scale(int n) {
  Eigen::VectorXd s(2 * n + 4);
  s.segment(0, n).setConstant(0.5);       // rad
  s(n) = 50.0;                            // degC
  s(n + 1) = 50.0;
  s.segment(n + 2, n).setConstant(5.0);   // rad/s
  s(2 * n + 2) = 2.0;                     // degC/s
  s(2 * n + 3) = 2.0;
  return s;
}

void TrajOptProblem::validate() const {
  params.validate();
  sim.validate();
  if (N < 2) throw InvalidArgument("TrajOptProblem: need at least 2 knots");
  if (!(dt_knot > 0.0)) throw InvalidArgument("TrajOptProblem: dt_knot must be positive");
  const int dim = 2 * params.manip.n + 4;
  if (x_init.size() != dim) throw InvalidArgument("TrajOptProblem: x_init has wrong dimension");
  if (static_cast<int>(x_ref.size()) != N)
    throw InvalidArgument("TrajOptProblem: reference length != N");
  for (const auto& xr : x_ref)
    if (xr.size() != dim) throw InvalidArgument("TrajOptProblem: reference state dimension");
  if (Q_diag.size() != dim) throw InvalidArgument("TrajOptProblem: Q_diag has wrong dimension");
  if (!(QN_factor >= 0.0) || !(R_diag >= 0.0))
    throw InvalidArgument("TrajOptProblem: weights must be nonnegative");
  if (Q_diag.minCoeff() < 0.0) throw InvalidArgument("TrajOptProblem: Q must be nonnegative");
  if (!(T_warm < T_max)) throw InvalidArgument("TrajOptProblem: need T_warm < T_max");
}

std::vector<Eigen::VectorXd> build_reference(const Eigen::VectorXd& phi_ref, int n) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<size_t>(phi_ref.size()));
  for (Eigen::Index k = 0; k < phi_ref.size(); ++k) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(2 * n + 4);
    x.segment(0, n) = theta_from_phi_cc(phi_ref(k), n);
    out.push_back(std::move(x));
  }
  return out;
}

Eigen::VectorXd resample_linear(const Eigen::VectorXd& t_src, const Eigen::VectorXd& y_src,
                                const Eigen::VectorXd& t_dst) {
  if (t_src.size() != y_src.size() || t_src.size() < 2)
    throw InvalidArgument("resample_linear: bad source series");
  Eigen::VectorXd out(t_dst.size());
  Eigen::Index j = 0;
  for (Eigen::Index i = 0; i < t_dst.size(); ++i) {
    const double t = t_dst(i);
    if (t <= t_src(0)) {
      out(i) = y_src(0);
      continue;
    }
    if (t >= t_src(t_src.size() - 1)) {
      out(i) = y_src(y_src.size() - 1);
      continue;
    }
    while (j + 1 < t_src.size() && t_src(j + 1) < t) ++j;
    const double w = (t - t_src(j)) / (t_src(j + 1) - t_src(j));
    out(i) = (1.0 - w) * y_src(j) + w * y_src(j + 1);
  }
  return out;
}

FeasibilityReport check_solution(const TrajOptSolution& sol, const TrajOptProblem& problem) {
  FeasibilityReport rep;
  const int N = problem.N;
  const int dim = 2 * problem.params.manip.n + 4;
  if (static_cast<int>(sol.x_star.size()) != N ||
      static_cast<int>(sol.u_star.size()) != N - 1)
    throw InvalidArgument("check_solution: solution size mismatch");

  SimModel model(problem.params);
  const int substeps =
      std::max(1, static_cast<int>(std::round(problem.dt_knot / problem.sim.dt_integration)));
  const Eigen::VectorXd scale =
      problem.opts.state_scale.size() == dim ? problem.opts.state_scale
                                             : default_state_scale(problem.params.manip.n);

  // defects, re-simulated knot by knot
  for (int k = 0; k + 1 < N; ++k) {
    Eigen::VectorXd x = sol.x_star[static_cast<size_t>(k)];
    model.step(x, sol.u_star[static_cast<size_t>(k)], problem.dt_knot, substeps);
    const double d =
        ((sol.x_star[static_cast<size_t>(k + 1)] - x).cwiseQuotient(scale)).cwiseAbs().maxCoeff();
    if (d > rep.max_defect_scaled) {
      rep.max_defect_scaled = d;
      rep.worst_defect_knot = k;
    }
  }

  // input box
  for (const auto& u : sol.u_star) {
    rep.max_duty_violation = std::max(rep.max_duty_violation, u.maxCoeff() - 1.0);
    rep.max_duty_violation = std::max(rep.max_duty_violation, -u.minCoeff());
  }

  // temperature path constraints on recovered wire temperatures
  const int k_warm_idx = static_cast<int>(std::ceil(problem.k_warm_s / problem.dt_knot));
  for (int k = 0; k < N; ++k) {
    const Eigen::Vector2d T = model.wire_temps(sol.x_star[static_cast<size_t>(k)]);
    rep.max_over_ceiling = std::max(rep.max_over_ceiling, T.maxCoeff() - problem.T_max);
    if (problem.warm_floor && k + 1 > k_warm_idx)  // 1-based knot index
      rep.max_under_floor = std::max(rep.max_under_floor, problem.T_warm - T.minCoeff());
  }

  // open-loop replay from the initial state
  Eigen::VectorXd x = problem.x_init;
  rep.rollout_phi_err_max = std::abs(model.phi(x) - sol.phi_star(0));
  for (int k = 0; k + 1 < N; ++k) {
    model.step(x, sol.u_star[static_cast<size_t>(k)], problem.dt_knot, substeps);
    rep.rollout_phi_err_max =
        std::max(rep.rollout_phi_err_max, std::abs(model.phi(x) - sol.phi_star(k + 1)));
  }
  return rep;
}

}  // namespace softlimb
