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

#include "softlimb/numeric/levenberg_marquardt.hpp"

#include <cmath>

#include <Eigen/Cholesky>

namespace softlimb::numeric {

namespace {

void numeric_jacobian(const LmResidualFn& residual, const Eigen::VectorXd& p,
                      const Eigen::VectorXd& r0, Eigen::MatrixXd& J) {
  const Eigen::Index np = p.size();
  Eigen::VectorXd pp = p, rp(r0.size());
  for (Eigen::Index j = 0; j < np; ++j) {
    const double h = std::sqrt(1e-16) * std::max(1.0, std::abs(p(j)));
    pp(j) = p(j) + h;
    residual(pp, rp);
    J.col(j) = (rp - r0) / h;
    pp(j) = p(j);
  }
}

}  // namespace

LmResult levenberg_marquardt(const LmResidualFn& residual, Eigen::Index num_residuals,
                             const Eigen::VectorXd& p0, const LmOptions& opts,
                             const LmJacobianFn& jacobian, const LmProjectFn& project) {
  const Eigen::Index np = p0.size();
  LmResult out;
  out.params = p0;
  if (project) project(out.params);

  Eigen::VectorXd r(num_residuals), r_try(num_residuals);
  Eigen::MatrixXd J(num_residuals, np);
  residual(out.params, r);
  out.cost = 0.5 * r.squaredNorm();
  out.cost_history.push_back(out.cost);

  double lambda = opts.lambda0;
  bool need_jacobian = true;
  Eigen::MatrixXd H(np, np);
  Eigen::VectorXd g(np), step(np), p_try(np);

  for (out.iterations = 0; out.iterations < opts.max_iterations; ++out.iterations) {
    if (need_jacobian) {
      if (jacobian) jacobian(out.params, J);
      else numeric_jacobian(residual, out.params, r, J);
      H = J.transpose() * J;
      g = J.transpose() * r;
      need_jacobian = false;
    }
    if (g.cwiseAbs().maxCoeff() <= opts.gtol) {
      out.converged = true;
      break;
    }

    Eigen::MatrixXd A = H;
    for (Eigen::Index i = 0; i < np; ++i)
      A(i, i) += lambda * std::max(H(i, i), 1e-12);
    step = A.ldlt().solve(-g);

    p_try = out.params + step;
    if (project) project(p_try);
    residual(p_try, r_try);
    const double cost_try = 0.5 * r_try.squaredNorm();

    if (cost_try < out.cost) {
      const double dcost = out.cost - cost_try;
      const double dstep = (p_try - out.params).norm();
      out.params = p_try;
      r = r_try;
      out.cost = cost_try;
      out.cost_history.push_back(out.cost);
      lambda = std::max(lambda / 3.0, 1e-14);
      need_jacobian = true;
      if (dstep <= opts.xtol * (out.params.norm() + opts.xtol) ||
          dcost <= opts.ftol * std::max(out.cost, 1e-300)) {
        out.converged = true;
        break;
      }
    } else {
      lambda *= 2.5;
      if (lambda > 1e14) break;  // stalled
    }
  }
  return out;
}

}  // namespace softlimb::numeric
