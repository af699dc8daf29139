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

#ifndef SOFTLIMB_NUMERIC_LEVENBERG_MARQUARDT_HPP_
#define SOFTLIMB_NUMERIC_LEVENBERG_MARQUARDT_HPP_

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace softlimb::numeric {

struct LmOptions {
  int max_iterations = 300;
  double xtol = 1e-14;   ///< step size, relative
  double ftol = 1e-14;   ///< cost decrease, relative
  double gtol = 1e-12;   ///< gradient infinity norm
  double lambda0 = 1e-3;
};

struct LmResult {
  Eigen::VectorXd params;
  double cost = 0.0;  ///< 0.5 ||r||^2
  int iterations = 0;
  bool converged = false;
  std::vector<double> cost_history;
};

using LmResidualFn = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;
using LmJacobianFn = std::function<void(const Eigen::VectorXd&, Eigen::MatrixXd&)>;
using LmProjectFn = std::function<void(Eigen::VectorXd&)>;

/// Dense damped least squares with Marquardt diagonal scaling. The
/// Jacobian falls back to forward differences when not supplied; project
/// (when given) clamps iterates into their admissible box.
LmResult levenberg_marquardt(const LmResidualFn& residual, Eigen::Index num_residuals,
                             const Eigen::VectorXd& p0, const LmOptions& opts = {},
                             const LmJacobianFn& jacobian = nullptr,
                             const LmProjectFn& project = nullptr);

}  // namespace softlimb::numeric

#endif  // SOFTLIMB_NUMERIC_LEVENBERG_MARQUARDT_HPP_
