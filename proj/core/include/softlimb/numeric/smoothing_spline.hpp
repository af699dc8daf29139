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

#ifndef SOFTLIMB_NUMERIC_SMOOTHING_SPLINE_HPP_
#define SOFTLIMB_NUMERIC_SMOOTHING_SPLINE_HPP_

#include <Eigen/Core>

namespace softlimb::numeric {

/// Natural cubic smoothing spline on a uniform grid (Reinsch form):
/// minimizes sum (y - f)^2 + alpha * int f''^2. A negative alpha selects
/// the penalty by generalized cross-validation over a log grid, with the
/// smoother trace estimated stochastically.
class SmoothingSpline {
 public:
  static SmoothingSpline fit(const Eigen::VectorXd& y, double spacing, double alpha = -1.0);

  const Eigen::VectorXd& values() const { return f_; }
  /// First derivative of the spline at the knots.
  Eigen::VectorXd derivative() const;
  double alpha() const { return alpha_; }

 private:
  Eigen::VectorXd f_;      // smoothed values
  Eigen::VectorXd gamma_;  // second derivatives at interior knots
  double h_ = 1.0;
  double alpha_ = 0.0;
};

}  // namespace softlimb::numeric

#endif  // SOFTLIMB_NUMERIC_SMOOTHING_SPLINE_HPP_
