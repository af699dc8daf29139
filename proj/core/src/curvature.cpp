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

#include "softlimb/errors.hpp"

namespace softlimb {

Eigen::VectorXd theta_from_phi_cc(double phi, int n) {
  if (n < 1) throw InvalidArgument("theta_from_phi_cc: n must be >= 1");
  return Eigen::VectorXd::Constant(n, 2.0 * phi / (n + 1));
}

double phi_from_sensor(double alpha) { return 0.5 * alpha; }

Eigen::VectorXd beam_profile_weights(int n) {
  if (n < 1) throw InvalidArgument("beam_profile_weights: n must be >= 1");
  if (n == 1) return Eigen::VectorXd::Ones(1);
  double den = 0.0;
  for (int j = 1; j <= n; ++j) den += static_cast<double>(n - j) * (n - j);
  Eigen::VectorXd b(n);
  for (int i = 1; i <= n; ++i)
    b(i - 1) = static_cast<double>(n - i + 1) * (n - i + 1) / den;
  return b;
}

Eigen::VectorXd beam_theta_distribution(double phi_eq, double lambda, int n) {
  return (lambda * phi_eq) * beam_profile_weights(n);
}

}  // namespace softlimb
