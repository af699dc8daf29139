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

#ifndef SOFTLIMB_CURVATURE_HPP_
#define SOFTLIMB_CURVATURE_HPP_

#include <Eigen/Core>

namespace softlimb {

/// Constant-curvature map from bend angle to identical joint angles,
/// theta_i = 2 phi / (n + 1).
Eigen::VectorXd theta_from_phi_cc(double phi, int n);

/// Bend angle from the tip-tangent sensor reading under the
/// constant-curvature assumption: phi = alpha / 2.
double phi_from_sensor(double alpha);

/// Discretized cantilever bending profile with correction factor lambda:
/// theta_i = lambda phi (N - i + 1)^2 / sum_j (N - j)^2. The n = 1
/// denominator vanishes; the single joint then carries the whole bend,
/// theta_1 = lambda phi.
Eigen::VectorXd beam_theta_distribution(double phi_eq, double lambda, int n);

/// The bare profile weights b_i (beam_theta_distribution with
/// lambda = phi = 1).
Eigen::VectorXd beam_profile_weights(int n);

}  // namespace softlimb

#endif  // SOFTLIMB_CURVATURE_HPP_
