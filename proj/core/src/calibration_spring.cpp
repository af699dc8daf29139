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

#include <cmath>

#include "softlimb/calibration.hpp"
#include "softlimb/curvature.hpp"

namespace softlimb {

SpringFitResult fit_spring_constant(const std::vector<double>& phi_eq_obs,
                                    const ManipulatorParams& mp, int max_iterations) {
  if (phi_eq_obs.empty())
    throw DatasetInsufficient("fit_spring_constant: no droop observations");
  ManipulatorParams p = mp;
  p.gravity_on = true;
  p.validate();
  const int n = p.n;
  const Eigen::VectorXd b = beam_profile_weights(n);

  SpringFitResult out;
  double lambda = 1.0;
  double k_prev = 0.0;

  for (int it = 0; it < max_iterations; ++it) {
    // map each measured droop angle to joint angles via the corrected
    // profile, then least-squares k against the gravity force
    double num = 0.0, den = 0.0;
    double res2 = 0.0;
    for (double phi : phi_eq_obs) {
      const Eigen::VectorXd th = lambda * phi * b;
      const Eigen::VectorXd fg = gravity_force(th, p);
      num += th.dot(fg);
      den += th.squaredNorm();
    }
    const double k_fit = num / den;
    if (!(k_fit > 0.0)) {
      out.converged = false;
      out.k_history.push_back(k_fit);
      out.lambda_history.push_back(lambda);
      break;
    }

    // re-estimate the correction factor from the simulated equilibrium
    ManipulatorParams psim = p;
    psim.k = k_fit;
    const Eigen::VectorXd th_sim = static_equilibrium(psim);
    const double phi_sim = tip_bend_angle(th_sim, psim).phi;
    double lam_new = 0.0;
    for (int i = 0; i < n; ++i) lam_new += th_sim(i) / (phi_sim * b(i));
    lam_new /= n;

    out.k_history.push_back(k_fit);
    out.lambda_history.push_back(lam_new);

    for (double phi : phi_eq_obs) {
      const Eigen::VectorXd th = lam_new * phi * b;
      const Eigen::VectorXd fg = gravity_force(th, p);
      res2 += (k_fit * th - fg).squaredNorm();
    }
    out.residual = std::sqrt(res2 / (static_cast<double>(phi_eq_obs.size()) * n));

    out.k = k_fit;
    out.lambda = lam_new;
    out.iterations = it + 1;

    const bool k_settled = it > 0 && std::abs(k_fit - k_prev) <= 1e-4 * std::abs(k_fit);
    const bool lam_settled = std::abs(lam_new - lambda) <= 1e-10 * std::max(1.0, std::abs(lambda));
    k_prev = k_fit;
    lambda = lam_new;
    if (k_settled && lam_settled) {
      out.converged = true;
      break;
    }
    // tighter settle: keep iterating while lambda still moves
    if (it + 1 == max_iterations && k_settled) out.converged = true;
  }
  return out;
}

}  // namespace softlimb
