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

#include <Eigen/Eigenvalues>

#include "softlimb/calibration.hpp"
#include "softlimb/numeric/golden_section.hpp"

namespace softlimb {

namespace {

// Largest undamped modal frequency of the chain linearized at rest; used
// to keep the outer search inside the explicit integrator's stability
// region (overdamped modes contribute a stiff real eigenvalue ~ sigma
// w^2 / k).
double max_modal_frequency(const ManipulatorParams& mp) {
  const Eigen::MatrixXd M = mass_matrix(Eigen::VectorXd::Zero(mp.n), mp);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
      mp.k * Eigen::MatrixXd::Identity(mp.n, mp.n), M);
  return std::sqrt(es.eigenvalues().maxCoeff());
}

}  // namespace

DampingFitResult fit_damping(const PhiTrace& trace, const ManipulatorParams& mp,
                             const DampingFitOptions& opts) {
  if (trace.t.size() < 8 || trace.t.size() != trace.phi.size())
    throw InvalidArgument("fit_damping: bad release trace");
  const double dt_sample = trace.t(1) - trace.t(0);
  const double duration = trace.t(trace.t.size() - 1) - trace.t(0);

  DampingFitResult out;
  const DampedSinusoidFit data_fit = fit_damped_sinusoid(trace.t, trace.phi);
  out.sigma_star_data = data_fit.sigma_star;

  ModelParams params;
  params.manip = mp;
  params.manip.gravity_on = false;

  const double phi0 = trace.phi(0);
  auto model_sigma_star = [&](double sigma_mdl) {
    ModelParams p = params;
    p.manip.sigma = sigma_mdl;
    const PhiTrace mdl = generate_release_trace(p, phi0, duration, dt_sample,
                                                opts.dt_integration, 0.0, 0);
    return fit_damped_sinusoid(mdl.t, mdl.phi).sigma_star;
  };
  auto objective = [&](double sigma_mdl) {
    try {
      const double s = model_sigma_star(sigma_mdl);
      const double d = s - out.sigma_star_data;
      return d * d;
    } catch (const IntegrationDiverged&) {
      return 1e12 * (1.0 + sigma_mdl);
    } catch (const UnfittableSeries&) {
      return 1e12 * (1.0 + sigma_mdl);
    }
  };

  // bracket: the modal relation sigma ~ 2 k sigma* / wn^2 sets the scale
  const double sigma_scale = 2.0 * mp.k * data_fit.sigma_star /
                             (data_fit.omega_n * data_fit.omega_n);
  const double wmax = max_modal_frequency(mp);
  const double sigma_stab = 2.2 * mp.k / (opts.dt_integration * wmax * wmax);
  double hi = opts.sigma_hi > 0.0 ? opts.sigma_hi
                                  : std::min(10.0 * std::max(sigma_scale, 1e-9), sigma_stab);
  out.bracket_lo = 0.0;

  const int max_widen = 3;
  for (int attempt = 0; attempt <= max_widen; ++attempt) {
    out.bracket_hi = hi;
    const auto res =
        numeric::golden_section(objective, 0.0, hi, opts.rel_xtol * hi, opts.max_outer_evals);
    out.sigma_mdl = res.x;
    out.objective = res.fx;
    out.outer_evaluations += res.evaluations;
    // minimum pinned at the upper end: widen (within stability) and retry
    if (res.x > 0.98 * hi && hi < 0.99 * sigma_stab) {
      hi = std::min(4.0 * hi, sigma_stab);
      continue;
    }
    out.converged = res.x <= 0.98 * hi;
    break;
  }
  try {
    out.sigma_star_model = model_sigma_star(out.sigma_mdl);
  } catch (...) {
    out.sigma_star_model = std::nan("");
  }
  return out;
}

}  // namespace softlimb
