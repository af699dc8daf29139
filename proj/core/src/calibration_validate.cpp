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

#include "softlimb/calibration.hpp"
#include "softlimb/numeric/stats.hpp"

namespace softlimb {

ValidationReport validate_model(const CalibrationDataset& ds, const ModelParams& params,
                                const SimConfig& sim) {
  ds.validate();
  if (ds.rows() < 2) throw InvalidArgument("validate_model: empty dataset");
  const double dt = ds.dt();
  SimConfig cfg = sim;
  cfg.dt_sample = dt;

  SimModel model(params);
  Eigen::VectorXd x = FullState::ambient(params.manip.n, params.left.T0).x;
  const int substeps = cfg.substeps();
  const Eigen::Index m = ds.rows();
  const Eigen::VectorXd phi_meas = ds.phi_rad();

  ValidationReport rep;
  rep.t = ds.t;
  rep.phi_meas = phi_meas;
  rep.phi_sim.resize(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    rep.phi_sim(k) = model.phi(x);
    const Eigen::Vector2d u(ds.D_l(k), ds.D_r(k));
    model.step(x, u, dt, substeps, k * substeps);
  }
  rep.abs_err = (rep.phi_sim - phi_meas).cwiseAbs();
  rep.rms = numeric::rms(rep.phi_sim - phi_meas);
  rep.mean_abs = numeric::mean(rep.abs_err);
  rep.median_abs = numeric::median(rep.abs_err);
  rep.p90_abs = numeric::quantile(rep.abs_err, 0.9);
  return rep;
}

}  // namespace softlimb
