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

#include "softlimb/dataset.hpp"

#include <cmath>

#include "softlimb/io.hpp"

namespace softlimb {

Eigen::VectorXd CalibrationDataset::phi_rad() const { return phi_deg * io::kRadPerDeg; }
Eigen::VectorXd CalibrationDataset::phi_eq_rad() const { return phi_eq_deg * io::kRadPerDeg; }

double CalibrationDataset::dt() const {
  if (rows() < 2) throw DatasetInsufficient("CalibrationDataset: need at least 2 samples");
  const double h = t(1) - t(0);
  for (Eigen::Index i = 1; i < rows(); ++i) {
    const double hi = t(i) - t(i - 1);
    if (!(hi > 0.0) || std::abs(hi - h) > 1e-9 * std::max(1.0, h))
      throw DatasetInsufficient("CalibrationDataset: time grid not uniform/monotone");
  }
  return h;
}

void CalibrationDataset::validate() const {
  const Eigen::Index m = rows();
  if (phi_deg.size() != m || phi_eq_deg.size() != m || V_l.size() != m || V_r.size() != m ||
      D_l.size() != m || D_r.size() != m)
    throw InvalidArgument("CalibrationDataset: column length mismatch");
  for (Eigen::Index i = 1; i < m; ++i)
    if (!(t(i) > t(i - 1))) throw InvalidArgument("CalibrationDataset: time not monotone");
  if (m > 0 && ((D_l.minCoeff() < 0.0) || (D_l.maxCoeff() > 1.0) || (D_r.minCoeff() < 0.0) ||
                (D_r.maxCoeff() > 1.0)))
    throw InvalidArgument("CalibrationDataset: duty outside [0, 1]");
}

CalibrationDataset::Kind CalibrationDataset::infer_kind(const Eigen::VectorXd& D_l,
                                                        const Eigen::VectorXd& D_r) {
  const bool l_zero = D_l.size() == 0 || D_l.cwiseAbs().maxCoeff() == 0.0;
  const bool r_zero = D_r.size() == 0 || D_r.cwiseAbs().maxCoeff() == 0.0;
  if (l_zero && !r_zero) return Kind::right;
  if (r_zero && !l_zero) return Kind::left;
  return Kind::mixed;
}

CalibrationDataset CalibrationDataset::read_csv(const std::string& path) {
  const io::Table table = io::read_table(path);
  const std::vector<std::string> expected = {"t", "phi", "phi_eq", "V_l", "V_r", "D_l", "D_r"};
  if (table.columns != expected)
    throw IoError("dataset CSV header mismatch in " + path +
                  " (expected t,phi,phi_eq,V_l,V_r,D_l,D_r)");
  CalibrationDataset ds;
  ds.t = table.col("t");
  ds.phi_deg = table.col("phi");
  ds.phi_eq_deg = table.col("phi_eq");
  ds.V_l = table.col("V_l");
  ds.V_r = table.col("V_r");
  ds.D_l = table.col("D_l");
  ds.D_r = table.col("D_r");
  ds.kind = infer_kind(ds.D_l, ds.D_r);
  ds.validate();
  return ds;
}

void CalibrationDataset::write_csv(const std::string& path) const {
  validate();
  Eigen::MatrixXd data(rows(), 7);
  data.col(0) = t;
  data.col(1) = phi_deg;
  data.col(2) = phi_eq_deg;
  data.col(3) = V_l;
  data.col(4) = V_r;
  data.col(5) = D_l;
  data.col(6) = D_r;
  io::write_table(path, {"t", "phi", "phi_eq", "V_l", "V_r", "D_l", "D_r"}, data);
}

}  // namespace softlimb
