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

#ifndef SOFTLIMB_DATASET_HPP_
#define SOFTLIMB_DATASET_HPP_

#include <string>

#include <Eigen/Core>

#include "softlimb/errors.hpp"

namespace softlimb {

/// A timestamped calibration log: bend angle and setpoint, both measured
/// temperatures, and both duty cycles. The duty in row k is the input held
/// over [t_k, t_{k+1}).
///
/// Angle columns are stored in degrees, the CSV-native unit; use phi_rad()
/// / phi_eq_rad() for computation. The CSV schema is
///   t,phi,phi_eq,V_l,V_r,D_l,D_r
/// with seconds, degrees, and degrees Celsius.
struct CalibrationDataset {
  enum class Kind { left, right, mixed };

  Kind kind = Kind::mixed;
  Eigen::VectorXd t;
  Eigen::VectorXd phi_deg, phi_eq_deg;
  Eigen::VectorXd V_l, V_r;
  Eigen::VectorXd D_l, D_r;

  Eigen::Index rows() const { return t.size(); }
  Eigen::VectorXd phi_rad() const;
  Eigen::VectorXd phi_eq_rad() const;

  /// Uniform sample period; throws on non-uniform or non-monotone time.
  double dt() const;

  /// Column lengths equal, time strictly monotone, duties in [0, 1].
  void validate() const;

  /// Infers kind from which duty column is identically zero.
  static Kind infer_kind(const Eigen::VectorXd& D_l, const Eigen::VectorXd& D_r);

  static CalibrationDataset read_csv(const std::string& path);
  void write_csv(const std::string& path) const;
};

}  // namespace softlimb

#endif  // SOFTLIMB_DATASET_HPP_
