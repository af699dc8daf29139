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

#ifndef SOFTLIMB_IO_HPP_
#define SOFTLIMB_IO_HPP_

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "softlimb/errors.hpp"
#include "softlimb/sim.hpp"

namespace softlimb::io {

// Angles cross the IO boundary in degrees; everything internal is radians.
inline constexpr double kRadPerDeg = M_PI / 180.0;
inline constexpr double kDegPerRad = 180.0 / M_PI;

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// Strict double parser; throws IoError on trailing garbage.
double parse_double(const std::string& s);

/// A parsed all-numeric CSV file.
struct Table {
  std::vector<std::string> columns;
  Eigen::MatrixXd data;  // rows x columns

  Eigen::Index rows() const { return data.rows(); }
  Eigen::VectorXd col(const std::string& name) const;
  bool has(const std::string& name) const;
};

Table read_table(const std::string& path);
void write_table(const std::string& path, const std::vector<std::string>& columns,
                 const Eigen::MatrixXd& data);

/// FNV-1a 64-bit content hash, hex-encoded; used in manifests.
std::string fnv1a_hex(const std::string& bytes);
std::string hash_file(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Model parameter bundle (chain + both actuators) as versioned JSON.
std::string params_to_json(const ModelParams& params, const std::string& provenance_json = "");
ModelParams params_from_json(const std::string& json_text);
ModelParams read_params(const std::string& path);
void write_params(const std::string& path, const ModelParams& params,
                  const std::string& provenance_json = "");

}  // namespace softlimb::io

#endif  // SOFTLIMB_IO_HPP_
