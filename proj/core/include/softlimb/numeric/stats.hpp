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

#ifndef SOFTLIMB_NUMERIC_STATS_HPP_
#define SOFTLIMB_NUMERIC_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Core>

namespace softlimb::numeric {

inline double mean(const Eigen::VectorXd& v) { return v.size() ? v.mean() : 0.0; }

/// Linear-interpolated quantile, q in [0, 1].
inline double quantile(const Eigen::VectorXd& v, double q) {
  if (v.size() == 0) return 0.0;
  std::vector<double> s(v.data(), v.data() + v.size());
  std::sort(s.begin(), s.end());
  const double pos = q * static_cast<double>(s.size() - 1);
  const auto lo = static_cast<size_t>(std::floor(pos));
  const auto hi = static_cast<size_t>(std::ceil(pos));
  const double w = pos - static_cast<double>(lo);
  return (1.0 - w) * s[lo] + w * s[hi];
}

inline double median(const Eigen::VectorXd& v) { return quantile(v, 0.5); }

inline double rms(const Eigen::VectorXd& v) {
  return v.size() ? std::sqrt(v.squaredNorm() / static_cast<double>(v.size())) : 0.0;
}

}  // namespace softlimb::numeric

#endif  // SOFTLIMB_NUMERIC_STATS_HPP_
