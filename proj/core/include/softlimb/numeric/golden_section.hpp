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

#ifndef SOFTLIMB_NUMERIC_GOLDEN_SECTION_HPP_
#define SOFTLIMB_NUMERIC_GOLDEN_SECTION_HPP_

#include <cmath>
#include <utility>

namespace softlimb::numeric {

struct ScalarMinResult {
  double x = 0.0;
  double fx = 0.0;
  int evaluations = 0;
};

/// Bounded golden-section search for a scalar minimum on [a, b].
template <class F>
ScalarMinResult golden_section(F&& f, double a, double b, double xtol, int max_iter = 200) {
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  int evals = 2;
  while (std::abs(b - a) > xtol && evals < max_iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  ScalarMinResult out;
  out.x = 0.5 * (a + b);
  out.fx = f(out.x);
  out.evaluations = evals + 1;
  return out;
}

}  // namespace softlimb::numeric

#endif  // SOFTLIMB_NUMERIC_GOLDEN_SECTION_HPP_
