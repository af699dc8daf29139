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

#ifndef SOFTLIMB_ERRORS_HPP_
#define SOFTLIMB_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace softlimb {

/// Bad argument values (non-finite inputs, out-of-range duty cycles, ...).
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition was violated by the caller.
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

/// The mass matrix factorization broke down.
struct SingularDynamics : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fixed-step integration produced a non-finite state.
struct IntegrationDiverged : std::runtime_error {
  IntegrationDiverged(const std::string& what, long step_index)
      : std::runtime_error(what + " (step " + std::to_string(step_index) + ")"),
        step(step_index) {}
  long step;
};

/// A time series does not contain the structure a fit requires.
struct UnfittableSeries : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A calibration dataset lacks the samples a fit requires.
struct DatasetInsufficient : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File or schema problems in the IO layer.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace softlimb

#endif  // SOFTLIMB_ERRORS_HPP_
