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

#ifndef SOFTLIMB_TRAJOPT_HPP_
#define SOFTLIMB_TRAJOPT_HPP_

#include <string>
#include <vector>

#include "softlimb/sim.hpp"

namespace softlimb {

/// Solver knobs for the transcription NLP. The defaults were tuned on the
/// bundled desk-scale problems; everything stays configurable.
struct TrajOptOptions {
  double feas_tol = 1e-7;  ///< scaled defect / path-constraint target
  double opt_tol = 1e-4;   ///< projected gradient, relative to the initial scale
  int max_outer = 40;
  int max_inner = 400;          ///< inner iterations per outer pass
  long max_total_inner = 40000;
  double mu0 = 100.0;
  double mu_growth = 5.0;
  double mu_max = 3e7;
  int lbfgs_memory = 16;
  /// Strict temperature inequalities are enforced with this margin (degC).
  double constraint_margin = 1e-3;
  /// Diagonal state scaling; empty selects defaults by block.
  Eigen::VectorXd state_scale;
  double init_warm_duty = 0.25;
  bool init_hold_after_warm = false;  ///< false: zeros after the warm-up window
  int num_workers = 0;                ///< 0: hardware concurrency
  bool verbose = false;
};

/// Direct-transcription problem over N knots: states and inputs at the
/// knots are decision variables, the discrete dynamics enter as defect
/// equality constraints, duty cycles are box-bounded, and wire
/// temperatures obey a ceiling always and a floor after the warm-up time.
struct TrajOptProblem {
  int N = 0;             ///< knot count (states 1..N, inputs 1..N-1)
  double dt_knot = 0.1;  ///< s between knots
  ModelParams params;
  SimConfig sim;                       ///< dt_integration used inside knot steps
  Eigen::VectorXd x_init;              ///< initial state, fixed by construction
  std::vector<Eigen::VectorXd> x_ref;  ///< N reference states
  Eigen::VectorXd Q_diag;              ///< running state weights (diagonal)
  double R_diag = 2.0;                 ///< input weight, R = R_diag I
  double QN_factor = 1000.0;           ///< terminal weight Q_N = QN_factor Q
  double T_max = 100.0;                ///< degC ceiling
  double T_warm = 45.0;                ///< degC floor after the warm-up window
  double k_warm_s = 20.0;              ///< s, warm-up duration
  bool warm_floor = true;
  TrajOptOptions opts;

  void validate() const;

  /// Default state weights: 100 on the joint angles, zero elsewhere.
  static Eigen::VectorXd default_state_weights(int n);
};

enum class SolveStatus { converged, iteration_limit, infeasible };

struct TrajOptSolution {
  std::vector<Eigen::VectorXd> x_star;  ///< N states
  std::vector<Eigen::Vector2d> u_star;  ///< N-1 inputs
  Eigen::VectorXd phi_star;             ///< rad, per knot
  Eigen::MatrixXd V_star;               ///< 2 x N measured temperatures (l; r)
  Eigen::MatrixXd T_star;               ///< 2 x N recovered wire temperatures
  double objective = 0.0;
  double max_defect_scaled = 0.0;
  double max_temp_violation = 0.0;   ///< degC outside the admissible band
  double max_bound_violation = 0.0;  ///< duty outside [0, 1]
  int outer_iterations = 0;
  long inner_iterations = 0;
  SolveStatus status = SolveStatus::iteration_limit;
  std::string worst_constraint;
  std::vector<double> outer_feasibility;  ///< infinity-norm violation per outer pass
  std::vector<double> merit_history;      ///< accepted inner merit values
  std::vector<int> merit_outer;           ///< outer index per merit entry
};

/// Reference states from a bend-angle sequence: joint angles through the
/// constant-curvature map, all other entries zero (they carry no weight).
std::vector<Eigen::VectorXd> build_reference(const Eigen::VectorXd& phi_ref, int n);

/// Linear interpolation of (t_src, y_src) onto t_dst; clamped ends.
Eigen::VectorXd resample_linear(const Eigen::VectorXd& t_src, const Eigen::VectorXd& y_src,
                                const Eigen::VectorXd& t_dst);

/// Augmented-Lagrangian solve with bound-constrained L-BFGS inner
/// iterations; defect derivatives via adjoint sensitivity of the RK4 knot
/// step. Deterministic for fixed inputs and limits.
TrajOptSolution solve(const TrajOptProblem& problem);

/// Constraint re-evaluation with a fresh simulator, independent of the
/// solver's bookkeeping.
struct FeasibilityReport {
  double max_defect_scaled = 0.0;
  Eigen::Index worst_defect_knot = -1;
  double max_duty_violation = 0.0;
  double max_over_ceiling = 0.0;   ///< degC above T_max (positive = violation)
  double max_under_floor = 0.0;    ///< degC below T_warm after warm-up
  double rollout_phi_err_max = 0.0;  ///< rad, open-loop replay vs phi_star
  bool ok(double defect_tol = 1e-6) const {
    return max_defect_scaled <= defect_tol && max_duty_violation <= 0.0 &&
           max_over_ceiling <= 0.0 && max_under_floor <= 0.0;
  }
};

FeasibilityReport check_solution(const TrajOptSolution& sol, const TrajOptProblem& problem);

/// Default diagonal scaling of the packed state used by the solver.
Eigen::VectorXd default_state_scale(int n);

}  // namespace softlimb

#endif  // SOFTLIMB_TRAJOPT_HPP_
