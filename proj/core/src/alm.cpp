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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "softlimb/numeric/parallel_for.hpp"
#include "softlimb/sensitivity.hpp"
#include "softlimb/trajopt.hpp"

namespace softlimb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Decision vector layout: per interval k in [0, N-1):
//   [u_k (2), xhat_{k+1} (dim)]
// with xhat = x / scale. x_1 is fixed and never a variable.
class AlmSolver {
 public:
  explicit AlmSolver(const TrajOptProblem& prob) : P(prob) {
    P.validate();
    n = P.params.manip.n;
    dim = 2 * n + 4;
    N = P.N;
    nvar = (N - 1) * (dim + 2);
    substeps = std::max(1, static_cast<int>(std::round(P.dt_knot / P.sim.dt_integration)));
    scale = P.opts.state_scale.size() == dim ? P.opts.state_scale : default_state_scale(n);
    k_warm_idx = static_cast<int>(std::ceil(P.k_warm_s / P.dt_knot));

    workers = P.opts.num_workers > 0 ? P.opts.num_workers : numeric::default_workers();
    workers = std::max(1, std::min(workers, N - 1));
    for (int w = 0; w < workers; ++w) {
      models.emplace_back(P.params);
    }
    for (int w = 0; w < workers; ++w) sens.emplace_back(models[static_cast<size_t>(w)]);

    X.assign(static_cast<size_t>(N), Eigen::VectorXd::Zero(dim));
    U.assign(static_cast<size_t>(N - 1), Eigen::Vector2d::Zero());
    F.assign(static_cast<size_t>(N - 1), Eigen::VectorXd::Zero(dim));
    D.assign(static_cast<size_t>(N - 1), Eigen::VectorXd::Zero(dim));
    stages.resize(static_cast<size_t>(N - 1));
    xb.assign(static_cast<size_t>(N - 1), Eigen::VectorXd::Zero(dim));
    ub.assign(static_cast<size_t>(N - 1), Eigen::Vector2d::Zero());
    interval_ok.assign(static_cast<size_t>(N - 1), 1);

    lam = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(N - 1) * dim);
    nu_ceil = Eigen::VectorXd::Zero(2 * (N - 1));
    nu_floor = Eigen::VectorXd::Zero(2 * (N - 1));
    mu = P.opts.mu0;

    QN = P.QN_factor * P.Q_diag;
  }

  TrajOptSolution run() {
    TrajOptSolution sol;
    init_decision_vector();

    Eigen::VectorXd g(nvar), g_new(nvar), z_try(nvar), pg(nvar);
    double L = forward_eval(z);
    if (!std::isfinite(L))
      throw IntegrationDiverged("trajopt: initial guess rollout diverged", 0);

    // estimate the input-column curvature of one knot step at the guess
    {
      Eigen::VectorXd jcol(dim);
      for (int j = 0; j < 2; ++j) {
        Eigen::Vector2d e = Eigen::Vector2d::Zero();
        e(j) = 1.0;
        sens[0].jvp(P.x_init, U[0], P.dt_knot, substeps, Eigen::VectorXd::Zero(dim), e, jcol);
        bcol_sq(j) = jcol.cwiseQuotient(scale).squaredNorm();
      }
    }

    // Warm start: optimize the inputs alone over exact rollouts (the
    // defects vanish by construction) and seed the defect multipliers
    // from the costate sweep. The transcription solve then starts near a
    // KKT point.
    shooting_warm_start();
    L = forward_eval(z);
    gradient_eval(g);
    refresh_h0();
    if (P.opts.verbose) {
      double gx = 0.0, gu2 = 0.0, dmax = 0.0;
      for (int k = 0; k + 1 < N; ++k) {
        gx = std::max(gx, g.segment(off(k) + 2, dim).cwiseAbs().maxCoeff());
        gu2 = std::max(gu2, g.segment(off(k), 2).cwiseAbs().maxCoeff());
        dmax = std::max(dmax, D[static_cast<size_t>(k)].cwiseAbs().maxCoeff());
      }
      std::fprintf(stderr, "phase2 start: |g_x|=%.3e |g_u|=%.3e |d|=%.3e L=%.6e\n", gx, gu2, dmax, L);
    }

    // optimality is judged relative to the objective-gradient scale
    const double g_ref = std::max(1.0, g.cwiseAbs().maxCoeff());
    const double opt_tol_abs = P.opts.opt_tol * g_ref;
    double eps_inner = 0.03 * g_ref;
    double eta = 1e-2;
    long total_inner = 0;
    int stall_outers = 0;
    double best_viol = kInf;

    // L-BFGS memory
    const int mem = P.opts.lbfgs_memory;
    std::vector<Eigen::VectorXd> sk, yk;
    std::vector<double> rho;

    for (int outer = 0; outer < P.opts.max_outer; ++outer) {
      sol.outer_iterations = outer + 1;
      sk.clear();
      yk.clear();
      rho.clear();

      int inner = 0;
      double L_window = kInf;
      for (; inner < P.opts.max_inner && total_inner < P.opts.max_total_inner;
           ++inner, ++total_inner) {
        if (inner % 40 == 0) {
          // give up on this inner solve when merit decrease stalls
          if (L > L_window - 1e-10 * (1.0 + std::abs(L))) break;
          L_window = L;
        }
        // projected gradient
        project(z_try = z - g);
        pg = z - z_try;
        if (pg.cwiseAbs().maxCoeff() <= eps_inner) break;

        // direction
        Eigen::VectorXd d = two_loop(g, sk, yk, rho);
        d = -d;
        if (d.dot(g) > -1e-14 * d.norm() * g.norm()) {
          sk.clear();
          yk.clear();
          rho.clear();
          d = -g;
        }

        // projected-arc backtracking
        double alpha = 1.0;
        double L_try = kInf;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
          project(z_try = z + alpha * d);
          L_try = forward_eval(z_try);
          const double pred = g.dot(z_try - z);
          if (std::isfinite(L_try) && L_try <= L + 1e-4 * pred && pred < 0.0) {
            accepted = true;
            break;
          }
          alpha *= 0.5;
        }
        if (!accepted) {
          // steepest-descent restart, then give up on this inner solve
          sk.clear();
          yk.clear();
          rho.clear();
          bool rescue = false;
          alpha = 1.0;
          for (int ls = 0; ls < 60; ++ls) {
            project(z_try = z - alpha * g);
            L_try = forward_eval(z_try);
            const double pred = g.dot(z_try - z);
            if (std::isfinite(L_try) && L_try <= L + 1e-4 * pred && pred < 0.0) {
              rescue = true;
              break;
            }
            alpha *= 0.5;
          }
          if (!rescue) {
            forward_eval(z);  // restore internal state at z
            break;
          }
        }

        gradient_eval(g_new);
        const Eigen::VectorXd step = z_try - z;
        const Eigen::VectorXd ygrad = g_new - g;
        const double sy = step.dot(ygrad);
        if (sy > 1e-12 * step.norm() * ygrad.norm()) {
          sk.push_back(step);
          yk.push_back(ygrad);
          rho.push_back(1.0 / sy);
          if (static_cast<int>(sk.size()) > mem) {
            sk.erase(sk.begin());
            yk.erase(yk.begin());
            rho.erase(rho.begin());
          }
        }
        z = z_try;
        g = g_new;
        L = L_try;
        sol.merit_history.push_back(L);
        sol.merit_outer.push_back(outer);
      }
      sol.inner_iterations += inner;

      // constraint violations at the inner solution
      double v_eq = 0.0;
      for (const auto& d : D) v_eq = std::max(v_eq, d.cwiseAbs().maxCoeff());
      double v_in = 0.0;
      eval_path_violation(v_in);
      const double viol = std::max(v_eq, v_in);
      sol.outer_feasibility.push_back(viol);

      project(z_try = z - g);
      const double pg_norm = (z - z_try).cwiseAbs().maxCoeff();

      if (P.opts.verbose)
        std::fprintf(stderr, "outer %2d: inner %4d  L=%.6e  viol=%.3e  pg=%.3e  mu=%.1e\n",
                     outer, inner, L, viol, pg_norm, mu);

      if (viol <= P.opts.feas_tol && pg_norm <= opt_tol_abs) {
        sol.status = SolveStatus::converged;
        break;
      }

      // first-order multiplier update only once the iterate is feasible
      // enough for the current target; otherwise raise the penalty.
      // Progress demands tighten with the current violation so penalty
      // increases happen only while updates stall.
      if (viol <= std::max(eta, P.opts.feas_tol)) {
        update_multipliers();
        eta = std::max(0.1 * P.opts.feas_tol, std::min(0.25 * eta, 0.25 * viol));
        eps_inner = std::max(opt_tol_abs, 0.3 * eps_inner);
      } else {
        mu = std::min(mu * P.opts.mu_growth, P.opts.mu_max);
        eta = std::max(0.1 * P.opts.feas_tol, 0.5 * viol);
      }
      refresh_h0();
      // refresh merit and gradient under the new multipliers
      L = forward_eval(z);
      gradient_eval(g);

      if (viol < 0.5 * best_viol) {
        best_viol = viol;
        stall_outers = 0;
      } else {
        ++stall_outers;
      }
      if (mu >= P.opts.mu_max && stall_outers >= 4 && viol > 100.0 * P.opts.feas_tol) {
        sol.status = SolveStatus::infeasible;
        break;
      }
      if (total_inner >= P.opts.max_total_inner) break;
    }

    extract_solution(sol);
    return sol;
  }

 private:
  // Single-shooting pre-solve over the duty sequence with the same
  // augmented path-constraint terms; fills z from the final rollout, the
  // defect multipliers from the adjoint states, and keeps the inequality
  // multipliers for the transcription phase.
  void shooting_warm_start() {
    const int nu_vars = 2 * (N - 1);
    Eigen::VectorXd uf(nu_vars);
    for (int k = 0; k + 1 < N; ++k) uf.segment(2 * k, 2) = z.segment(off(k), 2);

    std::vector<Eigen::VectorXd> p_state(static_cast<size_t>(N), Eigen::VectorXd::Zero(dim));

    auto project_u = [&](Eigen::VectorXd& u) {
      for (int i = 0; i < nu_vars; ++i) u(i) = std::clamp(u(i), 0.0, 1.0);
    };

    // objective + path-penalty value after a full sequential rollout
    auto f_eval = [&](const Eigen::VectorXd& u) -> double {
      X[0] = P.x_init;
      for (int k = 0; k + 1 < N; ++k) {
        U[static_cast<size_t>(k)] = u.segment(2 * k, 2);
        Eigen::VectorXd x = X[static_cast<size_t>(k)];
        try {
          sens[0].forward_record(x, U[static_cast<size_t>(k)], P.dt_knot, substeps,
                                 stages[static_cast<size_t>(k)]);
        } catch (const IntegrationDiverged&) {
          return kInf;
        }
        X[static_cast<size_t>(k + 1)] = x;
      }
      double L = 0.0;
      for (int j = 0; j < N; ++j) {
        const Eigen::VectorXd xt = X[static_cast<size_t>(j)] - P.x_ref[static_cast<size_t>(j)];
        const Eigen::VectorXd& w = (j == N - 1) ? QN : P.Q_diag;
        L += 0.5 * xt.dot(w.cwiseProduct(xt));
      }
      for (const auto& u2 : U) L += 0.5 * P.R_diag * u2.squaredNorm();
      for (int j = 1; j < N; ++j) {
        Eigen::Vector2d gc, gf;
        path_constraints(j, gc, gf);
        for (int side = 0; side < 2; ++side) {
          const Eigen::Index idx = 2 * (j - 1) + side;
          const double tc = std::max(0.0, nu_ceil(idx) + mu * gc(side));
          L += (tc * tc - nu_ceil(idx) * nu_ceil(idx)) / (2.0 * mu);
          if (floor_applies(j)) {
            const double tf = std::max(0.0, nu_floor(idx) + mu * gf(side));
            L += (tf * tf - nu_floor(idx) * nu_floor(idx)) / (2.0 * mu);
          }
        }
      }
      return L;
    };

    // gradient at the state of the last f_eval via one costate sweep
    auto g_eval = [&](Eigen::VectorXd& gu) {
      auto state_seed = [&](int j, Eigen::VectorXd& q) {
        const Eigen::VectorXd xt = X[static_cast<size_t>(j)] - P.x_ref[static_cast<size_t>(j)];
        const Eigen::VectorXd& w = (j == N - 1) ? QN : P.Q_diag;
        q = w.cwiseProduct(xt);
        if (j >= 1) {
          Eigen::Vector2d gc, gf;
          path_constraints(j, gc, gf);
          for (int side = 0; side < 2; ++side) {
            const Eigen::Index idx = 2 * (j - 1) + side;
            const double a3 = side == 0 ? P.params.left.a3 : P.params.right.a3;
            const double rc = std::max(0.0, nu_ceil(idx) + mu * gc(side));
            double rsum = rc;
            if (floor_applies(j)) rsum -= std::max(0.0, nu_floor(idx) + mu * gf(side));
            q(n + side) += rsum;
            q(2 * n + 2 + side) += rsum / a3;
          }
        }
      };
      Eigen::VectorXd p(dim), q(dim);
      state_seed(N - 1, p);
      p_state[static_cast<size_t>(N - 1)] = p;
      for (int k = N - 2; k >= 0; --k) {
        Eigen::VectorXd xbar_l = Eigen::VectorXd::Zero(dim);
        Eigen::Vector2d ubar_l = Eigen::Vector2d::Zero();
        sens[0].vjp(stages[static_cast<size_t>(k)], P.dt_knot, substeps, p, xbar_l, ubar_l);
        gu.segment(2 * k, 2) = P.R_diag * U[static_cast<size_t>(k)] + ubar_l;
        state_seed(k, q);
        p = q + xbar_l;
        p_state[static_cast<size_t>(k)] = p;
      }
    };

    // projected L-BFGS on the duty sequence, few multiplier passes
    Eigen::VectorXd gu(nu_vars), gu_new(nu_vars), u_try(nu_vars);
    project_u(uf);
    double L = f_eval(uf);
    g_eval(gu);
    const double g_ref = std::max(1.0, gu.cwiseAbs().maxCoeff());

    const int shoot_outers = 8;
    for (int outer = 0; outer < shoot_outers; ++outer) {
      std::vector<Eigen::VectorXd> sk, yk;
      std::vector<double> rho;
      const double eps = std::max(P.opts.opt_tol * g_ref, 1e-4 * g_ref * std::pow(0.3, outer));
      for (int it = 0; it < P.opts.max_inner; ++it) {
        u_try = uf - gu;
        project_u(u_try);
        if ((uf - u_try).cwiseAbs().maxCoeff() <= eps) break;

        Eigen::VectorXd d = Eigen::VectorXd::Zero(nu_vars);
        {  // plain two-loop (small dimension)
          Eigen::VectorXd qv = gu;
          const int m = static_cast<int>(sk.size());
          std::vector<double> alpha(static_cast<size_t>(std::max(m, 1)));
          for (int i = m - 1; i >= 0; --i) {
            alpha[static_cast<size_t>(i)] =
                rho[static_cast<size_t>(i)] * sk[static_cast<size_t>(i)].dot(qv);
            qv -= alpha[static_cast<size_t>(i)] * yk[static_cast<size_t>(i)];
          }
          if (m > 0) qv *= sk.back().dot(yk.back()) / yk.back().squaredNorm();
          for (int i = 0; i < m; ++i) {
            const double beta = rho[static_cast<size_t>(i)] * yk[static_cast<size_t>(i)].dot(qv);
            qv += (alpha[static_cast<size_t>(i)] - beta) * sk[static_cast<size_t>(i)];
          }
          d = -qv;
        }
        if (d.dot(gu) > -1e-14 * d.norm() * gu.norm()) d = -gu;

        double alpha_ls = 1.0;
        double L_try = kInf;
        bool ok = false;
        for (int ls = 0; ls < 40; ++ls) {
          u_try = uf + alpha_ls * d;
          project_u(u_try);
          L_try = f_eval(u_try);
          const double pred = gu.dot(u_try - uf);
          if (std::isfinite(L_try) && pred < 0.0 && L_try <= L + 1e-4 * pred) {
            ok = true;
            break;
          }
          alpha_ls *= 0.5;
        }
        if (!ok) {
          f_eval(uf);  // restore
          break;
        }
        g_eval(gu_new);
        const Eigen::VectorXd step = u_try - uf;
        const Eigen::VectorXd yg = gu_new - gu;
        const double sy = step.dot(yg);
        if (sy > 1e-12 * step.norm() * yg.norm()) {
          sk.push_back(step);
          yk.push_back(yg);
          rho.push_back(1.0 / sy);
          if (static_cast<int>(sk.size()) > P.opts.lbfgs_memory) {
            sk.erase(sk.begin());
            yk.erase(yk.begin());
            rho.erase(rho.begin());
          }
        }
        uf = u_try;
        gu = gu_new;
        L = L_try;
      }

      // inequality violation and multiplier pass
      double v_in = 0.0;
      eval_path_violation(v_in);
      if (P.opts.verbose) {
        u_try = uf - gu;
        project_u(u_try);
        std::fprintf(stderr, "  shoot %d: L=%.6e pg=%.3e vin=%.3e mu=%.1e\n", outer, L,
                     (uf - u_try).cwiseAbs().maxCoeff(), v_in, mu);
      }
      if (v_in <= P.opts.feas_tol && outer > 0) break;
      for (int j = 1; j < N; ++j) {
        Eigen::Vector2d gc, gf;
        path_constraints(j, gc, gf);
        for (int side = 0; side < 2; ++side) {
          const Eigen::Index idx = 2 * (j - 1) + side;
          nu_ceil(idx) = std::max(0.0, nu_ceil(idx) + mu * gc(side));
          if (floor_applies(j)) nu_floor(idx) = std::max(0.0, nu_floor(idx) + mu * gf(side));
        }
      }
      if (v_in > 1e-3) mu = std::min(mu * P.opts.mu_growth, 1e6);
      L = f_eval(uf);
      g_eval(gu);
    }

    // final consistent rollout + costate sweep, then lift to the
    // transcription variables
    f_eval(uf);
    g_eval(gu);
    for (int k = 0; k + 1 < N; ++k) {
      z.segment(off(k), 2) = uf.segment(2 * k, 2);
      z.segment(off(k) + 2, dim) =
          X[static_cast<size_t>(k + 1)].cwiseQuotient(scale);
      lam.segment(static_cast<Eigen::Index>(k) * dim, dim) =
          -scale.cwiseProduct(p_state[static_cast<size_t>(k + 1)]);
    }
    mu = std::clamp(mu, P.opts.mu0, 1e5);
  }

  void init_decision_vector() {
    z.resize(nvar);
    Eigen::VectorXd x = P.x_init;
    SimModel& model = models[0];
    for (int k = 0; k + 1 < N; ++k) {
      const double t = k * P.dt_knot;
      Eigen::Vector2d u;
      if (t < P.k_warm_s)
        u = Eigen::Vector2d::Constant(P.opts.init_warm_duty);
      else
        u = Eigen::Vector2d::Constant(P.opts.init_hold_after_warm ? P.opts.init_warm_duty : 0.0);
      model.step(x, u, P.dt_knot, substeps);
      z.segment(off(k), 2) = u;
      z.segment(off(k) + 2, dim) = x.cwiseQuotient(scale);
    }
  }

  int off(int k) const { return k * (dim + 2); }

  void project(Eigen::VectorXd& v) const {
    for (int k = 0; k + 1 < N; ++k) {
      double* u = v.data() + off(k);
      u[0] = std::clamp(u[0], 0.0, 1.0);
      u[1] = std::clamp(u[1], 0.0, 1.0);
    }
  }
  // wire temperatures of knot j from unscaled state
  Eigen::Vector2d wire_temps(const Eigen::VectorXd& x) const {
    return {x(n) + x(2 * n + 2) / P.params.left.a3, x(n + 1) + x(2 * n + 3) / P.params.right.a3};
  }

  bool floor_applies(int j) const {
    // 1-based knot index j+1; the floor holds strictly after the warm-up
    return P.warm_floor && (j + 1) > k_warm_idx;
  }

  // ceiling / floor constraint values g <= 0 for knot j (unscaled degC)
  void path_constraints(int j, Eigen::Vector2d& g_ceil, Eigen::Vector2d& g_floor) const {
    const Eigen::Vector2d T = wire_temps(X[static_cast<size_t>(j)]);
    const double m = P.opts.constraint_margin;
    g_ceil = T.array() - (P.T_max - m);
    if (floor_applies(j))
      g_floor = (P.T_warm + m) - T.array();
    else
      g_floor = Eigen::Vector2d::Constant(-1.0);  // inactive
  }

  void eval_path_violation(double& v_in) const {
    for (int j = 1; j < N; ++j) {
      Eigen::Vector2d gc, gf;
      path_constraints(j, gc, gf);
      v_in = std::max(v_in, gc.maxCoeff());
      if (floor_applies(j)) v_in = std::max(v_in, gf.maxCoeff());
    }
    v_in = std::max(v_in, 0.0);
  }

  // Unpack z, simulate every interval (recording stages), accumulate the
  // augmented Lagrangian. Returns +inf when an interval diverges.
  double forward_eval(const Eigen::VectorXd& zv) {
    for (int k = 0; k + 1 < N; ++k) {
      U[static_cast<size_t>(k)] = zv.segment(off(k), 2);
      X[static_cast<size_t>(k + 1)] = zv.segment(off(k) + 2, dim).cwiseProduct(scale);
    }
    X[0] = P.x_init;

    numeric::parallel_for(N - 1, workers, [&](int w, int k) {
      auto& model_stages = stages[static_cast<size_t>(k)];
      Eigen::VectorXd x = X[static_cast<size_t>(k)];
      try {
        sens[static_cast<size_t>(w)].forward_record(x, U[static_cast<size_t>(k)], P.dt_knot,
                                                    substeps, model_stages);
        F[static_cast<size_t>(k)] = x;
        interval_ok[static_cast<size_t>(k)] = 1;
      } catch (const IntegrationDiverged&) {
        interval_ok[static_cast<size_t>(k)] = 0;
      }
    });
    for (int k = 0; k + 1 < N; ++k)
      if (!interval_ok[static_cast<size_t>(k)]) return kInf;

    double L = 0.0;
    // objective
    for (int j = 0; j < N; ++j) {
      const Eigen::VectorXd xt = X[static_cast<size_t>(j)] - P.x_ref[static_cast<size_t>(j)];
      const Eigen::VectorXd& w = (j == N - 1) ? QN : P.Q_diag;
      L += 0.5 * xt.dot(w.cwiseProduct(xt));
    }
    for (const auto& u : U) L += 0.5 * P.R_diag * u.squaredNorm();

    // defects
    for (int k = 0; k + 1 < N; ++k) {
      D[static_cast<size_t>(k)] =
          (X[static_cast<size_t>(k + 1)] - F[static_cast<size_t>(k)]).cwiseQuotient(scale);
      const auto lam_k = lam.segment(static_cast<Eigen::Index>(k) * dim, dim);
      L += lam_k.dot(D[static_cast<size_t>(k)]) + 0.5 * mu * D[static_cast<size_t>(k)].squaredNorm();
    }

    // path inequalities
    for (int j = 1; j < N; ++j) {
      Eigen::Vector2d gc, gf;
      path_constraints(j, gc, gf);
      for (int side = 0; side < 2; ++side) {
        const Eigen::Index idx = 2 * (j - 1) + side;
        const double tc = std::max(0.0, nu_ceil(idx) + mu * gc(side));
        L += (tc * tc - nu_ceil(idx) * nu_ceil(idx)) / (2.0 * mu);
        if (floor_applies(j)) {
          const double tf = std::max(0.0, nu_floor(idx) + mu * gf(side));
          L += (tf * tf - nu_floor(idx) * nu_floor(idx)) / (2.0 * mu);
        }
      }
    }
    return L;
  }

  // Gradient of the augmented Lagrangian at the point of the last
  // forward_eval (uses its recorded stages).
  void gradient_eval(Eigen::VectorXd& g) {
    // per-interval adjoint of the defect terms
    numeric::parallel_for(N - 1, workers, [&](int w, int k) {
      Eigen::VectorXd wk =
          lam.segment(static_cast<Eigen::Index>(k) * dim, dim) + mu * D[static_cast<size_t>(k)];
      wk = wk.cwiseQuotient(scale);
      xb[static_cast<size_t>(k)].setZero();
      ub[static_cast<size_t>(k)].setZero();
      sens[static_cast<size_t>(w)].vjp(stages[static_cast<size_t>(k)], P.dt_knot, substeps, wk,
                                       xb[static_cast<size_t>(k)], ub[static_cast<size_t>(k)]);
    });

    g.setZero(nvar);
    for (int k = 0; k + 1 < N; ++k) {
      const Eigen::VectorXd wk =
          lam.segment(static_cast<Eigen::Index>(k) * dim, dim) + mu * D[static_cast<size_t>(k)];
      // d/dxhat_{k+1}: defect identity block
      g.segment(off(k) + 2, dim) += wk;
      // d/dxhat_k for k >= 1 (x_1 fixed)
      if (k >= 1)
        g.segment(off(k - 1) + 2, dim) -= scale.cwiseProduct(xb[static_cast<size_t>(k)]);
      g.segment(off(k), 2) -= ub[static_cast<size_t>(k)];
    }

    // objective
    for (int j = 1; j < N; ++j) {
      const Eigen::VectorXd xt = X[static_cast<size_t>(j)] - P.x_ref[static_cast<size_t>(j)];
      const Eigen::VectorXd& w = (j == N - 1) ? QN : P.Q_diag;
      g.segment(off(j - 1) + 2, dim) += scale.cwiseProduct(w.cwiseProduct(xt));
    }
    for (int k = 0; k + 1 < N; ++k)
      g.segment(off(k), 2) += P.R_diag * U[static_cast<size_t>(k)];

    // path inequalities: dT/dV = 1, dT/dVdot = 1/a3
    for (int j = 1; j < N; ++j) {
      Eigen::Vector2d gc, gf;
      path_constraints(j, gc, gf);
      const int base = off(j - 1) + 2;
      for (int side = 0; side < 2; ++side) {
        const Eigen::Index idx = 2 * (j - 1) + side;
        const double a3 = side == 0 ? P.params.left.a3 : P.params.right.a3;
        const int iv = base + n + side;
        const int ivd = base + 2 * n + 2 + side;
        const double rc = std::max(0.0, nu_ceil(idx) + mu * gc(side));
        if (rc > 0.0) {
          g(iv) += rc * scale(n + side);
          g(ivd) += rc * scale(2 * n + 2 + side) / a3;
        }
        if (floor_applies(j)) {
          const double rf = std::max(0.0, nu_floor(idx) + mu * gf(side));
          if (rf > 0.0) {
            g(iv) -= rf * scale(n + side);
            g(ivd) -= rf * scale(2 * n + 2 + side) / a3;
          }
        }
      }
    }
  }

  void update_multipliers() {
    for (int k = 0; k + 1 < N; ++k)
      lam.segment(static_cast<Eigen::Index>(k) * dim, dim) += mu * D[static_cast<size_t>(k)];
    for (int j = 1; j < N; ++j) {
      Eigen::Vector2d gc, gf;
      path_constraints(j, gc, gf);
      for (int side = 0; side < 2; ++side) {
        const Eigen::Index idx = 2 * (j - 1) + side;
        nu_ceil(idx) = std::max(0.0, nu_ceil(idx) + mu * gc(side));
        if (floor_applies(j)) nu_floor(idx) = std::max(0.0, nu_floor(idx) + mu * gf(side));
      }
    }
  }

  // Two-loop recursion with a diagonal H0 built from the quadratic
  // objective terms plus the penalty curvature; the scalar gamma
  // calibrates it against the latest curvature pair.
  Eigen::VectorXd two_loop(const Eigen::VectorXd& g, const std::vector<Eigen::VectorXd>& sk,
                           const std::vector<Eigen::VectorXd>& yk,
                           const std::vector<double>& rho) const {
    Eigen::VectorXd q = g;
    const int m = static_cast<int>(sk.size());
    std::vector<double> alpha(static_cast<size_t>(std::max(m, 1)));
    for (int i = m - 1; i >= 0; --i) {
      alpha[static_cast<size_t>(i)] = rho[static_cast<size_t>(i)] * sk[static_cast<size_t>(i)].dot(q);
      q -= alpha[static_cast<size_t>(i)] * yk[static_cast<size_t>(i)];
    }
    double gamma = 1.0;
    if (m > 0) {
      const Eigen::VectorXd dy = yk.back().cwiseQuotient(h0_diag);
      gamma = sk.back().dot(yk.back()) / yk.back().dot(dy);
    }
    q = gamma * q.cwiseQuotient(h0_diag);
    for (int i = 0; i < m; ++i) {
      const double beta = rho[static_cast<size_t>(i)] * yk[static_cast<size_t>(i)].dot(q);
      q += (alpha[static_cast<size_t>(i)] - beta) * sk[static_cast<size_t>(i)];
    }
    return q;
  }

  // Rough diagonal curvature of the augmented Lagrangian in scaled
  // coordinates: objective terms plus mu times the defect-identity block
  // (and an input-column estimate measured once at the initial guess).
  void refresh_h0() {
    h0_diag.resize(nvar);
    for (int k = 0; k + 1 < N; ++k) {
      const bool terminal = (k + 1 == N - 1);
      for (int i = 0; i < dim; ++i) {
        const double q = (terminal ? QN(i) : P.Q_diag(i)) * scale(i) * scale(i);
        // identity block of this defect plus the downstream interval's
        // dependence on x_k (approximated by 1)
        h0_diag(off(k) + 2 + i) = q + mu * (k + 2 < N ? 2.0 : 1.0);
      }
      h0_diag(off(k)) = P.R_diag + mu * bcol_sq(0);
      h0_diag(off(k) + 1) = P.R_diag + mu * bcol_sq(1);
    }
    h0_diag = h0_diag.cwiseMax(1e-8);
  }

  void extract_solution(TrajOptSolution& sol) {
    forward_eval(z);
    sol.x_star.assign(X.begin(), X.end());
    sol.u_star.assign(U.begin(), U.end());
    sol.phi_star.resize(N);
    sol.V_star.resize(2, N);
    sol.T_star.resize(2, N);
    SimModel& model = models[0];
    for (int j = 0; j < N; ++j) {
      sol.phi_star(j) = model.phi(X[static_cast<size_t>(j)]);
      sol.V_star(0, j) = X[static_cast<size_t>(j)](n);
      sol.V_star(1, j) = X[static_cast<size_t>(j)](n + 1);
      sol.T_star.col(j) = wire_temps(X[static_cast<size_t>(j)]);
    }
    // plain objective (no multiplier terms)
    double J = 0.0;
    for (int j = 0; j < N; ++j) {
      const Eigen::VectorXd xt = X[static_cast<size_t>(j)] - P.x_ref[static_cast<size_t>(j)];
      const Eigen::VectorXd& w = (j == N - 1) ? QN : P.Q_diag;
      J += 0.5 * xt.dot(w.cwiseProduct(xt));
    }
    for (const auto& u : U) J += 0.5 * P.R_diag * u.squaredNorm();
    sol.objective = J;

    double v_eq = 0.0;
    int worst_k = 0, worst_i = 0;
    for (int k = 0; k + 1 < N; ++k) {
      int i = 0;
      const double m = D[static_cast<size_t>(k)].cwiseAbs().maxCoeff(&i);
      if (m > v_eq) {
        v_eq = m;
        worst_k = k;
        worst_i = i;
      }
    }
    sol.max_defect_scaled = v_eq;
    sol.worst_constraint =
        "defect[interval " + std::to_string(worst_k) + ", state " + std::to_string(worst_i) + "]";

    double v_temp = 0.0;
    for (int j = 1; j < N; ++j) {
      Eigen::Vector2d gc, gf;
      path_constraints(j, gc, gf);
      if (gc.maxCoeff() > v_temp) {
        v_temp = gc.maxCoeff();
        sol.worst_constraint = "T_max[knot " + std::to_string(j) + "]";
      }
      if (floor_applies(j) && gf.maxCoeff() > v_temp) {
        v_temp = gf.maxCoeff();
        sol.worst_constraint = "T_warm[knot " + std::to_string(j) + "]";
      }
    }
    sol.max_temp_violation = std::max(0.0, v_temp);
    double v_u = 0.0;
    for (const auto& u : U) {
      v_u = std::max(v_u, u.maxCoeff() - 1.0);
      v_u = std::max(v_u, -u.minCoeff());
    }
    sol.max_bound_violation = std::max(0.0, v_u);
  }

  const TrajOptProblem& P;
  int n = 0, dim = 0, N = 0, nvar = 0, substeps = 1, workers = 1, k_warm_idx = 0;
  Eigen::VectorXd scale, QN;
  std::vector<SimModel> models;
  std::vector<detail::StepSensitivity> sens;
  std::vector<Eigen::VectorXd> X, F, D, xb;
  std::vector<Eigen::Vector2d> U, ub;
  std::vector<Eigen::MatrixXd> stages;
  std::vector<char> interval_ok;
  Eigen::VectorXd z, lam, nu_ceil, nu_floor;
  Eigen::VectorXd h0_diag;
  Eigen::Vector2d bcol_sq = Eigen::Vector2d::Ones();
  double mu = 1.0;
};

}  // namespace

TrajOptSolution solve(const TrajOptProblem& problem) {
  AlmSolver solver(problem);
  return solver.run();
}

}  // namespace softlimb
