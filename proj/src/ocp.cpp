// Copyright 2026 The goalcast Authors
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

#include "goalcast/ocp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace goalcast {
namespace {

bool trajectory_finite(const Trajectory& traj) {
  if (!std::isfinite(traj.cost)) return false;
  for (const auto& x : traj.states) {
    if (!x.allFinite()) return false;
  }
  return true;
}

struct Linearization {
  std::vector<DynamicsJacobians> dynamics;
  std::vector<RunningQuadratics> running;
  FinalQuadratics final_q;
};

Linearization linearize(const OcpProblem& problem, const Trajectory& traj) {
  const int horizon = traj.horizon();
  Linearization lin;
  lin.dynamics.reserve(horizon);
  lin.running.reserve(horizon);
  for (int k = 0; k < horizon; ++k) {
    lin.dynamics.push_back(problem.model->dynamics_jacobians(
        traj.states[k], traj.controls[k], problem.theta));
    lin.running.push_back(problem.model->running_quadratics(
        traj.states[k], traj.controls[k], problem.theta));
  }
  lin.final_q =
      problem.model->final_quadratics(traj.states.back(), problem.theta);
  return lin;
}

// Sup norm of the total-cost gradient with respect to the controls, via the
// costate recursion.
double control_gradient_norm(const Linearization& lin) {
  Eigen::VectorXd lambda = lin.final_q.x;
  double worst = 0.0;
  for (int k = static_cast<int>(lin.running.size()) - 1; k >= 0; --k) {
    const Eigen::VectorXd gu =
        lin.running[k].u + lin.dynamics[k].G.transpose() * lambda;
    worst = std::max(worst, gu.lpNorm<Eigen::Infinity>());
    lambda = lin.running[k].x + lin.dynamics[k].F.transpose() * lambda;
  }
  return worst;
}

struct BackwardResult {
  std::vector<Eigen::VectorXd> feedforward;
  std::vector<Eigen::MatrixXd> feedback;
  bool positive_definite = false;
};

BackwardResult backward_pass(const Linearization& lin, double mu) {
  const int horizon = static_cast<int>(lin.running.size());
  const int m = static_cast<int>(lin.running[0].u.size());
  BackwardResult result;
  result.feedforward.resize(horizon);
  result.feedback.resize(horizon);

  Eigen::VectorXd vx = lin.final_q.x;
  Eigen::MatrixXd vxx = lin.final_q.xx;
  const Eigen::MatrixXd reg = mu * Eigen::MatrixXd::Identity(m, m);
  for (int k = horizon - 1; k >= 0; --k) {
    const Eigen::MatrixXd& F = lin.dynamics[k].F;
    const Eigen::MatrixXd& G = lin.dynamics[k].G;
    const RunningQuadratics& rq = lin.running[k];

    const Eigen::VectorXd qx = rq.x + F.transpose() * vx;
    const Eigen::VectorXd qu = rq.u + G.transpose() * vx;
    const Eigen::MatrixXd vxx_f = vxx * F;
    const Eigen::MatrixXd qxx = rq.xx + F.transpose() * vxx_f;
    const Eigen::MatrixXd quu = rq.uu + G.transpose() * vxx * G;
    const Eigen::MatrixXd qux = rq.xu.transpose() + G.transpose() * vxx_f;

    Eigen::LLT<Eigen::MatrixXd> llt(quu + reg);
    if (llt.info() != Eigen::Success) return result;
    result.feedforward[k] = -llt.solve(qu);
    result.feedback[k] = -llt.solve(qux);

    const Eigen::VectorXd& kff = result.feedforward[k];
    const Eigen::MatrixXd& kfb = result.feedback[k];
    vx = qx + kfb.transpose() * (quu * kff + qu) + qux.transpose() * kff;
    vxx = qxx + kfb.transpose() * quu * kfb + kfb.transpose() * qux +
          qux.transpose() * kfb;
    vxx = 0.5 * (vxx + vxx.transpose()).eval();
  }
  result.positive_definite = true;
  return result;
}

}  // namespace

Trajectory IlqrSolver::rollout(const OcpProblem& problem,
                               const std::vector<Eigen::VectorXd>& controls) {
  Trajectory traj;
  traj.start_index = problem.start_index;
  traj.controls = controls;
  traj.states.resize(controls.size() + 1);
  traj.states[0] = problem.initial_state;
  double cost = 0.0;
  for (size_t k = 0; k < controls.size(); ++k) {
    cost += problem.model->running_cost(traj.states[k], controls[k],
                                        problem.theta);
    traj.states[k + 1] =
        problem.model->step(traj.states[k], controls[k], problem.theta);
    if (!traj.states[k + 1].allFinite()) {
      traj.cost = std::numeric_limits<double>::infinity();
      return traj;
    }
  }
  cost += problem.model->final_cost(traj.states.back(), problem.theta);
  traj.cost = cost;
  return traj;
}

Trajectory IlqrSolver::shift_warm_start(const OcpProblem& new_problem,
                                        const Trajectory& previous) {
  const int horizon = new_problem.horizon();
  std::vector<Eigen::VectorXd> controls(static_cast<size_t>(horizon));
  const int previous_count = previous.horizon();
  for (int k = 0; k < horizon; ++k) {
    int idx = new_problem.start_index + k - previous.start_index;
    if (idx < 0) idx = 0;
    if (idx >= previous_count) idx = previous_count - 1;
    controls[static_cast<size_t>(k)] = previous.controls[static_cast<size_t>(idx)];
  }
  return rollout(new_problem, controls);
}

Trajectory IlqrSolver::solve(const OcpProblem& problem,
                             const Trajectory* warm_start) const {
  if (problem.model == nullptr) {
    throw std::invalid_argument("solve: missing model");
  }
  if (problem.horizon() < 1) {
    throw std::invalid_argument("solve: horizon must be >= 1");
  }
  if (!problem.initial_state.allFinite()) {
    throw std::invalid_argument("solve: non-finite initial state");
  }

  Trajectory best;
  if (warm_start != nullptr && warm_start->horizon() > 0) {
    best = shift_warm_start(problem, *warm_start);
  } else {
    const Eigen::VectorXd guess = problem.model->initial_control(problem.theta);
    best = rollout(problem, std::vector<Eigen::VectorXd>(
                                static_cast<size_t>(problem.horizon()), guess));
  }
  if (!trajectory_finite(best)) {
    best.diagnostics.finite = false;
    return best;
  }

  double mu = options_.mu_init;
  Linearization lin = linearize(problem, best);
  double gradient = control_gradient_norm(lin);
  best.diagnostics.gradient_norm = gradient;
  best.diagnostics.regularization = mu;
  if (gradient < options_.gradient_tolerance) {
    best.diagnostics.converged = true;
  }

  int iterations = 0;
  while (!best.diagnostics.converged && iterations < options_.max_iterations) {
    ++iterations;
    const BackwardResult bp = backward_pass(lin, mu);
    if (!bp.positive_definite) {
      mu *= options_.mu_increase;
      if (mu > options_.mu_max) {
        best.diagnostics.regularization_failed = true;
        break;
      }
      continue;
    }

    // Backtracking on the rollout; accept any cost decrease.
    bool accepted = false;
    double alpha = 1.0;
    for (int ls = 0; ls < options_.line_search_steps; ++ls, alpha *= 0.5) {
      Trajectory candidate;
      candidate.start_index = problem.start_index;
      candidate.states.resize(best.states.size());
      candidate.controls.resize(best.controls.size());
      candidate.states[0] = problem.initial_state;
      double cost = 0.0;
      double step_norm = 0.0;
      bool finite = true;
      for (int k = 0; k < problem.horizon(); ++k) {
        const Eigen::VectorXd du =
            alpha * bp.feedforward[k] +
            bp.feedback[k] * (candidate.states[k] - best.states[k]);
        candidate.controls[k] = best.controls[k] + du;
        step_norm = std::max(step_norm, du.lpNorm<Eigen::Infinity>());
        cost += problem.model->running_cost(candidate.states[k],
                                            candidate.controls[k],
                                            problem.theta);
        candidate.states[k + 1] = problem.model->step(
            candidate.states[k], candidate.controls[k], problem.theta);
        if (!candidate.states[k + 1].allFinite()) {
          finite = false;
          break;
        }
      }
      if (!finite) continue;
      cost += problem.model->final_cost(candidate.states.back(), problem.theta);
      if (!std::isfinite(cost) || cost >= best.cost) continue;

      candidate.cost = cost;
      candidate.diagnostics = best.diagnostics;
      candidate.diagnostics.step_norm = step_norm;
      best = std::move(candidate);
      accepted = true;
      break;
    }

    if (accepted) {
      best.diagnostics.regularization = mu;
      mu = std::max(mu / options_.mu_decrease, options_.mu_min);
      lin = linearize(problem, best);
      gradient = control_gradient_norm(lin);
      best.diagnostics.gradient_norm = gradient;
      if (gradient < options_.gradient_tolerance) {
        best.diagnostics.converged = true;
        break;
      }
    } else {
      mu *= options_.mu_increase;
      if (mu > options_.mu_max) break;
    }
  }

  for (int polish = 0; polish < options_.polish_iterations; ++polish) {
    if (!std::isfinite(gradient) || gradient == 0.0) break;
    // Newton-quality step: replace the Gauss-Newton cost curvature with the
    // exact Hamiltonian curvature at the current costates.
    Linearization newton = lin;
    {
      Eigen::VectorXd lambda = lin.final_q.x;
      std::vector<Eigen::VectorXd> costates(best.states.size());
      costates.back() = lambda;
      for (int k = problem.horizon() - 1; k >= 0; --k) {
        lambda = lin.running[k].x + lin.dynamics[k].F.transpose() * lambda;
        costates[k] = lambda;
      }
      for (int k = 0; k < problem.horizon(); ++k) {
        const HamiltonianQuadratics ham = problem.model->hamiltonian_quadratics(
            best.states[k], best.controls[k], problem.theta, costates[k + 1]);
        newton.running[k].xx = ham.xx;
        newton.running[k].uu = ham.uu;
        newton.running[k].xu = ham.xu;
      }
    }
    BackwardResult bp = backward_pass(newton, options_.mu_min);
    if (!bp.positive_definite) {
      bp = backward_pass(lin, options_.mu_min);  // indefinite: fall back
      if (!bp.positive_definite) break;
    }

    bool improved = false;
    double alpha = 1.0;
    for (int ls = 0; ls < options_.line_search_steps; ++ls, alpha *= 0.5) {
      Trajectory candidate;
      candidate.start_index = problem.start_index;
      candidate.states.resize(best.states.size());
      candidate.controls.resize(best.controls.size());
      candidate.states[0] = problem.initial_state;
      double cost = 0.0;
      bool finite = true;
      for (int k = 0; k < problem.horizon(); ++k) {
        candidate.controls[k] =
            best.controls[k] + alpha * bp.feedforward[k] +
            bp.feedback[k] * (candidate.states[k] - best.states[k]);
        cost += problem.model->running_cost(candidate.states[k],
                                            candidate.controls[k],
                                            problem.theta);
        candidate.states[k + 1] = problem.model->step(
            candidate.states[k], candidate.controls[k], problem.theta);
        if (!candidate.states[k + 1].allFinite()) {
          finite = false;
          break;
        }
      }
      if (!finite) continue;
      cost += problem.model->final_cost(candidate.states.back(),
                                        problem.theta);
      if (!std::isfinite(cost)) continue;
      const Linearization candidate_lin = linearize(problem, candidate);
      const double candidate_gradient = control_gradient_norm(candidate_lin);
      if (candidate_gradient >= gradient) continue;
      candidate.cost = cost;
      candidate.diagnostics = best.diagnostics;
      best = std::move(candidate);
      lin = candidate_lin;
      gradient = candidate_gradient;
      best.diagnostics.gradient_norm = gradient;
      if (gradient < options_.gradient_tolerance) {
        best.diagnostics.converged = true;
      }
      improved = true;
      break;
    }
    if (!improved) break;
  }

  best.diagnostics.iterations = iterations;
  return best;
}

}  // namespace goalcast
