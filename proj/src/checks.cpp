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

#include "goalcast/checks.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "goalcast/ocp.hpp"
#include "goalcast/pdp.hpp"
#include "goalcast/quadrotor.hpp"
#include "goalcast/rng.hpp"

namespace goalcast {
namespace {

IlqrSolver::Options tight_options() {
  IlqrSolver::Options options;
  options.max_iterations = 300;
  options.gradient_tolerance = 1e-8;
  options.polish_iterations = 40;
  return options;
}

double corrected_relative_error(double actual, double expected,
                                double abs_floor) {
  const double numerator =
      std::max(0.0, std::abs(actual - expected) - abs_floor);
  return numerator / (std::abs(actual) + std::abs(expected) + abs_floor);
}

// Solves an instance and differentiates its final-state map, returning the
// max absolute deviations from the closed form.
void check_lq_instance(const LinearQuadraticModel& model,
                       const Eigen::VectorXd& theta,
                       const Eigen::VectorXd& initial_state, int horizon,
                       double* solve_error, double* sensitivity_error) {
  const IlqrSolver solver(tight_options());
  OcpProblem problem{&model, theta, initial_state, 0, horizon};
  const Trajectory traj = solver.solve(problem);
  if (!traj.diagnostics.converged) {
    throw std::runtime_error("lq oracle: solver did not converge");
  }
  const LqClosedForm oracle =
      lq_closed_form(model, theta, initial_state, horizon);

  double worst = 0.0;
  for (int k = 0; k < horizon; ++k) {
    const Eigen::VectorXd expected =
        oracle.stacked_controls.segment(k * model.control_dim(),
                                        model.control_dim());
    worst = std::max(worst, (traj.controls[static_cast<size_t>(k)] - expected)
                                .lpNorm<Eigen::Infinity>());
  }
  worst = std::max(worst, (traj.states.back() - oracle.final_state)
                              .lpNorm<Eigen::Infinity>());
  worst = std::max(worst, std::abs(traj.cost - oracle.cost));
  *solve_error = worst;

  const CostateResult costates = compute_costates(model, traj, theta);
  const SensitivityBundle bundle = build_sensitivity_bundle(
      model, traj, theta, costates, traj.diagnostics.regularization);
  const BackwardRecursion backward = backward_recursion(bundle);
  const SensitivitySolution sens = forward_sensitivity(bundle, backward);
  *sensitivity_error = (sens.X.back() - oracle.final_state_sensitivity)
                           .lpNorm<Eigen::Infinity>();
}

}  // namespace

LqClosedForm lq_closed_form(const LinearQuadraticModel& model,
                            const Eigen::VectorXd& theta,
                            const Eigen::VectorXd& initial_state,
                            int horizon) {
  const int n = model.state_dim();
  const int m = model.control_dim();
  const ThetaLayout& layout = model.theta_layout();
  const Eigen::VectorXd drift = theta.segment(0, n);
  const double wr = theta(layout.running_offset());
  const double wf = theta(layout.final_offset());
  const Eigen::VectorXd goal =
      theta.segment(layout.goal_offset(), layout.goal_dim);

  // x_L = A^L x0 + S d + sum_k A^(L-1-k) B u_k
  Eigen::MatrixXd reach(n, m * horizon);       // [R_0 ... R_{L-1}]
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);  // A^j
  Eigen::MatrixXd drift_sum = Eigen::MatrixXd::Zero(n, n);  // S
  for (int j = 0; j < horizon; ++j) {
    reach.block(0, (horizon - 1 - j) * m, n, m) = power * model.B();
    drift_sum += power;
    power *= model.A();
  }
  const Eigen::VectorXd offset = power * initial_state + drift_sum * drift;

  const Eigen::MatrixXd normal =
      wr * Eigen::MatrixXd::Identity(m * horizon, m * horizon) +
      wf * reach.transpose() * reach;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
  if (ldlt.info() != Eigen::Success) {
    throw std::runtime_error("lq_closed_form: singular normal equations");
  }

  LqClosedForm out;
  out.stacked_controls = ldlt.solve(-wf * reach.transpose() * (offset - goal));
  out.final_state = offset + reach * out.stacked_controls;
  out.cost = wr * out.stacked_controls.squaredNorm() +
             wf * (out.final_state - goal).squaredNorm();

  const int s = layout.size();
  Eigen::MatrixXd du = Eigen::MatrixXd::Zero(m * horizon, s);
  du.block(0, layout.dynamics_offset(), m * horizon, n) =
      ldlt.solve(-wf * reach.transpose() * drift_sum);
  du.col(layout.running_offset()) = ldlt.solve(-out.stacked_controls);
  du.col(layout.final_offset()) =
      ldlt.solve(-reach.transpose() * (out.final_state - goal));
  du.block(0, layout.goal_offset(), m * horizon, n) =
      ldlt.solve(wf * reach.transpose());

  out.control_sensitivity = du;
  out.final_state_sensitivity = reach * du;
  out.final_state_sensitivity.block(0, layout.dynamics_offset(), n, n) +=
      drift_sum;
  return out;
}

std::string LqOracleReport::summary() const {
  std::ostringstream os;
  os << "scalar solve " << scalar_solve_error << ", scalar sensitivity "
     << scalar_sensitivity_error << ", two-state solve "
     << two_state_solve_error << ", two-state sensitivity "
     << two_state_sensitivity_error << (pass ? " [pass]" : " [FAIL]");
  return os.str();
}

LqOracleReport run_lq_oracle_check() {
  LqOracleReport report;

  // scalar: x+ = x + u, cost sum 0.5 u^2 + 0.5 x_T^2, x0 = 1, two steps
  {
    LinearQuadraticModel model(Eigen::MatrixXd::Ones(1, 1),
                               Eigen::MatrixXd::Ones(1, 1));
    Eigen::VectorXd theta(4);
    theta << 0.0, 0.5, 0.5, 0.0;
    Eigen::VectorXd x0(1);
    x0 << 1.0;
    check_lq_instance(model, theta, x0, 2, &report.scalar_solve_error,
                      &report.scalar_sensitivity_error);
  }

  // double integrator with drift and an off-origin goal
  {
    const double dt = 0.15;
    Eigen::MatrixXd A(2, 2), B(2, 1);
    A << 1.0, dt, 0.0, 1.0;
    B << 0.5 * dt * dt, dt;
    LinearQuadraticModel model(A, B);
    Eigen::VectorXd theta(6);
    theta << 0.02, -0.01, 0.4, 1.7, 1.2, 0.0;
    Eigen::VectorXd x0(2);
    x0 << 0.0, 0.1;
    check_lq_instance(model, theta, x0, 12, &report.two_state_solve_error,
                      &report.two_state_sensitivity_error);
  }

  report.pass = report.scalar_solve_error < 1e-6 &&
                report.scalar_sensitivity_error < 1e-6 &&
                report.two_state_solve_error < 1e-6 &&
                report.two_state_sensitivity_error < 1e-6;
  return report;
}

std::string GradientCheckReport::summary() const {
  std::ostringstream os;
  os << instances << " instances, max corrected relative error " << max_error
     << " in " << seconds << " s" << (pass ? " [pass]" : " [FAIL]");
  return os.str();
}

GradientCheckReport run_pdp_gradient_check(int instances, int max_horizon,
                                           std::uint64_t seed) {
  const auto started = std::chrono::steady_clock::now();
  const QuadrotorModel model;
  const IlqrSolver solver(tight_options());
  GradientCheckReport report;
  report.instances = instances;

  for (int instance = 0; instance < instances; ++instance) {
    RngStream rng(seed + static_cast<std::uint64_t>(instance),
                  RngPurpose::kMisc);
    Eigen::VectorXd goal = quadrotor_rest_state(Eigen::Vector3d(
        rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-4, 4)));
    Eigen::VectorXd theta = quadrotor_nominal_theta(goal);
    for (int i = 0; i < 11; ++i) theta(i) *= rng.uniform(0.75, 1.25);
    const Eigen::VectorXd x0 = quadrotor_rest_state(Eigen::Vector3d(
        rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)));
    const int horizon = std::min(8 + 2 * instance, max_horizon);

    OcpProblem problem{&model, theta, x0, 0, horizon};
    const Trajectory base = solver.solve(problem);
    if (base.diagnostics.gradient_norm > 1e-9) {
      throw std::runtime_error("gradient check: base solve not stationary");
    }
    const CostateResult costates = compute_costates(model, base, theta);
    const SensitivityBundle bundle = build_sensitivity_bundle(
        model, base, theta, costates, base.diagnostics.regularization);
    const BackwardRecursion backward = backward_recursion(bundle);
    const SensitivitySolution sens = forward_sensitivity(bundle, backward);

    double worst = 0.0;
    for (int j = 0; j < theta.size(); ++j) {
      const double h = 1e-5 * std::max(1.0, std::abs(theta(j)));
      OcpProblem plus = problem, minus = problem;
      plus.theta(j) += h;
      minus.theta(j) -= h;
      const Trajectory tp = solver.solve(plus, &base);
      const Trajectory tm = solver.solve(minus, &base);
      if (tp.diagnostics.gradient_norm > 1e-9 ||
          tm.diagnostics.gradient_norm > 1e-9) {
        throw std::runtime_error(
            "gradient check: perturbed solve not stationary enough");
      }
      for (int k = 1; k <= horizon; ++k) {
        const Eigen::VectorXd fd =
            (tp.states[static_cast<size_t>(k)] -
             tm.states[static_cast<size_t>(k)]) /
            (2.0 * h);
        for (int i = 0; i < fd.size(); ++i) {
          worst = std::max(
              worst, corrected_relative_error(sens.X[static_cast<size_t>(k)](i, j),
                                              fd(i), 1e-6));
        }
      }
    }
    report.per_instance_error.push_back(worst);
    report.max_error = std::max(report.max_error, worst);
  }

  report.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - started)
                       .count();
  report.pass = report.max_error < 1e-3;
  return report;
}

}  // namespace goalcast
