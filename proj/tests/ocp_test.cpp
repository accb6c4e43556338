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

#include <gtest/gtest.h>

#include "goalcast/checks.hpp"
#include "goalcast/lq.hpp"
#include "goalcast/quadrotor.hpp"
#include "goalcast/rng.hpp"

namespace goalcast {
namespace {

IlqrSolver::Options tight() {
  IlqrSolver::Options options;
  options.gradient_tolerance = 1e-8;
  options.max_iterations = 300;
  return options;
}

TEST(IlqrSolverTest, ScalarInstanceMatchesHandSolution) {
  // x+ = x + u, cost 0.5 u0^2 + 0.5 u1^2 + 0.5 x2^2 from x0 = 1:
  // u0 = u1 = -1/3, states 1, 2/3, 1/3, total cost 1/6.
  LinearQuadraticModel model(Eigen::MatrixXd::Ones(1, 1),
                             Eigen::MatrixXd::Ones(1, 1));
  Eigen::VectorXd theta(4);
  theta << 0.0, 0.5, 0.5, 0.0;
  Eigen::VectorXd x0(1);
  x0 << 1.0;
  OcpProblem problem{&model, theta, x0, 0, 2};

  const IlqrSolver solver;
  const Trajectory traj = solver.solve(problem);
  ASSERT_TRUE(traj.diagnostics.converged);
  EXPECT_NEAR(traj.controls[0](0), -1.0 / 3.0, 1e-6);
  EXPECT_NEAR(traj.controls[1](0), -1.0 / 3.0, 1e-6);
  EXPECT_NEAR(traj.states[1](0), 2.0 / 3.0, 1e-6);
  EXPECT_NEAR(traj.states[2](0), 1.0 / 3.0, 1e-6);
  EXPECT_NEAR(traj.cost, 1.0 / 6.0, 1e-6);
}

TEST(IlqrSolverTest, MatchesClosedFormOnRandomLqInstances) {
  RngStream rng(41, RngPurpose::kMisc);
  const IlqrSolver solver(tight());
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 2, m = 1, horizon = 10;
    Eigen::MatrixXd A(n, n), B(n, m);
    A << 1.0, 0.15, 0.0, 1.0;
    B << 0.01125, 0.15;
    LinearQuadraticModel model(A, B);
    Eigen::VectorXd theta(2 * n + 2);
    theta << rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1),
        rng.uniform(0.2, 1.0), rng.uniform(0.5, 3.0), rng.uniform(-2, 2),
        rng.uniform(-1, 1);
    Eigen::VectorXd x0(n);
    x0 << rng.uniform(-1, 1), rng.uniform(-0.5, 0.5);

    OcpProblem problem{&model, theta, x0, 0, horizon};
    const Trajectory traj = solver.solve(problem);
    ASSERT_TRUE(traj.diagnostics.converged);
    const LqClosedForm oracle = lq_closed_form(model, theta, x0, horizon);
    for (int k = 0; k < horizon; ++k) {
      EXPECT_NEAR(traj.controls[k](0), oracle.stacked_controls(k), 1e-6);
    }
    EXPECT_NEAR(traj.cost, oracle.cost, 1e-6);
  }
}

TEST(IlqrSolverTest, RestingAtGoalNeedsNoControl) {
  const double dt = 0.15;
  Eigen::MatrixXd A(2, 2), B(2, 1);
  A << 1.0, dt, 0.0, 1.0;
  B << 0.5 * dt * dt, dt;
  LinearQuadraticModel model(A, B);
  Eigen::VectorXd theta(6);
  theta << 0.0, 0.0, 0.5, 2.0, 0.3, 0.0;  // goal position 0.3, at rest
  Eigen::VectorXd x0(2);
  x0 << 0.3, 0.0;

  OcpProblem problem{&model, theta, x0, 0, 8};
  const Trajectory traj = IlqrSolver().solve(problem);
  ASSERT_TRUE(traj.diagnostics.converged);
  EXPECT_EQ(traj.diagnostics.iterations, 0);  // zero control is optimal
  for (const auto& u : traj.controls) {
    EXPECT_DOUBLE_EQ(u(0), 0.0);
  }
  EXPECT_DOUBLE_EQ(traj.cost, 0.0);
}

TEST(IlqrSolverTest, HoverToHoverCostBoundedByHoverControl) {
  const QuadrotorModel model;
  const Eigen::VectorXd x0 = quadrotor_rest_state(Eigen::Vector3d(1, -2, 0.5));
  const Eigen::VectorXd theta = quadrotor_nominal_theta(x0);
  const int horizon = 12;
  OcpProblem problem{&model, theta, x0, 0, horizon};

  const Trajectory traj = IlqrSolver().solve(problem);
  ASSERT_TRUE(traj.diagnostics.converged);

  // constant hover thrust is feasible and keeps the state at the goal, so it
  // upper-bounds the optimal cost
  const std::vector<Eigen::VectorXd> hover(
      horizon, Eigen::VectorXd::Constant(4, 2.5));
  const Trajectory hover_traj = IlqrSolver::rollout(problem, hover);
  EXPECT_LE(traj.cost, hover_traj.cost + 1e-6);
}

TEST(IlqrSolverTest, ReturnedTrajectoryIsDynamicallyFeasible) {
  const QuadrotorModel model;
  const Eigen::VectorXd x0 = quadrotor_rest_state(Eigen::Vector3d::Zero());
  const Eigen::VectorXd goal = quadrotor_rest_state(Eigen::Vector3d(2, 1, -1));
  const Eigen::VectorXd theta = quadrotor_nominal_theta(goal);
  OcpProblem problem{&model, theta, x0, 0, 15};

  const Trajectory traj = IlqrSolver().solve(problem);
  for (int k = 0; k < traj.horizon(); ++k) {
    const Eigen::VectorXd propagated =
        model.step(traj.states[k], traj.controls[k], theta);
    EXPECT_LT((traj.states[k + 1] - propagated).lpNorm<Eigen::Infinity>(),
              1e-9);
  }
}

TEST(IlqrSolverTest, DeterministicAcrossRepeatedSolves) {
  const QuadrotorModel model;
  const Eigen::VectorXd x0 = quadrotor_rest_state(Eigen::Vector3d::Zero());
  const Eigen::VectorXd goal = quadrotor_rest_state(Eigen::Vector3d(1, 2, 1));
  const Eigen::VectorXd theta = quadrotor_nominal_theta(goal);
  OcpProblem problem{&model, theta, x0, 0, 10};

  const IlqrSolver solver;
  const Trajectory a = solver.solve(problem);
  const Trajectory b = solver.solve(problem);
  ASSERT_EQ(a.horizon(), b.horizon());
  for (int k = 0; k <= a.horizon(); ++k) {
    EXPECT_TRUE(a.states[k] == b.states[k]);
  }
  for (int k = 0; k < a.horizon(); ++k) {
    EXPECT_TRUE(a.controls[k] == b.controls[k]);
  }
  EXPECT_EQ(a.cost, b.cost);
}

TEST(ShiftWarmStartTest, SameSpanReturnsIdenticalSolution) {
  const QuadrotorModel model;
  const Eigen::VectorXd x0 = quadrotor_rest_state(Eigen::Vector3d::Zero());
  const Eigen::VectorXd goal = quadrotor_rest_state(Eigen::Vector3d(1, 0, 1));
  const Eigen::VectorXd theta = quadrotor_nominal_theta(goal);
  OcpProblem problem{&model, theta, x0, 0, 8};
  const Trajectory traj = IlqrSolver().solve(problem);

  const Trajectory shifted = IlqrSolver::shift_warm_start(problem, traj);
  for (int k = 0; k < traj.horizon(); ++k) {
    EXPECT_TRUE(shifted.controls[k] == traj.controls[k]);
    EXPECT_TRUE(shifted.states[k] == traj.states[k]);
  }
}

TEST(ShiftWarmStartTest, ShiftByOneReusesTailAndRepeatsLastControl) {
  // fixed-length window moved one step forward: controls 1..L-1 reused, one
  // appended copy of the last control
  LinearQuadraticModel model(Eigen::MatrixXd::Ones(1, 1),
                             Eigen::MatrixXd::Ones(1, 1));
  Eigen::VectorXd theta(4);
  theta << 0.0, 0.5, 0.5, 0.0;
  Eigen::VectorXd x0(1);
  x0 << 1.0;
  OcpProblem problem{&model, theta, x0, 0, 5};
  Trajectory traj = IlqrSolver().solve(problem);

  OcpProblem next = problem;
  next.start_index = 1;
  next.end_index = 6;
  next.initial_state = traj.states[1];
  const Trajectory shifted = IlqrSolver::shift_warm_start(next, traj);
  ASSERT_EQ(shifted.horizon(), 5);
  for (int k = 0; k < 4; ++k) {
    EXPECT_TRUE(shifted.controls[k] == traj.controls[k + 1]);
  }
  EXPECT_TRUE(shifted.controls[4] == traj.controls[4]);
}

TEST(ShiftWarmStartTest, FarAnchorStaysDynamicallyFeasible) {
  const QuadrotorModel model;
  const Eigen::VectorXd goal = quadrotor_rest_state(Eigen::Vector3d(1, 1, 1));
  const Eigen::VectorXd theta = quadrotor_nominal_theta(goal);
  OcpProblem problem{&model, theta,
                     quadrotor_rest_state(Eigen::Vector3d::Zero()), 0, 8};
  const Trajectory traj = IlqrSolver().solve(problem);

  OcpProblem moved = problem;
  moved.initial_state = quadrotor_rest_state(Eigen::Vector3d(5, -5, 2));
  const Trajectory shifted = IlqrSolver::shift_warm_start(moved, traj);
  EXPECT_TRUE(shifted.states[0] == moved.initial_state);
  for (int k = 0; k < shifted.horizon(); ++k) {
    const Eigen::VectorXd propagated =
        model.step(shifted.states[k], shifted.controls[k], theta);
    EXPECT_LT((shifted.states[k + 1] - propagated).lpNorm<Eigen::Infinity>(),
              1e-12);
  }
}

TEST(IlqrSolverTest, LqOracleSuitePasses) {
  const LqOracleReport report = run_lq_oracle_check();
  EXPECT_TRUE(report.pass) << report.summary();
}

}  // namespace
}  // namespace goalcast
