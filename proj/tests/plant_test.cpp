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

#include "goalcast/plant.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "goalcast/lq.hpp"
#include "goalcast/quadrotor.hpp"

namespace goalcast {
namespace {

TEST(ObserveTest, NoNoiseReturnsStateExactly) {
  RngStream rng(1, RngPurpose::kNoise);
  Eigen::VectorXd state = Eigen::VectorXd::LinSpaced(13, -1.0, 1.0);
  const Eigen::VectorXd obs =
      observe(state, {NoiseSpec::Kind::kNone, 0.0}, rng);
  EXPECT_TRUE(obs == state);
}

TEST(ObserveTest, GaussianSampleStatistics) {
  RngStream rng(2, RngPurpose::kNoise);
  const NoiseSpec noise{NoiseSpec::Kind::kGaussian, 0.5};
  const Eigen::VectorXd state = Eigen::VectorXd::Zero(13);
  const int samples = 100000;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(13);
  Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(13);
  for (int i = 0; i < samples; ++i) {
    const Eigen::VectorXd draw = observe(state, noise, rng);
    sum += draw;
    sum_sq += draw.cwiseProduct(draw);
  }
  for (int c = 0; c < 13; ++c) {
    const double mean = sum(c) / samples;
    const double stddev = std::sqrt(sum_sq(c) / samples - mean * mean);
    EXPECT_NEAR(stddev, 0.5, 0.005) << "component " << c;
    EXPECT_NEAR(mean, 0.0, 0.01);
  }
}

TEST(ObserveTest, UniformSupportAndMean) {
  RngStream rng(3, RngPurpose::kNoise);
  const NoiseSpec noise{NoiseSpec::Kind::kUniform, 1.0};
  const Eigen::VectorXd state = Eigen::VectorXd::Zero(13);
  const int samples = 100000;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(13);
  for (int i = 0; i < samples; ++i) {
    const Eigen::VectorXd draw = observe(state, noise, rng);
    ASSERT_LE(draw.lpNorm<Eigen::Infinity>(), 1.0);
    sum += draw;
  }
  for (int c = 0; c < 13; ++c) {
    EXPECT_NEAR(sum(c) / samples, 0.0, 0.01) << "component " << c;
  }
}

TEST(GoalScheduleTest, ValidationRejectsBadSchedules) {
  const Eigen::VectorXd goal = Eigen::VectorXd::Zero(2);
  GoalSchedule missing_zero{{{5, goal}}};
  EXPECT_THROW(missing_zero.validate(10), std::invalid_argument);
  GoalSchedule unordered{{{0, goal}, {7, goal}, {7, goal}}};
  EXPECT_THROW(unordered.validate(10), std::invalid_argument);
  GoalSchedule too_late{{{0, goal}, {10, goal}}};
  EXPECT_THROW(too_late.validate(10), std::invalid_argument);
  GoalSchedule ok{{{0, goal}, {5, goal}}};
  EXPECT_NO_THROW(ok.validate(10));
}

TEST(GoalScheduleTest, GoalAtPicksActiveSegment) {
  Eigen::VectorXd g0 = Eigen::VectorXd::Constant(2, 1.0);
  Eigen::VectorXd g1 = Eigen::VectorXd::Constant(2, 2.0);
  GoalSchedule schedule{{{0, g0}, {5, g1}}};
  EXPECT_TRUE(schedule.goal_at(0) == g0);
  EXPECT_TRUE(schedule.goal_at(4) == g0);
  EXPECT_TRUE(schedule.goal_at(5) == g1);
  EXPECT_TRUE(schedule.goal_at(9) == g1);
}

class TruthLqTest : public ::testing::Test {
 protected:
  TruthLqTest() : model(make_A(), make_B()) {
    theta.resize(6);
    theta << 0.0, 0.0, 0.4, 2.0, 1.0, 0.0;
    x0.resize(2);
    x0 << -1.0, 0.0;
  }
  static Eigen::MatrixXd make_A() {
    Eigen::MatrixXd A(2, 2);
    A << 1.0, 0.15, 0.0, 1.0;
    return A;
  }
  static Eigen::MatrixXd make_B() {
    Eigen::MatrixXd B(2, 1);
    B << 0.01125, 0.15;
    return B;
  }
  LinearQuadraticModel model;
  Eigen::VectorXd theta;
  Eigen::VectorXd x0;
  IlqrSolver solver;
};

TEST_F(TruthLqTest, NoSwitchEqualsSingleSolve) {
  const Eigen::VectorXd goal = theta.segment(4, 2);
  GoalSchedule schedule{{{0, goal}}};
  const GroundTruthRun run =
      generate_truth(model, solver, theta, schedule, 12, x0);

  OcpProblem problem{&model, theta, x0, 0, 12};
  const Trajectory traj = solver.solve(problem);
  ASSERT_EQ(run.states.size(), 13u);
  for (int t = 0; t <= 12; ++t) {
    EXPECT_TRUE(run.states[t] == traj.states[t]);
  }
}

TEST_F(TruthLqTest, SwitchToSameGoalMatchesNoSwitchRun) {
  const Eigen::VectorXd goal = theta.segment(4, 2);
  GoalSchedule no_switch{{{0, goal}}};
  GoalSchedule same_goal{{{0, goal}, {6, goal}}};
  const GroundTruthRun a =
      generate_truth(model, solver, theta, no_switch, 12, x0);
  const GroundTruthRun b =
      generate_truth(model, solver, theta, same_goal, 12, x0);
  for (int t = 0; t <= 12; ++t) {
    EXPECT_LT((a.states[t] - b.states[t]).lpNorm<Eigen::Infinity>(), 1e-6)
        << "t = " << t;
  }
}

TEST(TruthQuadrotorTest, StateContinuousAtSwitchAndDeterministic) {
  const QuadrotorModel model;
  const IlqrSolver solver;
  const Eigen::VectorXd x0 = quadrotor_rest_state(Eigen::Vector3d::Zero());
  const Eigen::VectorXd theta =
      quadrotor_nominal_theta(quadrotor_rest_state(Eigen::Vector3d(2, 1, 1)));
  GoalSchedule schedule{
      {{0, quadrotor_rest_state(Eigen::Vector3d(2, 1, 1))},
       {8, quadrotor_rest_state(Eigen::Vector3d(-1, 2, 0))}}};

  const GroundTruthRun a =
      generate_truth(model, solver, theta, schedule, 20, x0);
  const GroundTruthRun b =
      generate_truth(model, solver, theta, schedule, 20, x0);
  ASSERT_EQ(a.states.size(), 21u);
  ASSERT_EQ(a.controls.size(), 20u);
  for (const auto& x : a.states) EXPECT_TRUE(x.allFinite());
  for (int t = 0; t <= 20; ++t) {
    EXPECT_TRUE(a.states[t] == b.states[t]);  // determinism
  }
  // replanned segment starts from the realized switch state: the state at
  // t = 8 is a rollout of the first segment's controls and the anchor of the
  // second segment simultaneously
  const Eigen::VectorXd pre_switch =
      model.step(a.states[7], a.controls[7], theta);
  EXPECT_TRUE(pre_switch == a.states[8]);
}

TEST(TruthQuadrotorTest, JsonArchiveRoundTrip) {
  const QuadrotorModel model;
  const IlqrSolver solver;
  const Eigen::VectorXd x0 = quadrotor_rest_state(Eigen::Vector3d::Zero());
  const Eigen::VectorXd goal =
      quadrotor_rest_state(Eigen::Vector3d(1, -1, 0.5));
  const Eigen::VectorXd theta = quadrotor_nominal_theta(goal);
  GoalSchedule schedule{{{0, goal}}};
  GroundTruthRun run = generate_truth(model, solver, theta, schedule, 10, x0);
  run.seed = 42;
  RngStream rng(42, RngPurpose::kNoise);
  add_observations(&run, {NoiseSpec::Kind::kGaussian, 0.1}, rng);

  const GroundTruthRun loaded = truth_from_json(truth_to_json(run));
  EXPECT_EQ(loaded.seed, run.seed);
  ASSERT_EQ(loaded.states.size(), run.states.size());
  for (size_t t = 0; t < run.states.size(); ++t) {
    EXPECT_TRUE(loaded.states[t] == run.states[t]);
    EXPECT_TRUE(loaded.observations[t] == run.observations[t]);
  }
  EXPECT_TRUE(loaded.schedule.entries[0].goal == run.schedule.entries[0].goal);
}

TEST(TruthQuadrotorTest, SeparateNoiseStreamsShareTruth) {
  const QuadrotorModel model;
  const IlqrSolver solver;
  const Eigen::VectorXd x0 = quadrotor_rest_state(Eigen::Vector3d::Zero());
  const Eigen::VectorXd goal = quadrotor_rest_state(Eigen::Vector3d(1, 1, 1));
  const Eigen::VectorXd theta = quadrotor_nominal_theta(goal);
  GoalSchedule schedule{{{0, goal}}};
  GroundTruthRun run = generate_truth(model, solver, theta, schedule, 8, x0);

  RngStream rng_a(7, RngPurpose::kNoise);
  RngStream rng_b(8, RngPurpose::kNoise);
  GroundTruthRun run_b = run;
  add_observations(&run, {NoiseSpec::Kind::kGaussian, 0.5}, rng_a);
  add_observations(&run_b, {NoiseSpec::Kind::kGaussian, 0.5}, rng_b);
  // same truth, different draws
  EXPECT_TRUE(run.states[5] == run_b.states[5]);
  EXPECT_FALSE(run.observations[5] == run_b.observations[5]);
}

}  // namespace
}  // namespace goalcast
