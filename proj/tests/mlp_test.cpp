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

#include "goalcast/mlp.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace goalcast {
namespace {

Eigen::VectorXd random_theta(const MlpModel& model, RngStream& rng,
                             double weight_range = 0.4) {
  const ThetaLayout& layout = model.theta_layout();
  Eigen::VectorXd theta(layout.size());
  for (int i = 0; i < layout.dynamics_dim; ++i) {
    theta(i) = rng.uniform(-weight_range, weight_range);
  }
  for (int i = 0; i < 4; ++i) {
    theta(layout.final_offset() + i) = rng.uniform(0.5, 5.0);
  }
  for (int i = 0; i < 13; ++i) {
    theta(layout.goal_offset() + i) = rng.uniform(-1.0, 1.0);
  }
  return theta;
}

TEST(MlpArchitectureTest, VehicleSizedParameterCounts) {
  EXPECT_EQ(MlpArchitecture::quadrotor_sized(1).parameter_count(), 2121);
  EXPECT_EQ(MlpArchitecture::quadrotor_sized(2).parameter_count(), 3889);
  EXPECT_EQ(MlpArchitecture::quadrotor_sized(3).parameter_count(), 5793);
}

TEST(MlpArchitectureTest, HiddenWidthsFollowInputMultiples) {
  const MlpArchitecture one = MlpArchitecture::quadrotor_sized(1);
  EXPECT_EQ(one.input_dim, 17);
  EXPECT_EQ(one.output_dim, 13);
  ASSERT_EQ(one.hidden.size(), 1u);
  EXPECT_EQ(one.hidden[0], 68);
  const MlpArchitecture three = MlpArchitecture::quadrotor_sized(3);
  ASSERT_EQ(three.hidden.size(), 3u);
  EXPECT_EQ(three.hidden[0], 34);
  EXPECT_EQ(three.hidden[1], 68);
  EXPECT_EQ(three.hidden[2], 34);
}

TEST(MlpStepTest, ZeroWeightsReturnOutputBias) {
  const MlpArchitecture arch = MlpArchitecture::quadrotor_sized(1);
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(arch.parameter_count());
  // set the output bias (last 13 packed entries) to a recognizable pattern
  for (int i = 0; i < 13; ++i) {
    weights(arch.parameter_count() - 13 + i) = 0.5 + i;
  }
  const Eigen::VectorXd out = mlp_step(arch, weights,
                                       Eigen::VectorXd::Ones(13),
                                       Eigen::VectorXd::Ones(4));
  for (int i = 0; i < 13; ++i) {
    EXPECT_DOUBLE_EQ(out(i), 0.5 + i);
  }
}

TEST(MlpStepTest, LengthMismatchThrows) {
  const MlpArchitecture arch = MlpArchitecture::quadrotor_sized(1);
  EXPECT_THROW(mlp_step(arch, Eigen::VectorXd::Zero(100),
                        Eigen::VectorXd::Zero(13), Eigen::VectorXd::Zero(4)),
               std::invalid_argument);
  EXPECT_THROW(mlp_step(arch, Eigen::VectorXd::Zero(arch.parameter_count()),
                        Eigen::VectorXd::Zero(12), Eigen::VectorXd::Zero(4)),
               std::invalid_argument);
}

TEST(MlpModelTest, JacobiansMatchFiniteDifferences) {
  // narrow hidden layer keeps the finite-difference sweeps cheap
  MlpArchitecture arch;
  arch.input_dim = 17;
  arch.hidden = {6};
  arch.output_dim = 13;
  const MlpModel model(arch);
  RngStream rng(101, RngPurpose::kMisc);
  const Eigen::VectorXd theta = random_theta(model, rng);
  Eigen::VectorXd x(13), u(4);
  for (int i = 0; i < 13; ++i) x(i) = rng.uniform(-1, 1);
  for (int i = 0; i < 4; ++i) u(i) = rng.uniform(-1, 1);

  const DynamicsJacobians jac = model.dynamics_jacobians(x, u, theta);
  const Eigen::MatrixXd fd_F = testutil::central_jacobian(
      [&](const Eigen::VectorXd& v) { return model.step(v, u, theta); }, x);
  const Eigen::MatrixXd fd_G = testutil::central_jacobian(
      [&](const Eigen::VectorXd& v) { return model.step(x, v, theta); }, u);
  EXPECT_LT(testutil::max_relative_error(jac.F, fd_F), 1e-4);
  EXPECT_LT(testutil::max_relative_error(jac.G, fd_G), 1e-4);

  const Eigen::MatrixXd E = model.dynamics_theta_jacobian(x, u, theta);
  const Eigen::MatrixXd fd_E = testutil::central_jacobian(
      [&](const Eigen::VectorXd& v) { return model.step(x, u, v); }, theta);
  EXPECT_LT(testutil::max_relative_error(E, fd_E), 1e-4);
  // objective parameters never enter the dynamics
  EXPECT_TRUE(E.rightCols(17).isZero(0.0));
}

TEST(MlpModelTest, HamiltonianBlocksMatchFiniteDifferences) {
  MlpArchitecture arch;
  arch.input_dim = 17;
  arch.hidden = {6};
  arch.output_dim = 13;
  const MlpModel model(arch);
  RngStream rng(103, RngPurpose::kMisc);
  const Eigen::VectorXd theta = random_theta(model, rng);
  Eigen::VectorXd x(13), u(4), lambda(13);
  for (int i = 0; i < 13; ++i) x(i) = rng.uniform(-1, 1);
  for (int i = 0; i < 4; ++i) u(i) = rng.uniform(-1, 1);
  for (int i = 0; i < 13; ++i) lambda(i) = rng.uniform(-2, 2);

  const HamiltonianQuadratics ham =
      model.hamiltonian_quadratics(x, u, theta, lambda);

  const int n = 13, m = 4, s = model.theta_layout().size();
  Eigen::VectorXd z(n + m + s);
  z << x, u, theta;
  const auto value = [&](const Eigen::VectorXd& v) {
    const Eigen::VectorXd xs = v.segment(0, n);
    const Eigen::VectorXd us = v.segment(n, m);
    const Eigen::VectorXd th = v.segment(n + m, s);
    return model.running_cost(xs, us, th) + lambda.dot(model.step(xs, us, th));
  };
  const Eigen::MatrixXd fd = testutil::central_hessian(value, z);
  EXPECT_LT(testutil::max_relative_error(ham.xx, fd.block(0, 0, n, n)), 1e-4);
  EXPECT_LT(testutil::max_relative_error(ham.uu, fd.block(n, n, m, m)), 1e-4);
  EXPECT_LT(testutil::max_relative_error(ham.xu, fd.block(0, n, n, m)), 1e-4);
  EXPECT_LT(
      testutil::max_relative_error(ham.xtheta, fd.block(0, n + m, n, s)),
      1e-4);
  EXPECT_LT(
      testutil::max_relative_error(ham.utheta, fd.block(n, n + m, m, s)),
      1e-4);
}

TEST(MlpModelTest, LayoutHasNoRunningSegment) {
  const MlpModel model(MlpArchitecture::quadrotor_sized(1));
  const ThetaLayout& layout = model.theta_layout();
  EXPECT_EQ(layout.size(), 2138);
  EXPECT_EQ(layout.running_dim, 0);
  EXPECT_FALSE(layout.floor_dynamics_segment);
  EXPECT_EQ(layout.floor_begin(), 2121);
  EXPECT_EQ(layout.floor_end(), 2125);
}

TEST(MlpModelTest, RandomInitialWeightsRespectRange) {
  const MlpArchitecture arch = MlpArchitecture::quadrotor_sized(1);
  RngStream rng(107, RngPurpose::kInit);
  const Eigen::VectorXd w = random_initial_weights(arch, 0.05, rng);
  ASSERT_EQ(w.size(), 2121);
  EXPECT_LE(w.lpNorm<Eigen::Infinity>(), 0.05);
  EXPECT_GT(w.cwiseAbs().maxCoeff(), 0.0);
}

}  // namespace
}  // namespace goalcast
