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

#include "goalcast/quadrotor.hpp"

#include <gtest/gtest.h>

#include "goalcast/rng.hpp"
#include "test_util.hpp"

namespace goalcast {
namespace {

using quad::kControlDim;
using quad::kStateDim;

Eigen::VectorXd hover_state() {
  return quadrotor_rest_state(Eigen::Vector3d::Zero());
}

Eigen::VectorXd hover_control() {
  return Eigen::VectorXd::Constant(4, 2.5);
}

// Random evaluation point with a roughly unit quaternion (the anchor state
// of a propagation can carry measurement noise, so exact unit norm is not
// assumed).
struct RandomPoint {
  Eigen::VectorXd x{kStateDim};
  Eigen::VectorXd u{kControlDim};
  Eigen::VectorXd theta;
  Eigen::VectorXd lambda{kStateDim};
};

RandomPoint random_point(RngStream& rng) {
  RandomPoint point;
  for (int i = 0; i < 3; ++i) point.x(i) = rng.uniform(-3.0, 3.0);
  for (int i = 3; i < 6; ++i) point.x(i) = rng.uniform(-1.5, 1.5);
  for (int i = 6; i < 10; ++i) point.x(i) = rng.uniform(-1.0, 1.0);
  point.x.segment(6, 4).normalize();
  for (int i = 6; i < 10; ++i) point.x(i) += rng.uniform(-0.2, 0.2);
  for (int i = 10; i < 13; ++i) point.x(i) = rng.uniform(-1.0, 1.0);
  for (int i = 0; i < 4; ++i) point.u(i) = rng.uniform(0.5, 4.0);

  Eigen::VectorXd goal(kStateDim);
  for (int i = 0; i < kStateDim; ++i) goal(i) = rng.uniform(-1.0, 1.0);
  point.theta = quadrotor_nominal_theta(goal);
  for (int i = 0; i < 11; ++i) {
    point.theta(i) *= rng.uniform(0.75, 1.25);
  }
  for (int i = 0; i < kStateDim; ++i) point.lambda(i) = rng.uniform(-2.0, 2.0);
  return point;
}

TEST(OmegaMatrixTest, ZeroRateGivesZeroMatrix) {
  EXPECT_TRUE(omega_matrix(Eigen::Vector3d::Zero()).isZero(0.0));
}

TEST(OmegaMatrixTest, UnitXRateMatchesDefinition) {
  Eigen::Matrix4d expected;
  expected << 0, -1, 0, 0,  //
      1, 0, 0, 0,           //
      0, 0, 0, 1,           //
      0, 0, -1, 0;
  EXPECT_TRUE(omega_matrix(Eigen::Vector3d(1, 0, 0)) == expected);
}

TEST(OmegaMatrixTest, SkewSymmetricForRandomRates) {
  RngStream rng(11, RngPurpose::kMisc);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Vector3d w(rng.gaussian(), rng.gaussian(), rng.gaussian());
    const Eigen::Matrix4d omega = omega_matrix(w);
    EXPECT_LT((omega + omega.transpose()).lpNorm<Eigen::Infinity>(), 1e-15);
  }
}

TEST(ThrustMixerTest, SymmetricThrustsCancelTorques) {
  const Eigen::Vector4d out =
      thrust_mixer(Eigen::Vector4d::Ones(), 0.4, 0.01);
  EXPECT_DOUBLE_EQ(out(0), 4.0);
  EXPECT_TRUE(out.tail(3).isZero(0.0));
}

TEST(ThrustMixerTest, SingleThrustRow) {
  const Eigen::Vector4d out =
      thrust_mixer(Eigen::Vector4d(1, 0, 0, 0), 0.4, 0.01);
  EXPECT_DOUBLE_EQ(out(0), 1.0);
  EXPECT_DOUBLE_EQ(out(1), 0.0);
  EXPECT_DOUBLE_EQ(out(2), -0.2);
  EXPECT_DOUBLE_EQ(out(3), 0.01);
}

TEST(ThrustMixerTest, HoverForceBalancesWeight) {
  const Eigen::Vector4d out =
      thrust_mixer(Eigen::Vector4d::Constant(2.5), 0.4, 0.01);
  // m g with m = 1 kg, g = 10 m/s^2
  EXPECT_DOUBLE_EQ(out(0), 10.0);
  EXPECT_TRUE(out.tail(3).isZero(0.0));
}

TEST(ThrustMixerTest, Linearity) {
  RngStream rng(3, RngPurpose::kMisc);
  Eigen::Vector4d t;
  for (int i = 0; i < 4; ++i) t(i) = rng.gaussian();
  const double alpha = 2.75;
  EXPECT_LT((thrust_mixer(alpha * t, 0.4, 0.01) -
             alpha * thrust_mixer(t, 0.4, 0.01))
                .lpNorm<Eigen::Infinity>(),
            1e-12);
}

TEST(QuadDerivativeTest, HoverIsAnEquilibrium) {
  const Eigen::VectorXd params = quadrotor_nominal_theta(hover_state());
  const Eigen::VectorXd dx =
      quad_derivative(hover_state(), hover_control(), params);
  EXPECT_LT(dx.lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(QuadDerivativeTest, FreeFallLeavesOnlyGravity) {
  const Eigen::VectorXd params = quadrotor_nominal_theta(hover_state());
  const Eigen::VectorXd dx = quad_derivative(
      hover_state(), Eigen::VectorXd::Zero(kControlDim), params);
  Eigen::VectorXd expected = Eigen::VectorXd::Zero(kStateDim);
  expected(5) = quad::kGravity;
  EXPECT_LT((dx - expected).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(QuadDerivativeTest, QuaternionRateMatchesOmegaProduct) {
  Eigen::VectorXd x = hover_state();
  x(12) = 1.0;  // omega_z = 1
  const Eigen::VectorXd params = quadrotor_nominal_theta(hover_state());
  const Eigen::VectorXd dx = quad_derivative(x, hover_control(), params);
  const Eigen::Vector4d expected =
      0.5 * omega_matrix(Eigen::Vector3d(0, 0, 1)) *
      Eigen::Vector4d(1, 0, 0, 0);
  EXPECT_LT((dx.segment(6, 4) - expected).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(QuadDerivativeTest, QuaternionNormPreservedToFirstOrder) {
  // d/dt (q' q) = q' Omega(w) q = 0 by skew-symmetry
  RngStream rng(5, RngPurpose::kMisc);
  for (int trial = 0; trial < 10; ++trial) {
    const RandomPoint point = random_point(rng);
    const Eigen::VectorXd dx =
        quad_derivative(point.x, point.u, point.theta.segment(0, 6));
    const double ddt_norm = 2.0 * point.x.segment(6, 4).dot(dx.segment(6, 4));
    EXPECT_NEAR(ddt_norm, 0.0, 1e-12);
  }
}

TEST(DiscreteStepTest, HoverIsPreserved) {
  const Eigen::VectorXd params = quadrotor_nominal_theta(hover_state());
  const Eigen::VectorXd next =
      quad_discrete_step(hover_state(), hover_control(), params, 0.15,
                         quad::Integrator::kRk4);
  EXPECT_LT((next - hover_state()).lpNorm<Eigen::Infinity>(), 1e-9);
}

TEST(DiscreteStepTest, EulerFreeFallVelocity) {
  const Eigen::VectorXd params = quadrotor_nominal_theta(hover_state());
  const Eigen::VectorXd next = quad_discrete_step(
      hover_state(), Eigen::VectorXd::Zero(kControlDim), params, 0.15,
      quad::Integrator::kEuler);
  EXPECT_NEAR(next(5), 1.5, 1e-12);  // g dt
}

TEST(DiscreteStepTest, ConsistentWithDerivativeAsDtShrinks) {
  RngStream rng(9, RngPurpose::kMisc);
  const RandomPoint point = random_point(rng);
  Eigen::VectorXd x = point.x;
  x.segment(6, 4).normalize();
  const Eigen::VectorXd params = point.theta.segment(0, 6);
  const Eigen::VectorXd dx = quad_derivative(x, point.u, params);
  double previous_error = 1e9;
  for (const double dt : {1e-3, 1e-4, 1e-5}) {
    const Eigen::VectorXd next =
        quad_discrete_step(x, point.u, params, dt, quad::Integrator::kEuler);
    const double error = ((next - x) / dt - dx).lpNorm<Eigen::Infinity>();
    EXPECT_LT(error, previous_error);
    previous_error = error;
  }
  EXPECT_LT(previous_error, 1e-4);
}

TEST(DiscreteStepTest, QuaternionRenormalized) {
  RngStream rng(13, RngPurpose::kMisc);
  for (int trial = 0; trial < 10; ++trial) {
    const RandomPoint point = random_point(rng);
    const Eigen::VectorXd next = quad_discrete_step(
        point.x, point.u, point.theta.segment(0, 6), 0.15,
        quad::Integrator::kRk4);
    EXPECT_NEAR(next.segment(6, 4).norm(), 1.0, 1e-9);
  }
}

TEST(NominalThetaTest, LeadingEntriesMatchVehicleParameters) {
  const Eigen::VectorXd theta = quadrotor_nominal_theta(hover_state());
  ASSERT_EQ(theta.size(), 24);
  const Eigen::VectorXd expected =
      (Eigen::VectorXd(11) << 1, 1, 1, 1, 0.4, 0.01, 0.1, 10, 1, 5, 1)
          .finished();
  EXPECT_TRUE(theta.segment(0, 11) == expected);
}

TEST(CostFeaturesTest, ZeroControlGivesZeroRunningFeature) {
  EXPECT_DOUBLE_EQ(standard_running_features(Eigen::VectorXd::Zero(4))(0),
                   0.0);
}

TEST(CostFeaturesTest, GoalReachedGivesZeroFinalFeatures) {
  RngStream rng(17, RngPurpose::kMisc);
  Eigen::VectorXd x(kStateDim);
  for (int i = 0; i < kStateDim; ++i) x(i) = rng.gaussian();
  EXPECT_TRUE(standard_final_features(x, x).isZero(0.0));
}

TEST(CostFeaturesTest, UnitPositionOffsetHitsFirstBlockOnly) {
  Eigen::VectorXd x = hover_state();
  Eigen::VectorXd goal = x;
  x(0) += 1.0;
  const Eigen::VectorXd features = standard_final_features(x, goal);
  EXPECT_DOUBLE_EQ(features(0), 1.0);
  EXPECT_TRUE(features.tail(3).isZero(0.0));
}

// Every analytic derivative block against central finite differences on 100
// random points.
TEST(QuadrotorDerivativesTest, MatchFiniteDifferencesOnRandomPoints) {
  const QuadrotorModel model;
  RngStream rng(23, RngPurpose::kMisc);
  constexpr double kTol = 1e-4;

  for (int trial = 0; trial < 100; ++trial) {
    const RandomPoint point = random_point(rng);

    const DynamicsJacobians jac =
        model.dynamics_jacobians(point.x, point.u, point.theta);
    const Eigen::MatrixXd fd_F = testutil::central_jacobian(
        [&](const Eigen::VectorXd& x) {
          return model.step(x, point.u, point.theta);
        },
        point.x);
    const Eigen::MatrixXd fd_G = testutil::central_jacobian(
        [&](const Eigen::VectorXd& u) {
          return model.step(point.x, u, point.theta);
        },
        point.u);
    EXPECT_LT(testutil::max_relative_error(jac.F, fd_F), kTol);
    EXPECT_LT(testutil::max_relative_error(jac.G, fd_G), kTol);

    const Eigen::MatrixXd E =
        model.dynamics_theta_jacobian(point.x, point.u, point.theta);
    const Eigen::MatrixXd fd_E = testutil::central_jacobian(
        [&](const Eigen::VectorXd& theta) {
          return model.step(point.x, point.u, theta);
        },
        point.theta);
    EXPECT_LT(testutil::max_relative_error(E, fd_E), kTol);
    // columns for parameters the dynamics never touch are exactly zero
    EXPECT_TRUE(E.rightCols(18).isZero(0.0));
  }
}

TEST(QuadrotorDerivativesTest, RunningQuadraticsMatchFiniteDifferences) {
  for (const bool hardware : {false, true}) {
    QuadrotorOptions options;
    options.hardware_cost = hardware;
    const QuadrotorModel model(options);
    RngStream rng(29, RngPurpose::kMisc);
    for (int trial = 0; trial < 10; ++trial) {
      const RandomPoint point = random_point(rng);
      const RunningQuadratics rq =
          model.running_quadratics(point.x, point.u, point.theta);
      Eigen::VectorXd z(kStateDim + kControlDim);
      z << point.x, point.u;
      const auto value = [&](const Eigen::VectorXd& v) {
        return model.running_cost(v.segment(0, kStateDim),
                                  v.segment(kStateDim, kControlDim),
                                  point.theta);
      };
      EXPECT_NEAR(rq.value, value(z), 1e-12);
      const Eigen::VectorXd fd_grad = testutil::central_gradient(value, z);
      const Eigen::MatrixXd fd_hess = testutil::central_hessian(value, z);
      Eigen::VectorXd grad(z.size());
      grad << rq.x, rq.u;
      EXPECT_LT(testutil::max_relative_error(grad, fd_grad), 1e-4);
      Eigen::MatrixXd hess(z.size(), z.size());
      hess.topLeftCorner(kStateDim, kStateDim) = rq.xx;
      hess.topRightCorner(kStateDim, kControlDim) = rq.xu;
      hess.bottomLeftCorner(kControlDim, kStateDim) = rq.xu.transpose();
      hess.bottomRightCorner(kControlDim, kControlDim) = rq.uu;
      EXPECT_LT(testutil::max_relative_error(hess, fd_hess), 1e-4);
    }
  }
}

TEST(QuadrotorDerivativesTest, HamiltonianBlocksMatchFiniteDifferences) {
  const QuadrotorModel model;
  RngStream rng(31, RngPurpose::kMisc);
  const int n = kStateDim, m = kControlDim, s = 24;

  for (int trial = 0; trial < 5; ++trial) {
    const RandomPoint point = random_point(rng);
    const HamiltonianQuadratics ham =
        model.hamiltonian_quadratics(point.x, point.u, point.theta,
                                     point.lambda);

    Eigen::VectorXd z(n + m + s);
    z << point.x, point.u, point.theta;
    const auto value = [&](const Eigen::VectorXd& v) {
      const Eigen::VectorXd x = v.segment(0, n);
      const Eigen::VectorXd u = v.segment(n, m);
      const Eigen::VectorXd theta = v.segment(n + m, s);
      return model.running_cost(x, u, theta) +
             point.lambda.dot(model.step(x, u, theta));
    };
    const Eigen::MatrixXd fd = testutil::central_hessian(value, z);

    EXPECT_LT(testutil::max_relative_error(ham.xx, fd.block(0, 0, n, n)),
              1e-4);
    EXPECT_LT(testutil::max_relative_error(ham.uu, fd.block(n, n, m, m)),
              1e-4);
    EXPECT_LT(testutil::max_relative_error(ham.xu, fd.block(0, n, n, m)),
              1e-4);
    EXPECT_LT(
        testutil::max_relative_error(ham.xtheta, fd.block(0, n + m, n, s)),
        1e-4);
    EXPECT_LT(
        testutil::max_relative_error(ham.utheta, fd.block(n, n + m, m, s)),
        1e-4);
  }
}

TEST(QuadrotorDerivativesTest, FinalQuadraticsMatchFiniteDifferences) {
  const QuadrotorModel model;
  RngStream rng(37, RngPurpose::kMisc);
  const int n = kStateDim, s = 24;

  for (int trial = 0; trial < 5; ++trial) {
    const RandomPoint point = random_point(rng);
    const FinalQuadratics fq = model.final_quadratics(point.x, point.theta);

    Eigen::VectorXd z(n + s);
    z << point.x, point.theta;
    const auto value = [&](const Eigen::VectorXd& v) {
      return model.final_cost(v.segment(0, n), v.segment(n, s));
    };
    EXPECT_NEAR(fq.value, value(z), 1e-10);
    const Eigen::VectorXd fd_grad = testutil::central_gradient(value, z);
    const Eigen::MatrixXd fd_hess = testutil::central_hessian(value, z);
    EXPECT_LT(
        testutil::max_relative_error(fq.x, fd_grad.segment(0, n)), 1e-4);
    EXPECT_LT(testutil::max_relative_error(fq.xx, fd_hess.block(0, 0, n, n)),
              1e-4);
    EXPECT_LT(
        testutil::max_relative_error(fq.xtheta, fd_hess.block(0, n, n, s)),
        1e-4);
    // matches the hand-written gradient as well
    EXPECT_LT((fq.x - model.final_gradient(point.x, point.theta))
                  .lpNorm<Eigen::Infinity>(),
              1e-12);
  }
}

TEST(QuadrotorModelTest, InitialControlIsHoverThrust) {
  const QuadrotorModel model;
  const Eigen::VectorXd theta = quadrotor_nominal_theta(hover_state());
  const Eigen::VectorXd u = model.initial_control(theta);
  EXPECT_TRUE(u == Eigen::VectorXd::Constant(4, 2.5));
}

}  // namespace
}  // namespace goalcast
