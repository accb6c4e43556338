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

#ifndef GOALCAST_ESTIMATOR_HPP_
#define GOALCAST_ESTIMATOR_HPP_

#include <Eigen/Core>

#include "goalcast/plant.hpp"
#include "goalcast/rng.hpp"
#include "goalcast/theta.hpp"

namespace goalcast {

// Eigenvalue floor keeping the parameter covariance positive definite over
// long runs.
inline constexpr double kCovarianceFloor = 1e-15;

struct EstimatorState {
  Eigen::VectorXd theta;  // s
  Eigen::MatrixXd P;      // s x s, symmetric positive definite
  Eigen::MatrixXd R;      // n x n measurement covariance
};

struct EkfStepResult {
  EstimatorState state;
  Eigen::MatrixXd gain;  // s x n
};

// One measurement update with constant parameter dynamics:
//   K = P H' (H P H' + R)^-1
//   P <- (I - K H) P, then symmetrized and eigen-floored
//   theta <- theta - K * residual, then floored on the non-goal segments.
// H is the Jacobian of the residual (observation minus prediction), so the
// minus sign moves the prediction toward the observation. Throws
// std::runtime_error on a singular innovation or a non-finite update.
EkfStepResult ekf_step(const ThetaLayout& layout, const EstimatorState& state,
                       const Eigen::MatrixXd& H,
                       const Eigen::VectorXd& residual);

// Pre-run covariance diagonals per noise case. The parameter block covers
// the dynamics/objective entries, with the goal-position entries given a
// larger value than the remaining goal entries.
Eigen::MatrixXd initial_covariance(const NoiseSpec& noise,
                                   const ThetaLayout& layout);
Eigen::MatrixXd initial_measurement_covariance(const NoiseSpec& noise,
                                               int state_dim);

// Variants for the learned-dynamics models, keyed by weight count.
Eigen::MatrixXd initial_covariance_mlp(int parameter_count,
                                       const ThetaLayout& layout);
Eigen::MatrixXd initial_measurement_covariance_mlp(int parameter_count,
                                                   int state_dim);

EstimatorState init_estimator(const NoiseSpec& noise, const ThetaLayout& layout,
                              const Eigen::VectorXd& theta_guess);
EstimatorState init_estimator_mlp(int parameter_count,
                                  const ThetaLayout& layout,
                                  const Eigen::VectorXd& theta_guess);
EstimatorState init_estimator_custom(const Eigen::VectorXd& p_diagonal,
                                     const Eigen::VectorXd& r_diagonal,
                                     const Eigen::VectorXd& theta_guess);

// Initial guess: each dynamics/objective entry scaled by an independent
// Uniform(1 - spread, 1 + spread) draw; the goal segment is the first
// observation. spread = 0 returns the exact parameters.
Eigen::VectorXd initial_theta_guess(const ThetaLayout& layout,
                                    const Eigen::VectorXd& theta_true,
                                    const Eigen::VectorXd& first_observation,
                                    double spread, RngStream& rng);

}  // namespace goalcast

#endif  // GOALCAST_ESTIMATOR_HPP_
