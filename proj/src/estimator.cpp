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

#include "goalcast/estimator.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace goalcast {
namespace {

Eigen::MatrixXd floor_eigenvalues(const Eigen::MatrixXd& symmetric,
                                  double floor) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetric);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("ekf_step: eigendecomposition failed");
  }
  if (eig.eigenvalues().minCoeff() >= floor) return symmetric;
  Eigen::VectorXd values = eig.eigenvalues().cwiseMax(floor);
  return eig.eigenvectors() * values.asDiagonal() *
         eig.eigenvectors().transpose();
}

// Covariance diagonal with one value on the dynamics/objective block, a
// second on the goal-position entries, and the first again on the remaining
// goal entries.
Eigen::MatrixXd blocked_covariance(const ThetaLayout& layout,
                                   double parameter_value,
                                   double goal_position_value) {
  Eigen::VectorXd diag(layout.size());
  const int parameters = layout.goal_offset();
  diag.segment(0, parameters).setConstant(parameter_value);
  diag.segment(parameters, 3).setConstant(goal_position_value);
  diag.segment(parameters + 3, layout.goal_dim - 3).setConstant(parameter_value);
  return diag.asDiagonal();
}

struct CovarianceCase {
  double parameter_value;
  double goal_position_value;
  double measurement_value;
};

CovarianceCase lookup_case(const NoiseSpec& noise) {
  const auto close = [](double a, double b) { return std::abs(a - b) < 1e-9; };
  if (noise.kind == NoiseSpec::Kind::kNone || close(noise.sigma, 0.0)) {
    return {1e-7, 1e-4, 1e-9};
  }
  if (close(noise.sigma, 0.1)) return {1e-8, 1e-4, 1e-7};
  if (close(noise.sigma, 0.5)) return {1e-9, 1e-5, 1e-7};
  if (close(noise.sigma, 1.0)) return {1e-11, 1e-6, 1e-7};
  throw std::invalid_argument(
      "initial_covariance: no table entry for this noise case; provide "
      "custom diagonals");
}

}  // namespace

EkfStepResult ekf_step(const ThetaLayout& layout, const EstimatorState& state,
                       const Eigen::MatrixXd& H,
                       const Eigen::VectorXd& residual) {
  const long s = state.theta.size();
  const long n = residual.size();
  if (H.rows() != n || H.cols() != s || state.P.rows() != s ||
      state.R.rows() != n) {
    throw std::invalid_argument("ekf_step: dimension mismatch");
  }

  const Eigen::MatrixXd pht = state.P * H.transpose();          // s x n
  Eigen::MatrixXd innovation = H * pht + state.R;               // n x n
  innovation = 0.5 * (innovation + innovation.transpose()).eval();
  if (!innovation.allFinite()) {
    throw std::runtime_error("ekf_step: non-finite innovation");
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(innovation);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw std::runtime_error("ekf_step: singular innovation matrix");
  }

  EkfStepResult result;
  result.gain = ldlt.solve(pht.transpose()).transpose();  // s x n

  Eigen::MatrixXd p_next =
      (Eigen::MatrixXd::Identity(s, s) - result.gain * H) * state.P;
  p_next = 0.5 * (p_next + p_next.transpose()).eval();
  p_next = floor_eigenvalues(p_next, kCovarianceFloor);

  Eigen::VectorXd theta_next = state.theta - result.gain * residual;
  if (!theta_next.allFinite() || !p_next.allFinite()) {
    throw std::runtime_error("ekf_step: non-finite update");
  }
  result.state.theta = clamp_floors(layout, std::move(theta_next));
  result.state.P = std::move(p_next);
  result.state.R = state.R;
  return result;
}

Eigen::MatrixXd initial_covariance(const NoiseSpec& noise,
                                   const ThetaLayout& layout) {
  const CovarianceCase entry = lookup_case(noise);
  return blocked_covariance(layout, entry.parameter_value,
                            entry.goal_position_value);
}

Eigen::MatrixXd initial_measurement_covariance(const NoiseSpec& noise,
                                               int state_dim) {
  const CovarianceCase entry = lookup_case(noise);
  return entry.measurement_value *
         Eigen::MatrixXd::Identity(state_dim, state_dim);
}

Eigen::MatrixXd initial_covariance_mlp(int parameter_count,
                                       const ThetaLayout& layout) {
  if (parameter_count != 2121 && parameter_count != 3889 &&
      parameter_count != 5793) {
    throw std::invalid_argument(
        "initial_covariance_mlp: no table entry for this network size");
  }
  (void)parameter_count;
  return blocked_covariance(layout, 1e-8, 1e-5);
}

Eigen::MatrixXd initial_measurement_covariance_mlp(int parameter_count,
                                                   int state_dim) {
  if (parameter_count != 2121 && parameter_count != 3889 &&
      parameter_count != 5793) {
    throw std::invalid_argument(
        "initial_measurement_covariance_mlp: no table entry for this size");
  }
  return 1e-8 * Eigen::MatrixXd::Identity(state_dim, state_dim);
}

EstimatorState init_estimator(const NoiseSpec& noise, const ThetaLayout& layout,
                              const Eigen::VectorXd& theta_guess) {
  return {theta_guess, initial_covariance(noise, layout),
          initial_measurement_covariance(noise, layout.goal_dim)};
}

EstimatorState init_estimator_mlp(int parameter_count,
                                  const ThetaLayout& layout,
                                  const Eigen::VectorXd& theta_guess) {
  return {theta_guess, initial_covariance_mlp(parameter_count, layout),
          initial_measurement_covariance_mlp(parameter_count,
                                             layout.goal_dim)};
}

EstimatorState init_estimator_custom(const Eigen::VectorXd& p_diagonal,
                                     const Eigen::VectorXd& r_diagonal,
                                     const Eigen::VectorXd& theta_guess) {
  EstimatorState state;
  state.theta = theta_guess;
  state.P = p_diagonal.asDiagonal();
  state.R = r_diagonal.asDiagonal();
  return state;
}

Eigen::VectorXd initial_theta_guess(const ThetaLayout& layout,
                                    const Eigen::VectorXd& theta_true,
                                    const Eigen::VectorXd& first_observation,
                                    double spread, RngStream& rng) {
  Eigen::VectorXd guess = theta_true;
  if (spread != 0.0) {
    for (int i = 0; i < layout.goal_offset(); ++i) {
      guess(i) *= rng.uniform(1.0 - spread, 1.0 + spread);
    }
  }
  guess.segment(layout.goal_offset(), layout.goal_dim) = first_observation;
  return clamp_floors(layout, std::move(guess));
}

}  // namespace goalcast
