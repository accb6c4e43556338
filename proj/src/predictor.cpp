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

#include "goalcast/predictor.hpp"

#include <chrono>
#include <stdexcept>

#include "goalcast/pdp.hpp"

namespace goalcast {

int MemoryBuffer::advance(int t, const Eigen::VectorXd& observation) {
  if (t != current_ + 1) {
    throw std::logic_error("MemoryBuffer: observations must arrive in order");
  }
  current_ = t;
  data_.push_back(observation);
  const int new_start = buffer_start(t, memory_time_);
  while (start_ < new_start) {
    data_.pop_front();
    ++start_;
  }
  return start_;
}

IntentionPredictor::IntentionPredictor(const Model& model,
                                       const IlqrSolver& solver, Config config,
                                       EstimatorState initial_state,
                                       const Eigen::VectorXd& first_observation)
    : model_(model),
      solver_(solver),
      config_(config),
      estimator_(std::move(initial_state)),
      buffer_(config.memory_time, first_observation) {
  if (config_.memory_time < 1) {
    throw std::invalid_argument("IntentionPredictor: memory_time must be >= 1");
  }
}

PredictionStep IntentionPredictor::step(int t,
                                        const Eigen::VectorXd& observation) {
  const auto started = std::chrono::steady_clock::now();
  if (!observation.allFinite()) {
    throw std::invalid_argument("predict step: non-finite observation");
  }
  if (t > config_.final_time) {
    throw std::invalid_argument("predict step: t beyond the final time");
  }

  PredictionStep out;
  out.t = t;
  out.t_hat = buffer_.advance(t, observation);

  OcpProblem problem;
  problem.model = &model_;
  problem.theta = estimator_.theta;
  problem.initial_state = buffer_.at(out.t_hat);
  problem.start_index = out.t_hat;
  problem.end_index = config_.final_time;

  Trajectory traj =
      solver_.solve(problem, previous_ ? &*previous_ : nullptr);
  out.solver = traj.diagnostics;

  if (!traj.diagnostics.finite) {
    out.skip_reason = "solver diverged";
  } else if (traj.diagnostics.regularization_failed) {
    out.skip_reason = "solver regularization failed";
  } else {
    const Eigen::VectorXd residual = observation - traj.state_at(t);
    out.residual_norm = residual.norm();
    const CostateResult costates =
        compute_costates(model_, traj, estimator_.theta);
    if (costates.stationarity > config_.stationarity_limit) {
      out.skip_reason = "stationarity residual too large";
    } else {
      try {
        const SensitivityBundle bundle =
            build_sensitivity_bundle(model_, traj, estimator_.theta, costates,
                                     traj.diagnostics.regularization);
        const BackwardRecursion backward = backward_recursion(bundle);
        const SensitivitySolution sens =
            forward_sensitivity(bundle, backward, t - out.t_hat);
        out.sensitivity_ms = backward.wall_ms + sens.wall_ms;
        const Eigen::MatrixXd H = residual_jacobian(sens, t - out.t_hat);
        const EkfStepResult update =
            ekf_step(model_.theta_layout(), estimator_, H, residual);
        estimator_ = update.state;
        out.estimator_updated = true;
      } catch (const std::runtime_error& err) {
        out.skip_reason = err.what();
      }
    }
  }
  if (!out.estimator_updated) ++skipped_updates_;

  if (traj.diagnostics.finite) {
    previous_ = traj;
  }
  out.theta = estimator_.theta;
  out.goal = extract_goal(model_.theta_layout(), estimator_.theta);
  out.trajectory = std::move(traj);
  out.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - started)
                    .count();
  return out;
}

}  // namespace goalcast
