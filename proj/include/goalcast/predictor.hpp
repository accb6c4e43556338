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

#ifndef GOALCAST_PREDICTOR_HPP_
#define GOALCAST_PREDICTOR_HPP_

#include <deque>
#include <limits>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "goalcast/estimator.hpp"
#include "goalcast/model.hpp"
#include "goalcast/ocp.hpp"

namespace goalcast {

// Memory time that never discards observations (the full-history baseline).
inline constexpr int kInfiniteMemory = std::numeric_limits<int>::max();

// Start index of the observation window at time t.
inline int buffer_start(int t, int memory_time) {
  const long start = static_cast<long>(t) - static_cast<long>(memory_time);
  return start > 0 ? static_cast<int>(start) : 0;
}

// Sliding window of observations {obs[t_hat], ..., obs[t]} with
// t_hat = max(t - memory_time, 0).
class MemoryBuffer {
 public:
  MemoryBuffer(int memory_time, const Eigen::VectorXd& first_observation)
      : memory_time_(memory_time) {
    data_.push_back(first_observation);
  }

  int memory_time() const { return memory_time_; }
  int start() const { return start_; }
  int current() const { return current_; }
  int size() const { return static_cast<int>(data_.size()); }

  // Appends the observation at time t (= current + 1) and drops entries that
  // fall out of the window. Returns the new start index.
  int advance(int t, const Eigen::VectorXd& observation);

  const Eigen::VectorXd& at(int index) const {
    return data_.at(static_cast<size_t>(index - start_));
  }

 private:
  int memory_time_;
  int start_ = 0;
  int current_ = 0;
  std::deque<Eigen::VectorXd> data_;
};

struct PredictionStep {
  int t = 0;
  int t_hat = 0;
  Eigen::VectorXd theta;  // estimate after the update
  Eigen::VectorXd goal;   // goal segment of theta
  double residual_norm = std::numeric_limits<double>::quiet_NaN();
  bool estimator_updated = false;
  std::string skip_reason;
  SolveDiagnostics solver;
  double wall_ms = 0.0;
  double sensitivity_ms = 0.0;
  Trajectory trajectory;
};

// Shifting-horizon loop: per step it anchors one trajectory solve at the
// oldest retained observation, differentiates the predicted state at t with
// respect to the parameters, and fuses the residual into the estimate. On a
// failed solve or an untrustworthy stationarity level the estimator carries
// over unchanged and the step is marked skipped.
class IntentionPredictor {
 public:
  struct Config {
    int memory_time = 10;  // kInfiniteMemory for the full-history baseline
    int final_time = 100;
    double stationarity_limit = 1e-3;
  };

  IntentionPredictor(const Model& model, const IlqrSolver& solver,
                     Config config, EstimatorState initial_state,
                     const Eigen::VectorXd& first_observation);

  // Processes the observation at time t; t must advance by one per call.
  PredictionStep step(int t, const Eigen::VectorXd& observation);

  const EstimatorState& estimator() const { return estimator_; }
  const MemoryBuffer& buffer() const { return buffer_; }
  int skipped_updates() const { return skipped_updates_; }

 private:
  const Model& model_;
  const IlqrSolver& solver_;
  Config config_;
  EstimatorState estimator_;
  MemoryBuffer buffer_;
  std::optional<Trajectory> previous_;
  int skipped_updates_ = 0;
};

}  // namespace goalcast

#endif  // GOALCAST_PREDICTOR_HPP_
