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

#ifndef GOALCAST_RUNNER_HPP_
#define GOALCAST_RUNNER_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "goalcast/scenario.hpp"

namespace goalcast {

// Squared Euclidean distance between the estimated and true goal states.
double prediction_loss(const Eigen::VectorXd& estimated_goal,
                       const Eigen::VectorXd& true_goal);

struct StepRecord {
  int t = 0;
  int t_hat = 0;
  double loss = 0.0;
  double residual_norm = 0.0;
  int solver_iterations = 0;
  double wall_ms = 0.0;
  bool estimator_updated = true;
  Eigen::VectorXd theta;  // recorded only when the config asks for it
};

struct RunRecord {
  std::uint64_t seed = 0;
  bool failed = false;
  std::string failure;
  std::vector<StepRecord> steps;
  int skipped_updates = 0;
  double mean_wall_ms = 0.0;
  double final_loss = 0.0;
  std::uint64_t observation_hash = 0;  // FNV over the consumed stream
};

struct BatchResult {
  ScenarioConfig config;
  std::vector<RunRecord> runs;
};

// Ground truth (including observations) for one seed of a scenario,
// reproducible from (config, seed) alone.
GroundTruthRun scenario_truth(const ScenarioConfig& config,
                              std::uint64_t seed);

// Deterministic single trial: truth generation, observation stream, predictor
// loop. Per-seed failures are captured in the record, not thrown.
RunRecord run_single(const ScenarioConfig& config, std::uint64_t seed);

// Runs every seed, concurrently; record order follows the seed list.
BatchResult run_scenario(const ScenarioConfig& config);

// CSV serialization (RFC-4180-style, header row, config hash in the last
// column). Timing columns are zeroed unless the config records timing.
std::string run_csv(const ScenarioConfig& config, const RunRecord& record);

// Per-step mean/stddev of loss across runs plus the mean over the final
// window of min(20, steps) indices. Failed runs are excluded.
struct AggregateStats {
  std::vector<double> mean_loss;
  std::vector<double> stddev_loss;
  double final_window_mean = 0.0;
  int runs_used = 0;
};
AggregateStats aggregate(const std::vector<RunRecord>& runs, int steps);
std::string aggregate_csv(const ScenarioConfig& config,
                          const AggregateStats& stats);

nlohmann::json batch_summary(const BatchResult& batch);

// Writes per-run CSVs, the batch summary JSON and optional truth archives
// under config.out_dir. Returns the batch.
BatchResult run_and_write(const ScenarioConfig& config);

// Paired comparison of the configured memory time against the full-history
// baseline on identical truth and observation streams.
struct CompareSeedResult {
  std::uint64_t seed = 0;
  bool valid = false;
  double finite_window_mean = 0.0;
  double infinite_window_mean = 0.0;
  bool finite_wins = false;
};

struct CompareSummary {
  ScenarioConfig config;
  std::vector<std::pair<int, int>> windows;  // inclusive [first, last]
  std::vector<CompareSeedResult> seeds;
  double win_fraction = 0.0;
  double finite_mean = 0.0;
  double infinite_mean = 0.0;
  bool streams_identical = false;
  int valid_seeds = 0;
};

CompareSummary compare_baseline(const ScenarioConfig& config);
nlohmann::json compare_summary_json(const CompareSummary& summary);

// Post-switch evaluation windows: for every switch, the last
// min(20, gap - 1) indices before the next switch (or before the end of the
// run, including the final index).
std::vector<std::pair<int, int>> post_switch_windows(
    const std::vector<int>& switch_times, int steps);

}  // namespace goalcast

#endif  // GOALCAST_RUNNER_HPP_
