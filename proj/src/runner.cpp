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

#include "goalcast/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>
#include <thread>

#include "goalcast/estimator.hpp"
#include "goalcast/mlp.hpp"
#include "goalcast/predictor.hpp"
#include "goalcast/quadrotor.hpp"

namespace goalcast {
namespace {

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::uint64_t fnv1a_bytes(const void* data, size_t size, std::uint64_t hash) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t hash_observations(const std::vector<Eigen::VectorXd>& stream) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const auto& obs : stream) {
    hash = fnv1a_bytes(obs.data(),
                       static_cast<size_t>(obs.size()) * sizeof(double), hash);
  }
  return hash;
}

// Runs fn(i) for i in [0, count) over a small worker pool. Each index is
// fully isolated, so results do not depend on scheduling.
void parallel_for(int count, const std::function<void(int)>& fn) {
  const int workers = std::max(
      1, std::min(count, static_cast<int>(std::thread::hardware_concurrency())));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        fn(i);
      }
    });
  }
  for (auto& thread : pool) thread.join();
}

GoalSchedule build_schedule(const ScenarioConfig& config, RngStream& rng) {
  GoalSchedule schedule;
  if (!config.explicit_schedule.empty()) {
    schedule.entries = config.explicit_schedule;
    return schedule;
  }
  const int entries = config.num_switches + 1;
  for (int k = 0; k < entries; ++k) {
    const Eigen::Vector3d position(rng.uniform(-config.goal_box, config.goal_box),
                                   rng.uniform(-config.goal_box, config.goal_box),
                                   rng.uniform(-config.goal_box, config.goal_box));
    schedule.entries.push_back(
        {k * config.switch_interval, quadrotor_rest_state(position)});
  }
  return schedule;
}

Eigen::VectorXd initial_guess_for(const ScenarioConfig& config,
                                  const Model& predictor_model,
                                  const Eigen::VectorXd& theta_star,
                                  const Eigen::VectorXd& first_observation,
                                  RngStream& rng) {
  const ThetaLayout& layout = predictor_model.theta_layout();
  if (config.model == ModelKind::kQuadrotor) {
    const double spread = config.init_exact ? 0.0 : config.init_spread;
    return initial_theta_guess(layout, theta_star, first_observation, spread,
                               rng);
  }
  const auto& mlp = dynamic_cast<const MlpModel&>(predictor_model);
  const Eigen::VectorXd weights =
      random_initial_weights(mlp.architecture(), 0.05, rng);
  Eigen::VectorXd final_weights(4);
  final_weights << 10.0, 1.0, 5.0, 1.0;
  for (int i = 0; i < 4; ++i) {
    final_weights(i) *=
        rng.uniform(1.0 - config.init_spread, 1.0 + config.init_spread);
  }
  return clamp_floors(layout, pack_theta(weights, Eigen::VectorXd(0),
                                         final_weights, first_observation));
}

EstimatorState initial_estimator_for(const ScenarioConfig& config,
                                     const Model& predictor_model,
                                     const Eigen::VectorXd& theta_guess) {
  const ThetaLayout& layout = predictor_model.theta_layout();
  if (config.custom_p_diagonal && config.custom_r_diagonal) {
    return init_estimator_custom(*config.custom_p_diagonal,
                                 *config.custom_r_diagonal, theta_guess);
  }
  if (config.model == ModelKind::kQuadrotor) {
    return init_estimator(config.noise, layout, theta_guess);
  }
  return init_estimator_mlp(layout.dynamics_dim, layout, theta_guess);
}

}  // namespace

double prediction_loss(const Eigen::VectorXd& estimated_goal,
                       const Eigen::VectorXd& true_goal) {
  if (estimated_goal.size() != true_goal.size()) {
    throw std::invalid_argument("prediction_loss: dimension mismatch");
  }
  return (estimated_goal - true_goal).squaredNorm();
}

GroundTruthRun scenario_truth(const ScenarioConfig& config,
                              std::uint64_t seed) {
  const auto plant = make_plant_model(config);
  const IlqrSolver solver;
  RngStream goal_rng(seed, RngPurpose::kGoals);
  GoalSchedule schedule = build_schedule(config, goal_rng);
  schedule.validate(config.steps);

  const Eigen::VectorXd x0 = quadrotor_rest_state(Eigen::Vector3d::Zero());
  const Eigen::VectorXd theta_star =
      quadrotor_nominal_theta(schedule.entries.front().goal);
  GroundTruthRun truth =
      generate_truth(*plant, solver, theta_star, schedule, config.steps, x0);
  truth.seed = seed;
  RngStream noise_rng(seed, RngPurpose::kNoise);
  add_observations(&truth, config.noise, noise_rng);
  return truth;
}

RunRecord run_single(const ScenarioConfig& config, std::uint64_t seed) {
  RunRecord record;
  record.seed = seed;
  try {
    config.validate();
    const auto predictor_model = make_predictor_model(config);
    const IlqrSolver solver;

    const GroundTruthRun truth = scenario_truth(config, seed);
    record.observation_hash = hash_observations(truth.observations);
    const Eigen::VectorXd theta_star =
        quadrotor_nominal_theta(truth.schedule.entries.front().goal);

    RngStream init_rng(seed, RngPurpose::kInit);
    const Eigen::VectorXd guess =
        initial_guess_for(config, *predictor_model, theta_star,
                          truth.observations[0], init_rng);
    EstimatorState initial =
        initial_estimator_for(config, *predictor_model, guess);

    IntentionPredictor::Config predictor_config;
    predictor_config.memory_time =
        config.memory_infinite ? kInfiniteMemory : config.memory_time;
    predictor_config.final_time = config.steps;
    IntentionPredictor predictor(*predictor_model, solver, predictor_config,
                                 std::move(initial), truth.observations[0]);

    record.steps.reserve(static_cast<size_t>(config.steps));
    double wall_sum = 0.0;
    for (int t = 1; t <= config.steps; ++t) {
      const PredictionStep step = predictor.step(t, truth.observations[t]);
      StepRecord row;
      row.t = t;
      row.t_hat = step.t_hat;
      row.loss = prediction_loss(step.goal, truth.true_goal(t));
      row.residual_norm = step.residual_norm;
      row.solver_iterations = step.solver.iterations;
      row.wall_ms = step.wall_ms;
      row.estimator_updated = step.estimator_updated;
      if (config.record_theta) row.theta = step.theta;
      wall_sum += step.wall_ms;
      record.steps.push_back(std::move(row));
    }
    record.skipped_updates = predictor.skipped_updates();
    record.mean_wall_ms = wall_sum / config.steps;
    record.final_loss = record.steps.back().loss;
  } catch (const std::exception& err) {
    record.failed = true;
    record.failure = err.what();
  }
  return record;
}

BatchResult run_scenario(const ScenarioConfig& config) {
  config.validate();
  BatchResult batch;
  batch.config = config;
  const std::vector<std::uint64_t> seeds = config.seeds();
  batch.runs.resize(seeds.size());
  parallel_for(static_cast<int>(seeds.size()), [&](int i) {
    batch.runs[static_cast<size_t>(i)] =
        run_single(config, seeds[static_cast<size_t>(i)]);
  });
  return batch;
}

std::string run_csv(const ScenarioConfig& config, const RunRecord& record) {
  std::ostringstream os;
  os << "t,t_hat,loss,residual_norm,solver_iters,wall_ms";
  if (config.record_theta && !record.steps.empty()) {
    for (int i = 0; i < record.steps.front().theta.size(); ++i) {
      os << ",theta_" << i;
    }
  }
  os << ",config_hash\r\n";
  const std::string hash = config.hash_hex();
  for (const StepRecord& row : record.steps) {
    os << row.t << ',' << row.t_hat << ',' << format_double(row.loss) << ','
       << format_double(row.residual_norm) << ',' << row.solver_iterations
       << ',' << format_double(config.record_timing ? row.wall_ms : 0.0);
    if (config.record_theta) {
      for (int i = 0; i < row.theta.size(); ++i) {
        os << ',' << format_double(row.theta(i));
      }
    }
    os << ',' << hash << "\r\n";
  }
  return os.str();
}

AggregateStats aggregate(const std::vector<RunRecord>& runs, int steps) {
  AggregateStats stats;
  stats.mean_loss.assign(static_cast<size_t>(steps), 0.0);
  stats.stddev_loss.assign(static_cast<size_t>(steps), 0.0);
  for (const RunRecord& run : runs) {
    if (run.failed) continue;
    ++stats.runs_used;
  }
  if (stats.runs_used == 0) {
    throw std::invalid_argument("aggregate: no usable runs");
  }
  for (int k = 0; k < steps; ++k) {
    double sum = 0.0, sum_sq = 0.0;
    for (const RunRecord& run : runs) {
      if (run.failed) continue;
      const double loss = run.steps[static_cast<size_t>(k)].loss;
      sum += loss;
      sum_sq += loss * loss;
    }
    const double mean = sum / stats.runs_used;
    stats.mean_loss[static_cast<size_t>(k)] = mean;
    const double variance = std::max(0.0, sum_sq / stats.runs_used - mean * mean);
    stats.stddev_loss[static_cast<size_t>(k)] = std::sqrt(variance);
  }
  const int window = std::min(20, steps);
  double window_sum = 0.0;
  for (int k = steps - window; k < steps; ++k) {
    window_sum += stats.mean_loss[static_cast<size_t>(k)];
  }
  stats.final_window_mean = window_sum / window;
  return stats;
}

std::string aggregate_csv(const ScenarioConfig& config,
                          const AggregateStats& stats) {
  std::ostringstream os;
  os << "t,mean_loss,stddev_loss,config_hash\r\n";
  const std::string hash = config.hash_hex();
  for (size_t k = 0; k < stats.mean_loss.size(); ++k) {
    os << (k + 1) << ',' << format_double(stats.mean_loss[k]) << ','
       << format_double(stats.stddev_loss[k]) << ',' << hash << "\r\n";
  }
  return os.str();
}

nlohmann::json batch_summary(const BatchResult& batch) {
  nlohmann::json j;
  j["config"] = batch.config.to_json();
  j["config_hash"] = batch.config.hash_hex();
  for (const RunRecord& run : batch.runs) {
    nlohmann::json r;
    r["seed"] = run.seed;
    r["failed"] = run.failed;
    if (run.failed) {
      r["failure"] = run.failure;
    } else {
      r["final_loss"] = run.final_loss;
      double mean = 0.0;
      for (const auto& step : run.steps) mean += step.loss;
      r["mean_loss"] = mean / static_cast<double>(run.steps.size());
      const int window =
          std::min<int>(20, static_cast<int>(run.steps.size()));
      double window_mean = 0.0;
      for (size_t k = run.steps.size() - static_cast<size_t>(window);
           k < run.steps.size(); ++k) {
        window_mean += run.steps[k].loss;
      }
      r["final_window_mean"] = window_mean / window;
      r["skipped_updates"] = run.skipped_updates;
      if (batch.config.record_timing) r["mean_wall_ms"] = run.mean_wall_ms;
      std::ostringstream hash;
      hash << std::hex << run.observation_hash;
      r["observation_hash"] = hash.str();
    }
    j["runs"].push_back(std::move(r));
  }
  bool any_usable = false;
  for (const RunRecord& run : batch.runs) any_usable |= !run.failed;
  if (any_usable) {
    const AggregateStats stats = aggregate(batch.runs, batch.config.steps);
    j["aggregate"] = {{"mean_loss", stats.mean_loss},
                      {"stddev_loss", stats.stddev_loss},
                      {"final_window_mean", stats.final_window_mean},
                      {"runs_used", stats.runs_used}};
  }
  return j;
}

BatchResult run_and_write(const ScenarioConfig& config) {
  BatchResult batch = run_scenario(config);
  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);
  const std::string prefix =
      config.name + "-" + config.hash_hex();
  for (const RunRecord& run : batch.runs) {
    std::ofstream out(fs::path(config.out_dir) /
                      (prefix + "-seed" + std::to_string(run.seed) + ".csv"));
    out << run_csv(config, run);
  }
  bool any_usable = false;
  for (const RunRecord& run : batch.runs) any_usable |= !run.failed;
  if (any_usable) {
    std::ofstream agg(fs::path(config.out_dir) / (prefix + "-aggregate.csv"));
    agg << aggregate_csv(config, aggregate(batch.runs, config.steps));
  }
  std::ofstream summary(fs::path(config.out_dir) / (prefix + "-summary.json"));
  summary << batch_summary(batch).dump(2) << "\n";
  if (config.archive_truth) {
    for (const RunRecord& run : batch.runs) {
      if (run.failed) continue;
      std::ofstream archive(
          fs::path(config.out_dir) /
          (prefix + "-seed" + std::to_string(run.seed) + "-truth.json"));
      archive << truth_to_json(scenario_truth(config, run.seed)).dump() << "\n";
    }
  }
  return batch;
}

std::vector<std::pair<int, int>> post_switch_windows(
    const std::vector<int>& switch_times, int steps) {
  std::vector<std::pair<int, int>> windows;
  for (size_t k = 0; k < switch_times.size(); ++k) {
    const int next =
        k + 1 < switch_times.size() ? switch_times[k + 1] : steps + 1;
    const int gap = next - switch_times[k];
    const int width = std::min(20, gap - 1);
    if (width < 1) continue;
    windows.emplace_back(next - width, next - 1);
  }
  return windows;
}

CompareSummary compare_baseline(const ScenarioConfig& config) {
  config.validate();
  CompareSummary summary;
  summary.config = config;

  std::vector<int> switch_times;
  if (!config.explicit_schedule.empty()) {
    for (size_t k = 1; k < config.explicit_schedule.size(); ++k) {
      switch_times.push_back(config.explicit_schedule[k].time);
    }
  } else {
    for (int k = 1; k <= config.num_switches; ++k) {
      switch_times.push_back(k * config.switch_interval);
    }
  }
  summary.windows = post_switch_windows(switch_times, config.steps);
  if (summary.windows.empty()) {
    // no switches: evaluate the tail of the run, no ordering implied
    const int width = std::min(20, config.steps);
    summary.windows.emplace_back(config.steps - width + 1, config.steps);
  }

  ScenarioConfig finite = config;
  finite.memory_infinite = false;
  ScenarioConfig infinite = config;
  infinite.memory_infinite = true;

  const std::vector<std::uint64_t> seeds = config.seeds();
  summary.seeds.resize(seeds.size());
  summary.streams_identical = true;
  std::vector<RunRecord> finite_runs(seeds.size());
  std::vector<RunRecord> infinite_runs(seeds.size());
  parallel_for(static_cast<int>(seeds.size()), [&](int i) {
    finite_runs[static_cast<size_t>(i)] =
        run_single(finite, seeds[static_cast<size_t>(i)]);
    infinite_runs[static_cast<size_t>(i)] =
        run_single(infinite, seeds[static_cast<size_t>(i)]);
  });

  const auto window_mean = [&summary](const RunRecord& run) {
    double sum = 0.0;
    int count = 0;
    for (const auto& [first, last] : summary.windows) {
      for (int t = first; t <= last; ++t) {
        sum += run.steps[static_cast<size_t>(t - 1)].loss;
        ++count;
      }
    }
    return sum / count;
  };

  double finite_sum = 0.0, infinite_sum = 0.0;
  int wins = 0;
  for (size_t i = 0; i < seeds.size(); ++i) {
    CompareSeedResult& entry = summary.seeds[i];
    entry.seed = seeds[i];
    const RunRecord& fin = finite_runs[i];
    const RunRecord& inf = infinite_runs[i];
    if (fin.failed || inf.failed) continue;
    if (fin.observation_hash != inf.observation_hash) {
      summary.streams_identical = false;
      continue;
    }
    entry.valid = true;
    entry.finite_window_mean = window_mean(fin);
    entry.infinite_window_mean = window_mean(inf);
    entry.finite_wins = entry.finite_window_mean < entry.infinite_window_mean;
    finite_sum += entry.finite_window_mean;
    infinite_sum += entry.infinite_window_mean;
    wins += entry.finite_wins ? 1 : 0;
    ++summary.valid_seeds;
  }
  if (summary.valid_seeds > 0) {
    summary.win_fraction =
        static_cast<double>(wins) / summary.valid_seeds;
    summary.finite_mean = finite_sum / summary.valid_seeds;
    summary.infinite_mean = infinite_sum / summary.valid_seeds;
  }
  return summary;
}

nlohmann::json compare_summary_json(const CompareSummary& summary) {
  nlohmann::json j;
  j["config"] = summary.config.to_json();
  j["config_hash"] = summary.config.hash_hex();
  for (const auto& [first, last] : summary.windows) {
    j["windows"].push_back({first, last});
  }
  for (const CompareSeedResult& entry : summary.seeds) {
    j["seeds"].push_back({{"seed", entry.seed},
                          {"valid", entry.valid},
                          {"finite_window_mean", entry.finite_window_mean},
                          {"infinite_window_mean", entry.infinite_window_mean},
                          {"finite_wins", entry.finite_wins}});
  }
  j["valid_seeds"] = summary.valid_seeds;
  j["win_fraction"] = summary.win_fraction;
  j["finite_mean"] = summary.finite_mean;
  j["infinite_mean"] = summary.infinite_mean;
  j["streams_identical"] = summary.streams_identical;
  return j;
}

}  // namespace goalcast
