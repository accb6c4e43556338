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

#include <sstream>
#include <stdexcept>

#include "goalcast/theta.hpp"

namespace goalcast {
namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd from_std(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<long>(v.size()));
}

}  // namespace

Eigen::VectorXd observe(const Eigen::VectorXd& state, const NoiseSpec& noise,
                        RngStream& rng) {
  switch (noise.kind) {
    case NoiseSpec::Kind::kNone:
      return state;
    case NoiseSpec::Kind::kGaussian: {
      Eigen::VectorXd out = state;
      for (int i = 0; i < out.size(); ++i) {
        out(i) += noise.sigma * rng.gaussian();
      }
      return out;
    }
    case NoiseSpec::Kind::kUniform: {
      Eigen::VectorXd out = state;
      for (int i = 0; i < out.size(); ++i) {
        out(i) += rng.uniform(-noise.sigma, noise.sigma);
      }
      return out;
    }
  }
  throw std::logic_error("observe: unknown noise kind");
}

const Eigen::VectorXd& GoalSchedule::goal_at(int t) const {
  if (entries.empty()) {
    throw std::logic_error("GoalSchedule: empty schedule");
  }
  size_t active = 0;
  for (size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].time <= t) active = i;
  }
  return entries[active].goal;
}

void GoalSchedule::validate(int final_time) const {
  if (entries.empty() || entries.front().time != 0) {
    throw std::invalid_argument("GoalSchedule: first entry must be at t = 0");
  }
  for (size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].time <= entries[i - 1].time) {
      throw std::invalid_argument(
          "GoalSchedule: switch times must be strictly increasing");
    }
  }
  if (entries.back().time >= final_time) {
    throw std::invalid_argument(
        "GoalSchedule: switch times must lie inside [0, T)");
  }
}

GroundTruthRun generate_truth(const Model& model, const IlqrSolver& solver,
                              const Eigen::VectorXd& theta_base,
                              const GoalSchedule& schedule, int final_time,
                              const Eigen::VectorXd& initial_state) {
  schedule.validate(final_time);
  const ThetaLayout& layout = model.theta_layout();

  GroundTruthRun run;
  run.schedule = schedule;
  run.states.resize(static_cast<size_t>(final_time) + 1);
  run.controls.resize(static_cast<size_t>(final_time));
  run.states[0] = initial_state;

  Trajectory previous;
  for (size_t seg = 0; seg < schedule.entries.size(); ++seg) {
    const int seg_start = schedule.entries[seg].time;
    const int seg_stop = seg + 1 < schedule.entries.size()
                             ? schedule.entries[seg + 1].time
                             : final_time;

    Eigen::VectorXd theta = theta_base;
    theta.segment(layout.goal_offset(), layout.goal_dim) =
        schedule.entries[seg].goal;

    OcpProblem problem;
    problem.model = &model;
    problem.theta = theta;
    problem.initial_state = run.states[static_cast<size_t>(seg_start)];
    problem.start_index = seg_start;
    problem.end_index = final_time;

    const Trajectory traj =
        solver.solve(problem, seg == 0 ? nullptr : &previous);
    if (!traj.diagnostics.finite || traj.diagnostics.regularization_failed ||
        !traj.diagnostics.converged) {
      std::ostringstream msg;
      msg << "generate_truth: segment solve at t = " << seg_start
          << " failed (converged = " << traj.diagnostics.converged
          << ", finite = " << traj.diagnostics.finite
          << ", iterations = " << traj.diagnostics.iterations
          << ", gradient = " << traj.diagnostics.gradient_norm << ")";
      throw std::runtime_error(msg.str());
    }

    for (int t = seg_start; t < seg_stop; ++t) {
      run.controls[static_cast<size_t>(t)] =
          traj.controls[static_cast<size_t>(t - seg_start)];
      run.states[static_cast<size_t>(t) + 1] =
          traj.states[static_cast<size_t>(t - seg_start) + 1];
    }
    previous = traj;
  }
  return run;
}

void add_observations(GroundTruthRun* run, const NoiseSpec& noise,
                      RngStream& rng) {
  run->observations.resize(run->states.size());
  for (size_t t = 0; t < run->states.size(); ++t) {
    run->observations[t] = observe(run->states[t], noise, rng);
  }
}

nlohmann::json truth_to_json(const GroundTruthRun& run) {
  nlohmann::json j;
  j["seed"] = run.seed;
  for (const auto& x : run.states) j["states"].push_back(to_std(x));
  for (const auto& u : run.controls) j["controls"].push_back(to_std(u));
  for (const auto& y : run.observations) j["observations"].push_back(to_std(y));
  for (const auto& entry : run.schedule.entries) {
    j["schedule"].push_back(
        {{"time", entry.time}, {"goal", to_std(entry.goal)}});
  }
  return j;
}

GroundTruthRun truth_from_json(const nlohmann::json& j) {
  GroundTruthRun run;
  run.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& x : j.at("states")) {
    run.states.push_back(from_std(x.get<std::vector<double>>()));
  }
  for (const auto& u : j.at("controls")) {
    run.controls.push_back(from_std(u.get<std::vector<double>>()));
  }
  if (j.contains("observations")) {
    for (const auto& y : j.at("observations")) {
      run.observations.push_back(from_std(y.get<std::vector<double>>()));
    }
  }
  for (const auto& entry : j.at("schedule")) {
    run.schedule.entries.push_back(
        {entry.at("time").get<int>(),
         from_std(entry.at("goal").get<std::vector<double>>())});
  }
  return run;
}

}  // namespace goalcast
