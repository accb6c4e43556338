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

#ifndef GOALCAST_PLANT_HPP_
#define GOALCAST_PLANT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "goalcast/model.hpp"
#include "goalcast/ocp.hpp"
#include "goalcast/rng.hpp"

namespace goalcast {

struct NoiseSpec {
  enum class Kind { kNone, kGaussian, kUniform };
  Kind kind = Kind::kNone;
  double sigma = 0.0;
};

// none: exact state. gaussian: additive N(0, sigma^2 I). uniform: additive
// per-component Uniform(-sigma, sigma).
Eigen::VectorXd observe(const Eigen::VectorXd& state, const NoiseSpec& noise,
                        RngStream& rng);

// Goal switch times with the goal active from each time onward. The first
// entry is at t = 0; switch times are strictly increasing and below the
// final time.
struct GoalSchedule {
  struct Entry {
    int time = 0;
    Eigen::VectorXd goal;
  };
  std::vector<Entry> entries;

  const Eigen::VectorXd& goal_at(int t) const;
  void validate(int final_time) const;
};

struct GroundTruthRun {
  std::vector<Eigen::VectorXd> states;        // 0..T
  std::vector<Eigen::VectorXd> controls;      // 0..T-1
  std::vector<Eigen::VectorXd> observations;  // 0..T
  GoalSchedule schedule;
  std::uint64_t seed = 0;

  const Eigen::VectorXd& true_goal(int t) const { return schedule.goal_at(t); }
};

// Generates the agent's behavior: one open-loop optimal plan per schedule
// segment, each replanned from the realized state at the switch time, so the
// trajectory is state-continuous at switches. theta_base supplies the
// dynamics and objective parameters; its goal segment is overwritten per
// segment. Throws std::runtime_error if any segment solve fails.
GroundTruthRun generate_truth(const Model& model, const IlqrSolver& solver,
                              const Eigen::VectorXd& theta_base,
                              const GoalSchedule& schedule, int final_time,
                              const Eigen::VectorXd& initial_state);

// Draws observations for every state with the given noise stream.
void add_observations(GroundTruthRun* run, const NoiseSpec& noise,
                      RngStream& rng);

// Run-archive serialization so a cached truth can be re-observed under
// different noise draws.
nlohmann::json truth_to_json(const GroundTruthRun& run);
GroundTruthRun truth_from_json(const nlohmann::json& j);

}  // namespace goalcast

#endif  // GOALCAST_PLANT_HPP_
