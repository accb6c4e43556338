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

#ifndef GOALCAST_SCENARIO_HPP_
#define GOALCAST_SCENARIO_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "goalcast/model.hpp"
#include "goalcast/plant.hpp"

namespace goalcast {

enum class ModelKind { kQuadrotor, kMlp2121, kMlp3889, kMlp5793 };
enum class CostVariant { kStandard, kHardware };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

// One experiment family: model, horizon, noise, goal schedule (explicit or
// generated from switch counts), memory time, seeds, initialization rule and
// output options. A JSON document maps 1:1 onto this struct.
struct ScenarioConfig {
  std::string name = "scenario";
  ModelKind model = ModelKind::kQuadrotor;
  int steps = 100;
  double dt = 0.15;
  NoiseSpec noise{NoiseSpec::Kind::kNone, 0.0};

  int num_switches = 0;
  int switch_interval = 0;
  std::vector<GoalSchedule::Entry> explicit_schedule;
  double goal_box = 4.0;  // random goal positions uniform in [-box, box]^3

  int memory_time = 10;
  bool memory_infinite = false;

  std::uint64_t seed_base = 1;
  int seed_count = 20;
  std::vector<std::uint64_t> explicit_seeds;

  double init_spread = 0.25;
  bool init_exact = false;
  CostVariant cost_variant = CostVariant::kStandard;
  std::optional<Eigen::VectorXd> custom_p_diagonal;
  std::optional<Eigen::VectorXd> custom_r_diagonal;

  bool record_theta = false;
  // Wall-clock columns are the one non-reproducible output; disable to make
  // output files byte-stable per (config, seed).
  bool record_timing = true;
  bool archive_truth = false;
  std::string out_dir = "out";

  std::vector<std::uint64_t> seeds() const;
  void validate() const;

  nlohmann::json to_json() const;
  static ScenarioConfig from_json(const nlohmann::json& j);
  // FNV-1a over the canonical JSON dump, excluding the output directory.
  std::string hash_hex() const;
};

// The named experiment families shipped with the tool.
std::vector<std::pair<std::string, ScenarioConfig>> scenario_library();
ScenarioConfig scenario_by_name(const std::string& name);

// Model factory for the predictor side of a scenario.
std::unique_ptr<Model> make_predictor_model(const ScenarioConfig& config);
// The plant is always the physical vehicle; the cost variant carries over.
std::unique_ptr<Model> make_plant_model(const ScenarioConfig& config);

}  // namespace goalcast

#endif  // GOALCAST_SCENARIO_HPP_
