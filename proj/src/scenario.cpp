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

#include "goalcast/scenario.hpp"

#include <sstream>
#include <stdexcept>

#include "goalcast/mlp.hpp"
#include "goalcast/quadrotor.hpp"

namespace goalcast {
namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd from_std(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<long>(v.size()));
}

std::string noise_kind_to_string(NoiseSpec::Kind kind) {
  switch (kind) {
    case NoiseSpec::Kind::kNone:
      return "none";
    case NoiseSpec::Kind::kGaussian:
      return "gaussian";
    case NoiseSpec::Kind::kUniform:
      return "uniform";
  }
  return "none";
}

NoiseSpec::Kind noise_kind_from_string(const std::string& name) {
  if (name == "none") return NoiseSpec::Kind::kNone;
  if (name == "gaussian") return NoiseSpec::Kind::kGaussian;
  if (name == "uniform") return NoiseSpec::Kind::kUniform;
  throw std::invalid_argument("unknown noise kind: " + name);
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kQuadrotor:
      return "quadrotor";
    case ModelKind::kMlp2121:
      return "mlp-2121";
    case ModelKind::kMlp3889:
      return "mlp-3889";
    case ModelKind::kMlp5793:
      return "mlp-5793";
  }
  return "quadrotor";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "quadrotor") return ModelKind::kQuadrotor;
  if (name == "mlp-2121") return ModelKind::kMlp2121;
  if (name == "mlp-3889") return ModelKind::kMlp3889;
  if (name == "mlp-5793") return ModelKind::kMlp5793;
  throw std::invalid_argument("unknown model kind: " + name);
}

std::vector<std::uint64_t> ScenarioConfig::seeds() const {
  if (!explicit_seeds.empty()) return explicit_seeds;
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<size_t>(seed_count));
  for (int i = 0; i < seed_count; ++i) {
    out.push_back(seed_base + static_cast<std::uint64_t>(i));
  }
  return out;
}

void ScenarioConfig::validate() const {
  if (steps < 2) throw std::invalid_argument("config: steps must be >= 2");
  if (dt <= 0) throw std::invalid_argument("config: dt must be positive");
  if (!memory_infinite && memory_time < 1) {
    throw std::invalid_argument("config: memory_time must be >= 1");
  }
  if (num_switches > 0) {
    if (switch_interval < 1) {
      throw std::invalid_argument("config: switch_interval must be >= 1");
    }
    if (num_switches * switch_interval >= steps) {
      throw std::invalid_argument(
          "config: num_switches * switch_interval must be < steps");
    }
  }
  if (!explicit_schedule.empty()) {
    GoalSchedule schedule{explicit_schedule};
    schedule.validate(steps);
  }
  if (model != ModelKind::kQuadrotor && cost_variant == CostVariant::kHardware) {
    throw std::invalid_argument(
        "config: the hardware cost variant requires the quadrotor model");
  }
  if (model != ModelKind::kQuadrotor && init_exact) {
    throw std::invalid_argument(
        "config: exact initialization is undefined for learned dynamics");
  }
  if (seeds().empty()) throw std::invalid_argument("config: no seeds");
}

nlohmann::json ScenarioConfig::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["model"] = to_string(model);
  j["steps"] = steps;
  j["dt"] = dt;
  j["noise"] = {{"kind", noise_kind_to_string(noise.kind)},
                {"sigma", noise.sigma}};
  j["num_switches"] = num_switches;
  j["switch_interval"] = switch_interval;
  if (!explicit_schedule.empty()) {
    for (const auto& entry : explicit_schedule) {
      j["schedule"].push_back(
          {{"time", entry.time}, {"goal", to_std(entry.goal)}});
    }
  }
  j["goal_box"] = goal_box;
  if (memory_infinite) {
    j["memory_time"] = "inf";
  } else {
    j["memory_time"] = memory_time;
  }
  j["seed_base"] = seed_base;
  j["seed_count"] = seed_count;
  if (!explicit_seeds.empty()) j["seeds"] = explicit_seeds;
  j["init_spread"] = init_spread;
  j["init_exact"] = init_exact;
  j["cost_variant"] =
      cost_variant == CostVariant::kHardware ? "hardware" : "standard";
  if (custom_p_diagonal) j["p_diagonal"] = to_std(*custom_p_diagonal);
  if (custom_r_diagonal) j["r_diagonal"] = to_std(*custom_r_diagonal);
  j["record_theta"] = record_theta;
  j["record_timing"] = record_timing;
  j["archive_truth"] = archive_truth;
  j["out_dir"] = out_dir;
  return j;
}

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& j) {
  ScenarioConfig config;
  config.name = j.value("name", config.name);
  if (j.contains("model")) {
    config.model = model_kind_from_string(j.at("model").get<std::string>());
  }
  config.steps = j.value("steps", config.steps);
  config.dt = j.value("dt", config.dt);
  if (j.contains("noise")) {
    config.noise.kind =
        noise_kind_from_string(j.at("noise").value("kind", "none"));
    config.noise.sigma = j.at("noise").value("sigma", 0.0);
  }
  config.num_switches = j.value("num_switches", config.num_switches);
  config.switch_interval = j.value("switch_interval", config.switch_interval);
  if (j.contains("schedule")) {
    for (const auto& entry : j.at("schedule")) {
      config.explicit_schedule.push_back(
          {entry.at("time").get<int>(),
           from_std(entry.at("goal").get<std::vector<double>>())});
    }
  }
  config.goal_box = j.value("goal_box", config.goal_box);
  if (j.contains("memory_time")) {
    if (j.at("memory_time").is_string()) {
      const std::string value = j.at("memory_time").get<std::string>();
      if (value != "inf" && value != "infinite") {
        throw std::invalid_argument("memory_time: expected a number or 'inf'");
      }
      config.memory_infinite = true;
    } else {
      config.memory_time = j.at("memory_time").get<int>();
      config.memory_infinite = false;
    }
  }
  config.seed_base = j.value("seed_base", config.seed_base);
  config.seed_count = j.value("seed_count", config.seed_count);
  if (j.contains("seeds")) {
    config.explicit_seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  }
  config.init_spread = j.value("init_spread", config.init_spread);
  config.init_exact = j.value("init_exact", config.init_exact);
  if (j.contains("cost_variant")) {
    const std::string variant = j.at("cost_variant").get<std::string>();
    if (variant == "hardware") {
      config.cost_variant = CostVariant::kHardware;
    } else if (variant == "standard") {
      config.cost_variant = CostVariant::kStandard;
    } else {
      throw std::invalid_argument("unknown cost variant: " + variant);
    }
  }
  if (j.contains("p_diagonal")) {
    config.custom_p_diagonal =
        from_std(j.at("p_diagonal").get<std::vector<double>>());
  }
  if (j.contains("r_diagonal")) {
    config.custom_r_diagonal =
        from_std(j.at("r_diagonal").get<std::vector<double>>());
  }
  config.record_theta = j.value("record_theta", config.record_theta);
  config.record_timing = j.value("record_timing", config.record_timing);
  config.archive_truth = j.value("archive_truth", config.archive_truth);
  config.out_dir = j.value("out_dir", config.out_dir);
  return config;
}

std::string ScenarioConfig::hash_hex() const {
  nlohmann::json j = to_json();
  j.erase("out_dir");
  const std::uint64_t hash = fnv1a(j.dump());
  std::ostringstream os;
  os << std::hex << hash;
  return os.str();
}

std::vector<std::pair<std::string, ScenarioConfig>> scenario_library() {
  std::vector<std::pair<std::string, ScenarioConfig>> library;

  const auto add = [&library](const std::string& name, ScenarioConfig config) {
    config.name = name;
    library.emplace_back(name, std::move(config));
  };

  // fixed goal, mild noise: the default profile for timing and smoke runs
  {
    ScenarioConfig config;
    config.noise = {NoiseSpec::Kind::kGaussian, 0.1};
    add("nominal", config);
  }

  // noise sweep, fixed goal
  {
    ScenarioConfig config;
    add("noise-none", config);
  }
  for (const double sigma : {0.1, 0.5, 1.0}) {
    for (const auto kind :
         {NoiseSpec::Kind::kGaussian, NoiseSpec::Kind::kUniform}) {
      ScenarioConfig config;
      config.noise = {kind, sigma};
      std::ostringstream name;
      name << "noise-" << noise_kind_to_string(kind) << "-" << sigma;
      add(name.str(), config);
    }
  }

  // switching scenarios
  {
    ScenarioConfig config;
    config.num_switches = 2;
    config.switch_interval = 30;
    add("two-switch", config);
  }
  {
    ScenarioConfig config;
    config.num_switches = 3;
    config.switch_interval = 25;
    add("three-switch", config);
  }
  for (const int delta : {20, 30}) {
    ScenarioConfig config;
    config.num_switches = 2;
    config.switch_interval = delta;
    add("delta-" + std::to_string(delta), config);
  }

  // hardware-style cost: altitude hold plus a no-fly-zone penalty around
  // (0, 5), goal at (2, 0, 0.6) with identity attitude
  {
    ScenarioConfig config;
    config.cost_variant = CostVariant::kHardware;
    config.noise = {NoiseSpec::Kind::kGaussian, 0.1};
    Eigen::VectorXd goal = Eigen::VectorXd::Zero(13);
    goal(0) = 2.0;
    goal(2) = 0.6;
    goal(6) = 1.0;
    config.explicit_schedule = {{0, goal}};
    add("hardware", config);
  }

  // learned-dynamics variants (compute-heavy; few seeds by default)
  for (const int layers : {1, 2, 3}) {
    ScenarioConfig config;
    config.model = layers == 1   ? ModelKind::kMlp2121
                   : layers == 2 ? ModelKind::kMlp3889
                                 : ModelKind::kMlp5793;
    config.noise = {NoiseSpec::Kind::kGaussian, 0.5};
    config.seed_count = 2;
    add(to_string(config.model), config);
  }

  return library;
}

ScenarioConfig scenario_by_name(const std::string& name) {
  for (auto& [key, config] : scenario_library()) {
    if (key == name) return config;
  }
  throw std::invalid_argument("unknown scenario: " + name);
}

std::unique_ptr<Model> make_predictor_model(const ScenarioConfig& config) {
  if (config.model == ModelKind::kQuadrotor) {
    return make_plant_model(config);
  }
  const int layers = config.model == ModelKind::kMlp2121   ? 1
                     : config.model == ModelKind::kMlp3889 ? 2
                                                           : 3;
  return std::make_unique<MlpModel>(MlpArchitecture::quadrotor_sized(layers));
}

std::unique_ptr<Model> make_plant_model(const ScenarioConfig& config) {
  QuadrotorOptions options;
  options.dt = config.dt;
  if (config.cost_variant == CostVariant::kHardware) {
    options.hardware_cost = true;
    options.obstacle_xy = Eigen::Vector2d(0.0, 5.0);
  }
  return std::make_unique<QuadrotorModel>(options);
}

}  // namespace goalcast
