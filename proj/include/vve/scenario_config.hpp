// Copyright 2026 The VVE Sim Authors
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

#ifndef VVE__SCENARIO_CONFIG_HPP_
#define VVE__SCENARIO_CONFIG_HPP_

#include "vve/agents.hpp"
#include "vve/geometry.hpp"
#include "vve/risk.hpp"
#include "vve/v2p.hpp"

#include <json.hpp>

#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vve
{

struct VehicleConfig
{
  Pose2 initial{};  // speed is cruise_speed
  double cruise_speed{0.0};
  double footprint_length{4.7};
  double footprint_width{1.8};
  BrakeMap brake_map{};
};

struct PedestrianConfig
{
  std::uint8_t source_id{0};
  Pose2 initial{};
  double radius{0.3};
  MotionProfile profile{};
};

struct SensorConfig
{
  double range{60.0};
  // When set, a pedestrian seen by the onboard sensor (and not known through V2P)
  // is fed to the risk engine. Off by default: the baseline vehicle never brakes on
  // late line-of-sight acquisition.
  bool onboard_braking{false};
};

struct ScenarioConfig
{
  double dt{0.01};
  double horizon{0.0};
  std::uint64_t seed{0};
  bool v2p_enabled{true};
  VehicleConfig vehicle{};
  std::vector<PedestrianConfig> pedestrians;
  std::vector<Rect> occluders;
  RiskConfig risk{};
  ChannelConfig channel{};  // rng_seed defaults to `seed`
  SensorConfig sensor{};

  SensorModel sensor_model() const { return SensorModel{sensor.range, occluders}; }
};

class ConfigError : public std::runtime_error
{
public:
  enum class Kind { Parse, Validation };

  ConfigError(Kind kind, const std::string & message);
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

/// Parse a scenario document, fill defaults, validate. Throws ConfigError; parse
/// errors carry "line L, column C", validation errors name the offending field.
ScenarioConfig load_config(std::istream & in);
ScenarioConfig load_config(const std::string & text);
ScenarioConfig config_from_json(const nlohmann::json & doc);

/// Fully defaulted document; config_from_json(config_to_json(c)) reproduces c.
nlohmann::json config_to_json(const ScenarioConfig & cfg);

}  // namespace vve

#endif  // VVE__SCENARIO_CONFIG_HPP_
