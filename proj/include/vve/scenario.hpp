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

#ifndef VVE__SCENARIO_HPP_
#define VVE__SCENARIO_HPP_

#include "vve/scenario_config.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

namespace vve
{

struct PedestrianSample
{
  double x{0.0};
  double y{0.0};
  double speed{0.0};
};

/// State at the end of one simulation tick.
struct TraceRecord
{
  double t{0.0};
  Pose2 vehicle{};
  std::vector<PedestrianSample> pedestrians;
  double ttz_vehicle{kInfiniteTtz};
  double ttz_pedestrian{kInfiniteTtz};
  bool dangerous{false};
  int severity{0};  // latched
  double commanded_decel{0.0};
  double actual_decel{0.0};
  std::uint64_t psm_received{0};
  bool los{false};
  bool collided{false};
  double separation{0.0};  // not serialized
};

struct Outcome
{
  bool collided{false};
  bool stopped{false};
  double min_separation{0.0};
  int max_severity{0};
  std::optional<double> first_brake_time;
  std::optional<double> stop_time;
};

struct RunResult
{
  std::vector<TraceRecord> trace;
  Outcome outcome;
};

inline constexpr double kStoppedSpeed = 0.01;
inline constexpr double kStopHoldTime = 1.0;

/**
 * Fixed-step closed loop. Each tick at t = k * dt runs, in order:
 *   1. pedestrians follow their motion profiles;
 *   2. with V2P enabled, due beacons are broadcast and arrived frames decoded;
 *   3. the vehicle's picture of each pedestrian is its latest decoded PSM, else the
 *      ground truth when the onboard sensor sees it and onboard braking is enabled;
 *   4. every known pedestrian is assessed, the maximum severity feeds the latch, and
 *      the latched level sets the commanded deceleration;
 *   5. the vehicle plant steps;
 *   6. contact is checked and the tick is recorded.
 * The run ends on contact, kStopHoldTime after the vehicle stops with no danger
 * active, or at the horizon.
 */
RunResult run(const ScenarioConfig & cfg);

/// Throws std::invalid_argument on an empty trace.
Outcome summarize(const std::vector<TraceRecord> & records);

/// CSV trace; returns bytes written. Throws std::ios_base::failure on stream errors.
std::size_t write_trace(
  const std::vector<TraceRecord> & records, std::ostream & out, std::size_t pedestrian_count = 1);

std::string trace_header(std::size_t pedestrian_count);

nlohmann::json outcome_to_json(const Outcome & o);

}  // namespace vve

#endif  // VVE__SCENARIO_HPP_
