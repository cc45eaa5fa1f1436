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

#ifndef VVE__RISK_HPP_
#define VVE__RISK_HPP_

#include "vve/geometry.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

namespace vve
{

inline constexpr double kInfiniteTtz = std::numeric_limits<double>::infinity();

/**
 * Tuning of the time-to-zone collision-risk routine.
 *
 * The vehicle and pedestrian heading rays are intersected to find a potential
 * collision point; a square zone is centered there. Each agent's time to reach the
 * zone boundary (TTZ) is computed from its current speed and heading. The encounter
 * is dangerous when the two TTZ values differ by at most `ttz_diff_threshold` and the
 * vehicle is within `engagement_horizon` seconds of the zone. The vehicle TTZ then
 * selects one of three severity levels.
 */
struct RiskConfig
{
  double zone_half_extent{3.0};
  double ttz_diff_threshold{1.5};
  double severity_1_2_threshold{2.3};
  double severity_2_3_threshold{1.5};
  double engagement_horizon{6.0};
  double min_speed_epsilon{0.1};

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;
};

enum class Severity : std::uint8_t { None = 0, Level1 = 1, Level2 = 2, Level3 = 3 };

constexpr int to_int(Severity s) { return static_cast<int>(s); }
std::string to_string(Severity s);

struct CollisionSite
{
  Vec2 point;
  Rect zone;
};

struct RiskAssessment
{
  std::optional<Vec2> collision_point;
  std::optional<Rect> zone;
  double ttz_vehicle{kInfiniteTtz};
  double ttz_pedestrian{kInfiniteTtz};
  bool dangerous{false};
  Severity severity{Severity::None};
};

std::optional<CollisionSite> locate_collision_point(
  const Pose2 & vehicle, const Pose2 & pedestrian, const RiskConfig & cfg = {});

/// Seconds until `agent` reaches `zone` at constant velocity; +inf when it never does
/// or is effectively stationary.
double time_to_zone(const Pose2 & agent, const Rect & zone, const RiskConfig & cfg = {});

/// Milder level wins on a boundary: exactly 2.3 s is Level1, exactly 1.5 s is Level2.
Severity classify_severity(double ttz_vehicle, const RiskConfig & cfg = {});

RiskAssessment assess(const Pose2 & vehicle, const Pose2 & pedestrian, const RiskConfig & cfg = {});

/// Holds the highest severity seen until `kClearTime` seconds of continuous None.
struct SeverityLatch
{
  static constexpr double kClearTime = 1.0;

  Severity current{Severity::None};
  double clear_timer{0.0};
};

SeverityLatch latch_update(const SeverityLatch & latch, Severity observed, double dt);

}  // namespace vve

#endif  // VVE__RISK_HPP_
