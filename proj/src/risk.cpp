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

#include "vve/risk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vve
{

namespace
{
// Float accumulation of dt steps should still clear at exactly kClearTime.
constexpr double kLatchTimeTolerance = 1e-9;

void require(bool ok, const char * what)
{
  if (!ok) {
    throw std::invalid_argument(what);
  }
}
}  // namespace

void RiskConfig::validate() const
{
  require(std::isfinite(zone_half_extent) && zone_half_extent > 0.0, "zone_half_extent must be > 0");
  require(
    std::isfinite(ttz_diff_threshold) && ttz_diff_threshold > 0.0,
    "ttz_diff_threshold must be > 0");
  require(
    std::isfinite(severity_2_3_threshold) && severity_2_3_threshold > 0.0,
    "severity_2_3_threshold must be > 0");
  require(
    std::isfinite(severity_1_2_threshold) && severity_1_2_threshold > severity_2_3_threshold,
    "severity_2_3_threshold must be < severity_1_2_threshold");
  require(
    std::isfinite(engagement_horizon) && engagement_horizon > severity_1_2_threshold,
    "engagement_horizon must be > severity_1_2_threshold");
  require(
    std::isfinite(min_speed_epsilon) && min_speed_epsilon > 0.0, "min_speed_epsilon must be > 0");
}

std::string to_string(Severity s)
{
  switch (s) {
    case Severity::None:
      return "none";
    case Severity::Level1:
      return "level1";
    case Severity::Level2:
      return "level2";
    case Severity::Level3:
      return "level3";
  }
  return "unknown";
}

std::optional<CollisionSite> locate_collision_point(
  const Pose2 & vehicle, const Pose2 & pedestrian, const RiskConfig & cfg)
{
  const auto point = ray_ray_intersect(vehicle, pedestrian);
  if (!point) {
    return std::nullopt;
  }
  return CollisionSite{*point, Rect{*point, cfg.zone_half_extent, cfg.zone_half_extent}};
}

double time_to_zone(const Pose2 & agent, const Rect & zone, const RiskConfig & cfg)
{
  if (agent.speed < cfg.min_speed_epsilon) {
    return kInfiniteTtz;
  }
  const auto entry = ray_rect_entry(agent.position, agent.direction(), zone);
  if (!entry) {
    return kInfiniteTtz;
  }
  return *entry / agent.speed;
}

Severity classify_severity(double ttz_vehicle, const RiskConfig & cfg)
{
  if (ttz_vehicle >= cfg.severity_1_2_threshold) {
    return Severity::Level1;
  }
  if (ttz_vehicle >= cfg.severity_2_3_threshold) {
    return Severity::Level2;
  }
  return Severity::Level3;
}

RiskAssessment assess(const Pose2 & vehicle, const Pose2 & pedestrian, const RiskConfig & cfg)
{
  RiskAssessment out;
  const auto site = locate_collision_point(vehicle, pedestrian, cfg);
  if (!site) {
    return out;
  }
  out.collision_point = site->point;
  out.zone = site->zone;
  out.ttz_vehicle = time_to_zone(vehicle, site->zone, cfg);
  out.ttz_pedestrian = time_to_zone(pedestrian, site->zone, cfg);

  const bool both_finite = std::isfinite(out.ttz_vehicle) && std::isfinite(out.ttz_pedestrian);
  out.dangerous = both_finite &&
                  std::abs(out.ttz_vehicle - out.ttz_pedestrian) <= cfg.ttz_diff_threshold &&
                  out.ttz_vehicle <= cfg.engagement_horizon;
  if (out.dangerous) {
    out.severity = classify_severity(out.ttz_vehicle, cfg);
  }
  return out;
}

SeverityLatch latch_update(const SeverityLatch & latch, Severity observed, double dt)
{
  if (!(dt > 0.0)) {
    throw std::invalid_argument("latch_update: dt must be > 0");
  }
  SeverityLatch next = latch;
  if (observed == Severity::None) {
    next.clear_timer += dt;
    if (next.clear_timer >= SeverityLatch::kClearTime - kLatchTimeTolerance) {
      next.current = Severity::None;
      next.clear_timer = 0.0;
    }
    return next;
  }
  next.clear_timer = 0.0;
  next.current = std::max(latch.current, observed);
  return next;
}

}  // namespace vve
