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

#include "vve/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vve
{

namespace
{
constexpr double kMaxStep = 0.1;

void check_dt(double dt, const char * who)
{
  if (!(dt > 0.0 && dt <= kMaxStep)) {
    throw std::invalid_argument(std::string(who) + ": dt must be in (0, 0.1]");
  }
}

// Distance from a point to the footprint rectangle centered on the vehicle pose.
double distance_to_footprint(const VehicleState & v, const Vec2 & p)
{
  const Vec2 local = rotate(p - v.pose.position, -v.pose.heading);
  const Rect body{{0.0, 0.0}, v.footprint_length / 2.0, v.footprint_width / 2.0};
  return distance_to_rect(local, body);
}
}  // namespace

void BrakeMap::validate() const
{
  if (!(level1_decel > 0.0 && level1_decel < level2_decel && level2_decel < level3_decel) ||
      !std::isfinite(level3_decel)) {
    throw std::invalid_argument("brake_map requires 0 < level1_decel < level2_decel < level3_decel");
  }
  if (!(actuator_tau >= 0.0) || !std::isfinite(actuator_tau)) {
    throw std::invalid_argument("brake_map.actuator_tau must be >= 0");
  }
}

void MotionProfile::validate() const
{
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto & s = segments[i];
    if (!std::isfinite(s.start_time) || !std::isfinite(s.heading) || !std::isfinite(s.speed)) {
      throw std::invalid_argument("profile segments must be finite");
    }
    if (s.speed < 0.0) {
      throw std::invalid_argument("profile speeds must be >= 0");
    }
    if (i > 0 && !(s.start_time > segments[i - 1].start_time)) {
      throw std::invalid_argument("profile start_time values must be strictly increasing");
    }
  }
}

const ProfileSegment * MotionProfile::active(double t) const
{
  const ProfileSegment * found = nullptr;
  for (const auto & s : segments) {
    if (s.start_time <= t) {
      found = &s;
    } else {
      break;
    }
  }
  return found;
}

double severity_to_decel(Severity s, const BrakeMap & map)
{
  switch (s) {
    case Severity::None:
      return 0.0;
    case Severity::Level1:
      return map.level1_decel;
    case Severity::Level2:
      return map.level2_decel;
    case Severity::Level3:
      return map.level3_decel;
  }
  return 0.0;
}

VehicleState step_vehicle(const VehicleState & v, double dt)
{
  check_dt(dt, "step_vehicle");
  VehicleState next = v;
  if (v.actuator_tau <= 0.0) {
    next.actual_decel = v.commanded_decel;
  } else {
    // clamp keeps the lag stable if dt ever exceeds tau
    const double alpha = std::min(1.0, dt / v.actuator_tau);
    next.actual_decel = v.actual_decel + (v.commanded_decel - v.actual_decel) * alpha;
  }
  next.actual_decel = std::max(0.0, next.actual_decel);

  const double speed = v.pose.speed;
  next.pose.position = v.pose.position + v.pose.direction() * (speed * dt);
  next.pose.speed = std::max(0.0, speed - next.actual_decel * dt);
  return next;
}

PedestrianState step_pedestrian(const PedestrianState & p, double t, double dt)
{
  check_dt(dt, "step_pedestrian");
  PedestrianState next = p;
  if (const auto * seg = p.profile.active(t)) {
    next.pose.speed = seg->speed;
    next.pose.heading = normalize_angle(seg->heading);
  } else {
    next.pose.speed = 0.0;
  }
  next.pose.position = p.pose.position + next.pose.direction() * (next.pose.speed * dt);
  return next;
}

bool onboard_detects(const VehicleState & v, const PedestrianState & p, const SensorModel & sensor)
{
  const Vec2 & a = v.pose.position;
  const Vec2 & b = p.pose.position;
  if (distance(a, b) > sensor.range) {
    return false;
  }
  return std::none_of(sensor.occluders.begin(), sensor.occluders.end(), [&](const Rect & r) {
    return segment_intersects_rect(a, b, r);
  });
}

double separation(const VehicleState & v, const PedestrianState & p)
{
  return std::max(0.0, distance_to_footprint(v, p.pose.position) - p.radius);
}

bool detect_collision(const VehicleState & v, const PedestrianState & p)
{
  return distance_to_footprint(v, p.pose.position) <= p.radius;
}

}  // namespace vve
