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

#ifndef VVE__AGENTS_HPP_
#define VVE__AGENTS_HPP_

#include "vve/geometry.hpp"
#include "vve/risk.hpp"

#include <vector>

namespace vve
{

/// Deceleration commanded for each severity level plus first-order actuator lag.
struct BrakeMap
{
  double level1_decel{2.0};
  double level2_decel{4.5};
  double level3_decel{8.0};
  double actuator_tau{0.2};

  void validate() const;
};

struct VehicleState
{
  Pose2 pose{};
  double commanded_decel{0.0};
  double actual_decel{0.0};
  double footprint_length{4.7};
  double footprint_width{1.8};
  double actuator_tau{0.2};
};

struct ProfileSegment
{
  double start_time{0.0};
  double speed{0.0};
  double heading{0.0};
};

/// Piecewise-constant speed/heading schedule. Start times strictly increase.
struct MotionProfile
{
  std::vector<ProfileSegment> segments;

  void validate() const;
  /// Segment active at `t`, or nullptr before the first start time.
  const ProfileSegment * active(double t) const;
};

struct PedestrianState
{
  Pose2 pose{};
  double radius{0.3};
  MotionProfile profile{};
};

struct SensorModel
{
  double range{60.0};
  std::vector<Rect> occluders;
};

double severity_to_decel(Severity s, const BrakeMap & map);

/// One explicit-Euler step of the longitudinal plant. dt must lie in (0, 0.1].
VehicleState step_vehicle(const VehicleState & v, double dt);

/// Applies the profile segment active at `t` and advances by dt. Before the first
/// segment the pedestrian stands still with its previous heading.
PedestrianState step_pedestrian(const PedestrianState & p, double t, double dt);

/// Range check plus unobstructed sight segment.
bool onboard_detects(const VehicleState & v, const PedestrianState & p, const SensorModel & sensor);

/// Distance from the pedestrian disc boundary to the vehicle footprint (0 on contact).
double separation(const VehicleState & v, const PedestrianState & p);

/// Closed contact between the pedestrian disc and the oriented vehicle footprint.
bool detect_collision(const VehicleState & v, const PedestrianState & p);

}  // namespace vve

#endif  // VVE__AGENTS_HPP_
