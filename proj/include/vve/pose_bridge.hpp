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

#ifndef VVE__POSE_BRIDGE_HPP_
#define VVE__POSE_BRIDGE_HPP_

#include "vve/geometry.hpp"

#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace vve
{

// Carries poses measured in the real test lot into the virtual world. One rigid
// transform is solved from a pair of reference poses (the vehicle parked at its lot
// origin and its intended spawn pose in the virtual scene); every later lot pose is
// mapped through it, so the virtual vehicle moves by exactly the real displacement.

struct RealPoseSample
{
  double t{0.0};
  Pose2 pose{};
};

struct BridgeCalibration
{
  FrameTransform transform{};
  Pose2 real_origin{};
  Pose2 virtual_origin{};
};

BridgeCalibration calibrate(const Pose2 & real_origin, const Pose2 & virtual_origin);

Pose2 map_pose(const BridgeCalibration & cal, const Pose2 & real);

/// Additive zero-mean Gaussian position noise, off when sigma is 0.
class PositionNoise
{
public:
  PositionNoise(double sigma, std::uint64_t seed);
  Pose2 apply(const Pose2 & pose);

private:
  double sigma_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> dist_{0.0, 1.0};
};

enum class PoseLogErrorKind { MalformedRow, NonMonotoneTime, EmptyLog };

const char * to_string(PoseLogErrorKind kind);

class PoseLogError : public std::runtime_error
{
public:
  PoseLogError(PoseLogErrorKind kind, std::size_t line, const std::string & detail);
  PoseLogErrorKind kind() const noexcept { return kind_; }
  /// 1-based line number in the source (header is line 1); 0 for EmptyLog.
  std::size_t line() const noexcept { return line_; }

private:
  PoseLogErrorKind kind_;
  std::size_t line_;
};

inline constexpr const char * kPoseLogHeader = "t,x,y,heading_deg,speed";

/// Parses `t,x,y,heading_deg,speed` CSV (LF or CRLF). Throws PoseLogError.
std::vector<RealPoseSample> ingest_pose_log(std::istream & in);

/// Writes samples in the same CSV layout ingest_pose_log reads.
void write_pose_log(std::ostream & out, const std::vector<RealPoseSample> & samples);

/// Interpolated pose at `t`: linear in position and speed, shorter arc in heading.
/// Throws std::out_of_range outside [first.t, last.t].
Pose2 replay_pose(const std::vector<RealPoseSample> & samples, double t);

}  // namespace vve

#endif  // VVE__POSE_BRIDGE_HPP_
