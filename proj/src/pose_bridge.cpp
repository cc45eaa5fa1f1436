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

#include "vve/pose_bridge.hpp"

#include "vve/format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string_view>

namespace vve
{

namespace
{

std::vector<std::string_view> split_commas(std::string_view line)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_double(std::string_view s, double & out)
{
  s = trim(s);
  if (s.empty()) {
    return false;
  }
  if (s.front() == '+') {
    s.remove_prefix(1);
  }
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

BridgeCalibration calibrate(const Pose2 & real_origin, const Pose2 & virtual_origin)
{
  if (!real_origin.finite() || !virtual_origin.finite()) {
    throw std::invalid_argument("calibrate: non-finite origin pose");
  }
  const double rotation = normalize_angle(virtual_origin.heading - real_origin.heading);
  const Vec2 translation = virtual_origin.position - rotate(real_origin.position, rotation);
  return BridgeCalibration{FrameTransform{rotation, translation}, real_origin, virtual_origin};
}

Pose2 map_pose(const BridgeCalibration & cal, const Pose2 & real)
{
  return compose(cal.transform, real);
}

PositionNoise::PositionNoise(double sigma, std::uint64_t seed) : sigma_(sigma), rng_(seed)
{
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("PositionNoise: sigma must be >= 0");
  }
}

Pose2 PositionNoise::apply(const Pose2 & pose)
{
  if (sigma_ == 0.0) {
    return pose;
  }
  Pose2 out = pose;
  out.position.x += sigma_ * dist_(rng_);
  out.position.y += sigma_ * dist_(rng_);
  return out;
}

const char * to_string(PoseLogErrorKind kind)
{
  switch (kind) {
    case PoseLogErrorKind::MalformedRow:
      return "MalformedRow";
    case PoseLogErrorKind::NonMonotoneTime:
      return "NonMonotoneTime";
    case PoseLogErrorKind::EmptyLog:
      return "EmptyLog";
  }
  return "Unknown";
}

PoseLogError::PoseLogError(PoseLogErrorKind kind, std::size_t line, const std::string & detail)
: std::runtime_error(
    std::string(to_string(kind)) + (line > 0 ? " at line " + std::to_string(line) : "") +
    (detail.empty() ? "" : ": " + detail)),
  kind_(kind),
  line_(line)
{
}

std::vector<RealPoseSample> ingest_pose_log(std::istream & in)
{
  std::vector<RealPoseSample> samples;
  std::string raw;
  std::size_t line_no = 0;
  bool seen_header = false;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line_no == 1 && line.size() >= 3 && line.substr(0, 3) == "\xEF\xBB\xBF") {
      line.remove_prefix(3);
    }
    if (line.empty()) {
      continue;
    }
    if (!seen_header) {
      if (line != kPoseLogHeader) {
        throw PoseLogError(
          PoseLogErrorKind::MalformedRow, line_no,
          "expected header '" + std::string(kPoseLogHeader) + "'");
      }
      seen_header = true;
      continue;
    }

    const auto fields = split_commas(line);
    if (fields.size() != 5) {
      throw PoseLogError(
        PoseLogErrorKind::MalformedRow, line_no,
        "expected 5 fields, got " + std::to_string(fields.size()));
    }
    double v[5];
    for (std::size_t i = 0; i < 5; ++i) {
      if (!parse_double(fields[i], v[i])) {
        throw PoseLogError(
          PoseLogErrorKind::MalformedRow, line_no,
          "non-numeric field " + std::to_string(i + 1));
      }
    }
    if (v[4] < 0.0) {
      throw PoseLogError(PoseLogErrorKind::MalformedRow, line_no, "negative speed");
    }
    if (!samples.empty() && !(v[0] > samples.back().t)) {
      throw PoseLogError(PoseLogErrorKind::NonMonotoneTime, line_no, "t must strictly increase");
    }
    samples.push_back(RealPoseSample{v[0], Pose2{{v[1], v[2]}, deg_to_rad(v[3]), v[4]}});
  }

  if (samples.empty()) {
    throw PoseLogError(PoseLogErrorKind::EmptyLog, 0, "no samples");
  }
  return samples;
}

void write_pose_log(std::ostream & out, const std::vector<RealPoseSample> & samples)
{
  out << kPoseLogHeader << '\n';
  for (const auto & s : samples) {
    out << format_number(s.t) << ',' << format_number(s.pose.position.x) << ','
        << format_number(s.pose.position.y) << ',' << format_number(rad_to_deg(s.pose.heading))
        << ',' << format_number(s.pose.speed) << '\n';
  }
}

Pose2 replay_pose(const std::vector<RealPoseSample> & samples, double t)
{
  if (samples.empty()) {
    throw std::out_of_range("replay_pose: empty log");
  }
  if (!(t >= samples.front().t && t <= samples.back().t)) {
    throw std::out_of_range("replay_pose: t outside log span");
  }
  const auto upper = std::lower_bound(
    samples.begin(), samples.end(), t,
    [](const RealPoseSample & s, double value) { return s.t < value; });
  if (upper->t == t) {
    return upper->pose;
  }
  const auto & b = *upper;
  const auto & a = *(upper - 1);
  const double w = (t - a.t) / (b.t - a.t);
  const Vec2 pos = a.pose.position + (b.pose.position - a.pose.position) * w;
  const double dh = normalize_angle(b.pose.heading - a.pose.heading);
  const double speed = a.pose.speed + (b.pose.speed - a.pose.speed) * w;
  return Pose2{pos, a.pose.heading + dh * w, speed};
}

}  // namespace vve
