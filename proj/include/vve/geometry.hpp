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

#ifndef VVE__GEOMETRY_HPP_
#define VVE__GEOMETRY_HPP_

#include <cmath>
#include <numbers>
#include <optional>

namespace vve
{

inline constexpr double kPi = std::numbers::pi;

/// Planar vector in meters.
struct Vec2
{
  double x{0.0};
  double y{0.0};

  constexpr Vec2 operator+(const Vec2 & o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2 & o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr bool operator==(const Vec2 &) const = default;

  double norm() const { return std::hypot(x, y); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

constexpr Vec2 operator*(double s, const Vec2 & v) { return v * s; }
constexpr double dot(const Vec2 & a, const Vec2 & b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2 & a, const Vec2 & b) { return a.x * b.y - a.y * b.x; }
inline double distance(const Vec2 & a, const Vec2 & b) { return (a - b).norm(); }

/// Rotate `v` counter-clockwise by `angle` radians.
inline Vec2 rotate(const Vec2 & v, double angle)
{
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Wrap an angle into [-pi, pi).
double normalize_angle(double angle);

/// Unit vector pointing along `heading` (radians CCW from +x).
inline Vec2 heading_vector(double heading) { return {std::cos(heading), std::sin(heading)}; }

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Planar kinematic state shared by the vehicle, pedestrians and bridge samples.
/// Heading is kept in [-pi, pi); speed is non-negative.
struct Pose2
{
  Vec2 position{};
  double heading{0.0};
  double speed{0.0};

  Pose2() = default;
  Pose2(Vec2 p, double h, double v = 0.0) : position(p), heading(normalize_angle(h)), speed(v) {}

  bool finite() const
  {
    return position.finite() && std::isfinite(heading) && std::isfinite(speed);
  }
  Vec2 direction() const { return heading_vector(heading); }
};

/// Rigid map: rotate by `rotation`, then translate.
struct FrameTransform
{
  double rotation{0.0};
  Vec2 translation{};

  static FrameTransform identity() { return {}; }
  Vec2 apply(const Vec2 & p) const { return rotate(p, rotation) + translation; }
};

/// Axis-aligned rectangle in the virtual-world frame.
struct Rect
{
  Vec2 center{};
  double half_extent_x{0.0};
  double half_extent_y{0.0};

  double min_x() const { return center.x - half_extent_x; }
  double max_x() const { return center.x + half_extent_x; }
  double min_y() const { return center.y - half_extent_y; }
  double max_y() const { return center.y + half_extent_y; }

  bool contains(const Vec2 & p, double tol = 0.0) const
  {
    return p.x >= min_x() - tol && p.x <= max_x() + tol && p.y >= min_y() - tol &&
           p.y <= max_y() + tol;
  }
  bool valid() const
  {
    return center.finite() && std::isfinite(half_extent_x) && std::isfinite(half_extent_y) &&
           half_extent_x > 0.0 && half_extent_y > 0.0;
  }
};

// Distance from the ray origin to where it first touches `rect` (slab method).
// Returns 0 if the origin is already inside, nullopt if the forward ray misses.
// Throws std::invalid_argument for non-finite input or a non-unit direction.
std::optional<double> ray_rect_entry(const Vec2 & origin, const Vec2 & direction, const Rect & rect);

// Intersection of the forward heading rays of two poses. Absent when the rays are
// parallel (|sin(dheading)| < 1e-6) or the crossing lies behind either pose.
std::optional<Vec2> ray_ray_intersect(const Pose2 & a, const Pose2 & b);

/// Closed segment vs. closed rectangle; grazing contact counts.
bool segment_intersects_rect(const Vec2 & p, const Vec2 & q, const Rect & rect);

/// Euclidean distance from `p` to the closed rectangle (0 when inside).
double distance_to_rect(const Vec2 & p, const Rect & rect);

Pose2 compose(const FrameTransform & t, const Pose2 & p);
FrameTransform inverse(const FrameTransform & t);

}  // namespace vve

#endif  // VVE__GEOMETRY_HPP_
