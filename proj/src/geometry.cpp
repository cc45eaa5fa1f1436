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

#include "vve/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace vve
{

namespace
{
constexpr double kParallelSinTolerance = 1e-6;
constexpr double kUnitNormTolerance = 1e-9;
}  // namespace

double normalize_angle(double angle)
{
  double a = std::fmod(angle + kPi, 2.0 * kPi);
  if (a < 0.0) {
    a += 2.0 * kPi;
  }
  a -= kPi;
  // fmod rounding can land exactly on +pi
  if (a >= kPi) {
    a -= 2.0 * kPi;
  }
  return a;
}

std::optional<double> ray_rect_entry(const Vec2 & origin, const Vec2 & direction, const Rect & rect)
{
  if (!origin.finite() || !direction.finite() || !rect.valid()) {
    throw std::invalid_argument("ray_rect_entry: non-finite or invalid input");
  }
  if (std::abs(direction.norm() - 1.0) > kUnitNormTolerance) {
    throw std::invalid_argument("ray_rect_entry: direction must be a unit vector");
  }

  double t_near = -std::numeric_limits<double>::infinity();
  double t_far = std::numeric_limits<double>::infinity();

  const double o[2] = {origin.x, origin.y};
  const double d[2] = {direction.x, direction.y};
  const double lo[2] = {rect.min_x(), rect.min_y()};
  const double hi[2] = {rect.max_x(), rect.max_y()};

  for (int axis = 0; axis < 2; ++axis) {
    if (d[axis] == 0.0) {
      if (o[axis] < lo[axis] || o[axis] > hi[axis]) {
        return std::nullopt;
      }
      continue;
    }
    double t1 = (lo[axis] - o[axis]) / d[axis];
    double t2 = (hi[axis] - o[axis]) / d[axis];
    if (t1 > t2) {
      std::swap(t1, t2);
    }
    t_near = std::max(t_near, t1);
    t_far = std::min(t_far, t2);
  }

  if (t_near > t_far || t_far < 0.0) {
    return std::nullopt;
  }
  return std::max(t_near, 0.0);
}

std::optional<Vec2> ray_ray_intersect(const Pose2 & a, const Pose2 & b)
{
  if (!a.finite() || !b.finite()) {
    throw std::invalid_argument("ray_ray_intersect: non-finite pose");
  }
  const Vec2 da = a.direction();
  const Vec2 db = b.direction();
  const double denom = cross(da, db);
  if (std::abs(denom) < kParallelSinTolerance) {
    return std::nullopt;
  }
  const Vec2 ab = b.position - a.position;
  const double s = cross(ab, db) / denom;
  const double u = cross(ab, da) / denom;
  if (s < 0.0 || u < 0.0) {
    return std::nullopt;
  }
  return a.position + s * da;
}

bool segment_intersects_rect(const Vec2 & p, const Vec2 & q, const Rect & rect)
{
  // Liang-Barsky clip of the closed segment against the closed rectangle.
  const Vec2 d = q - p;
  double t0 = 0.0;
  double t1 = 1.0;
  const double pk[4] = {-d.x, d.x, -d.y, d.y};
  const double qk[4] = {p.x - rect.min_x(), rect.max_x() - p.x, p.y - rect.min_y(),
                        rect.max_y() - p.y};
  for (int i = 0; i < 4; ++i) {
    if (pk[i] == 0.0) {
      if (qk[i] < 0.0) {
        return false;
      }
      continue;
    }
    const double r = qk[i] / pk[i];
    if (pk[i] < 0.0) {
      t0 = std::max(t0, r);
    } else {
      t1 = std::min(t1, r);
    }
    if (t0 > t1) {
      return false;
    }
  }
  return true;
}

double distance_to_rect(const Vec2 & p, const Rect & rect)
{
  const double dx = std::max({rect.min_x() - p.x, 0.0, p.x - rect.max_x()});
  const double dy = std::max({rect.min_y() - p.y, 0.0, p.y - rect.max_y()});
  return std::hypot(dx, dy);
}

Pose2 compose(const FrameTransform & t, const Pose2 & p)
{
  return Pose2{t.apply(p.position), p.heading + t.rotation, p.speed};
}

FrameTransform inverse(const FrameTransform & t)
{
  const double rotation = normalize_angle(-t.rotation);
  return FrameTransform{rotation, -rotate(t.translation, rotation)};
}

}  // namespace vve
