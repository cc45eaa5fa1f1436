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

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

using namespace vve;

namespace
{

const Rect kZone{{0.0, 0.0}, 3.0, 3.0};

// Walks the ray in fixed increments until the point lands in the rectangle.
std::optional<double> march_entry(Vec2 origin, Vec2 dir, const Rect & r, double step, double max_dist)
{
  for (double s = 0.0; s <= max_dist; s += step) {
    if (r.contains(origin + s * dir)) {
      return s;
    }
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("normalize_angle wraps into [-pi, pi)")
{
  CHECK(normalize_angle(0.0) == 0.0);
  CHECK(normalize_angle(kPi) == doctest::Approx(-kPi));
  CHECK(normalize_angle(-kPi) == doctest::Approx(-kPi));
  CHECK(normalize_angle(3.0 * kPi / 2.0) == doctest::Approx(-kPi / 2.0));
  CHECK(normalize_angle(-5.0 * kPi / 2.0) == doctest::Approx(-kPi / 2.0));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> any(-1000.0, 1000.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = any(rng);
    const double n = normalize_angle(a);
    REQUIRE(n >= -kPi);
    REQUIRE(n < kPi);
    // same direction as the input
    CHECK(std::abs(std::sin(n) - std::sin(a)) < 1e-9);
    CHECK(std::abs(std::cos(n) - std::cos(a)) < 1e-9);
  }
}

TEST_CASE("Pose2 keeps heading normalized")
{
  const Pose2 p{{1.0, 2.0}, 2.0 * kPi + 0.5, 3.0};
  CHECK(p.heading == doctest::Approx(0.5));
  CHECK(p.speed == 3.0);
}

TEST_CASE("ray_rect_entry examples")
{
  SUBCASE("face hit")
  {
    const auto d = ray_rect_entry({-10.0, 0.0}, {1.0, 0.0}, kZone);
    REQUIRE(d);
    CHECK(*d == doctest::Approx(7.0));
  }
  SUBCASE("origin inside")
  {
    const auto d = ray_rect_entry({0.0, 0.0}, {1.0, 0.0}, kZone);
    REQUIRE(d);
    CHECK(*d == 0.0);
  }
  SUBCASE("passes above")
  {
    CHECK_FALSE(ray_rect_entry({-10.0, 10.0}, {1.0, 0.0}, kZone));
  }
  SUBCASE("pointing away")
  {
    CHECK_FALSE(ray_rect_entry({-10.0, 0.0}, {-1.0, 0.0}, kZone));
  }
  SUBCASE("diagonal corner approach against a marching oracle")
  {
    const Vec2 dir{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    const auto d = ray_rect_entry({-10.0, -10.0}, dir, kZone);
    const auto oracle = march_entry({-10.0, -10.0}, dir, kZone, 1e-4, 30.0);
    REQUIRE(d);
    REQUIRE(oracle);
    CHECK(std::abs(*d - *oracle) <= 1e-4);
    CHECK(*d == doctest::Approx(7.0 * std::sqrt(2.0)).epsilon(1e-12));
  }
  SUBCASE("grazing an edge counts")
  {
    const auto d = ray_rect_entry({-10.0, 3.0}, {1.0, 0.0}, kZone);
    REQUIRE(d);
    CHECK(*d == doctest::Approx(7.0));
  }
}

TEST_CASE("ray_rect_entry rejects bad input")
{
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(ray_rect_entry({nan, 0.0}, {1.0, 0.0}, kZone), std::invalid_argument);
  CHECK_THROWS_AS(ray_rect_entry({0.0, 0.0}, {2.0, 0.0}, kZone), std::invalid_argument);
  CHECK_THROWS_AS(ray_rect_entry({0.0, 0.0}, {1.0, 0.0}, Rect{{0, 0}, 0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("ray_rect_entry agrees with marching on random rays")
{
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> pos(-20.0, 20.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  std::uniform_real_distribution<double> ext(0.5, 4.0);
  int hits = 0;
  for (int i = 0; i < 300; ++i) {
    const Rect r{{pos(rng), pos(rng)}, ext(rng), ext(rng)};
    const Vec2 o{pos(rng), pos(rng)};
    const Vec2 dir = heading_vector(ang(rng));
    const auto d = ray_rect_entry(o, dir, r);
    const auto m = march_entry(o, dir, r, 1e-3, 80.0);
    // Misses that only clip a corner by less than a step can fool the marcher.
    if (d && m) {
      CHECK(std::abs(*d - *m) <= 1e-3 + 1e-9);
      ++hits;
    } else if (!d) {
      CHECK_FALSE(m);
    }
  }
  CHECK(hits > 20);
}

TEST_CASE("ray_rect_entry is translation equivariant")
{
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(-20.0, 20.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int i = 0; i < 500; ++i) {
    const Vec2 o{pos(rng), pos(rng)};
    const Vec2 dir = heading_vector(ang(rng));
    const Vec2 shift{pos(rng), pos(rng)};
    const Rect r{{pos(rng) / 4.0, pos(rng) / 4.0}, 2.0, 1.0};
    const Rect r2{r.center + shift, r.half_extent_x, r.half_extent_y};
    const auto a = ray_rect_entry(o, dir, r);
    const auto b = ray_rect_entry(o + shift, dir, r2);
    REQUIRE(a.has_value() == b.has_value());
    if (a) {
      CHECK(std::abs(*a - *b) < 1e-9);
    }
  }
}

TEST_CASE("ray_ray_intersect examples")
{
  const Pose2 a{{-20.0, 0.0}, 0.0};
  SUBCASE("perpendicular approach")
  {
    const auto p = ray_ray_intersect(a, Pose2{{0.0, 15.0}, -kPi / 2.0});
    REQUIRE(p);
    CHECK(p->x == doctest::Approx(0.0));
    CHECK(p->y == doctest::Approx(0.0));
  }
  SUBCASE("parallel")
  {
    CHECK_FALSE(ray_ray_intersect(a, Pose2{{5.0, 3.0}, 0.0}));
    CHECK_FALSE(ray_ray_intersect(a, Pose2{{5.0, 3.0}, 1e-8}));
  }
  SUBCASE("behind the second ray")
  {
    CHECK_FALSE(ray_ray_intersect(a, Pose2{{0.0, 15.0}, kPi / 2.0}));
  }
  SUBCASE("behind the first ray")
  {
    CHECK_FALSE(ray_ray_intersect(Pose2{{20.0, 0.0}, 0.0}, Pose2{{0.0, 15.0}, -kPi / 2.0}));
  }
}

TEST_CASE("ray_ray_intersect is symmetric")
{
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> pos(-30.0, 30.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int i = 0; i < 1000; ++i) {
    const Pose2 a{{pos(rng), pos(rng)}, ang(rng)};
    const Pose2 b{{pos(rng), pos(rng)}, ang(rng)};
    const auto ab = ray_ray_intersect(a, b);
    const auto ba = ray_ray_intersect(b, a);
    REQUIRE(ab.has_value() == ba.has_value());
    if (ab) {
      CHECK(distance(*ab, *ba) < 1e-6);
    }
  }
}

TEST_CASE("segment_intersects_rect examples")
{
  const Rect r{{0.0, 0.0}, 1.0, 1.0};
  CHECK(segment_intersects_rect({-10.0, 0.0}, {10.0, 0.0}, r));
  CHECK_FALSE(segment_intersects_rect({-10.0, 5.0}, {10.0, 5.0}, r));
  CHECK(segment_intersects_rect({0.0, 0.0}, {10.0, 10.0}, r));
  CHECK(segment_intersects_rect({-10.0, 1.0}, {10.0, 1.0}, r));  // grazing
  CHECK_FALSE(segment_intersects_rect({-10.0, 0.0}, {-2.0, 0.0}, r));
  CHECK(segment_intersects_rect({3.0, 0.0}, {0.0, 3.0}, Rect{{1.0, 1.0}, 0.5, 0.5}));  // corner touch
}

TEST_CASE("distance_to_rect")
{
  const Rect r{{0.0, 0.0}, 1.0, 2.0};
  CHECK(distance_to_rect({0.5, 0.5}, r) == 0.0);
  CHECK(distance_to_rect({4.0, 0.0}, r) == doctest::Approx(3.0));
  CHECK(distance_to_rect({4.0, 6.0}, r) == doctest::Approx(5.0));
}

TEST_CASE("compose examples")
{
  const Pose2 p{{3.0, -4.0}, 1.0, 2.0};
  const Pose2 same = compose(FrameTransform::identity(), p);
  CHECK(same.position == p.position);
  CHECK(same.heading == p.heading);
  CHECK(same.speed == p.speed);

  const FrameTransform t{kPi / 2.0, {100.0, 50.0}};
  const Pose2 m = compose(t, Pose2{{10.0, 0.0}, 0.0, 5.0});
  CHECK(m.position.x == doctest::Approx(100.0));
  CHECK(m.position.y == doctest::Approx(60.0));
  CHECK(m.heading == doctest::Approx(kPi / 2.0));
  CHECK(m.speed == 5.0);
}

TEST_CASE("inverse examples")
{
  const auto id = inverse(FrameTransform::identity());
  CHECK(id.rotation == 0.0);
  CHECK(id.translation.x == 0.0);
  CHECK(id.translation.y == 0.0);

  const auto inv = inverse(FrameTransform{kPi / 2.0, {1.0, 0.0}});
  CHECK(inv.rotation == doctest::Approx(-kPi / 2.0));
  CHECK(inv.translation.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(inv.translation.y == doctest::Approx(1.0));
}

TEST_CASE("compose/inverse round trip and rigidity")
{
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> pos(-500.0, 500.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  double worst_pos = 0.0;
  double worst_heading = 0.0;
  double worst_dist = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const FrameTransform t{ang(rng), {pos(rng), pos(rng)}};
    const Pose2 p{{pos(rng), pos(rng)}, ang(rng), 1.0};
    const Pose2 q{{pos(rng), pos(rng)}, ang(rng), 1.0};
    const Pose2 back = compose(t, compose(inverse(t), p));
    worst_pos = std::max(worst_pos, distance(back.position, p.position));
    worst_heading =
      std::max(worst_heading, std::abs(normalize_angle(back.heading - p.heading)));
    const double d0 = distance(p.position, q.position);
    const double d1 = distance(compose(t, p).position, compose(t, q).position);
    worst_dist = std::max(worst_dist, std::abs(d1 - d0));
    const Pose2 c = compose(t, p);
    REQUIRE(c.heading >= -kPi);
    REQUIRE(c.heading < kPi);
  }
  CHECK(worst_pos < 1e-9);
  CHECK(worst_heading < 1e-9);
  CHECK(worst_dist < 1e-9);
}
