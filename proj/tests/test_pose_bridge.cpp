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

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace vve;

namespace
{

std::vector<RealPoseSample> parse(const std::string & text)
{
  std::istringstream in(text);
  return ingest_pose_log(in);
}

PoseLogError parse_error(const std::string & text)
{
  try {
    parse(text);
  } catch (const PoseLogError & e) {
    return e;
  }
  FAIL("log parsed without error");
  return PoseLogError(PoseLogErrorKind::EmptyLog, 0, "");
}

}  // namespace

TEST_CASE("calibrate examples")
{
  const auto id = calibrate(Pose2{}, Pose2{});
  CHECK(id.transform.rotation == 0.0);
  CHECK(id.transform.translation == Vec2{0.0, 0.0});

  const auto a = calibrate(Pose2{}, Pose2{{100.0, 50.0}, kPi / 2.0});
  CHECK(a.transform.rotation == doctest::Approx(kPi / 2.0));
  CHECK(a.transform.translation.x == doctest::Approx(100.0));
  CHECK(a.transform.translation.y == doctest::Approx(50.0));

  // translation solved as virtual - R * real; check it by composing
  const auto b = calibrate(Pose2{{5.0, 0.0}, 0.0}, Pose2{{100.0, 50.0}, kPi / 2.0});
  const Pose2 origin = map_pose(b, Pose2{{5.0, 0.0}, 0.0});
  CHECK(std::abs(origin.position.x - 100.0) < 1e-9);
  CHECK(std::abs(origin.position.y - 50.0) < 1e-9);
  CHECK(std::abs(normalize_angle(origin.heading - kPi / 2.0)) < 1e-9);
}

TEST_CASE("calibration maps the real origin onto the virtual origin")
{
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pos(-200.0, 200.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int i = 0; i < 500; ++i) {
    const Pose2 real{{pos(rng), pos(rng)}, ang(rng)};
    const Pose2 virt{{pos(rng), pos(rng)}, ang(rng)};
    const Pose2 m = map_pose(calibrate(real, virt), real);
    CHECK(distance(m.position, virt.position) < 1e-9);
    CHECK(std::abs(normalize_angle(m.heading - virt.heading)) < 1e-9);
  }
}

TEST_CASE("map_pose examples")
{
  const auto cal = calibrate(Pose2{}, Pose2{{100.0, 50.0}, kPi / 2.0});
  const Pose2 moved = map_pose(cal, Pose2{{10.0, 0.0}, 0.0, 3.0});
  CHECK(moved.position.x == doctest::Approx(100.0));
  CHECK(moved.position.y == doctest::Approx(60.0));
  CHECK(moved.heading == doctest::Approx(kPi / 2.0));
  CHECK(moved.speed == 3.0);

  const Pose2 home = map_pose(cal, Pose2{});
  CHECK(home.position.x == doctest::Approx(100.0));
  CHECK(home.position.y == doctest::Approx(50.0));
}

TEST_CASE("bridge mapping is rigid")
{
  std::mt19937_64 rng(1000);
  std::uniform_real_distribution<double> pos(-300.0, 300.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  const auto cal = calibrate(Pose2{{3.0, -7.0}, 0.4}, Pose2{{-120.0, 40.0}, -2.1});
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Pose2 a{{pos(rng), pos(rng)}, ang(rng)};
    const Pose2 b{{pos(rng), pos(rng)}, ang(rng)};
    const double before = distance(a.position, b.position);
    const double after = distance(map_pose(cal, a).position, map_pose(cal, b).position);
    worst = std::max(worst, std::abs(after - before));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("position noise")
{
  const Pose2 p{{1.0, 2.0}, 0.3, 4.0};
  PositionNoise none(0.0, 1);
  const Pose2 same = none.apply(p);
  CHECK(same.position == p.position);

  PositionNoise a(0.5, 42);
  PositionNoise b(0.5, 42);
  double sum_sq = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const Pose2 x = a.apply(p);
    const Pose2 y = b.apply(p);
    REQUIRE(x.position == y.position);
    CHECK(x.heading == p.heading);
    sum_sq += (x.position - p.position).norm() * (x.position - p.position).norm();
  }
  // E|n|^2 = 2 sigma^2
  CHECK(sum_sq / 2000.0 == doctest::Approx(0.5).epsilon(0.1));
  CHECK_THROWS_AS(PositionNoise(-1.0, 0), std::invalid_argument);
}

TEST_CASE("pose log ingestion")
{
  SUBCASE("two rows")
  {
    const auto s = parse("t,x,y,heading_deg,speed\n0.0,0,0,0,0\n0.1,0.5,0,0,5\n");
    REQUIRE(s.size() == 2);
    CHECK(s[1].t == doctest::Approx(0.1));
    CHECK(s[1].pose.position == Vec2{0.5, 0.0});
    CHECK(s[1].pose.speed == 5.0);
  }
  SUBCASE("CRLF and blank lines are tolerated")
  {
    const auto s = parse("t,x,y,heading_deg,speed\r\n\r\n0,1,2,90,1\r\n");
    REQUIRE(s.size() == 1);
    CHECK(s[0].pose.heading == doctest::Approx(kPi / 2.0));
  }
  SUBCASE("repeated timestamp")
  {
    const auto e = parse_error("t,x,y,heading_deg,speed\n0.1,0,0,0,0\n0.1,1,0,0,0\n");
    CHECK(e.kind() == PoseLogErrorKind::NonMonotoneTime);
    CHECK(e.line() == 3);
  }
  SUBCASE("header only")
  {
    CHECK(parse_error("t,x,y,heading_deg,speed\n").kind() == PoseLogErrorKind::EmptyLog);
    CHECK(parse_error("").kind() == PoseLogErrorKind::EmptyLog);
  }
  SUBCASE("malformed rows carry their line")
  {
    const auto short_row = parse_error("t,x,y,heading_deg,speed\n0,0,0,0,0\n1,2,3\n");
    CHECK(short_row.kind() == PoseLogErrorKind::MalformedRow);
    CHECK(short_row.line() == 3);

    const auto text = parse_error("t,x,y,heading_deg,speed\n0,zero,0,0,0\n");
    CHECK(text.kind() == PoseLogErrorKind::MalformedRow);
    CHECK(text.line() == 2);

    const auto bad_header = parse_error("time,x,y\n0,0,0\n");
    CHECK(bad_header.kind() == PoseLogErrorKind::MalformedRow);
    CHECK(bad_header.line() == 1);

    CHECK(parse_error("t,x,y,heading_deg,speed\n0,0,0,0,-1\n").kind() ==
          PoseLogErrorKind::MalformedRow);
  }
}

TEST_CASE("pose log write/read round trip")
{
  std::vector<RealPoseSample> in;
  for (int i = 0; i < 50; ++i) {
    in.push_back({i * 0.1, Pose2{{i * 0.25, -i * 0.5}, deg_to_rad(i * 7.0), i * 0.2}});
  }
  std::stringstream buf;
  write_pose_log(buf, in);
  const auto out = ingest_pose_log(buf);
  REQUIRE(out.size() == in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    CHECK(out[i].t == doctest::Approx(in[i].t).epsilon(1e-8));
    CHECK(distance(out[i].pose.position, in[i].pose.position) < 1e-7);
    CHECK(std::abs(normalize_angle(out[i].pose.heading - in[i].pose.heading)) < 1e-7);
  }
}

TEST_CASE("replay interpolation")
{
  const std::vector<RealPoseSample> log = {
    {0.0, Pose2{{0.0, 0.0}, deg_to_rad(170.0), 1.0}},
    {1.0, Pose2{{1.0, 0.0}, deg_to_rad(-170.0), 3.0}},
  };
  SUBCASE("exact knot")
  {
    const Pose2 p = replay_pose(log, 1.0);
    CHECK(p.position == log[1].pose.position);
    CHECK(p.heading == log[1].pose.heading);
  }
  SUBCASE("midpoint")
  {
    const Pose2 p = replay_pose(log, 0.5);
    CHECK(p.position.x == doctest::Approx(0.5));
    CHECK(p.position.y == doctest::Approx(0.0));
    CHECK(p.speed == doctest::Approx(2.0));
    // shorter arc goes through 180 degrees, not through 0
    CHECK(std::abs(std::abs(p.heading) - kPi) < 1e-9);
  }
  SUBCASE("outside the span")
  {
    CHECK_THROWS_AS(replay_pose(log, -0.1), std::out_of_range);
    CHECK_THROWS_AS(replay_pose(log, 1.1), std::out_of_range);
  }
}
