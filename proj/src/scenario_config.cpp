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

#include "vve/scenario_config.hpp"

#include <cmath>
#include <iterator>
#include <limits>
#include <set>
#include <sstream>

namespace vve
{

using nlohmann::json;

namespace
{

[[noreturn]] void invalid(const std::string & path, const std::string & what)
{
  throw ConfigError(ConfigError::Kind::Validation, path + ": " + what);
}

std::string join(const std::string & prefix, const std::string & key)
{
  return prefix.empty() ? key : prefix + "." + key;
}

// Reads fields of one JSON object and rejects keys nobody asked for.
class ObjectReader
{
public:
  ObjectReader(const json & obj, std::string path) : obj_(obj), path_(std::move(path))
  {
    if (!obj_.is_object()) {
      invalid(path_.empty() ? "<root>" : path_, "expected an object");
    }
  }

  /// Rejects keys that were never looked up.
  void finish() const
  {
    for (const auto & item : obj_.items()) {
      if (!seen_.count(item.key())) {
        invalid(join(path_, item.key()), "unknown field");
      }
    }
  }

  bool has(const std::string & key)
  {
    seen_.insert(key);
    return obj_.contains(key);
  }

  const json & get(const std::string & key)
  {
    if (!has(key)) {
      invalid(join(path_, key), "required field missing");
    }
    return obj_.at(key);
  }

  double number(const std::string & key, std::optional<double> fallback = std::nullopt)
  {
    if (!has(key)) {
      if (!fallback) {
        invalid(join(path_, key), "required field missing");
      }
      return *fallback;
    }
    const auto & v = obj_.at(key);
    if (!v.is_number()) {
      invalid(join(path_, key), "expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
      invalid(join(path_, key), "must be finite");
    }
    return d;
  }

  std::uint64_t unsigned_integer(const std::string & key, std::optional<std::uint64_t> fallback)
  {
    if (!has(key)) {
      if (!fallback) {
        invalid(join(path_, key), "required field missing");
      }
      return *fallback;
    }
    const auto & v = obj_.at(key);
    if (!v.is_number_unsigned()) {
      invalid(join(path_, key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string & key, bool fallback)
  {
    if (!has(key)) {
      return fallback;
    }
    const auto & v = obj_.at(key);
    if (!v.is_boolean()) {
      invalid(join(path_, key), "expected true or false");
    }
    return v.get<bool>();
  }

  std::string child(const std::string & key) const { return join(path_, key); }

private:
  const json & obj_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename F>
void with_validation_path(const std::string & path, F && check)
{
  try {
    check();
  } catch (const std::invalid_argument & e) {
    invalid(path, e.what());
  }
}

BrakeMap read_brake_map(const json & j, const std::string & path)
{
  BrakeMap m;
  ObjectReader r(j, path);
  m.level1_decel = r.number("level1_decel", m.level1_decel);
  m.level2_decel = r.number("level2_decel", m.level2_decel);
  m.level3_decel = r.number("level3_decel", m.level3_decel);
  m.actuator_tau = r.number("actuator_tau", m.actuator_tau);
  r.finish();
  with_validation_path(path, [&] { m.validate(); });
  return m;
}

VehicleConfig read_vehicle(const json & j)
{
  VehicleConfig v;
  ObjectReader r(j, "vehicle");
  const double x = r.number("x");
  const double y = r.number("y");
  const double heading = deg_to_rad(r.number("heading_deg", 0.0));
  v.cruise_speed = r.number("cruise_speed");
  if (v.cruise_speed < 0.0) {
    invalid("vehicle.cruise_speed", "must be >= 0");
  }
  v.initial = Pose2{{x, y}, heading, v.cruise_speed};
  v.footprint_length = r.number("footprint_length", v.footprint_length);
  v.footprint_width = r.number("footprint_width", v.footprint_width);
  if (!(v.footprint_length > 0.0 && v.footprint_width > 0.0)) {
    invalid("vehicle", "footprint_length and footprint_width must be > 0");
  }
  if (r.has("brake_map")) {
    v.brake_map = read_brake_map(r.get("brake_map"), "vehicle.brake_map");
  }
  r.finish();
  return v;
}

PedestrianConfig read_pedestrian(const json & j, const std::string & path)
{
  PedestrianConfig p;
  ObjectReader r(j, path);
  const auto id = r.unsigned_integer("source_id", std::nullopt);
  if (id > 255) {
    invalid(r.child("source_id"), "must fit in 8 bits");
  }
  p.source_id = static_cast<std::uint8_t>(id);
  p.radius = r.number("radius", p.radius);
  if (!(p.radius > 0.0)) {
    invalid(r.child("radius"), "must be > 0");
  }
  if (r.has("profile")) {
    const auto & segs = r.get("profile");
    if (!segs.is_array()) {
      invalid(r.child("profile"), "expected an array");
    }
    for (std::size_t i = 0; i < segs.size(); ++i) {
      const auto seg_path = r.child("profile") + "." + std::to_string(i);
      ObjectReader sr(segs[i], seg_path);
      ProfileSegment s;
      s.start_time = sr.number("start_time");
      s.speed = sr.number("speed");
      s.heading = normalize_angle(deg_to_rad(sr.number("heading_deg")));
      sr.finish();
      p.profile.segments.push_back(s);
    }
    with_validation_path(r.child("profile"), [&] { p.profile.validate(); });
  }
  const double default_heading =
    p.profile.segments.empty() ? 0.0 : rad_to_deg(p.profile.segments.front().heading);
  const double x = r.number("x");
  const double y = r.number("y");
  p.initial = Pose2{{x, y}, deg_to_rad(r.number("heading_deg", default_heading)), 0.0};
  r.finish();
  return p;
}

Rect read_rect(const json & j, const std::string & path)
{
  ObjectReader r(j, path);
  Rect rect;
  {
    ObjectReader c(r.get("center"), r.child("center"));
    rect.center = {c.number("x"), c.number("y")};
    c.finish();
  }
  rect.half_extent_x = r.number("half_extent_x");
  rect.half_extent_y = r.number("half_extent_y");
  r.finish();
  if (!rect.valid()) {
    invalid(path, "half extents must be > 0");
  }
  return rect;
}

json rect_to_json(const Rect & r)
{
  return json{
    {"center", {{"x", r.center.x}, {"y", r.center.y}}},
    {"half_extent_x", r.half_extent_x},
    {"half_extent_y", r.half_extent_y}};
}

std::string parse_location(const std::string & text, std::size_t byte)
{
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

ConfigError::ConfigError(Kind kind, const std::string & message)
: std::runtime_error(
    std::string(kind == Kind::Parse ? "ParseError" : "ValidationError") + ": " + message),
  kind_(kind)
{
}

ScenarioConfig config_from_json(const json & doc)
{
  ScenarioConfig cfg;
  ObjectReader r(doc, "");

  cfg.dt = r.number("dt", cfg.dt);
  if (!(cfg.dt > 0.0 && cfg.dt <= 0.1)) {
    invalid("dt", "must be in (0, 0.1]");
  }
  cfg.horizon = r.number("horizon");
  if (!(cfg.horizon > 0.0)) {
    invalid("horizon", "must be > 0");
  }
  cfg.seed = r.unsigned_integer("seed", 0);
  cfg.v2p_enabled = r.boolean("v2p_enabled", cfg.v2p_enabled);
  cfg.vehicle = read_vehicle(r.get("vehicle"));

  const auto & peds = r.get("pedestrians");
  if (!peds.is_array() || peds.empty()) {
    invalid("pedestrians", "expected a non-empty array");
  }
  std::set<int> ids;
  for (std::size_t i = 0; i < peds.size(); ++i) {
    auto p = read_pedestrian(peds[i], "pedestrians." + std::to_string(i));
    if (!ids.insert(p.source_id).second) {
      invalid(
        "pedestrians." + std::to_string(i) + ".source_id",
        "duplicate source_id " + std::to_string(p.source_id));
    }
    cfg.pedestrians.push_back(std::move(p));
  }

  if (r.has("occluders")) {
    const auto & occ = r.get("occluders");
    if (!occ.is_array()) {
      invalid("occluders", "expected an array");
    }
    for (std::size_t i = 0; i < occ.size(); ++i) {
      cfg.occluders.push_back(read_rect(occ[i], "occluders." + std::to_string(i)));
    }
  }

  if (r.has("risk")) {
    ObjectReader rr(r.get("risk"), "risk");
    auto & k = cfg.risk;
    k.zone_half_extent = rr.number("zone_half_extent", k.zone_half_extent);
    k.ttz_diff_threshold = rr.number("ttz_diff_threshold", k.ttz_diff_threshold);
    k.severity_1_2_threshold = rr.number("severity_1_2_threshold", k.severity_1_2_threshold);
    k.severity_2_3_threshold = rr.number("severity_2_3_threshold", k.severity_2_3_threshold);
    k.engagement_horizon = rr.number("engagement_horizon", k.engagement_horizon);
    k.min_speed_epsilon = rr.number("min_speed_epsilon", k.min_speed_epsilon);
    rr.finish();
  }
  with_validation_path("risk", [&] { cfg.risk.validate(); });

  cfg.channel.rng_seed = cfg.seed;
  if (r.has("channel")) {
    ObjectReader cr(r.get("channel"), "channel");
    auto & c = cfg.channel;
    c.broadcast_period = cr.number("broadcast_period", c.broadcast_period);
    c.latency_mean = cr.number("latency_mean", c.latency_mean);
    c.latency_jitter = cr.number("latency_jitter", c.latency_jitter);
    c.drop_probability = cr.number("drop_probability", c.drop_probability);
    c.rng_seed = cr.unsigned_integer("rng_seed", cfg.seed);
    cr.finish();
  }
  with_validation_path("channel", [&] { cfg.channel.validate(); });

  if (r.has("sensor")) {
    ObjectReader sr(r.get("sensor"), "sensor");
    cfg.sensor.range = sr.number("range", cfg.sensor.range);
    cfg.sensor.onboard_braking = sr.boolean("onboard_braking", cfg.sensor.onboard_braking);
    sr.finish();
  }
  if (!(cfg.sensor.range > 0.0)) {
    invalid("sensor.range", "must be > 0");
  }
  r.finish();
  return cfg;
}

ScenarioConfig load_config(const std::string & text)
{
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error & e) {
    std::string what = e.what();
    // strip the library prefix; keep the description after the last ':'
    const auto colon = what.rfind(": ");
    const std::string detail = colon == std::string::npos ? what : what.substr(colon + 2);
    throw ConfigError(ConfigError::Kind::Parse, parse_location(text, e.byte) + ": " + detail);
  }
  return config_from_json(doc);
}

ScenarioConfig load_config(std::istream & in)
{
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return load_config(text);
}

json config_to_json(const ScenarioConfig & cfg)
{
  json doc;
  doc["dt"] = cfg.dt;
  doc["horizon"] = cfg.horizon;
  doc["seed"] = cfg.seed;
  doc["v2p_enabled"] = cfg.v2p_enabled;

  const auto & v = cfg.vehicle;
  doc["vehicle"] = {
    {"x", v.initial.position.x},
    {"y", v.initial.position.y},
    {"heading_deg", rad_to_deg(v.initial.heading)},
    {"cruise_speed", v.cruise_speed},
    {"footprint_length", v.footprint_length},
    {"footprint_width", v.footprint_width},
    {"brake_map",
     {{"level1_decel", v.brake_map.level1_decel},
      {"level2_decel", v.brake_map.level2_decel},
      {"level3_decel", v.brake_map.level3_decel},
      {"actuator_tau", v.brake_map.actuator_tau}}}};

  doc["pedestrians"] = json::array();
  for (const auto & p : cfg.pedestrians) {
    json profile = json::array();
    for (const auto & s : p.profile.segments) {
      profile.push_back(
        {{"start_time", s.start_time}, {"speed", s.speed}, {"heading_deg", rad_to_deg(s.heading)}});
    }
    doc["pedestrians"].push_back(
      {{"source_id", p.source_id},
       {"x", p.initial.position.x},
       {"y", p.initial.position.y},
       {"heading_deg", rad_to_deg(p.initial.heading)},
       {"radius", p.radius},
       {"profile", profile}});
  }

  doc["occluders"] = json::array();
  for (const auto & o : cfg.occluders) {
    doc["occluders"].push_back(rect_to_json(o));
  }

  doc["risk"] = {
    {"zone_half_extent", cfg.risk.zone_half_extent},
    {"ttz_diff_threshold", cfg.risk.ttz_diff_threshold},
    {"severity_1_2_threshold", cfg.risk.severity_1_2_threshold},
    {"severity_2_3_threshold", cfg.risk.severity_2_3_threshold},
    {"engagement_horizon", cfg.risk.engagement_horizon},
    {"min_speed_epsilon", cfg.risk.min_speed_epsilon}};
  doc["channel"] = {
    {"broadcast_period", cfg.channel.broadcast_period},
    {"latency_mean", cfg.channel.latency_mean},
    {"latency_jitter", cfg.channel.latency_jitter},
    {"drop_probability", cfg.channel.drop_probability},
    {"rng_seed", cfg.channel.rng_seed}};
  doc["sensor"] = {{"range", cfg.sensor.range}, {"onboard_braking", cfg.sensor.onboard_braking}};
  return doc;
}

}  // namespace vve
