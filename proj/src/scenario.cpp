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

#include "vve/scenario.hpp"

#include "vve/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace vve
{

namespace
{

constexpr double kTimeSlack = 1e-9;

// Picks the assessment shown in the trace: most severe, then dangerous, then first.
bool governs(const RiskAssessment & candidate, const RiskAssessment & current)
{
  if (candidate.severity != current.severity) {
    return candidate.severity > current.severity;
  }
  return candidate.dangerous && !current.dangerous;
}

}  // namespace

RunResult run(const ScenarioConfig & cfg)
{
  const double dt = cfg.dt;
  const auto ticks = std::max<std::int64_t>(
    1, static_cast<std::int64_t>(std::ceil(cfg.horizon / dt - kTimeSlack)));

  VehicleState vehicle;
  vehicle.pose = Pose2{cfg.vehicle.initial.position, cfg.vehicle.initial.heading, cfg.vehicle.cruise_speed};
  vehicle.footprint_length = cfg.vehicle.footprint_length;
  vehicle.footprint_width = cfg.vehicle.footprint_width;
  vehicle.actuator_tau = cfg.vehicle.brake_map.actuator_tau;

  std::vector<PedestrianState> peds;
  std::vector<PsmBroadcaster> beacons;
  for (const auto & p : cfg.pedestrians) {
    peds.push_back(PedestrianState{p.initial, p.radius, p.profile});
    beacons.emplace_back(p.source_id, cfg.channel.broadcast_period);
  }
  std::vector<std::optional<Pose2>> latest_psm(peds.size());

  BroadcastChannel channel(cfg.channel);
  const SensorModel sensor = cfg.sensor_model();
  SeverityLatch latch;
  std::uint64_t psm_received = 0;
  double stopped_for = 0.0;

  RunResult result;
  result.trace.reserve(static_cast<std::size_t>(ticks));

  for (std::int64_t k = 0; k < ticks; ++k) {
    const double t = static_cast<double>(k) * dt;

    for (auto & p : peds) {
      p = step_pedestrian(p, t, dt);
    }

    if (cfg.v2p_enabled) {
      for (std::size_t i = 0; i < peds.size(); ++i) {
        beacons[i].tick(peds[i], t, k, dt, channel);
      }
      for (const auto & frame : channel.poll(k)) {
        PsmMessage msg;
        try {
          msg = decode_psm(frame);
        } catch (const PsmDecodeError &) {
          continue;
        }
        for (std::size_t i = 0; i < peds.size(); ++i) {
          if (cfg.pedestrians[i].source_id == msg.source_id) {
            latest_psm[i] = psm_pose(msg);
            ++psm_received;
          }
        }
      }
    }

    bool any_los = false;
    bool any_dangerous = false;
    std::optional<RiskAssessment> governing;
    Severity worst = Severity::None;
    for (std::size_t i = 0; i < peds.size(); ++i) {
      const bool los = onboard_detects(vehicle, peds[i], sensor);
      any_los = any_los || los;

      std::optional<Pose2> known;
      if (cfg.v2p_enabled && latest_psm[i]) {
        known = latest_psm[i];
      } else if (los && cfg.sensor.onboard_braking) {
        known = peds[i].pose;
      }
      if (!known) {
        continue;
      }
      const auto a = assess(vehicle.pose, *known, cfg.risk);
      any_dangerous = any_dangerous || a.dangerous;
      worst = std::max(worst, a.severity);
      if (!governing || governs(a, *governing)) {
        governing = a;
      }
    }

    latch = latch_update(latch, worst, dt);
    vehicle.commanded_decel = severity_to_decel(latch.current, cfg.vehicle.brake_map);
    vehicle = step_vehicle(vehicle, dt);

    TraceRecord rec;
    rec.t = t;
    rec.vehicle = vehicle.pose;
    rec.separation = std::numeric_limits<double>::infinity();
    for (const auto & p : peds) {
      rec.pedestrians.push_back({p.pose.position.x, p.pose.position.y, p.pose.speed});
      rec.collided = rec.collided || detect_collision(vehicle, p);
      rec.separation = std::min(rec.separation, separation(vehicle, p));
    }
    if (governing) {
      rec.ttz_vehicle = governing->ttz_vehicle;
      rec.ttz_pedestrian = governing->ttz_pedestrian;
    }
    rec.dangerous = any_dangerous;
    rec.severity = to_int(latch.current);
    rec.commanded_decel = vehicle.commanded_decel;
    rec.actual_decel = vehicle.actual_decel;
    rec.psm_received = psm_received;
    rec.los = any_los;
    result.trace.push_back(std::move(rec));

    if (result.trace.back().collided) {
      break;
    }
    if (vehicle.pose.speed < kStoppedSpeed) {
      stopped_for += dt;
      if (stopped_for >= kStopHoldTime - kTimeSlack && !any_dangerous) {
        break;
      }
    } else {
      stopped_for = 0.0;
    }
  }

  result.outcome = summarize(result.trace);
  return result;
}

Outcome summarize(const std::vector<TraceRecord> & records)
{
  if (records.empty()) {
    throw std::invalid_argument("summarize: EmptyTrace");
  }
  Outcome o;
  o.min_separation = std::numeric_limits<double>::infinity();
  std::optional<double> first_stop;
  for (const auto & r : records) {
    o.collided = o.collided || r.collided;
    o.min_separation = std::min(o.min_separation, r.separation);
    o.max_severity = std::max(o.max_severity, r.severity);
    if (!o.first_brake_time && r.commanded_decel > 0.0) {
      o.first_brake_time = r.t;
    }
    if (r.vehicle.speed < kStoppedSpeed) {
      if (!first_stop) {
        first_stop = r.t;
      }
    } else {
      first_stop.reset();
    }
  }
  o.min_separation = std::max(0.0, o.min_separation);
  o.stopped = !o.collided && records.back().vehicle.speed < kStoppedSpeed;
  if (o.stopped) {
    o.stop_time = first_stop;
  }
  return o;
}

std::string trace_header(std::size_t pedestrian_count)
{
  std::string h = "t,veh_x,veh_y,veh_heading,veh_speed,ped0_x,ped0_y,ped0_speed,ttz_veh,ttz_ped,"
                  "dangerous,severity,cmd_decel,act_decel,psm_rx,los,collided";
  for (std::size_t k = 1; k < pedestrian_count; ++k) {
    const auto p = "ped" + std::to_string(k);
    h += "," + p + "_x," + p + "_y," + p + "_speed";
  }
  return h;
}

std::size_t write_trace(
  const std::vector<TraceRecord> & records, std::ostream & out, std::size_t pedestrian_count)
{
  const auto old_mask = out.exceptions();
  out.exceptions(std::ios::badbit | std::ios::failbit);

  std::size_t bytes = 0;
  auto emit = [&](const std::string & line) {
    out << line << '\n';
    bytes += line.size() + 1;
  };

  emit(trace_header(pedestrian_count));
  const PedestrianSample missing{};
  for (const auto & r : records) {
    auto ped = [&](std::size_t k) -> const PedestrianSample & {
      return k < r.pedestrians.size() ? r.pedestrians[k] : missing;
    };
    std::string line;
    line.reserve(160);
    auto field = [&](const std::string & s) {
      if (!line.empty()) {
        line += ',';
      }
      line += s;
    };
    field(format_number(r.t));
    field(format_number(r.vehicle.position.x));
    field(format_number(r.vehicle.position.y));
    field(format_number(rad_to_deg(r.vehicle.heading)));
    field(format_number(r.vehicle.speed));
    field(format_number(ped(0).x));
    field(format_number(ped(0).y));
    field(format_number(ped(0).speed));
    field(format_number(r.ttz_vehicle));
    field(format_number(r.ttz_pedestrian));
    field(r.dangerous ? "1" : "0");
    field(std::to_string(r.severity));
    field(format_number(r.commanded_decel));
    field(format_number(r.actual_decel));
    field(std::to_string(r.psm_received));
    field(r.los ? "1" : "0");
    field(r.collided ? "1" : "0");
    for (std::size_t k = 1; k < pedestrian_count; ++k) {
      field(format_number(ped(k).x));
      field(format_number(ped(k).y));
      field(format_number(ped(k).speed));
    }
    emit(line);
  }
  out.flush();
  out.exceptions(old_mask);
  return bytes;
}

nlohmann::json outcome_to_json(const Outcome & o)
{
  nlohmann::json j;
  j["collided"] = o.collided;
  j["stopped"] = o.stopped;
  j["min_separation"] = o.min_separation;
  j["max_severity"] = o.max_severity;
  j["first_brake_time"] = o.first_brake_time ? nlohmann::json(*o.first_brake_time) : nlohmann::json();
  j["stop_time"] = o.stop_time ? nlohmann::json(*o.stop_time) : nlohmann::json();
  return j;
}

}  // namespace vve
