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

#include "vve/sweep.hpp"

#include "vve/format.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <thread>

namespace vve
{

using nlohmann::json;

namespace
{

double parse_number(const std::string & s, const std::string & context)
{
  double v = 0.0;
  const char * begin = s.data();
  if (!s.empty() && s.front() == '+') {
    ++begin;
  }
  const auto res = std::from_chars(begin, s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw SweepError("invalid number '" + s + "' in " + context);
  }
  return v;
}

std::vector<std::string> split(const std::string & s, char sep)
{
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) {
      return out;
    }
    start = pos + 1;
  }
}

bool is_index(const std::string & s)
{
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

void set_path(json & doc, const std::string & path, double value)
{
  json * node = &doc;
  for (const auto & part : split(path, '.')) {
    if (part.empty()) {
      throw SweepError("malformed parameter path '" + path + "'");
    }
    if (node->is_array()) {
      if (!is_index(part)) {
        throw SweepError("expected an array index in '" + path + "', got '" + part + "'");
      }
      const auto idx = std::stoul(part);
      if (idx >= node->size()) {
        throw SweepError("index " + part + " out of range in '" + path + "'");
      }
      node = &(*node)[idx];
    } else {
      if (node->is_null()) {
        *node = json::object();
      }
      if (!node->is_object()) {
        throw SweepError("cannot descend into '" + part + "' in '" + path + "'");
      }
      node = &(*node)[part];
    }
  }
  *node = value;
}

}  // namespace

const std::vector<std::pair<std::string, std::string>> & parameter_aliases()
{
  static const std::vector<std::pair<std::string, std::string>> aliases = {
    {"T_s", "risk.ttz_diff_threshold"},
    {"ttz_diff_threshold", "risk.ttz_diff_threshold"},
    {"severity_1_2_threshold", "risk.severity_1_2_threshold"},
    {"severity_2_3_threshold", "risk.severity_2_3_threshold"},
    {"zone_half_extent", "risk.zone_half_extent"},
    {"engagement_horizon", "risk.engagement_horizon"},
    {"latency_mean", "channel.latency_mean"},
    {"latency_jitter", "channel.latency_jitter"},
    {"drop_probability", "channel.drop_probability"},
    {"broadcast_period", "channel.broadcast_period"},
    {"ped_start_delay", "pedestrians.0.profile.0.start_time"},
    {"cruise_speed", "vehicle.cruise_speed"},
  };
  return aliases;
}

std::vector<double> parse_range(const std::string & spec)
{
  const auto parts = split(spec, ':');
  if (parts.size() != 3) {
    throw SweepError("range '" + spec + "' must be start:stop:step");
  }
  const double start = parse_number(parts[0], "range '" + spec + "'");
  const double stop = parse_number(parts[1], "range '" + spec + "'");
  const double step = parse_number(parts[2], "range '" + spec + "'");
  if (!(step > 0.0)) {
    throw SweepError("range '" + spec + "' needs a positive step");
  }
  if (stop < start) {
    throw SweepError("range '" + spec + "' is empty");
  }
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> values;
  values.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    values.push_back(start + static_cast<double>(i) * step);
  }
  return values;
}

SweepParam parse_sweep_param(const std::string & spec)
{
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw SweepError("parameter '" + spec + "' must be name=start:stop:step");
  }
  SweepParam p;
  p.name = spec.substr(0, eq);
  p.path = p.name;
  for (const auto & [alias, path] : parameter_aliases()) {
    if (alias == p.name) {
      p.path = path;
      break;
    }
  }
  p.values = parse_range(spec.substr(eq + 1));
  return p;
}

std::vector<SweepRow> run_sweep(
  const json & base, const std::vector<SweepParam> & params, unsigned jobs)
{
  std::size_t cells = 1;
  for (const auto & p : params) {
    cells *= p.values.size();
  }

  // Cell i decodes to one value index per parameter, last parameter fastest.
  std::vector<json> docs(cells, base);
  std::vector<SweepRow> rows(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    std::size_t rem = i;
    rows[i].values.resize(params.size());
    for (std::size_t k = params.size(); k-- > 0;) {
      const auto n = params[k].values.size();
      rows[i].values[k] = params[k].values[rem % n];
      rem /= n;
      set_path(docs[i], params[k].path, rows[i].values[k]);
    }
  }

  std::vector<ScenarioConfig> configs;
  configs.reserve(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    try {
      configs.push_back(config_from_json(docs[i]));
    } catch (const ConfigError & e) {
      throw SweepError("cell " + std::to_string(i) + ": " + e.what());
    }
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(cells);
  auto worker = [&] {
    for (std::size_t i = next++; i < cells; i = next++) {
      try {
        rows[i].outcome = run(configs[i]).outcome;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(cells)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back(worker);
    }
  }
  for (const auto & e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  return rows;
}

void write_sweep_csv(
  std::ostream & out, const std::vector<SweepParam> & params, const std::vector<SweepRow> & rows)
{
  for (const auto & p : params) {
    out << p.name << ',';
  }
  out << "collided,stopped,min_separation,max_severity,first_brake_time,stop_time\n";
  auto opt = [](const std::optional<double> & v) { return v ? format_number(*v) : std::string(); };
  for (const auto & r : rows) {
    for (const double v : r.values) {
      out << format_number(v) << ',';
    }
    const auto & o = r.outcome;
    out << (o.collided ? 1 : 0) << ',' << (o.stopped ? 1 : 0) << ','
        << format_number(o.min_separation) << ',' << o.max_severity << ','
        << opt(o.first_brake_time) << ',' << opt(o.stop_time) << '\n';
  }
}

}  // namespace vve
