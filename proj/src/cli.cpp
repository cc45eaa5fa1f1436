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

#include "vve/cli.hpp"

#include "vve/pose_bridge.hpp"
#include "vve/scenario.hpp"
#include "vve/sweep.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

namespace vve::cli
{

namespace fs = std::filesystem;

namespace
{

struct Failure : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Failure("cannot open '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path prepare_dir(const std::string & dir)
{
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw Failure("cannot create output directory '" + dir + "': " + ec.message());
  }
  return fs::path(dir);
}

std::ofstream open_output(const fs::path & path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Failure("cannot write '" + path.string() + "'");
  }
  return out;
}

Pose2 parse_origin(const std::string & spec, const std::string & flag)
{
  std::vector<double> v;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception &) {
      throw Failure(flag + " expects x,y,heading_deg; got '" + spec + "'");
    }
  }
  if (v.size() != 3) {
    throw Failure(flag + " expects x,y,heading_deg; got '" + spec + "'");
  }
  return Pose2{{v[0], v[1]}, deg_to_rad(v[2]), 0.0};
}

struct RunOptions
{
  std::string scenario;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool quiet{false};
};

int cmd_run(const RunOptions & o, std::ostream & out)
{
  auto cfg = load_config(read_file(o.scenario));
  if (o.seed) {
    cfg.seed = *o.seed;
    cfg.channel.rng_seed = *o.seed;
  }
  const auto result = run(cfg);
  const auto summary = outcome_to_json(result.outcome);

  if (!o.out_dir.empty()) {
    const auto dir = prepare_dir(o.out_dir);
    auto trace = open_output(dir / "trace.csv");
    write_trace(result.trace, trace, cfg.pedestrians.size());
    auto sum = open_output(dir / "summary.json");
    sum << summary.dump(2) << '\n';
  }
  if (!o.quiet) {
    out << summary.dump(2) << '\n';
  }
  return result.outcome.collided ? kExitCollision : kExitOk;
}

struct ReplayOptions
{
  std::string log;
  std::string real_origin{"0,0,0"};
  std::string virtual_origin{"0,0,0"};
  std::string out_dir;
  double noise_sigma{0.0};
  std::uint64_t seed{0};
  bool quiet{false};
};

int cmd_replay(const ReplayOptions & o, std::ostream & out)
{
  std::istringstream in(read_file(o.log));
  const auto samples = ingest_pose_log(in);
  const auto cal = calibrate(
    parse_origin(o.real_origin, "--real-origin"), parse_origin(o.virtual_origin, "--virtual-origin"));
  PositionNoise noise(o.noise_sigma, o.seed);

  std::vector<RealPoseSample> mapped;
  mapped.reserve(samples.size());
  for (const auto & s : samples) {
    mapped.push_back({s.t, noise.apply(map_pose(cal, s.pose))});
  }

  if (!o.out_dir.empty()) {
    const auto dir = prepare_dir(o.out_dir);
    auto f = open_output(dir / "replay.csv");
    write_pose_log(f, mapped);
  } else if (!o.quiet) {
    write_pose_log(out, mapped);
  }
  return kExitOk;
}

struct SweepOptions
{
  std::string scenario;
  std::vector<std::string> params;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  unsigned jobs{0};
  bool quiet{false};
};

int cmd_sweep(const SweepOptions & o, std::ostream & out)
{
  const auto text = read_file(o.scenario);
  nlohmann::json base;
  // load_config reports parse/validation problems with locations
  (void)load_config(text);
  base = nlohmann::json::parse(text);
  if (o.seed) {
    base["seed"] = *o.seed;
    if (base.contains("channel") && base["channel"].contains("rng_seed")) {
      base["channel"]["rng_seed"] = *o.seed;
    }
  }

  std::vector<SweepParam> params;
  for (const auto & spec : o.params) {
    params.push_back(parse_sweep_param(spec));
  }
  const unsigned jobs = o.jobs > 0 ? o.jobs : std::max(1u, std::thread::hardware_concurrency());
  const auto rows = run_sweep(base, params, jobs);

  if (!o.out_dir.empty()) {
    const auto dir = prepare_dir(o.out_dir);
    auto f = open_output(dir / "sweep.csv");
    write_sweep_csv(f, params, rows);
  } else if (!o.quiet) {
    write_sweep_csv(out, params, rows);
  }
  return kExitOk;
}

int cmd_validate(const std::string & scenario, std::ostream & out)
{
  const auto cfg = load_config(read_file(scenario));
  out << config_to_json(cfg).dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  CLI::App app{"Vehicle-in-virtual-environment V2P braking harness", "vve"};
  app.require_subcommand(1, 1);

  RunOptions run_opts;
  auto * run_cmd = app.add_subcommand("run", "Run a scenario and write trace.csv + summary.json");
  run_cmd->add_option("--scenario", run_opts.scenario, "Scenario JSON file")->required();
  run_cmd->add_option("--out", run_opts.out_dir, "Output directory");
  run_cmd->add_option("--seed", run_opts.seed, "Override the scenario seed");
  run_cmd->add_flag("--quiet", run_opts.quiet, "Do not print the summary");

  ReplayOptions replay_opts;
  auto * replay_cmd =
    app.add_subcommand("replay", "Map a real-lot pose log into the virtual frame");
  replay_cmd->add_option("--log", replay_opts.log, "Pose log CSV (t,x,y,heading_deg,speed)")
    ->required();
  replay_cmd->add_option("--real-origin", replay_opts.real_origin, "x,y,heading_deg in the lot")
    ->capture_default_str();
  replay_cmd
    ->add_option("--virtual-origin", replay_opts.virtual_origin, "x,y,heading_deg in the scene")
    ->capture_default_str();
  replay_cmd->add_option("--out", replay_opts.out_dir, "Output directory (replay.csv)");
  replay_cmd->add_option("--noise-sigma", replay_opts.noise_sigma, "Gaussian position noise [m]")
    ->check(CLI::NonNegativeNumber);
  replay_cmd->add_option("--seed", replay_opts.seed, "Noise seed");
  replay_cmd->add_flag("--quiet", replay_opts.quiet, "Do not print the mapped log");

  SweepOptions sweep_opts;
  auto * sweep_cmd = app.add_subcommand("sweep", "Cross-product parameter sweep");
  sweep_cmd->add_option("--scenario", sweep_opts.scenario, "Base scenario JSON file")->required();
  sweep_cmd->add_option("--param", sweep_opts.params, "name=start:stop:step (repeatable)")
    ->required();
  sweep_cmd->add_option("--out", sweep_opts.out_dir, "Output directory (sweep.csv)");
  sweep_cmd->add_option("--seed", sweep_opts.seed, "Override the scenario seed");
  sweep_cmd->add_option("--jobs", sweep_opts.jobs, "Worker threads (0 = hardware)");
  sweep_cmd->add_flag("--quiet", sweep_opts.quiet, "Do not print the table");

  std::string validate_path;
  auto * validate_cmd =
    app.add_subcommand("validate", "Check a scenario and print the effective config");
  validate_cmd->add_option("--scenario", validate_path, "Scenario JSON file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*run_cmd) {
      return cmd_run(run_opts, out);
    }
    if (*replay_cmd) {
      return cmd_replay(replay_opts, out);
    }
    if (*sweep_cmd) {
      return cmd_sweep(sweep_opts, out);
    }
    return cmd_validate(validate_path, out);
  } catch (const std::exception & e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace vve::cli
