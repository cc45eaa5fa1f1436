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

#ifndef VVE__SWEEP_HPP_
#define VVE__SWEEP_HPP_

#include "vve/scenario.hpp"

#include <json.hpp>

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vve
{

// A swept parameter names a field of the scenario document by dotted path
// ("risk.ttz_diff_threshold", "pedestrians.0.profile.0.start_time") or by one of
// the short aliases listed in parameter_aliases(), and takes every value of an
// inclusive start:stop:step range.

class SweepError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct SweepParam
{
  std::string name;  // as given on the command line
  std::string path;  // resolved dotted path
  std::vector<double> values;
};

/// Inclusive range; the stop value is kept when it lies within step * 1e-9 of a grid
/// point. Throws SweepError for step <= 0 or an empty range.
std::vector<double> parse_range(const std::string & spec);

/// Parses `name=start:stop:step`.
SweepParam parse_sweep_param(const std::string & spec);

const std::vector<std::pair<std::string, std::string>> & parameter_aliases();

struct SweepRow
{
  std::vector<double> values;
  Outcome outcome;
};

/// Runs every cell of the cross product (first parameter varies slowest) on up to
/// `jobs` threads. Rows come back in cross-product order regardless of scheduling.
/// Throws SweepError when a cell's document fails validation.
std::vector<SweepRow> run_sweep(
  const nlohmann::json & base, const std::vector<SweepParam> & params, unsigned jobs);

void write_sweep_csv(
  std::ostream & out, const std::vector<SweepParam> & params, const std::vector<SweepRow> & rows);

}  // namespace vve

#endif  // VVE__SWEEP_HPP_
