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

#ifndef VVE__FORMAT_HPP_
#define VVE__FORMAT_HPP_

#include <cmath>
#include <cstdio>
#include <string>

namespace vve
{

/// Fixed CSV number rendering: 9 significant digits, `inf`/`-inf`, no negative zero.
inline std::string format_number(double v)
{
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  if (std::isnan(v)) {
    return "nan";
  }
  if (v == 0.0) {
    v = 0.0;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  std::string s(buf);
  if (s == "-0") {
    s = "0";
  }
  return s;
}

}  // namespace vve

#endif  // VVE__FORMAT_HPP_
