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

#ifndef VVE__CLI_HPP_
#define VVE__CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace vve::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCollision = 2;

/// Entry point shared by the `vve` binary and the tests. `args` excludes argv[0].
int main(const std::vector<std::string> & args, std::ostream & out, std::ostream & err);

}  // namespace vve::cli

#endif  // VVE__CLI_HPP_
