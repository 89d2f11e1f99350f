// Copyright 2026 The fishsim Authors.
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
// Command-line driver: simulation, identification, sweeps and the
// target-reaching environment. Every run writes a JSON manifest next to its
// main artifact.

#ifndef FISHSIM_CLI_H_
#define FISHSIM_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace fishsim {

inline constexpr char kVersion[] = "0.1.0";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;   // bad flags, schema or input files
inline constexpr int kExitUsage = 2;   // unknown subcommand
inline constexpr int kExitDiverged = 3;

// Parses "a:step:b" into the inclusive list a, a + step, ..., b.
std::vector<double> ParseRange(const std::string& text);

// args excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fishsim

#endif  // FISHSIM_CLI_H_
