// Copyright 2026 The fedchaos Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FEDCHAOS_COMMANDS_H_
#define FEDCHAOS_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "fedchaos/config.h"

namespace fedchaos {

struct CommandOptions {
  std::filesystem::path config_path;
  std::optional<std::uint64_t> seed;  // replaces the configured seed list
  std::optional<std::string> mode;    // run only this mode
  std::optional<std::filesystem::path> out_dir;
};

// Config with command-line overrides and FEDCHAOS_THREADS applied.
RunConfig ResolveConfig(const CommandOptions& options);

// Writes manifest_seed<N>.txt per seed and prints each participant's share
// size and positive rate.
void CmdPartition(const CommandOptions& options, std::ostream& out);

// Writes table_seed<N>.{csv,json}, run_seed<N>.json and manifest_seed<N>.txt
// per seed, then summary_mean.csv and summary_std.csv across seeds.
void CmdRun(const CommandOptions& options, std::ostream& out);

// Prints mean and standard deviation per cell over every table_seed*.csv in `dir`.
void CmdReport(const std::filesystem::path& dir, std::ostream& out);

}  // namespace fedchaos

#endif  // FEDCHAOS_COMMANDS_H_
