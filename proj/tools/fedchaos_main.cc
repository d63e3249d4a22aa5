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

#include <iostream>

#include <CLI11.hpp>

#include "fedchaos/commands.h"
#include "fedchaos/error.h"

int main(int argc, char** argv) {
  CLI::App app{"fedchaos: federated learning simulator with DP-SGD and logistic-map encryption"};
  app.require_subcommand(1);

  fedchaos::CommandOptions options;
  std::uint64_t seed = 0;
  std::string mode;
  std::string out_dir;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", options.config_path, "experiment config (.ini)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", seed, "run this seed instead of the configured list");
    cmd->add_option("--mode", mode, "run only this privacy mode")
        ->check(CLI::IsMember({"plain", "dp", "chaos"}));
    cmd->add_option("--out", out_dir, "output directory");
  };

  auto* partition = app.add_subcommand("partition", "write partition manifests");
  add_common(partition);
  auto* run = app.add_subcommand("run", "run the experiment and write result tables");
  add_common(run);
  auto* report = app.add_subcommand("report", "summarize per-seed tables of a result directory");
  std::string report_dir = "results";
  report->add_option("dir", report_dir, "result directory");
  report->add_option("--out", report_dir, "result directory");

  CLI11_PARSE(app, argc, argv);

  auto finish_options = [&](CLI::App* cmd) {
    if (cmd->count("--seed")) options.seed = seed;
    if (cmd->count("--mode")) options.mode = mode;
    if (cmd->count("--out")) options.out_dir = out_dir;
  };

  try {
    if (partition->parsed()) {
      finish_options(partition);
      fedchaos::CmdPartition(options, std::cout);
    } else if (run->parsed()) {
      finish_options(run);
      fedchaos::CmdRun(options, std::cout);
    } else if (report->parsed()) {
      fedchaos::CmdReport(report_dir, std::cout);
    }
  } catch (const fedchaos::Error& e) {
    std::cerr << "fedchaos: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "fedchaos: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
