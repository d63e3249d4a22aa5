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

#include "fedchaos/commands.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>

#include <nlohmann/json.hpp>

#include "fedchaos/error.h"
#include "fedchaos/pipeline.h"

namespace fedchaos {
namespace {

using json = nlohmann::json;

std::filesystem::path SeedFile(const std::filesystem::path& dir, const std::string& stem,
                               std::uint64_t seed, const std::string& ext) {
  return dir / (stem + "_seed" + std::to_string(seed) + ext);
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) Fail(ErrorCode::kIo, "failed writing " + path.string());
}

json RunToJson(const SeedRun& run) {
  json j;
  j["seed"] = run.seed;
  if (run.data.imputation) {
    const auto& imp = *run.data.imputation;
    j["imputation"] = {{"recipient", imp.recipient + 1},
                       {"donor", imp.donor + 1},
                       {"feature", imp.received.feature},
                       {"mean", imp.received.mean},
                       {"std", imp.received.stddev},
                       {"n", imp.received.n},
                       {"encrypted_bytes", imp.blob_bytes}};
  }
  json modes = json::object();
  for (const auto& [mode, result] : run.results) {
    json m;
    m["rounds"] = result.history.size();
    m["history"] = json::array();
    for (const auto& r : result.history) {
      m["history"].push_back({{"round", r.round},
                              {"global_loss_before", r.loss_before},
                              {"global_loss_after", r.loss_after},
                              {"mean_val_accuracy", r.mean_val_accuracy}});
    }
    m["mean_pre_accuracy"] = result.MeanPreAccuracy();
    m["mean_post_accuracy"] = result.MeanPostAccuracy();
    if (result.privacy_spent) {
      const auto& p = *result.privacy_spent;
      m["privacy"] = {{"epsilon", p.unbounded ? json("inf") : json(p.epsilon)},
                      {"delta", p.delta},
                      {"steps", p.steps},
                      {"accounting",
                       "gaussian mechanism + strong composition, worst participant "
                       "(conservative upper estimate)"}};
    }
    modes[mode] = std::move(m);
  }
  j["modes"] = std::move(modes);
  return j;
}

std::string ManifestText(const Manifest& manifest, const Dataset& dataset) {
  std::ostringstream out;
  WriteManifest(out, manifest, dataset);
  return out.str();
}

}  // namespace

RunConfig ResolveConfig(const CommandOptions& options) {
  RunConfig config = LoadRunConfig(options.config_path);
  if (options.seed) config.seeds = {*options.seed};
  if (options.mode) {
    config.modes = {*options.mode};
    config.Validate();
  }
  if (options.out_dir) config.out_dir = *options.out_dir;
  if (const char* env = std::getenv("FEDCHAOS_THREADS"); env && *env) {
    std::size_t cap = 0;
    const std::string s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
    if (ec != std::errc() || ptr != s.data() + s.size() || cap == 0) {
      Fail(ErrorCode::kConfiguration, "FEDCHAOS_THREADS must be a positive integer");
    }
    config.threads = config.threads == 0 ? cap : std::min(config.threads, cap);
  }
  return config;
}

void CmdPartition(const CommandOptions& options, std::ostream& out) {
  const RunConfig config = ResolveConfig(options);
  const Dataset dataset = LoadCsv(config.data_path, config.csv);
  std::filesystem::create_directories(config.out_dir);
  for (std::uint64_t seed : config.seeds) {
    const PreparedData data = PrepareParticipants(dataset, config.partition, config.participants,
                                                  config.split, config.chaos, seed);
    WriteText(SeedFile(config.out_dir, "manifest", seed, ".txt"),
              ManifestText(data.manifest, dataset));
    out << "seed " << seed << "\n";
    out << "participant  size     pos (%)\n";
    for (const auto& p : data.participants) {
      out << std::left << std::setw(12) << p.id + 1 << ' ' << std::setw(8) << std::fixed
          << std::setprecision(1) << p.size_fraction * 100.0 << ' ' << p.positive_rate * 100.0
          << "\n";
    }
    out << std::defaultfloat;
  }
}

void CmdRun(const CommandOptions& options, std::ostream& out) {
  const RunConfig config = ResolveConfig(options);
  const Dataset dataset = LoadCsv(config.data_path, config.csv);
  std::filesystem::create_directories(config.out_dir);
  std::vector<ExperimentTable> tables;
  for (std::uint64_t seed : config.seeds) {
    const SeedRun run = RunSeed(config, dataset, seed);
    ExportTable(run.table, TableFormat::kCsv, SeedFile(config.out_dir, "table", seed, ".csv"));
    ExportTable(run.table, TableFormat::kJson, SeedFile(config.out_dir, "table", seed, ".json"));
    WriteText(SeedFile(config.out_dir, "run", seed, ".json"), RunToJson(run).dump(2) + "\n");
    WriteText(SeedFile(config.out_dir, "manifest", seed, ".txt"),
              ManifestText(run.data.manifest, dataset));
    out << "seed " << seed << "\n" << RenderTable(run.table);
    tables.push_back(run.table);
  }
  const SeedSummary summary = SummarizeSeeds(tables);
  ExportTable(summary.mean, TableFormat::kCsv, config.out_dir / "summary_mean.csv");
  ExportTable(summary.stddev, TableFormat::kCsv, config.out_dir / "summary_std.csv");
  out << RenderSummary(summary);
}

void CmdReport(const std::filesystem::path& dir, std::ostream& out) {
  if (!std::filesystem::is_directory(dir)) Fail(ErrorCode::kIo, "not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.starts_with("table_seed") && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  if (files.empty()) Fail(ErrorCode::kIo, "no table_seed*.csv files in " + dir.string());
  std::sort(files.begin(), files.end());
  std::vector<ExperimentTable> tables;
  for (const auto& f : files) tables.push_back(ReloadTable(f));
  out << RenderSummary(SummarizeSeeds(tables));
}

}  // namespace fedchaos
