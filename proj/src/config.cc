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

#include "fedchaos/config.h"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fedchaos/error.h"

namespace fedchaos {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& KnownKeys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"data", {"path", "label_column", "missing_tokens", "drop_columns", "positive_label"}},
      {"network", {"hidden", "dropout", "learning_rate", "batch_size"}},
      {"federation",
       {"participants", "rounds_max", "local_epochs", "val_accuracy_threshold", "threads"}},
      {"partition",
       {"mode", "proportions", "small_count", "small_cap", "label_skew", "split"}},
      {"missing", {"participant", "feature", "donor"}},
      {"privacy",
       {"modes", "dp_clip_norm", "dp_noise_scale", "dp_lot_size", "dp_delta", "chaos_r",
        "chaos_burn_in"}},
      {"run", {"seeds", "out"}},
  };
  return keys;
}

[[noreturn]] void BadField(const std::string& field, const std::string& what) {
  Fail(ErrorCode::kConfiguration, field + ": " + what);
}

std::string Trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return {};
  return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) out.push_back(Trim(item));
  if (!s.empty() && s.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T ParseScalar(const std::string& field, const std::string& text) {
  T v{};
  const std::string s = Trim(text);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    BadField(field, "cannot parse '" + text + "'");
  }
  return v;
}

template <typename T>
std::vector<T> ParseList(const std::string& field, const std::string& text) {
  std::vector<T> out;
  if (Trim(text).empty()) return out;
  for (const auto& item : SplitList(text)) out.push_back(ParseScalar<T>(field, item));
  return out;
}

}  // namespace

RunConfig ParseRunConfig(const std::string& text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    Fail(ErrorCode::kConfiguration, std::string("config: ") + e.what());
  }

  RunConfig c;
  std::optional<std::string> missing_feature;
  std::optional<std::size_t> missing_participant, missing_donor;

  for (const auto& [section, body] : tree) {
    auto known = KnownKeys().find(section);
    if (known == KnownKeys().end()) {
      if (!body.data().empty()) BadField(section, "key outside any section");
      BadField(section, "unknown section");
    }
    for (const auto& [key, node] : body) {
      const std::string field = section + "." + key;
      if (!known->second.count(key)) BadField(field, "unknown key");
      const std::string v = Trim(node.data());
      if (section == "data") {
        if (key == "path") {
          std::filesystem::path p(v);
          c.data_path = p.is_absolute() ? p : base_dir / p;
        } else if (key == "label_column") {
          c.csv.label_column = v;
        } else if (key == "missing_tokens") {
          c.csv.missing_tokens = SplitList(node.data());
        } else if (key == "drop_columns") {
          c.csv.drop_columns = v.empty() ? std::vector<std::string>{} : SplitList(v);
        } else if (key == "positive_label") {
          c.csv.positive_label = v;
        }
      } else if (section == "network") {
        if (key == "hidden") c.hidden = ParseList<std::size_t>(field, v);
        else if (key == "dropout") c.dropout = ParseScalar<double>(field, v);
        else if (key == "learning_rate") c.learning_rate = ParseScalar<double>(field, v);
        else if (key == "batch_size") c.batch_size = ParseScalar<std::size_t>(field, v);
      } else if (section == "federation") {
        if (key == "participants") c.participants = ParseScalar<std::size_t>(field, v);
        else if (key == "rounds_max") c.rounds_max = ParseScalar<std::size_t>(field, v);
        else if (key == "local_epochs") c.local_epochs = ParseScalar<std::size_t>(field, v);
        else if (key == "threads") c.threads = ParseScalar<std::size_t>(field, v);
        else if (key == "val_accuracy_threshold" && !v.empty()) {
          c.val_accuracy_threshold = ParseScalar<double>(field, v);
        }
      } else if (section == "partition") {
        if (key == "mode") {
          if (v == "even") c.partition.kind = PartitionSpec::Kind::kEven;
          else if (v == "proportions") c.partition.kind = PartitionSpec::Kind::kProportions;
          else if (v == "forced_small") c.partition.kind = PartitionSpec::Kind::kForcedSmall;
          else BadField(field, "expected even, proportions or forced_small");
        } else if (key == "proportions") {
          c.partition.proportions = ParseList<double>(field, v);
        } else if (key == "small_count") {
          c.partition.small_count = ParseScalar<std::size_t>(field, v);
        } else if (key == "small_cap") {
          c.partition.small_cap = ParseScalar<double>(field, v);
        } else if (key == "label_skew" && !v.empty()) {
          c.partition.label_skew = ParseList<double>(field, v);
        } else if (key == "split") {
          const auto r = ParseList<double>(field, v);
          if (r.size() != 3) BadField(field, "expected train,val,test ratios");
          c.split = {r[0], r[1], r[2]};
        }
      } else if (section == "missing") {
        if (key == "feature" && !v.empty()) missing_feature = v;
        else if (key == "participant") missing_participant = ParseScalar<std::size_t>(field, v);
        else if (key == "donor" && !v.empty()) missing_donor = ParseScalar<std::size_t>(field, v);
      } else if (section == "privacy") {
        if (key == "modes") c.modes = SplitList(v);
        else if (key == "dp_clip_norm") c.dp.clip_norm = ParseScalar<double>(field, v);
        else if (key == "dp_noise_scale") c.dp.noise_scale = ParseScalar<double>(field, v);
        else if (key == "dp_lot_size") c.dp.lot_size = ParseScalar<std::size_t>(field, v);
        else if (key == "dp_delta") c.dp.delta = ParseScalar<double>(field, v);
        else if (key == "chaos_r") c.chaos.r = ParseScalar<double>(field, v);
        else if (key == "chaos_burn_in") c.chaos.burn_in = ParseScalar<std::size_t>(field, v);
      } else if (section == "run") {
        if (key == "seeds") c.seeds = ParseList<std::uint64_t>(field, v);
        else if (key == "out") c.out_dir = v;
      }
    }
  }

  if (missing_feature) {
    if (!missing_participant || *missing_participant == 0) {
      BadField("missing.participant", "a 1-based participant number is required");
    }
    MissingFeatureSpec m;
    m.participant = *missing_participant - 1;
    m.feature = *missing_feature;
    if (missing_donor) {
      if (*missing_donor == 0) BadField("missing.donor", "participants are numbered from 1");
      m.donor = *missing_donor - 1;
    }
    c.partition.missing_feature = m;
  } else if (missing_participant || missing_donor) {
    BadField("missing.feature", "required when missing.participant or missing.donor is set");
  }
  c.Validate();
  return c;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  RunConfig c = ParseRunConfig(buf.str(), path.parent_path());
  if (!std::filesystem::exists(c.data_path)) {
    BadField("data.path", "file not found: " + c.data_path.string());
  }
  return c;
}

void RunConfig::Validate() const {
  if (csv.label_column.empty()) BadField("data.label_column", "required");
  if (hidden.size() != 4) BadField("network.hidden", "expected 4 hidden widths");
  Network(1).Validate();
  if (modes.empty()) BadField("privacy.modes", "at least one mode is required");
  std::set<std::string> seen;
  for (const auto& m : modes) {
    if (m != "plain" && m != "dp" && m != "chaos") {
      BadField("privacy.modes", "unknown mode '" + m + "'");
    }
    if (!seen.insert(m).second) BadField("privacy.modes", "mode '" + m + "' listed twice");
  }
  dp.Validate();
  partition.Validate(participants);
  split.Validate();
  Federation("chaos", 0).Validate();
  if (seeds.empty()) BadField("run.seeds", "at least one seed is required");
}

NetworkConfig RunConfig::Network(std::size_t n_features) const {
  NetworkConfig n;
  n.layer_sizes.push_back(n_features);
  n.layer_sizes.insert(n.layer_sizes.end(), hidden.begin(), hidden.end());
  n.layer_sizes.push_back(1);
  n.dropout_rate = dropout;
  n.learning_rate = learning_rate;
  n.batch_size = batch_size;
  return n;
}

PrivacyMode RunConfig::Mode(const std::string& name) const {
  if (name == "plain") return PlainMode{};
  if (name == "dp") return DpMode{dp};
  if (name == "chaos") return chaos;
  BadField("privacy.modes", "unknown mode '" + name + "'");
}

FederationConfig RunConfig::Federation(const std::string& mode, std::uint64_t seed) const {
  FederationConfig f;
  f.n_participants = participants;
  f.rounds_max = rounds_max;
  f.local_epochs = local_epochs;
  f.val_accuracy_threshold = val_accuracy_threshold;
  f.mode = Mode(mode);
  f.seed = seed;
  f.threads = threads;
  return f;
}

}  // namespace fedchaos
