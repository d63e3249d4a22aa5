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

#include "fedchaos/partition.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "fedchaos/error.h"
#include "fedchaos/random.h"

namespace fedchaos {
namespace {

// `count` sizes summing to `total`, each at least `min_each`, otherwise
// uniformly random on the simplex.
std::vector<std::size_t> RandomSizes(std::size_t total, std::size_t count,
                                     std::size_t min_each, Rng& rng) {
  std::vector<std::size_t> sizes(count, min_each);
  if (count == 0) return sizes;
  const std::size_t spare = total - count * min_each;
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(count);
  for (double& v : w) v = expo(rng);
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  std::size_t used = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const auto extra = static_cast<std::size_t>(std::floor(w[i] / sum * spare));
    sizes[i] += extra;
    used += extra;
  }
  const auto largest = std::max_element(w.begin(), w.end()) - w.begin();
  sizes[largest] += spare - used;
  return sizes;
}

std::vector<std::size_t> ShareSizes(const PartitionSpec& spec, std::size_t n_rows,
                                    std::size_t n, Rng& rng) {
  std::vector<std::size_t> sizes(n, 0);
  switch (spec.kind) {
    case PartitionSpec::Kind::kEven: {
      for (std::size_t i = 0; i < n; ++i) sizes[i] = n_rows / n + (i < n_rows % n ? 1 : 0);
      break;
    }
    case PartitionSpec::Kind::kProportions: {
      std::size_t assigned = 0;
      for (std::size_t i = 0; i < n; ++i) {
        sizes[i] = static_cast<std::size_t>(std::llround(spec.proportions[i] * n_rows));
        assigned += sizes[i];
      }
      const auto largest =
          std::max_element(spec.proportions.begin(), spec.proportions.end()) -
          spec.proportions.begin();
      const auto adjusted = static_cast<long long>(sizes[largest]) +
                            static_cast<long long>(n_rows) - static_cast<long long>(assigned);
      if (adjusted < 0) Fail(ErrorCode::kFeasibility, "proportions cannot be rounded to the row count");
      sizes[largest] = static_cast<std::size_t>(adjusted);
      break;
    }
    case PartitionSpec::Kind::kForcedSmall: {
      const auto cap_rows = static_cast<std::size_t>(std::floor(spec.small_cap * n_rows));
      if (spec.small_count > 0 && cap_rows < kMinShareRows) {
        Fail(ErrorCode::kFeasibility,
             "small_cap allows " + std::to_string(cap_rows) + " rows, below the minimum share of " +
                 std::to_string(kMinShareRows));
      }
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      std::uniform_int_distribution<std::size_t> small_dist(kMinShareRows, std::max(cap_rows, kMinShareRows));
      std::size_t small_total = 0;
      for (std::size_t k = 0; k < spec.small_count; ++k) {
        sizes[order[k]] = small_dist(rng);
        small_total += sizes[order[k]];
      }
      const std::size_t rest = n - spec.small_count;
      if (n_rows < small_total + rest * kMinShareRows) {
        Fail(ErrorCode::kFeasibility, "not enough rows left for the large participants");
      }
      auto large = RandomSizes(n_rows - small_total, rest, kMinShareRows, rng);
      for (std::size_t k = 0; k < rest; ++k) sizes[order[spec.small_count + k]] = large[k];
      break;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (sizes[i] < kMinShareRows) {
      Fail(ErrorCode::kFeasibility, "participant " + std::to_string(i + 1) + " would hold " +
                                        std::to_string(sizes[i]) + " rows; minimum is " +
                                        std::to_string(kMinShareRows));
    }
  }
  return sizes;
}

// Positives per participant hitting each target rate as closely as the
// dataset's positive count allows.
std::vector<std::size_t> PositiveCounts(const std::vector<std::size_t>& sizes,
                                        const std::vector<double>& targets,
                                        std::size_t total_pos) {
  const std::size_t n = sizes.size();
  std::vector<std::size_t> pos(n);
  long long assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    pos[i] = static_cast<std::size_t>(std::llround(targets[i] * sizes[i]));
    assigned += static_cast<long long>(pos[i]);
  }
  long long diff = static_cast<long long>(total_pos) - assigned;
  auto deviation = [&](std::size_t i, long long p) {
    return std::abs(static_cast<double>(p) / sizes[i] - targets[i]);
  };
  while (diff != 0) {
    const int step = diff > 0 ? 1 : -1;
    std::size_t best = n;
    double best_dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const long long next = static_cast<long long>(pos[i]) + step;
      if (next < 0 || next > static_cast<long long>(sizes[i])) continue;
      const double dev = deviation(i, next);
      if (best == n || dev < best_dev) {
        best = i;
        best_dev = dev;
      }
    }
    if (best == n) Fail(ErrorCode::kFeasibility, "label skew cannot place every positive row");
    pos[best] = static_cast<std::size_t>(static_cast<long long>(pos[best]) + step);
    diff -= step;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double rate = static_cast<double>(pos[i]) / sizes[i];
    if (std::abs(rate - targets[i]) > 0.05 + 1e-12) {
      std::ostringstream msg;
      msg << std::setprecision(4) << "participant " << i + 1 << " positive rate " << rate
          << " misses target " << targets[i] << " by more than 0.05: the dataset has "
          << total_pos << " positives in total, which the other targets and share sizes "
          << "force onto this participant";
      Fail(ErrorCode::kFeasibility, msg.str());
    }
  }
  return pos;
}

std::size_t Clamp(long long v, std::size_t lo, std::size_t hi) {
  if (v < static_cast<long long>(lo)) return lo;
  if (v > static_cast<long long>(hi)) return hi;
  return static_cast<std::size_t>(v);
}

}  // namespace

void PartitionSpec::Validate(std::size_t n_participants) const {
  if (n_participants < 2) Fail(ErrorCode::kConfiguration, "federation.participants must be >= 2");
  if (kind == Kind::kProportions) {
    if (proportions.size() != n_participants) {
      Fail(ErrorCode::kConfiguration, "partition.proportions needs one entry per participant");
    }
    double sum = 0.0;
    for (double p : proportions) {
      if (!(p > 0.0)) Fail(ErrorCode::kConfiguration, "partition.proportions must be positive");
      sum += p;
    }
    // Percentages rounded for display may not add up to exactly 100.
    if (std::abs(sum - 1.0) > kProportionSumTolerance) {
      Fail(ErrorCode::kConfiguration, "partition.proportions must sum to 1 (within 0.01)");
    }
  }
  if (kind == Kind::kForcedSmall) {
    if (!(small_cap > 0.0 && small_cap <= 0.10)) {
      Fail(ErrorCode::kConfiguration, "partition.small_cap must lie in (0, 0.10]");
    }
    if (small_count >= n_participants) {
      Fail(ErrorCode::kConfiguration, "partition.small_count must be below the participant count");
    }
  }
  if (label_skew) {
    if (label_skew->size() != n_participants) {
      Fail(ErrorCode::kConfiguration, "partition.label_skew needs one entry per participant");
    }
    for (double t : *label_skew) {
      if (!(t >= 0.0 && t <= 1.0)) {
        Fail(ErrorCode::kConfiguration, "partition.label_skew targets must lie in [0, 1]");
      }
    }
  }
  if (missing_feature) {
    if (missing_feature->participant >= n_participants) {
      Fail(ErrorCode::kConfiguration, "missing.participant out of range");
    }
    if (missing_feature->donor &&
        (*missing_feature->donor >= n_participants ||
         *missing_feature->donor == missing_feature->participant)) {
      Fail(ErrorCode::kConfiguration, "missing.donor must be another participant");
    }
  }
}

PartitionPlan Partition(const Dataset& dataset, const PartitionSpec& spec,
                        std::size_t n_participants) {
  spec.Validate(n_participants);
  const std::size_t n_rows = dataset.size();
  if (n_rows < n_participants * kMinShareRows) {
    Fail(ErrorCode::kFeasibility, "dataset has " + std::to_string(n_rows) + " rows; need at least " +
                                      std::to_string(n_participants * kMinShareRows));
  }
  Rng rng(DeriveSeed(spec.seed, {stream::kPartition}));
  const auto sizes = ShareSizes(spec, n_rows, n_participants, rng);

  PartitionPlan plan;
  plan.shares.resize(n_participants);
  if (!spec.label_skew) {
    std::vector<std::size_t> rows(n_rows);
    std::iota(rows.begin(), rows.end(), 0);
    std::shuffle(rows.begin(), rows.end(), rng);
    std::size_t at = 0;
    for (std::size_t i = 0; i < n_participants; ++i) {
      plan.shares[i].assign(rows.begin() + at, rows.begin() + at + sizes[i]);
      at += sizes[i];
    }
  } else {
    std::vector<std::size_t> pos_rows, neg_rows;
    for (std::size_t r = 0; r < n_rows; ++r) (dataset.labels[r] == 1 ? pos_rows : neg_rows).push_back(r);
    const auto pos = PositiveCounts(sizes, *spec.label_skew, pos_rows.size());
    std::shuffle(pos_rows.begin(), pos_rows.end(), rng);
    std::shuffle(neg_rows.begin(), neg_rows.end(), rng);
    std::size_t pa = 0, na = 0;
    for (std::size_t i = 0; i < n_participants; ++i) {
      auto& share = plan.shares[i];
      share.assign(pos_rows.begin() + pa, pos_rows.begin() + pa + pos[i]);
      share.insert(share.end(), neg_rows.begin() + na, neg_rows.begin() + na + (sizes[i] - pos[i]));
      pa += pos[i];
      na += sizes[i] - pos[i];
    }
  }
  for (auto& share : plan.shares) std::sort(share.begin(), share.end());
  return plan;
}

void SplitRatios::Validate() const {
  if (!(train > 0.0 && val > 0.0 && test > 0.0)) {
    Fail(ErrorCode::kConfiguration, "partition.split ratios must be positive");
  }
  if (std::abs(train + val + test - 1.0) > 1e-9) {
    Fail(ErrorCode::kConfiguration, "partition.split ratios must sum to 1");
  }
}

SplitIndices SplitTvt(std::span<const int> labels, const SplitRatios& ratios,
                      std::uint64_t seed) {
  ratios.Validate();
  const std::size_t n = labels.size();
  if (n < 3) Fail(ErrorCode::kConfiguration, "need at least 3 rows to split train/val/test");
  const std::size_t n_test = Clamp(std::llround(n * ratios.test), 1, n - 2);
  const std::size_t n_val = Clamp(std::llround(n * ratios.val), 1, n - 1 - n_test);

  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < n; ++i) (labels[i] == 1 ? pos : neg).push_back(i);
  Rng rng(seed);
  std::shuffle(pos.begin(), pos.end(), rng);
  std::shuffle(neg.begin(), neg.end(), rng);

  SplitIndices out;
  if (pos.size() >= 3 && neg.size() >= 3) {
    auto take = [&](std::size_t want, std::size_t& pa, std::size_t& na) {
      // Positives in proportion to the participant's rate, remainder negatives.
      const std::size_t pos_left = pos.size() - pa;
      const std::size_t neg_left = neg.size() - na;
      std::size_t p = Clamp(std::llround(static_cast<double>(pos.size()) * want / n), 0,
                            std::min(want, pos_left));
      if (want - p > neg_left) p = want - neg_left;
      std::vector<std::size_t> part(pos.begin() + pa, pos.begin() + pa + p);
      part.insert(part.end(), neg.begin() + na, neg.begin() + na + (want - p));
      pa += p;
      na += want - p;
      return part;
    };
    std::size_t pa = 0, na = 0;
    out.test = take(n_test, pa, na);
    out.val = take(n_val, pa, na);
    out.train.assign(pos.begin() + pa, pos.end());
    out.train.insert(out.train.end(), neg.begin() + na, neg.end());
  } else {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    out.test.assign(all.begin(), all.begin() + n_test);
    out.val.assign(all.begin() + n_test, all.begin() + n_test + n_val);
    out.train.assign(all.begin() + n_test + n_val, all.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.val.begin(), out.val.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

Manifest MakeManifest(const Dataset& dataset, const PartitionPlan& plan,
                      const SplitRatios& ratios, std::uint64_t seed) {
  Manifest m;
  m.seed = seed;
  m.dataset_rows = dataset.size();
  for (std::size_t i = 0; i < plan.shares.size(); ++i) {
    const auto& share = plan.shares[i];
    Labels labels;
    for (std::size_t r : share) labels.push_back(dataset.labels.at(r));
    const auto split = SplitTvt(labels, ratios, DeriveSeed(seed, {stream::kSplit, i}));
    ManifestEntry entry;
    for (std::size_t k : split.train) entry.train.push_back(share[k]);
    for (std::size_t k : split.val) entry.val.push_back(share[k]);
    for (std::size_t k : split.test) entry.test.push_back(share[k]);
    m.participants.push_back(std::move(entry));
  }
  return m;
}

std::vector<ParticipantData> Materialize(const Dataset& dataset, const Manifest& manifest) {
  if (manifest.dataset_rows != dataset.size()) {
    Fail(ErrorCode::kConsistency, "manifest was made for a dataset of " +
                                      std::to_string(manifest.dataset_rows) + " rows");
  }
  std::vector<ParticipantData> out;
  for (std::size_t i = 0; i < manifest.participants.size(); ++i) {
    const auto& e = manifest.participants[i];
    if (e.train.empty() || e.val.empty() || e.test.empty()) {
      Fail(ErrorCode::kConfiguration, "participant " + std::to_string(i + 1) + " has an empty split");
    }
    ParticipantData p;
    p.id = i;
    p.train = dataset.Subset(e.train);
    p.val = dataset.Subset(e.val);
    p.test = dataset.Subset(e.test);
    std::size_t positives = 0;
    for (const Dataset* ds : {&p.train, &p.val, &p.test}) {
      for (int y : ds->labels) positives += y == 1;
    }
    p.size_fraction = static_cast<double>(p.size()) / static_cast<double>(dataset.size());
    p.positive_rate = static_cast<double>(positives) / static_cast<double>(p.size());
    out.push_back(std::move(p));
  }
  return out;
}

void WriteManifest(std::ostream& out, const Manifest& manifest, const Dataset& dataset) {
  out << "fedchaos-manifest 1\n";
  out << "seed " << manifest.seed << "\n";
  out << "dataset_rows " << manifest.dataset_rows << "\n";
  out << "participants " << manifest.participants.size() << "\n";
  auto write_rows = [&](const char* tag, const std::vector<std::size_t>& rows) {
    out << tag;
    for (std::size_t r : rows) out << ' ' << r;
    out << '\n';
  };
  for (std::size_t i = 0; i < manifest.participants.size(); ++i) {
    const auto& e = manifest.participants[i];
    const std::size_t size = e.train.size() + e.val.size() + e.test.size();
    std::size_t positives = 0;
    for (const auto* rows : {&e.train, &e.val, &e.test}) {
      for (std::size_t r : *rows) positives += dataset.labels.at(r) == 1;
    }
    out << "participant " << i + 1 << " size " << size << std::fixed << std::setprecision(4)
        << " size_frac " << static_cast<double>(size) / manifest.dataset_rows << " pos_rate "
        << static_cast<double>(positives) / size << std::defaultfloat << '\n';
    write_rows("train", e.train);
    write_rows("val", e.val);
    write_rows("test", e.test);
  }
}

Manifest ReadManifest(std::istream& in) {
  auto bad = [](const std::string& what) { Fail(ErrorCode::kFormat, "manifest: " + what); };
  std::string line;
  auto next_line = [&]() -> std::istringstream {
    if (!std::getline(in, line)) bad("unexpected end of file");
    return std::istringstream(line);
  };
  auto expect_key = [&](std::istringstream& s, const std::string& key) {
    std::string k;
    if (!(s >> k) || k != key) bad("expected '" + key + "'");
  };
  Manifest m;
  {
    auto s = next_line();
    expect_key(s, "fedchaos-manifest");
    int version = 0;
    if (!(s >> version) || version != 1) bad("unsupported version");
  }
  {
    auto s = next_line();
    expect_key(s, "seed");
    if (!(s >> m.seed)) bad("bad seed");
  }
  {
    auto s = next_line();
    expect_key(s, "dataset_rows");
    if (!(s >> m.dataset_rows)) bad("bad dataset_rows");
  }
  std::size_t count = 0;
  {
    auto s = next_line();
    expect_key(s, "participants");
    if (!(s >> count)) bad("bad participant count");
  }
  auto read_rows = [&](const std::string& tag) {
    auto s = next_line();
    expect_key(s, tag);
    std::vector<std::size_t> rows;
    std::size_t r = 0;
    while (s >> r) rows.push_back(r);
    if (!s.eof()) bad("bad row index in '" + tag + "'");
    return rows;
  };
  for (std::size_t i = 0; i < count; ++i) {
    auto s = next_line();
    expect_key(s, "participant");
    ManifestEntry e;
    e.train = read_rows("train");
    e.val = read_rows("val");
    e.test = read_rows("test");
    m.participants.push_back(std::move(e));
  }
  std::vector<bool> seen(m.dataset_rows, false);
  for (const auto& e : m.participants) {
    for (const auto* rows : {&e.train, &e.val, &e.test}) {
      for (std::size_t r : *rows) {
        if (r >= m.dataset_rows || seen[r]) bad("row " + std::to_string(r) + " out of range or repeated");
        seen[r] = true;
      }
    }
  }
  return m;
}

}  // namespace fedchaos
