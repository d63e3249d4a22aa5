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

#include "fedchaos/data.h"

#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "gtest/gtest.h"
#include "fedchaos/error.h"
#include "fedchaos/imputation.h"
#include "fedchaos/partition.h"
#include "test_util.h"

namespace fedchaos {
namespace {

using testing::Blobs;

CsvOptions LabelIs(std::string column) {
  CsvOptions o;
  o.label_column = std::move(column);
  return o;
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kIo;
}

TEST(ParseCsvTest, NumericColumns) {
  const Dataset ds = ParseCsv("a,b,y\n1,2,0\n3,4,1\n", LabelIs("y"));
  EXPECT_EQ(ds.feature_names, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(ds.features, Tensor2(2, 2, std::vector<double>{1, 2, 3, 4}));
  EXPECT_EQ(ds.labels, (Labels{0, 1}));
  EXPECT_DOUBLE_EQ(ds.PositiveRate(), 0.5);
}

TEST(ParseCsvTest, MissingCellGetsColumnMedian) {
  const Dataset ds = ParseCsv("a,b,y\n1,?,0\n5,2,1\n3,8,1\n9,4,0\n", LabelIs("y"));
  EXPECT_EQ(ds.features(0, 1), 4.0);  // median of 2, 8, 4
}

TEST(ParseCsvTest, RowsWithMissingLabelAreDropped) {
  const Dataset ds = ParseCsv("a,y\n1,0\n2,?\n3,1\n", LabelIs("y"));
  EXPECT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.features(1, 0), 3.0);
}

TEST(ParseCsvTest, CategoricalColumnsCodedInSortedOrder) {
  const Dataset ds = ParseCsv("c,y\nred,ckd\nblue,notckd\ngreen,ckd\n", LabelIs("y"));
  EXPECT_EQ(ds.features, Tensor2(3, 1, std::vector<double>{2, 0, 1}));
  EXPECT_EQ(ds.labels, (Labels{0, 1, 0}));  // sorted last is positive
  CsvOptions o = LabelIs("y");
  o.positive_label = "ckd";
  EXPECT_EQ(ParseCsv("c,y\nred,ckd\nblue,notckd\n", o).labels, (Labels{1, 0}));
}

TEST(ParseCsvTest, QuotedFieldsAndDroppedColumns) {
  CsvOptions o = LabelIs("y");
  o.drop_columns = {"id"};
  const Dataset ds = ParseCsv("id,\"a, b\",y\n7,\"1.5\",1\n8, 2 ,0\n", o);
  EXPECT_EQ(ds.feature_names, (std::vector<std::string>{"a, b"}));
  EXPECT_EQ(ds.features(0, 0), 1.5);
  EXPECT_EQ(ds.features(1, 0), 2.0);
}

TEST(ParseCsvTest, Errors) {
  EXPECT_EQ(CodeOf([] { ParseCsv("a,y\n1,2\n", LabelIs("y")); }), ErrorCode::kSchema);
  EXPECT_EQ(CodeOf([] { ParseCsv("a,y\n1,0,3\n", LabelIs("y")); }), ErrorCode::kFormat);
  EXPECT_EQ(CodeOf([] { ParseCsv("a,y\n1,0\n", LabelIs("z")); }), ErrorCode::kSchema);
  EXPECT_EQ(CodeOf([] { ParseCsv("a,y\n1,a\n2,b\n3,c\n", LabelIs("y")); }), ErrorCode::kSchema);
}

TEST(ParseCsvTest, FormatErrorNamesTheLine) {
  try {
    ParseCsv("a,y\n1,0\n2,1\n3\n", LabelIs("y"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
}

TEST(LoadCsvTest, BreastCancerShape) {
  const Dataset ds = LoadCsv(testing::BreastCancerCsv(), LabelIs("diagnosis"));
  EXPECT_EQ(ds.size(), 569u);
  EXPECT_EQ(ds.features.cols(), 30u);
  EXPECT_EQ(std::accumulate(ds.labels.begin(), ds.labels.end(), 0), 212);
  EXPECT_EQ(ds.FeatureIndex("mean radius"), 0u);
  EXPECT_EQ(CodeOf([&] { ds.FeatureIndex("no such column"); }), ErrorCode::kSchema);
}

TEST(StandardizeTest, TrainColumnsHaveZeroMeanUnitStd) {
  const Dataset train = Blobs(50, 3, 1);
  const auto out = Standardize(train, {});
  for (std::size_t c = 0; c < 3; ++c) {
    double mean = 0.0, sq = 0.0;
    for (std::size_t r = 0; r < 50; ++r) mean += out.train.features(r, c);
    mean /= 50;
    for (std::size_t r = 0; r < 50; ++r) sq += std::pow(out.train.features(r, c) - mean, 2);
    EXPECT_LE(std::abs(mean), 1e-9);
    EXPECT_NEAR(std::sqrt(sq / 50), 1.0, 1e-9);
  }
}

TEST(StandardizeTest, OtherSplitsUseTrainStatistics) {
  Dataset train = ParseCsv("a,y\n0,0\n2,1\n", LabelIs("y"));
  Dataset test = ParseCsv("a,y\n11,0\n", LabelIs("y"));
  const auto out = Standardize(train, {test});
  EXPECT_EQ(out.others[0].features(0, 0), 10.0);  // (11 - 1) / 1
}

TEST(StandardizeTest, ConstantColumnIsCentered) {
  Dataset train = ParseCsv("a,b,y\n3,1,0\n3,2,1\n", LabelIs("y"));
  Dataset test = ParseCsv("a,b,y\n5,1,0\n", LabelIs("y"));
  const auto out = Standardize(train, {test});
  EXPECT_EQ(out.train.features(0, 0), 0.0);
  EXPECT_EQ(out.train.features(1, 0), 0.0);
  EXPECT_EQ(out.others[0].features(0, 0), 2.0);
}

std::size_t CountRows(const PartitionPlan& plan) {
  std::size_t n = 0;
  for (const auto& s : plan.shares) n += s.size();
  return n;
}

void ExpectExactPartition(const PartitionPlan& plan, std::size_t n_rows) {
  std::set<std::size_t> seen;
  for (const auto& s : plan.shares) {
    for (std::size_t r : s) {
      ASSERT_LT(r, n_rows);
      ASSERT_TRUE(seen.insert(r).second) << "row " << r << " assigned twice";
    }
  }
  EXPECT_EQ(seen.size(), n_rows);
  EXPECT_EQ(CountRows(plan), n_rows);
}

TEST(PartitionTest, EvenShares) {
  const Dataset ds = Blobs(100, 2, 1);
  const PartitionPlan plan = Partition(ds, PartitionSpec{}, 5);
  for (const auto& s : plan.shares) EXPECT_EQ(s.size(), 20u);
  const PartitionPlan odd = Partition(Blobs(103, 2, 1), PartitionSpec{}, 5);
  std::vector<std::size_t> sizes;
  for (const auto& s : odd.shares) sizes.push_back(s.size());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{21, 21, 21, 20, 20}));
}

TEST(PartitionTest, ProportionsWithRoundedPercentages) {
  const Dataset ds = Blobs(569, 2, 1);
  PartitionSpec spec;
  spec.kind = PartitionSpec::Kind::kProportions;
  spec.proportions = {0.52, 0.05, 0.05, 0.14, 0.25};
  const PartitionPlan plan = Partition(ds, spec, 5);
  std::vector<std::size_t> sizes;
  for (const auto& s : plan.shares) sizes.push_back(s.size());
  // llround: 296, 28, 28, 80, 142 = 574; the largest share absorbs -5.
  EXPECT_EQ(sizes, (std::vector<std::size_t>{291, 28, 28, 80, 142}));
  ExpectExactPartition(plan, 569);
}

TEST(PartitionTest, ProportionsMustSumToOne) {
  PartitionSpec spec;
  spec.kind = PartitionSpec::Kind::kProportions;
  spec.proportions = {0.5, 0.3, 0.1};
  EXPECT_EQ(CodeOf([&] { spec.Validate(3); }), ErrorCode::kConfiguration);
  spec.proportions = {0.5, 0.5};
  EXPECT_EQ(CodeOf([&] { spec.Validate(3); }), ErrorCode::kConfiguration);
}

TEST(PartitionTest, ForcedSmallHasSmallParticipants) {
  const Dataset ds = Blobs(569, 2, 1);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    PartitionSpec spec;
    spec.kind = PartitionSpec::Kind::kForcedSmall;
    spec.seed = seed;
    const PartitionPlan plan = Partition(ds, spec, 5);
    std::size_t small = 0;
    for (const auto& s : plan.shares) {
      EXPECT_GE(s.size(), kMinShareRows);
      if (s.size() <= 0.10 * 569) ++small;
    }
    EXPECT_GE(small, 2u);
    ExpectExactPartition(plan, 569);
  }
}

TEST(PartitionTest, ExactPartitionForEverySpec) {
  const Dataset ds = Blobs(300, 2, 1);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    PartitionSpec even;
    even.seed = seed;
    ExpectExactPartition(Partition(ds, even, 4), 300);
    PartitionSpec prop;
    prop.kind = PartitionSpec::Kind::kProportions;
    prop.proportions = {0.1, 0.2, 0.3, 0.4};
    prop.seed = seed;
    ExpectExactPartition(Partition(ds, prop, 4), 300);
    PartitionSpec skew = even;
    skew.label_skew = std::vector<double>{0.2, 0.3, 0.4, 0.45};
    ExpectExactPartition(Partition(ds, skew, 4), 300);
  }
}

TEST(PartitionTest, SameSeedSamePlan) {
  const Dataset ds = Blobs(200, 2, 1);
  PartitionSpec a;
  a.seed = 5;
  EXPECT_EQ(Partition(ds, a, 4).shares, Partition(ds, a, 4).shares);
  PartitionSpec b = a;
  b.seed = 6;
  EXPECT_NE(Partition(ds, a, 4).shares, Partition(ds, b, 4).shares);
}

TEST(PartitionTest, LabelSkewHitsTargets) {
  const Dataset ds = Blobs(300, 2, 1);  // 100 positives
  PartitionSpec spec;
  spec.label_skew = std::vector<double>{0.1, 0.2, 0.5, 0.53};
  const PartitionPlan plan = Partition(ds, spec, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    double pos = 0;
    for (std::size_t r : plan.shares[i]) pos += ds.labels[r];
    EXPECT_NEAR(pos / plan.shares[i].size(), (*spec.label_skew)[i], 0.05);
  }
}

TEST(PartitionTest, InfeasibleLabelSkewIsFeasibilityError) {
  const Dataset ds = Blobs(300, 2, 1);  // one third positive
  PartitionSpec spec;
  spec.label_skew = std::vector<double>{0.9, 0.9, 0.9};
  try {
    Partition(ds, spec, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFeasibility);
    EXPECT_NE(std::string(e.what()).find("positives"), std::string::npos);
  }
}

TEST(PartitionTest, TooFewRowsIsFeasibilityError) {
  EXPECT_EQ(CodeOf([] { Partition(Blobs(40, 2, 1), PartitionSpec{}, 5); }),
            ErrorCode::kFeasibility);
}

TEST(SplitTvtTest, DefaultRatios) {
  Labels y(100);
  for (std::size_t i = 0; i < 100; ++i) y[i] = i % 4 == 0;
  const SplitIndices s = SplitTvt(y, SplitRatios{}, 3);
  EXPECT_EQ(s.train.size(), 70u);
  EXPECT_EQ(s.val.size(), 15u);
  EXPECT_EQ(s.test.size(), 15u);
  std::set<std::size_t> all(s.train.begin(), s.train.end());
  all.insert(s.val.begin(), s.val.end());
  all.insert(s.test.begin(), s.test.end());
  EXPECT_EQ(all.size(), 100u);
}

TEST(SplitTvtTest, StratifiedTrainRate) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    Labels y(113);
    for (auto& v : y) v = rng() % 3 == 0;
    const double rate = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
    const SplitIndices s = SplitTvt(y, SplitRatios{}, seed);
    double pos = 0;
    for (std::size_t i : s.train) pos += y[i];
    EXPECT_LE(std::abs(pos - rate * s.train.size()), 1.0 + 1e-9);
  }
}

TEST(SplitTvtTest, SameSeedSameSplit) {
  Labels y(60, 0);
  for (std::size_t i = 0; i < 20; ++i) y[i] = 1;
  const SplitIndices a = SplitTvt(y, SplitRatios{}, 9), b = SplitTvt(y, SplitRatios{}, 9);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
}

TEST(SplitTvtTest, SingleClassFallsBackToUnstratified) {
  const SplitIndices s = SplitTvt(Labels(20, 0), SplitRatios{}, 1);
  EXPECT_EQ(s.train.size() + s.val.size() + s.test.size(), 20u);
}

TEST(ManifestTest, RoundTripAndMaterialize) {
  const Dataset ds = Blobs(120, 3, 4);
  PartitionSpec spec;
  spec.seed = 4;
  const Manifest m = MakeManifest(ds, Partition(ds, spec, 3), SplitRatios{}, 4);
  std::stringstream text;
  WriteManifest(text, m, ds);
  const Manifest back = ReadManifest(text);
  EXPECT_EQ(back.seed, 4u);
  EXPECT_EQ(back.dataset_rows, 120u);
  ASSERT_EQ(back.participants.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.participants[i].train, m.participants[i].train);
    EXPECT_EQ(back.participants[i].test, m.participants[i].test);
  }
  const auto parts = Materialize(ds, back);
  for (const auto& p : parts) {
    EXPECT_DOUBLE_EQ(p.size_fraction, p.size() / 120.0);
    double pos = 0;
    for (const Dataset* split : {&p.train, &p.val, &p.test}) {
      pos += std::accumulate(split->labels.begin(), split->labels.end(), 0.0);
    }
    EXPECT_DOUBLE_EQ(p.positive_rate, pos / p.size());
  }
}

TEST(ManifestTest, RejectsDuplicateRows) {
  std::stringstream text(
      "fedchaos-manifest 1\nseed 1\ndataset_rows 10\nparticipants 1\n"
      "participant 1 size 3 size_frac 0.3 pos_rate 0\ntrain 0 1\nval 1\ntest 2\n");
  EXPECT_THROW(ReadManifest(text), Error);
}

ParticipantData Participant(const std::string& csv) {
  ParticipantData p;
  p.train = ParseCsv(csv, LabelIs("y"));
  p.val = p.train;
  p.test = p.train;
  return p;
}

TEST(ImputationTest, DonorDistribution) {
  ParticipantData donor = Participant("a,b,y\n1,5,0\n2,5,1\n3,5,0\n");
  const FeatureDistribution d = ComputeFeatureDistribution(donor, "a");
  EXPECT_EQ(d.feature, "a");
  EXPECT_DOUBLE_EQ(d.mean, 2.0);
  EXPECT_NEAR(d.stddev, 0.816496580927726, 1e-15);
  EXPECT_EQ(d.n, 3u);
  EXPECT_EQ(ComputeFeatureDistribution(donor, "b").stddev, 0.0);
}

TEST(ImputationTest, DonorValAndTestAreNeverRead) {
  ParticipantData donor = Participant("a,y\n1,0\n2,1\n3,0\n");
  donor.val.features(0, 0) = 1e300;
  donor.test.features(1, 0) = std::nan("");
  const FeatureDistribution d = ComputeFeatureDistribution(donor, "a");
  EXPECT_DOUBLE_EQ(d.mean, 2.0);
}

TEST(ImputationTest, MaskThenImputeRestoresLayout) {
  const ParticipantData original = Participant("a,b,c,y\n1,2,3,0\n4,5,6,1\n");
  const ParticipantData masked = MaskFeature(original, "b");
  EXPECT_EQ(masked.train.feature_names, (std::vector<std::string>{"a", "c"}));
  ASSERT_EQ(masked.imputed_features.size(), 1u);
  EXPECT_FALSE(masked.imputed_features[0].completed);

  const ParticipantData restored = ImputeMissing(masked, {"b", 3.0, 1.0, 10});
  EXPECT_EQ(restored.train.feature_names, original.train.feature_names);
  for (const Dataset* split : {&restored.train, &restored.val, &restored.test}) {
    for (std::size_t r = 0; r < 2; ++r) {
      EXPECT_EQ(split->features(r, 1), 3.0);
      EXPECT_EQ(split->features(r, 0), original.train.features(r, 0));
      EXPECT_EQ(split->features(r, 2), original.train.features(r, 2));
    }
  }
  EXPECT_TRUE(restored.imputed_features[0].completed);
  EXPECT_EQ(restored.imputed_features[0].index, 1u);
}

TEST(ImputationTest, UnknownFeatureIsSchemaError) {
  const ParticipantData p = Participant("a,y\n1,0\n");
  EXPECT_EQ(CodeOf([&] { MaskFeature(p, "zzz"); }), ErrorCode::kSchema);
  EXPECT_EQ(CodeOf([&] { ImputeMissing(p, {"zzz", 1.0, 0.0, 1}); }), ErrorCode::kSchema);
}

TEST(ImputationTest, EncryptedShareRoundTrip) {
  Rng rng(3);
  std::normal_distribution<double> normal(0.0, 100.0);
  for (int i = 0; i < 100; ++i) {
    const FeatureDistribution d{"feature " + std::to_string(i), normal(rng),
                                std::abs(normal(rng)), rng() % 1000 + 1};
    const ChaosKey key{3.8, 0.1 + 0.008 * i, 1000};
    EXPECT_EQ(ReceiveDistribution(ShareDistributionEncrypted(d, key), key), d);
  }
  const FeatureDistribution empty{"", 1.5, 0.5, 2};
  EXPECT_EQ(ReceiveDistribution(ShareDistributionEncrypted(empty, ChaosKey{}), ChaosKey{}), empty);
}

TEST(ImputationTest, WrongKeyFailsToParse) {
  const FeatureDistribution d{"mean radius", 14.1, 3.5, 91};
  const CipherBlob blob = ShareDistributionEncrypted(d, {3.8, 0.3, 1000});
  EXPECT_THROW(ReceiveDistribution(blob, {3.8, 0.31, 1000}), Error);
}

TEST(ImputationTest, BlobLengthDependsOnlyOnName) {
  const ChaosKey key;
  EXPECT_EQ(ShareDistributionEncrypted({"abc", 1.0, 2.0, 3}, key).length(),
            ShareDistributionEncrypted({"xyz", -1e9, 0.0, 999999}, key).length());
  EXPECT_EQ(ShareDistributionEncrypted({"abc", 1.0, 2.0, 3}, key).length(), 4u + 3 + 8 + 8 + 8);
}

TEST(ImputationTest, DefaultDonorIsLargestOther) {
  std::vector<ParticipantData> ps(3);
  ps[0] = Participant("a,y\n1,0\n2,1\n");
  ps[1] = Participant("a,y\n1,0\n2,1\n3,1\n");
  ps[2] = Participant("a,y\n1,0\n2,1\n3,1\n4,0\n");
  EXPECT_EQ(SelectDonor(ps, 0), 2u);
  EXPECT_EQ(SelectDonor(ps, 2), 1u);
}

}  // namespace
}  // namespace fedchaos
