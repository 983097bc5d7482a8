// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "golden.hpp"
#include "peepkit/classifier.hpp"
#include "peepkit/error.hpp"
#include "peepkit/synth.hpp"
#include "peepkit/zoo.hpp"

namespace peepkit {
namespace {

using C = Component;
using ::testing::ElementsAre;
using ::testing::UnorderedElementsAre;

const std::vector<std::int64_t> kP100{1, 4, 8, 16, 32, 56};

Fingerprint mix_only(KernelMix m) {
  Fingerprint fp;
  fp.kernel_mix = m;
  return fp;
}

Fingerprint with_column(Fingerprint fp, std::optional<std::vector<double>> MetricSeries::*col,
                        std::vector<double> v, std::vector<std::int64_t> b = kP100) {
  fp.series.batch_sizes = std::move(b);
  fp.series.*col = std::move(v);
  return fp;
}

bool rules_documented(const std::vector<Evidence>& ev) {
  const auto& rules = documented_rules();
  return std::all_of(ev.begin(), ev.end(), [&](const Evidence& e) {
    return std::find(rules.begin(), rules.end(), e.rule) != rules.end();
  });
}

TEST(Components, PublishedExamples) {
  EXPECT_EQ(predict_components({59.23, 30.55, 0.63}), (ComponentSet{C::DWConv, C::PWConv}));
  EXPECT_EQ(predict_components({36.53, 5.64, 9.66}),
            (ComponentSet{C::AsymmetricFilterDecomposition, C::ResidualSkip, C::Branching}));
  EXPECT_EQ(predict_components({0, 0, 0}), (ComponentSet{C::Branching}));
}

TEST(Components, DenseBlockRowAndEvidence) {
  std::vector<Evidence> ev;
  const ComponentSet c = predict_components({18.19, 3.66, 7.32}, {}, &ev);
  EXPECT_TRUE(c.count(C::DenseBlock));
  ASSERT_FALSE(ev.empty());
  EXPECT_TRUE(rules_documented(ev));
}

TEST(Group, MobileNetWithConstantThroughput) {
  const auto fp = with_column(mix_only({59.23, 30.55, 0.63}), &MetricSeries::tp_fps, {34, 34, 34, 34, 34, 34});
  EXPECT_EQ(predict_group(fp).group, Group::MobileNet);
}

TEST(Group, DenseNetFromExponentialMemory) {
  std::vector<double> mfp;
  for (auto b : kP100) mfp.push_back(1000.0 * std::pow(1.12, static_cast<double>(b - 1)));
  const auto fp = with_column(mix_only({18.19, 3.66, 7.32}), &MetricSeries::mfp_mib, mfp);
  EXPECT_EQ(predict_group(fp).group, Group::DenseNet);
}

TEST(Group, DecreasingBpfpIsNonCompactForAnyMix) {
  Fingerprint fp = with_column(mix_only({59.23, 30.55, 0.63}), &MetricSeries::fpt_ms, {10, 30, 50, 70, 90, 100});
  fp.series.bpt_ms = std::vector<double>{8, 18, 25, 30, 36, 40};
  EXPECT_EQ(predict_group(fp).group, Group::NonCompact);
  fp.kernel_mix.reset();
  EXPECT_EQ(predict_group(fp).group, Group::NonCompact);
}

TEST(Group, ShuffleNetFromGemmk1) {
  EXPECT_EQ(predict_group(mix_only({45.37, 29.50, 4.39})).group, Group::ShuffleNet);
  EXPECT_EQ(predict_group(mix_only({59.23, 30.55, 0.63})).group, Group::MobileNet);
}

TEST(Group, KernelWinsOverThroughputAndRecordsDisagreement) {
  const auto fp = with_column(mix_only({59.23, 30.55, 0.63}), &MetricSeries::tp_fps, {51, 64, 71, 76, 79, 79});
  const GroupDecision d = predict_group(fp);
  EXPECT_EQ(d.group, Group::MobileNet);
  EXPECT_TRUE(std::any_of(d.evidence.begin(), d.evidence.end(),
                          [](const Evidence& e) { return e.rule == "group.case1.disagreement"; }));
}

TEST(Group, InceptionFromLowTotal) {
  EXPECT_EQ(predict_group(mix_only({5.12, 0.03, 3.69})).group, Group::InceptionNet);
  EXPECT_EQ(predict_group(mix_only({0.18, 0.18, 0.05})).group, Group::InceptionNet);
}

TEST(Group, MissingEvidenceNamesTheChannel) {
  try {
    predict_group(mix_only({0, 0, 0}));
    FAIL();
  } catch (const InsufficientEvidence& e) {
    EXPECT_EQ(e.channel(), "series");
  }
  try {
    predict_group(mix_only({36.53, 5.64, 9.66}));
    FAIL();
  } catch (const InsufficientEvidence& e) {
    EXPECT_EQ(e.channel(), "series");
  }
  Fingerprint no_mix = with_column(Fingerprint{}, &MetricSeries::mfp_mib, {1, 2, 3, 4, 5, 6});
  EXPECT_THROW(predict_group(no_mix), InsufficientEvidence);
}

TEST(Model, InceptionPairIsAmbiguous) {
  const PredictionReport r = predict_model(mix_only({5.12, 0.03, 3.69}), Group::InceptionNet, nullptr);
  EXPECT_THAT(r.candidates, UnorderedElementsAre("Inception-V2", "SE-BN-Inception"));
  EXPECT_TRUE(r.ambiguous);
  const PredictionReport g = predict_model(mix_only({0.18, 0.18, 0.05}), Group::InceptionNet, nullptr);
  EXPECT_THAT(g.candidates, ElementsAre("GoogLeNet"));
  EXPECT_FALSE(g.ambiguous);
}

TEST(Model, WideSqueezeNextV5) {
  const std::vector<std::int64_t> b{1, 4, 8, 16, 32, 56};
  const Fingerprint ref =
      with_column(mix_only({36.53, 5.64, 9.66}), &MetricSeries::mfp_mib, {900, 1000, 1100, 1300, 1700, 2000}, b);
  const Fingerprint victim =
      with_column(mix_only({21.49, 4.94, 8.35}), &MetricSeries::mfp_mib, {950, 1080, 1200, 1450, 1880, 2200}, b);
  const PredictionReport r = predict_model(victim, Group::SqueezeNext, &ref);
  EXPECT_THAT(r.candidates, ElementsAre("2.0-SqNxt-23v5"));
}

TEST(Model, SqueezeNetV11FromLowerEnergy) {
  const Fingerprint ref = with_column(mix_only({0, 0, 0}), &MetricSeries::epf_mj, {10, 9, 8, 7, 6, 5});
  const Fingerprint victim = with_column(mix_only({0, 0, 0}), &MetricSeries::epf_mj, {7, 6, 5, 4.5, 4, 3.5});
  EXPECT_THAT(predict_model(victim, Group::SqueezeNet, &ref).candidates, ElementsAre("SqueezeNet-V1.1"));
  EXPECT_THAT(predict_model(ref, Group::SqueezeNet, &ref).candidates, ElementsAre("SqueezeNet-V1.0"));
}

TEST(Model, MissingReferenceIsAnError) {
  EXPECT_THROW(predict_model(mix_only({59.23, 30.55, 0.63}), Group::MobileNet, nullptr), ValidationError);
}

TEST(Classify, SynthesizedRoundTrips) {
  const ReferenceSource refs = synth_reference_source(default_zoo_dir());
  const auto mb = classify(synth_reference(load_zoo_model("MobileNet-V1"), p100(), kP100), refs);
  EXPECT_THAT(mb.candidates, ElementsAre("MobileNet-V1"));
  EXPECT_FALSE(mb.ambiguous);
  const auto dn = classify(synth_reference(load_zoo_model("DenseNet-121"), p100(), kP100), refs);
  EXPECT_THAT(dn.candidates, ElementsAre("DenseNet-121"));
  EXPECT_TRUE(rules_documented(dn.evidence));
}

TEST(Classify, EmptyFingerprintIsInsufficient) {
  try {
    classify(Fingerprint{}, synth_reference_source(default_zoo_dir()));
    FAIL();
  } catch (const InsufficientEvidence& e) {
    EXPECT_EQ(e.channel(), "series");
  }
}

TEST(Classify, GoldenFingerprints) {
  const auto rows = test::load_golden();
  const ReferenceSource refs = test::golden_reference_source(rows);
  for (const auto& row : rows) {
    const PredictionReport r = classify(test::golden_fingerprint(row), refs);
    EXPECT_EQ(to_string(r.group), row.group) << row.model;
    if (row.group == "InceptionNet" && row.model != "GoogLeNet") {
      EXPECT_THAT(r.candidates, UnorderedElementsAre("Inception-V2", "SE-BN-Inception"));
    } else {
      EXPECT_THAT(r.candidates, ElementsAre(row.model));
    }
  }
}

TEST(Report, JsonAndTextMentionTheDecision) {
  const auto r = predict_model(mix_only({5.12, 0.03, 3.69}), Group::InceptionNet, nullptr);
  EXPECT_THAT(to_json(r), ::testing::HasSubstr("SE-BN-Inception"));
  EXPECT_THAT(to_text(r), ::testing::HasSubstr("Inception-V2"));
}

TEST(Thresholds, JsonOverridesAndRejectsUnknownKeys) {
  const Thresholds t = thresholds_from_json(R"({"very_high_gemv": 55, "plateau_final_gain": 0.04})");
  EXPECT_DOUBLE_EQ(t.very_high_gemv, 55);
  EXPECT_DOUBLE_EQ(t.trends.plateau_final_gain, 0.04);
  EXPECT_DOUBLE_EQ(t.low_total, 10);
  EXPECT_THROW(thresholds_from_json(R"({"no_such_key": 1})"), ValidationError);
  EXPECT_THROW(thresholds_from_json(R"({"low_total": "ten"})"), ValidationError);
  const Thresholds back = thresholds_from_json(to_json(t));
  EXPECT_DOUBLE_EQ(back.very_high_gemv, 55);
}

TEST(Thresholds, EnvironmentOverride) {
  const auto path = std::filesystem::temp_directory_path() / "peepkit_thresholds_test.json";
  std::ofstream(path) << R"({"low_total": 12})";
  ::setenv("PEEPKIT_THRESHOLDS", path.c_str(), 1);
  EXPECT_DOUBLE_EQ(thresholds_from_environment().low_total, 12);
  ::unsetenv("PEEPKIT_THRESHOLDS");
  EXPECT_DOUBLE_EQ(thresholds_from_environment().low_total, 10);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace peepkit
