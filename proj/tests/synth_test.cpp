// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "golden.hpp"
#include "peepkit/error.hpp"
#include "peepkit/synth.hpp"
#include "peepkit/zoo.hpp"

namespace peepkit {
namespace {

double ratio_at_last(const std::vector<double>& victim, const std::vector<double>& ref) {
  const std::size_t n = std::min(victim.size(), ref.size());
  return victim[n - 1] / ref[n - 1];
}

bool relation_holds(const std::string& rel, double ratio) {
  if (rel == "higher") return ratio > 1.0;
  if (rel == "lower") return ratio < 1.0;
  if (rel == "much-higher") return ratio >= 1.10;
  if (rel == "similar") return ratio < 1.10;
  return true;
}

TEST(Synth, MobileNetForwardCalibration) {
  const MetricSeries s = synth_series(load_zoo_model("MobileNet-V1"), p100(), {1});
  ASSERT_TRUE(s.fpt_ms);
  EXPECT_NEAR(s.fpt_ms->front(), 29.4, 0.05);
}



TEST(Synth, GoldenTrendsOnBothProfiles) {
  const auto rows = test::load_golden();
  for (const HardwareProfile& hw : {p100(), p4000()}) {
    const auto b = default_batch_sizes(hw);
    for (const auto& row : rows) {
      const TrendSummary t = extract_trends(synth_series(load_zoo_model(row.model), hw, b));
      const std::string where = row.model + " on " + hw.id;
      if (row.bpfp_trend != "*") EXPECT_EQ(to_string(t.bpfp_trend), row.bpfp_trend) << where;
      if (row.mfp_growth != "*") EXPECT_EQ(to_string(t.mfp_growth), row.mfp_growth) << where;
      if (row.tp_trend != "*") EXPECT_EQ(to_string(t.tp_trend), row.tp_trend) << where;
      if (row.epf_trend != "*") EXPECT_EQ(to_string(t.epf_trend), row.epf_trend) << where;
      if (row.group != "NonCompact") EXPECT_NE(t.bpfp_trend, BpfpTrend::Decreasing) << where;
    }
  }
}


TEST(Synth, RelationsToGroupReference) {
  const auto b = default_batch_sizes(p100());
  for (const auto& row : test::load_golden()) {
    const std::string ref_name(reference_model(parse_group(row.group)));
    if (ref_name == row.model) continue;
    const MetricSeries v = synth_series(load_zoo_model(row.model), p100(), b);
    const MetricSeries r = synth_series(load_zoo_model(ref_name), p100(), b);
    EXPECT_TRUE(relation_holds(row.mfp_vs_ref, ratio_at_last(*v.mfp_mib, *r.mfp_mib))) << row.model;
    EXPECT_TRUE(relation_holds(row.epf_vs_ref, ratio_at_last(*v.epf_mj, *r.epf_mj))) << row.model;
    EXPECT_TRUE(relation_holds(row.tp_vs_ref, ratio_at_last(*v.tp_fps, *r.tp_fps))) << row.model;
  }
}

TEST(Synth, MobileNetV2SlowerForwardThanV1) {
  const auto b = default_batch_sizes(p100());
  const auto v1 = synth_series(load_zoo_model("MobileNet-V1"), p100(), b);
  const auto v2 = synth_series(load_zoo_model("MobileNet-V2"), p100(), b);
  EXPECT_GT(ratio_at_last(*v2.fpt_ms, *v1.fpt_ms), 1.0);
}

TEST(Synth, SameSeedSameFingerprint) {
  const auto arch = load_zoo_model("ShuffleNet-V1");
  const auto b = default_batch_sizes(p4000());
  EXPECT_EQ(synth_fingerprint(arch, p4000(), b, 7), synth_fingerprint(arch, p4000(), b, 7));
  EXPECT_NE(synth_fingerprint(arch, p4000(), b, 7), synth_fingerprint(arch, p4000(), b, 8));
}

TEST(Synth, JitterStaysInsideItsBand) {
  const auto arch = load_zoo_model("MobileNet-V1");
  const auto b = default_batch_sizes(p100());
  const auto clean = synth_reference(arch, p100(), b);
  const auto noisy = synth_fingerprint(arch, p100(), b, 3);
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_NEAR((*noisy.series.fpt_ms)[i] / (*clean.series.fpt_ms)[i], 1.0, 0.05 + 1e-12);
  }
  EXPECT_NEAR(noisy.kernel_mix->gemv2t_pct / clean.kernel_mix->gemv2t_pct, 1.0, 0.01 + 1e-12);
}

TEST(Synth, DenseNetStopsAtOutOfMemory) {
  const MetricSeries s = synth_series(load_zoo_model("DenseNet-121"), p100(), default_batch_sizes(p100()));
  ASSERT_TRUE(s.out_of_memory_at);
  EXPECT_EQ(*s.out_of_memory_at, 32);
  EXPECT_EQ(s.batch_sizes.back(), 16);
  EXPECT_EQ(s.mfp_mib->size(), s.batch_sizes.size());
}

TEST(Synth, ObservedMixWinsOverBand) {
  const ArchitectureSpec arch = load_zoo_model("MobileNet-V1");
  ASSERT_TRUE(arch.observed_kernel_mix);
  EXPECT_EQ(synth_kernel_mix(arch), *arch.observed_kernel_mix);
}

TEST(Synth, KernelMixBandCentres) {
  const KernelMix mb = synth_kernel_mix(load_zoo_model("MobileNet-V1"));
  EXPECT_GT(mb.gemv_total(), 60.0);
  EXPECT_LT(mb.gemmk1_pct, 1.0);
  const KernelMix sh = synth_kernel_mix(load_zoo_model("ShuffleNet-V1"));
  EXPECT_GE(sh.gemmk1_pct, 3.0);
  const KernelMix an = synth_kernel_mix(load_zoo_model("AlexNet"));
  EXPECT_EQ(an.total(), 0.0);
}

TEST(Synth, GroupConvolutionInterpolatesBetweenBands) {
  const auto base = load_zoo_model("MobileNet-V1");
  ArchitectureSpec grouped = base;
  grouped.observed_kernel_mix.reset();
  for (auto& l : grouped.layers) {
    if (l.kind == LayerKind::DepthwiseConv) {
      l.kind = LayerKind::GroupConv;
      l.groups = l.M / 4;
    }
  }
  grouped.components.erase(Component::DWConv);
  grouped.components.insert(Component::GroupConv);
  ArchitectureSpec plain = base;
  plain.observed_kernel_mix.reset();
  const KernelMix dw = synth_kernel_mix(plain);
  const KernelMix g4 = synth_kernel_mix(grouped);
  EXPECT_LT(g4.gemv_total(), dw.gemv_total());
  EXPECT_GT(g4.gemv_total(), 0.0);
}

TEST(Synth, UnknownComponentSetHasNoBand) {
  ArchitectureSpec arch = load_zoo_model("AlexNet");
  arch.observed_kernel_mix.reset();
  arch.components = {Component::DenseBlock, Component::FireModule};
  EXPECT_THROW(synth_kernel_mix(arch), ValidationError);
}

TEST(Hardware, JsonRoundTripAndValidation) {
  const HardwareProfile hw = hardware_from_json(to_json(p4000()));
  EXPECT_EQ(hw.id, "p4000");
  EXPECT_EQ(hw.sm_count, p4000().sm_count);
  EXPECT_DOUBLE_EQ(hw.global_memory_mib, p4000().global_memory_mib);
  EXPECT_THROW(hardware_from_json(R"({"id":"x"})"), ValidationError);
  HardwareProfile bad = p100();
  bad.sm_count = 0;
  EXPECT_THROW(validate(bad), ValidationError);
  EXPECT_EQ(resolve_hardware("p100").id, p100().id);
  EXPECT_THROW(resolve_hardware("/nonexistent/hw.json"), Error);
}

TEST(Hardware, DefaultSweeps) {
  EXPECT_EQ(default_batch_sizes(p100()), (std::vector<std::int64_t>{1, 4, 8, 16, 32, 56}));
  EXPECT_EQ(default_batch_sizes(p4000()), (std::vector<std::int64_t>{1, 4, 8, 14, 28}));
}

}  // namespace
}  // namespace peepkit
