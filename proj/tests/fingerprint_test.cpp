// SPDX-License-Identifier: Apache-2.0
#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "peepkit/error.hpp"
#include "peepkit/fingerprint.hpp"

namespace peepkit {
namespace {

using ::testing::HasSubstr;

constexpr const char* kDump =
    "==12345== NVPROF is profiling process 12345\n"
    "==12345== Profiling result:\n"
    "\"Type\",\"Time(%)\",\"Time\",\"Calls\",\"Avg\",\"Min\",\"Max\",\"Name\"\n"
    ",%,ms,,us,us,us,\n"
    "\"GPU activities\",40.00,100.0,10,1.0,1.0,1.0,\"void gemv2T_kernel_val<int, int, float, float>(float)\"\n"
    "\"GPU activities\",19.50,50.0,10,1.0,1.0,1.0,\"void gemv2T_kernel_val<int, int, float, float>(double)\"\n"
    "\"GPU activities\",30.25,75.0,10,1.0,1.0,1.0,\"void gemv2N_kernel_val<float, float>(float, int)\"\n"
    "\"GPU activities\",0.63,1.0,10,1.0,1.0,1.0,\"void gemmk1_kernel<float, 256, 5>(cublasGemmk1Params<float>)\"\n"
    "\"GPU activities\",9.62,20.0,10,1.0,1.0,1.0,\"maxwell_scudnn_128x64_relu_small_nn\"\n"
    "\"API calls\",50.00,20.0,10,1.0,1.0,1.0,\"cudaLaunch gemv2T\"\n";

TEST(ProfilerCsv, SumsMatchingGpuRows) {
  std::vector<std::string> warnings;
  const KernelMix m = parse_profiler_csv(kDump, &warnings);
  EXPECT_DOUBLE_EQ(m.gemv2t_pct, 59.5);
  EXPECT_DOUBLE_EQ(m.gemv2n_pct, 30.25);
  EXPECT_DOUBLE_EQ(m.gemmk1_pct, 0.63);
  EXPECT_TRUE(warnings.empty());
}

TEST(ProfilerCsv, NoKernelRowsGivesZeroWithWarning) {
  std::vector<std::string> warnings;
  const KernelMix m = parse_profiler_csv(
      "\"Time(%)\",\"Name\"\n12.0,\"maxwell_sgemm_128x64_nn\"\n88.0,\"[CUDA memcpy HtoD]\"\n", &warnings);
  EXPECT_EQ(m, KernelMix{});
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_THAT(warnings[0], HasSubstr("kernel mix is zero"));
}

TEST(ProfilerCsv, MalformedRowIsReportedByNumber) {
  try {
    parse_profiler_csv("\"Time(%)\",\"Name\"\n12.0,\"gemv2N\"\nabc,\"gemv2T\"\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_THAT(e.what(), HasSubstr("row 3"));
  }
  EXPECT_THROW(parse_profiler_csv("\"Time(%)\",\"Name\"\n12.0\n"), ValidationError);
  EXPECT_THROW(parse_profiler_csv("\"Calls\",\"Name\"\n"), ValidationError);
  EXPECT_THROW(parse_profiler_csv(""), ValidationError);
}

TEST(ProfilerCsv, SharesAboveOneHundredAreRejected) {
  EXPECT_THROW(parse_profiler_csv("\"Time(%)\",\"Name\"\n70,\"gemv2N\"\n40,\"gemv2T\"\n"), ValidationError);
}

TEST(SplitCsv, QuotedFields) {
  EXPECT_EQ(split_csv_line(R"(a,"b,c","d ""e""",)"),
            (std::vector<std::string>{"a", "b,c", "d \"e\"", ""}));
}

TEST(SeriesCsv, ReadsKnownColumnsCaseInsensitively) {
  const MetricSeries s = parse_series_csv("b,fpt_ms,Mfp_MiB\n1,29.4,733\n4,117,1000\n8,235,1400\n");
  EXPECT_EQ(s.batch_sizes, (std::vector<std::int64_t>{1, 4, 8}));
  ASSERT_TRUE(s.fpt_ms);
  EXPECT_DOUBLE_EQ((*s.fpt_ms)[0], 29.4);
  ASSERT_TRUE(s.mfp_mib);
  EXPECT_FALSE(s.bpt_ms);
}

TEST(SeriesCsv, RejectsBadTables) {
  EXPECT_THROW(parse_series_csv("FPt_ms\n1\n"), ValidationError);
  EXPECT_THROW(parse_series_csv("B,FPt_ms\n4,1\n1,2\n"), ValidationError);
  EXPECT_THROW(parse_series_csv("B,FPt_ms\n1,-3\n"), ValidationError);
}

TEST(KernelMixValidation, Bounds) {
  EXPECT_NO_THROW(validate(KernelMix{59.23, 30.55, 0.63}));
  EXPECT_THROW(validate(KernelMix{-1, 0, 0}), ValidationError);
  EXPECT_THROW(validate(KernelMix{60, 41, 0}), ValidationError);
}

TEST(Fingerprint, NeedsSomeEvidence) {
  EXPECT_THROW(validate(Fingerprint{}), ValidationError);
  Fingerprint fp;
  fp.kernel_mix = KernelMix{};
  EXPECT_NO_THROW(validate(fp));
}

TEST(Fingerprint, JsonRoundTrip) {
  Fingerprint fp;
  fp.kernel_mix = KernelMix{34.53, 5.33, 9.13};
  fp.series.batch_sizes = {1, 4, 8};
  fp.series.fpt_ms = std::vector<double>{1.5, 4.0, 7.25};
  fp.series.mfp_mib = std::vector<double>{600, 700, 800};
  fp.series.out_of_memory_at = 16;
  fp.hardware = "p100";
  EXPECT_EQ(fingerprint_from_json(to_json(fp)), fp);

  Fingerprint bare;
  bare.series.batch_sizes = {1, 2, 4};
  bare.series.tp_fps = std::vector<double>{1, 2, 3};
  EXPECT_EQ(fingerprint_from_json(to_json(bare)), bare);
}

TEST(Fingerprint, JsonErrors) {
  EXPECT_THROW(fingerprint_from_json("{"), ValidationError);
  EXPECT_THROW(fingerprint_from_json("[]"), ValidationError);
  EXPECT_THROW(fingerprint_from_json(R"({"kernel_mix": {"gemv2t_pct": 1}})"), ValidationError);
  EXPECT_THROW(fingerprint_from_json(R"({"series": {"batch_sizes": [1], "FPt_ms": "x"}})"), ValidationError);
}

Fingerprint with_series(std::vector<std::int64_t> b, std::vector<double> mfp) {
  Fingerprint fp;
  fp.series.batch_sizes = std::move(b);
  fp.series.mfp_mib = std::move(mfp);
  return fp;
}

TEST(Compare, Verdicts) {
  const Fingerprint ref = with_series({1, 4, 8, 16}, {100, 100, 100, 100});
  auto verdict = [&](std::vector<double> v) {
    return compare_to_reference(with_series({1, 4, 8, 16}, std::move(v)), ref).at("Mfp").verdict;
  };
  EXPECT_EQ(verdict({120, 120, 120, 120}), Verdict::HigherAtAllB);
  EXPECT_EQ(verdict({80, 80, 80, 80}), Verdict::LowerAtAllB);
  EXPECT_EQ(verdict({103, 97, 105, 95}), Verdict::Equal);
  EXPECT_EQ(verdict({100, 102, 110, 130}), Verdict::HigherAtHighB);
  EXPECT_EQ(verdict({100, 98, 90, 70}), Verdict::LowerAtHighB);
  EXPECT_EQ(verdict({120, 100, 80, 120}), Verdict::Mixed);
}

TEST(Compare, UsesOverlappingBatchSizesOnly) {
  const Fingerprint ref = with_series({1, 4, 8, 16, 32}, {100, 100, 100, 100, 100});
  const auto cmp = compare_to_reference(with_series({4, 14, 32}, {150, 1, 150}), ref).at("Mfp");
  EXPECT_EQ(cmp.batch_sizes, (std::vector<std::int64_t>{4, 32}));
  EXPECT_EQ(cmp.verdict, Verdict::HigherAtAllB);
  EXPECT_THROW(compare_to_reference(with_series({2, 3}, {1, 1}), ref), ValidationError);
}

}  // namespace
}  // namespace peepkit
