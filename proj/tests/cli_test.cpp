// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "peepkit/zoo.hpp"

namespace peepkit {
namespace {

namespace fs = std::filesystem;
using ::testing::HasSubstr;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "peepkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string zoo(const std::string& file) { return (default_zoo_dir() / file).string(); }

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "peepkit_cli_test";
  fs::create_directories(p);
  return p / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

TEST(Cli, StatsPrintsCounts) {
  const Result r = run_cli({"stats", zoo("mobilenet_v1.json")});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_THAT(r.out, HasSubstr("P=4.21M"));
  const Result j = run_cli({"stats", zoo("mobilenet_v1.json"), "--json"});
  EXPECT_EQ(nlohmann::json::parse(j.out).at("name"), "MobileNet-V1");
}

TEST(Cli, SecureReportsOverhead) {
  const Result r = run_cli({"secure", zoo("mobilenet_v1.json"), "--G", "4"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_THAT(r.out, HasSubstr("ΔMc 9.2%"));
  const fs::path out = scratch("secured.json");
  EXPECT_EQ(run_cli({"secure", zoo("mobilenet_v1.json"), "--G", "4", "-o", out.string()}).code, cli::kOk);
  EXPECT_EQ(load_architecture(out).name, "MobileNet-V1-secure-G4");
}

TEST(Cli, EmptyFingerprintIsInsufficientEvidence) {
  const fs::path fp = scratch("empty.json");
  write(fp, R"({"kernel_mix": {"gemv2t_pct": 0, "gemv2n_pct": 0, "gemmk1_pct": 0}})");
  const Result r = run_cli({"classify", fp.string()});
  EXPECT_EQ(r.code, cli::kInsufficientEvidence) << r.err;
  const auto e = nlohmann::json::parse(r.err);
  EXPECT_EQ(e.at("error"), "insufficient-evidence");
  EXPECT_EQ(e.at("channel"), "series");
}

TEST(Cli, UsageAndValidationExitCodes) {
  EXPECT_EQ(run_cli({}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"secure", zoo("mobilenet_v1.json")}).code, cli::kUsage);
  const Result missing = run_cli({"stats", "/nonexistent/arch.json"});
  EXPECT_EQ(missing.code, cli::kValidation);
  EXPECT_EQ(nlohmann::json::parse(missing.err).at("error"), "validation");
  EXPECT_EQ(run_cli({"secure", zoo("alexnet.json"), "--G", "4"}).code, cli::kValidation);
  EXPECT_EQ(run_cli({"--help"}).code, cli::kOk);
}

TEST(Cli, SynthIsDeterministicAndClassifies) {
  const std::vector<std::string> args{"synth", zoo("mobilenet_v1.json"), "--hw", "p100", "--seed", "5"};
  const Result a = run_cli(args), b = run_cli(args);
  EXPECT_EQ(a.code, cli::kOk);
  EXPECT_EQ(a.out, b.out);
  const fs::path fp = scratch("mobilenet_fp.json");
  EXPECT_EQ(run_cli({"synth", zoo("mobilenet_v1.json"), "--hw", "p100", "--batch-sizes", "1,4,8,16",
                     "-o", fp.string()}).code,
            cli::kOk);
  const Result c = run_cli({"classify", fp.string(), "--json"});
  EXPECT_EQ(c.code, cli::kOk) << c.err;
  EXPECT_EQ(nlohmann::json::parse(c.out).at("candidates"), nlohmann::json::array({"MobileNet-V1"}));
}

TEST(Cli, IngestBuildsFingerprint) {
  const fs::path prof = scratch("prof.csv");
  const fs::path series = scratch("series.csv");
  write(prof,
        "\"Type\",\"Time(%)\",\"Time\",\"Calls\",\"Avg\",\"Min\",\"Max\",\"Name\"\n"
        "\"GPU activities\",40.0,1ms,1,1ms,1ms,1ms,\"void gemv2T_kernel_val<float>\"\n"
        "\"GPU activities\",20.0,1ms,1,1ms,1ms,1ms,\"void gemv2N_kernel_val<float>\"\n");
  write(series, "B,FPt_ms,BPt_ms,Mfp_MiB,Tp_fps,EPF_mJ\n1,10,18,600,100,10\n4,40,72,800,100,10\n"
                "8,80,144,1000,100,10\n16,160,288,1400,100,10\n");
  const Result r = run_cli({"ingest", prof.string(), "--series", series.string(), "--hw", "p100"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_THAT(r.out, HasSubstr("p100"));
  EXPECT_THAT(r.out, HasSubstr("40"));
  const Result none = run_cli({"ingest", prof.string() + ".missing"});
  EXPECT_EQ(none.code, cli::kValidation);
}

TEST(Cli, ThresholdsFromEnvironment) {
  const fs::path fp = scratch("mix_only.json");
  write(fp, R"({"kernel_mix": {"gemv2t_pct": 59.23, "gemv2n_pct": 30.55, "gemmk1_pct": 0.63}})");
  const fs::path bad = scratch("bad_thresholds.json");
  write(bad, R"({"not_a_threshold": 1})");
  ::setenv("PEEPKIT_THRESHOLDS", bad.c_str(), 1);
  const Result r = run_cli({"classify", fp.string()});
  ::unsetenv("PEEPKIT_THRESHOLDS");
  EXPECT_EQ(r.code, cli::kValidation);
  EXPECT_THAT(r.err, HasSubstr("not_a_threshold"));
}

TEST(Cli, ConfuseReportsNonSingletonAtG4) {
  const Result r = run_cli({"confuse", zoo("mobilenet_v1.json"), "--G", "4", "--hw", "p100", "--json"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  EXPECT_FALSE(nlohmann::json::parse(r.out).at("singleton_true_model").get<bool>());
}

}  // namespace
}  // namespace peepkit
