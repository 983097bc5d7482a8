// SPDX-License-Identifier: Apache-2.0
#include "golden.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "published_tables.hpp"

namespace peepkit::test {
namespace {

const std::vector<std::int64_t> kBatch{1, 4, 8, 16, 32, 56};

double relation_factor(const std::string& rel) {
  if (rel == "higher") return 1.25;
  if (rel == "much-higher") return 1.5;
  if (rel == "lower") return 0.8;
  return 1.0;
}

double tp_shape(const std::string& trend, double b) {
  if (trend == "constant") return 100.0;
  if (trend == "rising-then-plateau") return 100.0 * std::sqrt(std::min(b, 16.0));
  return 100.0 * std::sqrt(b);
}

double bpfp_shape(const std::string& trend, double b, bool dwconv) {
  const double x = std::log2(b) / std::log2(56.0);
  if (trend == "decreasing") return 1.0 - 0.45 * x;
  if (trend == "increasing") return 0.5 + 0.5 * x;
  return dwconv ? 1.85 : 0.5;
}

}  // namespace

std::filesystem::path data_dir() { return PEEPKIT_TEST_DATA_DIR; }

std::vector<GoldenRow> load_golden(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<GoldenRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() != 9) throw std::runtime_error("bad golden row: " + line);
    rows.push_back({f[0], f[1], f[2], f[3], f[4], f[5], f[6], f[7], f[8]});
  }
  return rows;
}

const GoldenRow& golden_row(const std::vector<GoldenRow>& rows, const std::string& model) {
  for (const auto& r : rows) {
    if (r.model == model) return r;
  }
  throw std::runtime_error("no golden row for " + model);
}

KernelMix published_mix(const std::string& model) {
  for (const auto& r : kKernelTable) {
    if (r.model == model) return {r.gemv2t, r.gemv2n, r.gemmk1};
  }
  throw std::runtime_error("no kernel row for " + model);
}

MetricSeries golden_series(const GoldenRow& row) {
  const bool dwconv = row.group == "MobileNet" || row.group == "ShuffleNet";
  const double mfp_k = relation_factor(row.mfp_vs_ref);
  const double epf_k = relation_factor(row.epf_vs_ref);
  const double tp_k = relation_factor(row.tp_vs_ref);
  MetricSeries s;
  s.fpt_ms.emplace();
  s.bpt_ms.emplace();
  s.mfp_mib.emplace();
  s.tp_fps.emplace();
  s.epf_mj.emplace();
  for (std::int64_t bi : kBatch) {
    const double b = static_cast<double>(bi);
    const double tp = tp_k * tp_shape(row.tp_trend, b);
    const double fpt = 1000.0 * b / tp;
    const double mfp = row.mfp_growth == "exponential" ? 1000.0 * std::pow(1.12, b - 1.0) : 600.0 + 50.0 * b;
    // Energy per frame falls as throughput rises, at constant power.
    const std::string epf_follows = row.tp_trend == "constant" ? "rising" : row.tp_trend;
    const double epf = row.epf_trend == "constant" ? 10.0 : 1000.0 / tp_shape(epf_follows, b);
    s.batch_sizes.push_back(bi);
    s.tp_fps->push_back(tp);
    s.fpt_ms->push_back(fpt);
    s.bpt_ms->push_back(fpt * bpfp_shape(row.bpfp_trend, b, dwconv));
    s.mfp_mib->push_back(mfp_k * mfp);
    s.epf_mj->push_back(epf_k * epf);
  }
  return s;
}

Fingerprint golden_fingerprint(const GoldenRow& row) {
  Fingerprint fp;
  fp.kernel_mix = published_mix(row.model);
  fp.series = golden_series(row);
  fp.hardware = "p100";
  return fp;
}

ReferenceSource golden_reference_source(std::vector<GoldenRow> rows) {
  return [rows = std::move(rows)](std::string_view model, const Fingerprint&) {
    return golden_fingerprint(golden_row(rows, std::string(model)));
  };
}

}  // namespace peepkit::test
