// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "peepkit/classifier.hpp"
#include "peepkit/fingerprint.hpp"

namespace peepkit::test {

struct GoldenRow {
  std::string model;
  std::string group;
  std::string bpfp_trend;
  std::string mfp_growth;
  std::string tp_trend;
  std::string epf_trend;
  std::string mfp_vs_ref;
  std::string epf_vs_ref;
  std::string tp_vs_ref;
};

std::filesystem::path data_dir();
std::vector<GoldenRow> load_golden(const std::filesystem::path& path = data_dir() / "golden_trends.csv");
const GoldenRow& golden_row(const std::vector<GoldenRow>& rows, const std::string& model);

KernelMix published_mix(const std::string& model);

/// P100 sweep shaped to the row's trend classes and scaled by its relations to
/// the group reference. Unstated classes use a neutral default.
MetricSeries golden_series(const GoldenRow& row);

/// Published kernel mix plus golden series.
Fingerprint golden_fingerprint(const GoldenRow& row);

/// References built the same way from the golden rows.
ReferenceSource golden_reference_source(std::vector<GoldenRow> rows);

}  // namespace peepkit::test
