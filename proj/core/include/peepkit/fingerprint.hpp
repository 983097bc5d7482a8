// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "peepkit/kernel_mix.hpp"

namespace peepkit {

/// Per-batch-size measurements. Every metric column is optional; present
/// columns match `batch_sizes` in length.
struct MetricSeries {
  std::vector<std::int64_t> batch_sizes;
  std::optional<std::vector<double>> fpt_ms;
  std::optional<std::vector<double>> bpt_ms;
  std::optional<std::vector<double>> mfp_mib;
  std::optional<std::vector<double>> tp_fps;
  std::optional<std::vector<double>> epf_mj;
  /// First batch size that did not fit in device memory, if the sweep was cut short.
  std::optional<std::int64_t> out_of_memory_at;

  bool has_metrics() const { return fpt_ms || bpt_ms || mfp_mib || tp_fps || epf_mj; }

  friend bool operator==(const MetricSeries&, const MetricSeries&) = default;
};

void validate(const MetricSeries& series);

struct Fingerprint {
  std::optional<KernelMix> kernel_mix;
  MetricSeries series;
  std::optional<std::string> hardware;

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

/// Throws ValidationError when no evidence channel is present or a part is invalid.
void validate(const Fingerprint& fp);

enum class BpfpTrend { Decreasing, Constant, Increasing, Unknown };
enum class MfpGrowth { Linear, Exponential, Unknown };
enum class TpTrend { Constant, RisingThenPlateau, Rising, Falling, Unknown };
enum class EpfTrend { Constant, Decreasing, Increasing, Unknown };

std::string_view to_string(BpfpTrend t);
std::string_view to_string(MfpGrowth t);
std::string_view to_string(TpTrend t);
std::string_view to_string(EpfTrend t);
BpfpTrend parse_bpfp_trend(std::string_view s);
MfpGrowth parse_mfp_growth(std::string_view s);
TpTrend parse_tp_trend(std::string_view s);
EpfTrend parse_epf_trend(std::string_view s);

struct TrendSummary {
  BpfpTrend bpfp_trend = BpfpTrend::Unknown;
  MfpGrowth mfp_growth = MfpGrowth::Unknown;
  TpTrend tp_trend = TpTrend::Unknown;
  EpfTrend epf_trend = EpfTrend::Unknown;
  bool bpfp_above_one = false;  // BPt/FPt > 1 strictly at every batch size

  friend bool operator==(const TrendSummary&, const TrendSummary&) = default;
};

struct TrendConfig {
  double constant_tolerance = 0.10;  // max relative deviation from the mean
  double growth_decision_ratio = 1.5;
  double linear_noise_floor = 0.05;  // affine residual still explained by measurement noise
  double plateau_final_gain = 0.05;
  double plateau_prior_gain = 0.15;
  std::size_t min_points = 3;
};

/// Direction of a series: -1 decreasing, 0 constant, +1 increasing.
/// Returns nullopt for fewer than `cfg.min_points` points or a non-positive mean.
std::optional<int> series_direction(const std::vector<double>& values, const TrendConfig& cfg = {});

/// Relative RMS residuals of the affine and exponential least-squares fits.
struct GrowthFit {
  double linear_residual = 0.0;
  double exponential_residual = 0.0;
};
std::optional<GrowthFit> fit_growth(const std::vector<std::int64_t>& batch_sizes,
                                    const std::vector<double>& values);

MfpGrowth classify_growth(const std::vector<std::int64_t>& batch_sizes, const std::vector<double>& values,
                          const TrendConfig& cfg = {});
TpTrend classify_throughput(const std::vector<std::int64_t>& batch_sizes, const std::vector<double>& values,
                            const TrendConfig& cfg = {});

TrendSummary extract_trends(const MetricSeries& series, const TrendConfig& cfg = {});

enum class Verdict { HigherAtAllB, LowerAtAllB, HigherAtHighB, LowerAtHighB, Equal, Mixed };
std::string_view to_string(Verdict v);

struct MetricComparison {
  Verdict verdict = Verdict::Mixed;
  std::vector<std::int64_t> batch_sizes;  // overlapping batch sizes
  std::vector<double> ratios;             // victim / reference at each of them
};

/// Keyed by metric name: "FPt", "BPt", "Mfp", "Tp", "EPF".
using ComparisonVerdict = std::map<std::string, MetricComparison>;

/// Ratios within `band` of 1 count as equal. Throws ValidationError when no
/// metric present in both fingerprints shares a batch size.
ComparisonVerdict compare_to_reference(const Fingerprint& victim, const Fingerprint& reference,
                                       double band = 0.06);

/// Aggregates the fingerprinting kernels from an nvprof-style CSV dump.
/// Rows that match no kernel are ignored; with no matching row at all the
/// result is zero and a warning is appended to `warnings`.
KernelMix parse_profiler_csv(std::string_view text, std::vector<std::string>* warnings = nullptr);
KernelMix ingest_profiler_csv(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);

/// Reads a metrics table with a header row. Recognised columns: B,
/// FPt_ms, BPt_ms, Mfp_MiB, Tp_fps, EPF_mJ (case-insensitive).
MetricSeries parse_series_csv(std::string_view text);

/// One row of fields, RFC 4180 quoting.
std::vector<std::string> split_csv_line(std::string_view line);

std::string to_json(const Fingerprint& fp);
Fingerprint fingerprint_from_json(std::string_view text, std::string_view source = "<memory>");
Fingerprint load_fingerprint(const std::filesystem::path& path);

}  // namespace peepkit
