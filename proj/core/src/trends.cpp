// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numeric>

#include "peepkit/error.hpp"
#include "peepkit/fingerprint.hpp"

namespace peepkit {
namespace {

constexpr double kExactFit = 1e-12;

struct Line {
  double intercept;
  double slope;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w) {
  double sw = 0.0, mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    mx += w[i] * x[i];
    my += w[i] * y[i];
  }
  mx /= sw;
  my /= sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  return {my - slope * mx, slope};
}

double relative_rms(const std::vector<double>& y, const std::vector<double>& fitted) {
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    // A non-positive prediction of a positive quantity is a total miss.
    const double r = fitted[i] > 0.0 ? y[i] / fitted[i] - 1.0 : 1.0;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(y.size()));
}

std::optional<std::vector<double>> usable(const std::optional<std::vector<double>>& column,
                                          const TrendConfig& cfg) {
  if (!column || column->size() < cfg.min_points) return std::nullopt;
  return column;
}

}  // namespace

std::optional<int> series_direction(const std::vector<double>& values, const TrendConfig& cfg) {
  if (values.size() < cfg.min_points) return std::nullopt;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (!(mean > 0.0)) return std::nullopt;
  double worst = 0.0;
  for (double v : values) worst = std::max(worst, std::abs(v - mean) / mean);
  if (worst <= cfg.constant_tolerance) return 0;
  if (values.back() > values.front()) return 1;
  if (values.back() < values.front()) return -1;
  return 0;
}

std::optional<GrowthFit> fit_growth(const std::vector<std::int64_t>& batch_sizes, const std::vector<double>& values) {
  if (batch_sizes.size() != values.size() || values.size() < 2) return std::nullopt;
  if (std::any_of(values.begin(), values.end(), [](double v) { return !(v > 0.0); })) return std::nullopt;
  std::vector<double> x(batch_sizes.begin(), batch_sizes.end());
  std::vector<double> logs(values.size());
  std::transform(values.begin(), values.end(), logs.begin(), [](double v) { return std::log(v); });

  // Both fits minimize relative error: the affine fit by 1/y^2 weights, the
  // exponential one by fitting log y.
  std::vector<double> inv_sq(values.size());
  std::transform(values.begin(), values.end(), inv_sq.begin(), [](double v) { return 1.0 / (v * v); });
  const Line lin = least_squares(x, values, inv_sq);
  const Line exp = least_squares(x, logs, std::vector<double>(x.size(), 1.0));
  std::vector<double> lin_fit(x.size()), exp_fit(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lin_fit[i] = lin.intercept + lin.slope * x[i];
    exp_fit[i] = std::exp(exp.intercept + exp.slope * x[i]);
  }
  return GrowthFit{relative_rms(values, lin_fit), relative_rms(values, exp_fit)};
}

MfpGrowth classify_growth(const std::vector<std::int64_t>& batch_sizes, const std::vector<double>& values,
                          const TrendConfig& cfg) {
  if (values.size() < cfg.min_points) return MfpGrowth::Unknown;
  const auto fit = fit_growth(batch_sizes, values);
  if (!fit) return MfpGrowth::Unknown;
  const double lin = fit->linear_residual;
  const double exp = fit->exponential_residual;
  if (lin <= kExactFit) return MfpGrowth::Linear;
  if (exp <= kExactFit) return MfpGrowth::Exponential;
  // Affine growth is the default; exponential needs the affine fit rejected.
  if (lin <= cfg.linear_noise_floor) return MfpGrowth::Linear;
  if (lin / exp >= cfg.growth_decision_ratio) return MfpGrowth::Exponential;
  if (exp / lin >= cfg.growth_decision_ratio) return MfpGrowth::Linear;
  return MfpGrowth::Unknown;
}

TpTrend classify_throughput(const std::vector<std::int64_t>& batch_sizes, const std::vector<double>& values,
                            const TrendConfig& cfg) {
  if (batch_sizes.size() != values.size()) return TpTrend::Unknown;
  const auto dir = series_direction(values, cfg);
  if (!dir) return TpTrend::Unknown;
  if (*dir == 0) return TpTrend::Constant;

  // Final doubling: from the smallest batch size >= B_max / 2 (excluding the last) to B_max.
  const std::size_t last = values.size() - 1;
  std::size_t ref = last - 1;
  for (std::size_t j = 0; j < last; ++j) {
    if (2 * batch_sizes[j] >= batch_sizes[last]) {
      ref = j;
      break;
    }
  }
  if (ref > 0 && values[0] > 0.0 && values[ref] > 0.0) {
    const double prior = values[ref] / values[0] - 1.0;
    const double final_gain = values[last] / values[ref] - 1.0;
    if (prior >= cfg.plateau_prior_gain && final_gain < cfg.plateau_final_gain) return TpTrend::RisingThenPlateau;
  }
  return *dir > 0 ? TpTrend::Rising : TpTrend::Falling;
}

TrendSummary extract_trends(const MetricSeries& series, const TrendConfig& cfg) {
  TrendSummary t;
  const auto fpt = usable(series.fpt_ms, cfg);
  const auto bpt = usable(series.bpt_ms, cfg);
  if (fpt && bpt && std::all_of(fpt->begin(), fpt->end(), [](double v) { return v > 0.0; })) {
    std::vector<double> ratio(fpt->size());
    for (std::size_t i = 0; i < ratio.size(); ++i) ratio[i] = (*bpt)[i] / (*fpt)[i];
    if (const auto dir = series_direction(ratio, cfg)) {
      t.bpfp_trend = *dir < 0 ? BpfpTrend::Decreasing : *dir > 0 ? BpfpTrend::Increasing : BpfpTrend::Constant;
    }
    t.bpfp_above_one = std::all_of(ratio.begin(), ratio.end(), [](double r) { return r > 1.0; });
  }
  if (const auto mfp = usable(series.mfp_mib, cfg)) t.mfp_growth = classify_growth(series.batch_sizes, *mfp, cfg);
  if (const auto tp = usable(series.tp_fps, cfg)) t.tp_trend = classify_throughput(series.batch_sizes, *tp, cfg);
  if (const auto epf = usable(series.epf_mj, cfg)) {
    if (const auto dir = series_direction(*epf, cfg)) {
      t.epf_trend = *dir < 0 ? EpfTrend::Decreasing : *dir > 0 ? EpfTrend::Increasing : EpfTrend::Constant;
    }
  }
  return t;
}

}  // namespace peepkit
