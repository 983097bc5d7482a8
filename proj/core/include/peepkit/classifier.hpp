// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "peepkit/arch.hpp"
#include "peepkit/fingerprint.hpp"

namespace peepkit {

/// Every numeric band edge used by the classifier.
struct Thresholds {
  double very_high_gemv = 60.0;        // gemv2T + gemv2N marking DWConv-dominated nets
  double gemv2t_band_low = 10.0;       // lower edge of the mid gemv2T band
  double dominance_ratio = 3.0;        // gemv2T / gemv2N for asymmetric-filter nets
  double dense_gemv2n_max = 4.2;       // gemv2N below this in the mid band means dense blocks
  double small_share = 1.0;            // "near zero" kernel share
  double low_total = 10.0;             // all three kernels together
  double mobilenet_gemmk1_max = 1.0;   // below: MobileNet-like
  double shufflenet_gemmk1_min = 3.0;  // at or above: ShuffleNet-like
  double sqnxt_mfp_ratio = 1.10;       // width-2.0 memory margin at high B
  double sqnxt_gemv2n_max = 5.0;       // width-2.0 gemv2N ceiling
  double sqnxt_v5_gemv_max = 30.0;     // width-2.0 v5 gemv2T + gemv2N ceiling
  double kernel_band = 0.03;           // relative band for kernel-share comparisons
  double compare_band = 0.06;          // relative band for series comparisons
  TrendConfig trends;
};

/// Unknown keys and non-numeric values are rejected with ValidationError.
Thresholds thresholds_from_json(std::string_view text, std::string_view source = "<memory>");
Thresholds load_thresholds(const std::filesystem::path& path);
/// Defaults, overridden by the file named in $PEEPKIT_THRESHOLDS when set.
Thresholds thresholds_from_environment();
std::string to_json(const Thresholds& t);

struct Evidence {
  std::string rule;
  std::map<std::string, std::string> inputs;
  std::string verdict;

  friend bool operator==(const Evidence&, const Evidence&) = default;
};

/// Rule ids that may appear in evidence.
const std::vector<std::string_view>& documented_rules();

struct PredictionReport {
  ComponentSet components;
  Group group = Group::Unknown;
  std::vector<std::string> candidates;
  bool ambiguous = false;
  std::vector<Evidence> evidence;

  friend bool operator==(const PredictionReport&, const PredictionReport&) = default;
};

ComponentSet predict_components(const KernelMix& mix, const Thresholds& t = {},
                                std::vector<Evidence>* evidence = nullptr);

struct GroupDecision {
  Group group = Group::Unknown;
  std::vector<Evidence> evidence;
};

/// Throws InsufficientEvidence naming the missing channel.
GroupDecision predict_group(const Fingerprint& fp, const Thresholds& t = {});

/// Intra-group step. `reference` may be null for groups that need no comparison;
/// a missing reference elsewhere throws ValidationError.
PredictionReport predict_model(const Fingerprint& fp, Group group, const Fingerprint* reference,
                               const Thresholds& t = {});

/// Supplies the fingerprint of a named reference model, observed under the
/// same conditions as `victim`.
using ReferenceSource = std::function<Fingerprint(std::string_view model, const Fingerprint& victim)>;

PredictionReport classify(const Fingerprint& fp, const ReferenceSource& references, const Thresholds& t = {});

std::string to_json(const PredictionReport& report);
std::string to_text(const PredictionReport& report);

}  // namespace peepkit
