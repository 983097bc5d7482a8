// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "peepkit/arch.hpp"
#include "peepkit/classifier.hpp"
#include "peepkit/synth.hpp"

namespace peepkit {

struct DefenseConfig {
  std::int64_t G = 4;  // channels per group
};

/// Replaces every depthwise layer with a group convolution of G channels per
/// group. G=1 returns the input unchanged. Applying the same G twice is a no-op.
ArchitectureSpec secure_transform(const ArchitectureSpec& arch, const DefenseConfig& cfg);

struct LayerOverhead {
  std::string id;
  std::int64_t groups_before = 1;
  std::int64_t groups_after = 1;
  std::uint64_t params_before = 0;
  std::uint64_t params_after = 0;
  std::uint64_t macs_before = 0;
  std::uint64_t macs_after = 0;
};

struct OverheadReport {
  double delta_Mc_pct = 0.0;  // 100 (Mc' - Mc) / Mc
  double delta_P_pct = 0.0;   // 100 (P' - P) / P
  /// 100 (Mc' - Mc) / ((Mc + Mc') / 2), the normalization the published sweep matches.
  double delta_Mc_midpoint_pct = 0.0;
  std::vector<LayerOverhead> layers;  // layers whose grouping changed
};

OverheadReport overhead_report(const ArchitectureSpec& base, const ArchitectureSpec& secured);

struct ConfusabilityReport {
  std::string true_model;
  std::string hardware;
  PredictionReport prediction;
  bool true_model_in_candidates = false;
  bool singleton_true_model = false;
  std::int64_t max_batch_size = 0;
  double fpt_ms_at_max_b = 0.0;
  double bpt_ms_at_max_b = 0.0;

  double disparity_ms() const { return bpt_ms_at_max_b - fpt_ms_at_max_b; }
};

/// Classifies the noise-free synthesized fingerprint of `secured` on `hw`.
ConfusabilityReport evaluate_confusability(const ArchitectureSpec& secured, const std::string& true_model,
                                           const HardwareProfile& hw, const ReferenceSource& references,
                                           const Thresholds& t = {}, const SynthConfig& cfg = {});

std::string to_json(const OverheadReport& r);
std::string to_text(const OverheadReport& r);
std::string to_json(const ConfusabilityReport& r);
std::string to_text(const ConfusabilityReport& r);

}  // namespace peepkit
