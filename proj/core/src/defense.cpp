// SPDX-License-Identifier: Apache-2.0
#include "peepkit/defense.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "peepkit/error.hpp"

namespace peepkit {
namespace {

using nlohmann::json;

std::string secured_name(const std::string& name, std::int64_t g) {
  return name + "-secure-G" + std::to_string(g);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

ArchitectureSpec secure_transform(const ArchitectureSpec& arch, const DefenseConfig& cfg) {
  if (cfg.G <= 0) throw ValidationError("G must be a positive integer");
  const bool has_dw = std::any_of(arch.layers.begin(), arch.layers.end(),
                                  [](const LayerSpec& l) { return l.kind == LayerKind::DepthwiseConv; });
  if (!has_dw) {
    if (arch.components.count(Component::GroupConv)) {
      // Already secured: accept only the same G.
      for (const auto& l : arch.layers) {
        if (l.kind == LayerKind::GroupConv && l.M == l.N && l.M / l.groups != cfg.G) {
          throw ValidationError("'" + arch.name + "' is already secured with a different G (layer '" + l.id + "')");
        }
      }
      return arch;
    }
    throw ValidationError("'" + arch.name + "' has no depthwise convolution layer");
  }
  for (const auto& l : arch.layers) {
    if (l.kind == LayerKind::DepthwiseConv && l.M % cfg.G != 0) {
      throw ValidationError("layer '" + l.id + "': M=" + std::to_string(l.M) + " is not divisible by G=" +
                            std::to_string(cfg.G));
    }
  }
  if (cfg.G == 1) return arch;

  ArchitectureSpec out = arch;
  out.name = secured_name(arch.name, cfg.G);
  out.reference = false;
  out.observed_kernel_mix.reset();
  out.components.erase(Component::DWConv);
  out.components.insert(Component::GroupConv);
  for (auto& l : out.layers) {
    if (l.kind != LayerKind::DepthwiseConv) continue;
    l.kind = LayerKind::GroupConv;
    l.groups = l.M / cfg.G;
  }
  return out;
}

OverheadReport overhead_report(const ArchitectureSpec& base, const ArchitectureSpec& secured) {
  if (base.layers.size() != secured.layers.size()) {
    throw ValidationError("overhead_report: '" + secured.name + "' is not a transform of '" + base.name + "'");
  }
  OverheadReport r;
  for (std::size_t i = 0; i < base.layers.size(); ++i) {
    const LayerSpec& a = base.layers[i];
    const LayerSpec& b = secured.layers[i];
    if (a.id != b.id) throw ValidationError("overhead_report: layer " + std::to_string(i) + " ids differ");
    if (a.groups == b.groups && a.kind == b.kind) continue;
    r.layers.push_back({a.id, a.groups, b.groups, count_params(a), count_params(b), count_macs(a), count_macs(b)});
  }
  const ModelStats s0 = aggregate_stats(base);
  const ModelStats s1 = aggregate_stats(secured);
  r.delta_Mc_pct = 100.0 * (static_cast<double>(s1.Mc) - static_cast<double>(s0.Mc)) / static_cast<double>(s0.Mc);
  r.delta_Mc_midpoint_pct = 200.0 * (static_cast<double>(s1.Mc) - static_cast<double>(s0.Mc)) /
                            (static_cast<double>(s1.Mc) + static_cast<double>(s0.Mc));
  r.delta_P_pct = 100.0 * (static_cast<double>(s1.P) - static_cast<double>(s0.P)) / static_cast<double>(s0.P);
  return r;
}

ConfusabilityReport evaluate_confusability(const ArchitectureSpec& secured, const std::string& true_model,
                                           const HardwareProfile& hw, const ReferenceSource& references,
                                           const Thresholds& t, const SynthConfig& cfg) {
  const Fingerprint fp = synth_reference(secured, hw, default_batch_sizes(hw), cfg);
  ConfusabilityReport r;
  r.true_model = true_model;
  r.hardware = hw.id;
  r.prediction = classify(fp, references, t);
  const auto& c = r.prediction.candidates;
  r.true_model_in_candidates = std::find(c.begin(), c.end(), true_model) != c.end();
  r.singleton_true_model = c.size() == 1 && r.true_model_in_candidates;
  if (!fp.series.batch_sizes.empty()) {
    r.max_batch_size = fp.series.batch_sizes.back();
    r.fpt_ms_at_max_b = fp.series.fpt_ms->back();
    r.bpt_ms_at_max_b = fp.series.bpt_ms->back();
  }
  return r;
}

std::string to_json(const OverheadReport& r) {
  json layers = json::array();
  for (const auto& l : r.layers) {
    layers.push_back({{"id", l.id},
                      {"groups_before", l.groups_before},
                      {"groups_after", l.groups_after},
                      {"params_before", l.params_before},
                      {"params_after", l.params_after},
                      {"macs_before", l.macs_before},
                      {"macs_after", l.macs_after}});
  }
  json doc{{"delta_Mc_pct", r.delta_Mc_pct}, {"delta_P_pct", r.delta_P_pct},
           {"delta_Mc_midpoint_pct", r.delta_Mc_midpoint_pct}, {"layers", layers}};
  return doc.dump(1) + "\n";
}

std::string to_text(const OverheadReport& r) {
  std::ostringstream out;
  out << "ΔMc " << fixed(r.delta_Mc_pct, 1) << "%  ΔP " << fixed(r.delta_P_pct, 1) << "%  (ΔMc vs midpoint "
      << fixed(r.delta_Mc_midpoint_pct, 1) << "%)\n";
  if (!r.layers.empty()) {
    out << "layer\tgroups\tparams\tMACs\n";
    for (const auto& l : r.layers) {
      out << l.id << '\t' << l.groups_before << "->" << l.groups_after << '\t' << l.params_before << "->"
          << l.params_after << '\t' << l.macs_before << "->" << l.macs_after << '\n';
    }
  }
  return out.str();
}

std::string to_json(const ConfusabilityReport& r) {
  json doc{{"true_model", r.true_model},
           {"hardware", r.hardware},
           {"prediction", json::parse(to_json(r.prediction))},
           {"true_model_in_candidates", r.true_model_in_candidates},
           {"singleton_true_model", r.singleton_true_model},
           {"max_batch_size", r.max_batch_size},
           {"FPt_ms_at_max_B", r.fpt_ms_at_max_b},
           {"BPt_ms_at_max_B", r.bpt_ms_at_max_b},
           {"disparity_ms", r.disparity_ms()}};
  return doc.dump(1) + "\n";
}

std::string to_text(const ConfusabilityReport& r) {
  std::ostringstream out;
  out << to_text(r.prediction);
  out << "true model " << r.true_model << (r.true_model_in_candidates ? " is" : " is not") << " among the candidates";
  if (r.singleton_true_model) out << " (singleton)";
  out << "\nBPt-FPt at B=" << r.max_batch_size << " on " << r.hardware << ": " << fixed(r.disparity_ms(), 2)
      << " ms (FPt " << fixed(r.fpt_ms_at_max_b, 2) << ", BPt " << fixed(r.bpt_ms_at_max_b, 2) << ")\n";
  return out.str();
}

}  // namespace peepkit
