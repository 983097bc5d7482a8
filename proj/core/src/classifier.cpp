// SPDX-License-Identifier: Apache-2.0
#include "peepkit/classifier.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "peepkit/error.hpp"
#include "peepkit/zoo.hpp"

namespace peepkit {
namespace {

using nlohmann::json;
using Inputs = std::map<std::string, std::string>;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string list(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + num(v[i]);
  return out + "]";
}

Inputs mix_inputs(const KernelMix& m) {
  return {{"gemv2t", num(m.gemv2t_pct)}, {"gemv2n", num(m.gemv2n_pct)}, {"gemmk1", num(m.gemmk1_pct)}};
}

struct DoubleField {
  const char* key;
  double Thresholds::*member;
};

constexpr DoubleField kFields[] = {
    {"very_high_gemv", &Thresholds::very_high_gemv},
    {"gemv2t_band_low", &Thresholds::gemv2t_band_low},
    {"dominance_ratio", &Thresholds::dominance_ratio},
    {"dense_gemv2n_max", &Thresholds::dense_gemv2n_max},
    {"small_share", &Thresholds::small_share},
    {"low_total", &Thresholds::low_total},
    {"mobilenet_gemmk1_max", &Thresholds::mobilenet_gemmk1_max},
    {"shufflenet_gemmk1_min", &Thresholds::shufflenet_gemmk1_min},
    {"sqnxt_mfp_ratio", &Thresholds::sqnxt_mfp_ratio},
    {"sqnxt_gemv2n_max", &Thresholds::sqnxt_gemv2n_max},
    {"sqnxt_v5_gemv_max", &Thresholds::sqnxt_v5_gemv_max},
    {"kernel_band", &Thresholds::kernel_band},
    {"compare_band", &Thresholds::compare_band},
};

struct TrendField {
  const char* key;
  double TrendConfig::*member;
};

constexpr TrendField kTrendFields[] = {
    {"constant_tolerance", &TrendConfig::constant_tolerance},
    {"growth_decision_ratio", &TrendConfig::growth_decision_ratio},
    {"linear_noise_floor", &TrendConfig::linear_noise_floor},
    {"plateau_final_gain", &TrendConfig::plateau_final_gain},
    {"plateau_prior_gain", &TrendConfig::plateau_prior_gain},
};

const std::vector<std::string_view> kRules{
    "components.dwconv",        "components.asymmetric",    "components.dense",
    "components.low-gemv2t",    "components.near-zero",     "components.unmatched",
    "group.noncompact-screen",  "group.case1",              "group.case1.disagreement",
    "group.case3",              "group.case2",              "group.case2.fallback",
    "group.unresolved",         "model.noncompact",         "model.densenet",
    "model.inception",          "model.mobilenet",          "model.mobilenet.corroboration",
    "model.shufflenet",         "model.squeezenext.width",  "model.squeezenext.width-2.0",
    "model.squeezenext.width-1.0", "model.squeezenet",      "model.missing-evidence",
};

struct Relative {
  bool higher;
  bool lower;
};

Relative relative(double victim, double reference, double band) {
  if (reference <= 0.0) return {victim > 0.0, false};
  const double r = victim / reference - 1.0;
  return {r > band, r < -band};
}

std::vector<std::string> names(const std::vector<std::string_view>& v) { return {v.begin(), v.end()}; }

void finish(PredictionReport& r) { r.ambiguous = r.candidates.size() > 1; }

// Candidates fall back to the whole group when the intra step lacks a channel.
void missing(PredictionReport& r, Group g, const std::string& channel) {
  r.candidates = names(group_members(g));
  r.evidence.push_back({"model.missing-evidence", {{"channel", channel}}, "all group members kept"});
}

const MetricComparison* find(const ComparisonVerdict& c, const char* metric) {
  auto it = c.find(metric);
  return it == c.end() ? nullptr : &it->second;
}

bool higher_at_high(const MetricComparison* m) {
  return m && (m->verdict == Verdict::HigherAtAllB || m->verdict == Verdict::HigherAtHighB);
}

bool lower_somewhere_high(const MetricComparison* m) {
  return m && (m->verdict == Verdict::LowerAtAllB || m->verdict == Verdict::LowerAtHighB);
}

}  // namespace

Thresholds thresholds_from_json(std::string_view text, std::string_view source) {
  const std::string src(source);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(src + ": parse error: " + e.what());
  }
  if (!doc.is_object()) throw ValidationError(src + ": top level must be an object");
  Thresholds t;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    bool known = false;
    auto read = [&](double& slot) {
      if (!it.value().is_number()) throw ValidationError(src + ": field '" + it.key() + "': expected a number");
      slot = it.value().get<double>();
      known = true;
    };
    for (const auto& f : kFields) {
      if (it.key() == f.key) read(t.*(f.member));
    }
    for (const auto& f : kTrendFields) {
      if (it.key() == f.key) read(t.trends.*(f.member));
    }
    if (it.key() == "min_points") {
      if (!it.value().is_number_unsigned()) throw ValidationError(src + ": field 'min_points': expected a count");
      t.trends.min_points = it.value().get<std::size_t>();
      known = true;
    }
    if (!known) throw ValidationError(src + ": unknown threshold '" + it.key() + "'");
  }
  return t;
}

Thresholds load_thresholds(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return thresholds_from_json(ss.str(), path.string());
}

Thresholds thresholds_from_environment() {
  const char* env = std::getenv("PEEPKIT_THRESHOLDS");
  if (!env || !*env) return {};
  return load_thresholds(env);
}

std::string to_json(const Thresholds& t) {
  json doc;
  for (const auto& f : kFields) doc[f.key] = t.*(f.member);
  for (const auto& f : kTrendFields) doc[f.key] = t.trends.*(f.member);
  doc["min_points"] = t.trends.min_points;
  return doc.dump(1) + "\n";
}

const std::vector<std::string_view>& documented_rules() { return kRules; }

ComponentSet predict_components(const KernelMix& mix, const Thresholds& t, std::vector<Evidence>* evidence) {
  using C = Component;
  const double tt = mix.gemv2t_pct, n = mix.gemv2n_pct, k = mix.gemmk1_pct;
  ComponentSet out;
  std::string rule;
  if (mix.gemv_total() >= t.very_high_gemv) {
    out = {C::DWConv, C::PWConv};
    rule = "components.dwconv";
  } else if (tt >= t.gemv2t_band_low && tt < t.very_high_gemv && n >= t.dense_gemv2n_max &&
             tt >= t.dominance_ratio * n) {
    out = {C::AsymmetricFilterDecomposition, C::ResidualSkip, C::Branching};
    rule = "components.asymmetric";
  } else if (tt >= t.gemv2t_band_low && tt < t.very_high_gemv && n < t.dense_gemv2n_max) {
    out = {C::DenseBlock, C::ResidualSkip};
    rule = "components.dense";
  } else if (tt >= t.small_share && tt < t.gemv2t_band_low) {
    out = {C::AsymmetricFilterDecomposition, C::Branching};
    rule = "components.low-gemv2t";
  } else if (tt < t.small_share && n < t.small_share && k < t.small_share) {
    out = {C::Branching};
    rule = "components.near-zero";
  } else {
    rule = "components.unmatched";
  }
  if (evidence) {
    std::string verdict;
    for (auto c : out) verdict += (verdict.empty() ? "" : ",") + std::string(to_string(c));
    evidence->push_back({rule, mix_inputs(mix), verdict.empty() ? "none" : verdict});
  }
  return out;
}

GroupDecision predict_group(const Fingerprint& fp, const Thresholds& t) {
  GroupDecision d;
  const bool has_series = fp.series.has_metrics();
  std::optional<TrendSummary> trends;
  if (has_series) trends = extract_trends(fp.series, t.trends);

  if (trends && trends->bpfp_trend == BpfpTrend::Decreasing) {
    d.group = Group::NonCompact;
    d.evidence.push_back({"group.noncompact-screen", {{"bpfp_trend", "decreasing"}}, "NonCompact"});
    return d;
  }
  if (!fp.kernel_mix) throw InsufficientEvidence("kernel_mix");
  const KernelMix& m = *fp.kernel_mix;
  const Inputs in = mix_inputs(m);

  if (m.gemv_total() >= t.very_high_gemv) {
    std::optional<Group> by_kernel, by_tp;
    if (m.gemmk1_pct < t.mobilenet_gemmk1_max) by_kernel = Group::MobileNet;
    if (m.gemmk1_pct >= t.shufflenet_gemmk1_min) by_kernel = Group::ShuffleNet;
    const TpTrend tp = trends ? trends->tp_trend : TpTrend::Unknown;
    if (tp == TpTrend::Constant) by_tp = Group::MobileNet;
    if (tp == TpTrend::RisingThenPlateau) by_tp = Group::ShuffleNet;
    Inputs case_in = in;
    case_in["tp_trend"] = std::string(to_string(tp));
    if (by_kernel) {
      d.group = *by_kernel;
    } else if (by_tp) {
      d.group = *by_tp;
    } else {
      d.group = m.gemmk1_pct < t.shufflenet_gemmk1_min ? Group::MobileNet : Group::ShuffleNet;
      case_in["split"] = "gemmk1 " + num(t.shufflenet_gemmk1_min);
    }
    d.evidence.push_back({"group.case1", case_in, std::string(to_string(d.group))});
    if (by_kernel && by_tp && *by_kernel != *by_tp) {
      d.evidence.push_back({"group.case1.disagreement",
                            {{"kernel", std::string(to_string(*by_kernel))}, {"tp", std::string(to_string(*by_tp))}},
                            "kernel mix kept"});
    }
    return d;
  }

  if (m.total() < t.low_total) {
    const bool all_small = m.gemv2t_pct < t.small_share && m.gemv2n_pct < t.small_share && m.gemmk1_pct < t.small_share;
    if (all_small && m.total() == 0.0) {
      // A zero mix also fits non-compact nets, which only the series can rule out.
      if (!trends || trends->bpfp_trend == BpfpTrend::Unknown) throw InsufficientEvidence("series");
      d.group = Group::SqueezeNet;
    } else if (all_small || m.gemv2t_pct >= t.small_share) {
      d.group = Group::InceptionNet;
    } else {
      d.group = Group::Unknown;
    }
    d.evidence.push_back({"group.case3", in, std::string(to_string(d.group))});
    return d;
  }

  if (!has_series) throw InsufficientEvidence("series");
  // An absent ratio series does not rule out the memory-growth test.
  if (trends->bpfp_trend == BpfpTrend::Increasing || trends->bpfp_trend == BpfpTrend::Unknown) {
    Inputs case_in = in;
    case_in["bpfp_trend"] = std::string(to_string(trends->bpfp_trend));
    case_in["mfp_growth"] = std::string(to_string(trends->mfp_growth));
    if (trends->mfp_growth == MfpGrowth::Exponential) {
      d.group = Group::DenseNet;
    } else if (trends->mfp_growth == MfpGrowth::Linear) {
      d.group = Group::SqueezeNext;
    } else {
      const ComponentSet c = predict_components(m, t);
      if (c.count(Component::DenseBlock)) {
        d.group = Group::DenseNet;
      } else if (c.count(Component::AsymmetricFilterDecomposition)) {
        d.group = Group::SqueezeNext;
      } else {
        throw InsufficientEvidence("Mfp series");
      }
      d.evidence.push_back({"group.case2.fallback", case_in, std::string(to_string(d.group))});
      return d;
    }
    d.evidence.push_back({"group.case2", case_in, std::string(to_string(d.group))});
    return d;
  }
  d.group = Group::Unknown;
  Inputs case_in = in;
  case_in["bpfp_trend"] = std::string(to_string(trends->bpfp_trend));
  d.evidence.push_back({"group.unresolved", case_in, "unknown"});
  return d;
}

PredictionReport predict_model(const Fingerprint& fp, Group group, const Fingerprint* reference,
                               const Thresholds& t) {
  PredictionReport r;
  r.group = group;
  auto need_reference = [&]() -> const Fingerprint& {
    if (!reference) throw ValidationError("group " + std::string(to_string(group)) + " needs a reference fingerprint");
    return *reference;
  };

  switch (group) {
    case Group::Unknown:
      break;
    case Group::NonCompact:
    case Group::DenseNet:
      r.candidates = names(group_members(group));
      r.evidence.push_back({group == Group::DenseNet ? "model.densenet" : "model.noncompact", {}, r.candidates.front()});
      break;
    case Group::InceptionNet: {
      if (!fp.kernel_mix) {
        missing(r, group, "kernel_mix");
        break;
      }
      if (fp.kernel_mix->gemv2t_pct < t.small_share) {
        r.candidates = {"GoogLeNet"};
      } else {
        r.candidates = {"Inception-V2", "SE-BN-Inception"};
      }
      r.evidence.push_back({"model.inception", {{"gemv2t", num(fp.kernel_mix->gemv2t_pct)}},
                            r.candidates.size() == 1 ? r.candidates.front() : "Inception-V2|SE-BN-Inception"});
      break;
    }
    case Group::MobileNet: {
      const auto cmp = compare_to_reference(fp, need_reference(), t.compare_band);
      const auto* epf = find(cmp, "EPF");
      const auto* tp = find(cmp, "Tp");
      if (!epf || !tp) {
        missing(r, group, !epf ? "EPF" : "Tp");
        break;
      }
      const bool v2 = epf->verdict == Verdict::HigherAtAllB && lower_somewhere_high(tp);
      r.candidates = {v2 ? "MobileNet-V2" : "MobileNet-V1"};
      r.evidence.push_back({"model.mobilenet",
                            {{"EPF", std::string(to_string(epf->verdict))}, {"EPF_ratios", list(epf->ratios)},
                             {"Tp", std::string(to_string(tp->verdict))}, {"Tp_ratios", list(tp->ratios)}},
                            r.candidates.front()});
      if (const auto* mfp = find(cmp, "Mfp")) {
        r.evidence.push_back({"model.mobilenet.corroboration", {{"Mfp", std::string(to_string(mfp->verdict))}},
                              higher_at_high(mfp) == v2 ? "consistent" : "inconsistent"});
      }
      break;
    }
    case Group::ShuffleNet: {
      const auto cmp = compare_to_reference(fp, need_reference(), t.compare_band);
      const auto* mfp = find(cmp, "Mfp");
      if (!mfp) {
        missing(r, group, "Mfp");
        break;
      }
      r.candidates = {higher_at_high(mfp) ? "ShuffleNet-V2" : "ShuffleNet-V1"};
      r.evidence.push_back({"model.shufflenet",
                            {{"Mfp", std::string(to_string(mfp->verdict))}, {"Mfp_ratios", list(mfp->ratios)}},
                            r.candidates.front()});
      break;
    }
    case Group::SqueezeNext: {
      const Fingerprint& ref = need_reference();
      if (!fp.kernel_mix || !ref.kernel_mix) {
        missing(r, group, "kernel_mix");
        break;
      }
      const auto cmp = compare_to_reference(fp, ref, t.compare_band);
      const auto* mfp = find(cmp, "Mfp");
      if (!mfp) {
        missing(r, group, "Mfp");
        break;
      }
      const KernelMix& m = *fp.kernel_mix;
      const KernelMix& rm = *ref.kernel_mix;
      const double high_ratio = mfp->ratios.back();
      const bool wide = high_ratio >= t.sqnxt_mfp_ratio && m.gemv2n_pct < t.sqnxt_gemv2n_max;
      r.evidence.push_back({"model.squeezenext.width",
                            {{"Mfp_ratio_high_B", num(high_ratio)}, {"gemv2n", num(m.gemv2n_pct)}},
                            wide ? "width 2.0" : "width 1.0"});
      if (wide) {
        const bool v5 = m.gemv_total() < t.sqnxt_v5_gemv_max;
        r.candidates = {v5 ? "2.0-SqNxt-23v5" : "2.0-SqNxt-23"};
        r.evidence.push_back({"model.squeezenext.width-2.0", {{"gemv2t+gemv2n", num(m.gemv_total())}},
                              r.candidates.front()});
      } else {
        const Relative n = relative(m.gemv2n_pct, rm.gemv2n_pct, t.kernel_band);
        const Relative k = relative(m.gemmk1_pct, rm.gemmk1_pct, t.kernel_band);
        const Relative tt = relative(m.gemv2t_pct, rm.gemv2t_pct, t.kernel_band);
        if (n.higher && k.higher) {
          r.candidates = {"1.0-SqNxt-23v5"};
        } else if (tt.lower && k.lower) {
          r.candidates = {"1.0-G-SqNxt-23"};
        } else {
          r.candidates = {"1.0-SqNxt-23"};
        }
        Inputs in = mix_inputs(m);
        in["reference"] = num(rm.gemv2t_pct) + "/" + num(rm.gemv2n_pct) + "/" + num(rm.gemmk1_pct);
        in["confidence"] = "best-effort";
        r.evidence.push_back({"model.squeezenext.width-1.0", in, r.candidates.front()});
      }
      break;
    }
    case Group::SqueezeNet: {
      const auto cmp = compare_to_reference(fp, need_reference(), t.compare_band);
      const auto* epf = find(cmp, "EPF");
      const auto* mfp = find(cmp, "Mfp");
      if (!epf && !mfp) {
        missing(r, group, "EPF and Mfp");
        break;
      }
      const bool lower = (epf && epf->verdict == Verdict::LowerAtAllB) || (mfp && mfp->verdict == Verdict::LowerAtAllB);
      r.candidates = {lower ? "SqueezeNet-V1.1" : "SqueezeNet-V1.0"};
      r.evidence.push_back({"model.squeezenet",
                            {{"EPF", epf ? std::string(to_string(epf->verdict)) : "absent"},
                             {"Mfp", mfp ? std::string(to_string(mfp->verdict)) : "absent"}},
                            r.candidates.front()});
      break;
    }
  }
  finish(r);
  return r;
}

PredictionReport classify(const Fingerprint& fp, const ReferenceSource& references, const Thresholds& t) {
  if (!fp.kernel_mix && !fp.series.has_metrics()) throw InsufficientEvidence("series");
  std::vector<Evidence> evidence;
  ComponentSet components;
  if (fp.kernel_mix) components = predict_components(*fp.kernel_mix, t, &evidence);

  GroupDecision g = predict_group(fp, t);
  evidence.insert(evidence.end(), g.evidence.begin(), g.evidence.end());

  std::optional<Fingerprint> ref;
  const bool needs_ref = g.group == Group::MobileNet || g.group == Group::ShuffleNet ||
                         g.group == Group::SqueezeNext || g.group == Group::SqueezeNet;
  if (needs_ref) {
    if (!references) throw ValidationError("no reference source for group " + std::string(to_string(g.group)));
    ref = references(reference_model(g.group), fp);
  }
  PredictionReport r = predict_model(fp, g.group, ref ? &*ref : nullptr, t);
  r.components = std::move(components);
  evidence.insert(evidence.end(), r.evidence.begin(), r.evidence.end());
  r.evidence = std::move(evidence);
  return r;
}

std::string to_json(const PredictionReport& r) {
  json doc;
  doc["components"] = json::array();
  for (auto c : r.components) doc["components"].push_back(std::string(to_string(c)));
  doc["group"] = std::string(to_string(r.group));
  doc["candidates"] = r.candidates;
  doc["ambiguous"] = r.ambiguous;
  doc["evidence"] = json::array();
  for (const auto& e : r.evidence) doc["evidence"].push_back({{"rule", e.rule}, {"inputs", e.inputs}, {"verdict", e.verdict}});
  return doc.dump(1) + "\n";
}

std::string to_text(const PredictionReport& r) {
  std::ostringstream os;
  os << "group: " << to_string(r.group) << "\n";
  os << "candidates:";
  for (const auto& c : r.candidates) os << " " << c;
  if (r.candidates.empty()) os << " (none)";
  os << (r.ambiguous ? "  [ambiguous]" : "") << "\n";
  os << "components:";
  for (auto c : r.components) os << " " << to_string(c);
  if (r.components.empty()) os << " (none)";
  os << "\nevidence:\n";
  for (std::size_t i = 0; i < r.evidence.size(); ++i) {
    const auto& e = r.evidence[i];
    os << "  " << i + 1 << ". " << e.rule << " -> " << e.verdict;
    if (!e.inputs.empty()) {
      os << " (";
      bool first = true;
      for (const auto& [k, v] : e.inputs) {
        os << (first ? "" : ", ") << k << "=" << v;
        first = false;
      }
      os << ")";
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace peepkit
