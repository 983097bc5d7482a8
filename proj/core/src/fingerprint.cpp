// SPDX-License-Identifier: Apache-2.0
#include "peepkit/fingerprint.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "peepkit/error.hpp"

namespace peepkit {
namespace {

using nlohmann::json;

template <typename E, std::size_t K>
using NameTable = std::array<std::pair<E, std::string_view>, K>;

constexpr NameTable<BpfpTrend, 4> kBpfp{{{BpfpTrend::Decreasing, "decreasing"},
                                         {BpfpTrend::Constant, "constant"},
                                         {BpfpTrend::Increasing, "increasing"},
                                         {BpfpTrend::Unknown, "unknown"}}};
constexpr NameTable<MfpGrowth, 3> kMfp{{{MfpGrowth::Linear, "linear"},
                                        {MfpGrowth::Exponential, "exponential"},
                                        {MfpGrowth::Unknown, "unknown"}}};
constexpr NameTable<TpTrend, 5> kTp{{{TpTrend::Constant, "constant"},
                                     {TpTrend::RisingThenPlateau, "rising-then-plateau"},
                                     {TpTrend::Rising, "rising"},
                                     {TpTrend::Falling, "falling"},
                                     {TpTrend::Unknown, "unknown"}}};
constexpr NameTable<EpfTrend, 4> kEpf{{{EpfTrend::Constant, "constant"},
                                       {EpfTrend::Decreasing, "decreasing"},
                                       {EpfTrend::Increasing, "increasing"},
                                       {EpfTrend::Unknown, "unknown"}}};
constexpr NameTable<Verdict, 6> kVerdicts{{{Verdict::HigherAtAllB, "higher-at-all-B"},
                                           {Verdict::LowerAtAllB, "lower-at-all-B"},
                                           {Verdict::HigherAtHighB, "higher-at-high-B"},
                                           {Verdict::LowerAtHighB, "lower-at-high-B"},
                                           {Verdict::Equal, "equal"},
                                           {Verdict::Mixed, "mixed"}}};

template <typename E, std::size_t K>
std::string_view name_of(const NameTable<E, K>& table, E value) {
  for (const auto& [v, name] : table) {
    if (v == value) return name;
  }
  return "?";
}

template <typename E, std::size_t K>
E parse_name(const NameTable<E, K>& table, std::string_view name, std::string_view what) {
  for (const auto& [v, n] : table) {
    if (n == name) return v;
  }
  throw ValidationError("unknown " + std::string(what) + " '" + std::string(name) + "'");
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<double> to_number(const std::string& field) {
  const std::string t = trim(field);
  if (t.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct NamedColumn {
  const char* name;
  std::optional<std::vector<double>> MetricSeries::*member;
};

constexpr std::array<NamedColumn, 5> kColumns{{
    {"FPt_ms", &MetricSeries::fpt_ms},
    {"BPt_ms", &MetricSeries::bpt_ms},
    {"Mfp_MiB", &MetricSeries::mfp_mib},
    {"Tp_fps", &MetricSeries::tp_fps},
    {"EPF_mJ", &MetricSeries::epf_mj},
}};

constexpr std::array<std::pair<const char*, std::optional<std::vector<double>> MetricSeries::*>, 5> kMetrics{{
    {"FPt", &MetricSeries::fpt_ms},
    {"BPt", &MetricSeries::bpt_ms},
    {"Mfp", &MetricSeries::mfp_mib},
    {"Tp", &MetricSeries::tp_fps},
    {"EPF", &MetricSeries::epf_mj},
}};

Verdict judge(const std::vector<double>& ratios, double band) {
  auto higher = [&](double r) { return r > 1.0 + band; };
  auto lower = [&](double r) { return r < 1.0 - band; };
  auto equal = [&](double r) { return !higher(r) && !lower(r); };
  if (std::all_of(ratios.begin(), ratios.end(), higher)) return Verdict::HigherAtAllB;
  if (std::all_of(ratios.begin(), ratios.end(), lower)) return Verdict::LowerAtAllB;
  if (std::all_of(ratios.begin(), ratios.end(), equal)) return Verdict::Equal;
  const bool no_lower = std::none_of(ratios.begin(), ratios.end(), lower);
  const bool no_higher = std::none_of(ratios.begin(), ratios.end(), higher);
  if (higher(ratios.back()) && no_lower) return Verdict::HigherAtHighB;
  if (lower(ratios.back()) && no_higher) return Verdict::LowerAtHighB;
  return Verdict::Mixed;
}

json column_json(const std::optional<std::vector<double>>& c) { return c ? json(*c) : json(nullptr); }

std::optional<std::vector<double>> column_from(const json& series, const char* key) {
  auto it = series.find(key);
  if (it == series.end() || it->is_null()) return std::nullopt;
  if (!it->is_array()) throw ValidationError(std::string("field 'series.") + key + "': expected an array");
  std::vector<double> out;
  for (const auto& v : *it) {
    if (!v.is_number()) throw ValidationError(std::string("field 'series.") + key + "': expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

void validate(const KernelMix& mix) {
  for (double v : {mix.gemv2t_pct, mix.gemv2n_pct, mix.gemmk1_pct}) {
    if (!(v >= 0.0 && v <= 100.0)) throw ValidationError("kernel share outside [0,100]");
  }
  if (mix.total() > 100.0 + 1e-9) throw ValidationError("kernel shares sum above 100");
}

void validate(const MetricSeries& s) {
  for (std::size_t i = 0; i < s.batch_sizes.size(); ++i) {
    if (s.batch_sizes[i] <= 0) throw ValidationError("batch sizes must be positive");
    if (i > 0 && s.batch_sizes[i] <= s.batch_sizes[i - 1]) {
      throw ValidationError("batch sizes must be strictly increasing");
    }
  }
  for (const auto& [name, member] : kMetrics) {
    const auto& col = s.*member;
    if (!col) continue;
    if (col->size() != s.batch_sizes.size()) {
      throw ValidationError(std::string("series '") + name + "' length differs from batch_sizes");
    }
    for (double v : *col) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError(std::string("series '") + name + "' has a negative value");
    }
  }
}

void validate(const Fingerprint& fp) {
  if (!fp.kernel_mix && !fp.series.has_metrics()) throw ValidationError("fingerprint carries no evidence");
  if (fp.kernel_mix) validate(*fp.kernel_mix);
  validate(fp.series);
}

std::string_view to_string(BpfpTrend t) { return name_of(kBpfp, t); }
std::string_view to_string(MfpGrowth t) { return name_of(kMfp, t); }
std::string_view to_string(TpTrend t) { return name_of(kTp, t); }
std::string_view to_string(EpfTrend t) { return name_of(kEpf, t); }
std::string_view to_string(Verdict v) { return name_of(kVerdicts, v); }
BpfpTrend parse_bpfp_trend(std::string_view s) { return parse_name(kBpfp, s, "bpfp trend"); }
MfpGrowth parse_mfp_growth(std::string_view s) { return parse_name(kMfp, s, "Mfp growth"); }
TpTrend parse_tp_trend(std::string_view s) { return parse_name(kTp, s, "Tp trend"); }
EpfTrend parse_epf_trend(std::string_view s) { return parse_name(kEpf, s, "EPF trend"); }

ComparisonVerdict compare_to_reference(const Fingerprint& victim, const Fingerprint& reference, double band) {
  ComparisonVerdict out;
  for (const auto& [name, member] : kMetrics) {
    const auto& v = victim.series.*member;
    const auto& r = reference.series.*member;
    if (!v || !r) continue;
    MetricComparison cmp;
    for (std::size_t i = 0; i < victim.series.batch_sizes.size(); ++i) {
      const auto& rb = reference.series.batch_sizes;
      const auto it = std::find(rb.begin(), rb.end(), victim.series.batch_sizes[i]);
      if (it == rb.end()) continue;
      const double ref_value = (*r)[static_cast<std::size_t>(it - rb.begin())];
      if (!(ref_value > 0.0)) continue;
      cmp.batch_sizes.push_back(victim.series.batch_sizes[i]);
      cmp.ratios.push_back((*v)[i] / ref_value);
    }
    if (cmp.ratios.empty()) continue;
    cmp.verdict = judge(cmp.ratios, band);
    out.emplace(name, std::move(cmp));
  }
  if (out.empty()) throw ValidationError("victim and reference share no batch size for any metric");
  return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back().push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back().push_back(c);
    }
  }
  return fields;
}

KernelMix parse_profiler_csv(std::string_view text, std::vector<std::string>* warnings) {
  const auto lines = lines_of(text);
  std::optional<std::size_t> time_col, name_col, type_col;
  std::size_t width = 0;
  std::array<std::vector<double>, 3> shares;  // gemv2t, gemv2n, gemmk1
  bool header_seen = false;

  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string& raw = lines[ln];
    const std::string row_label = "row " + std::to_string(ln + 1);
    if (trim(raw).empty() || raw.rfind("==", 0) == 0) continue;
    const auto fields = split_csv_line(raw);
    if (!header_seen) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string h = lower(trim(fields[i]));
        if (h == "time(%)" || h == "time %" || h == "time-percent") time_col = i;
        if (h == "name" || h == "kernel-name" || h == "kernel name") name_col = i;
        if (h == "type") type_col = i;
      }
      if (!time_col || !name_col) throw ValidationError(row_label + ": header lacks Time(%) and Name columns");
      width = fields.size();
      header_seen = true;
      continue;
    }
    if (fields.size() != width) {
      throw ValidationError(row_label + ": expected " + std::to_string(width) + " fields, found " +
                            std::to_string(fields.size()));
    }
    const std::string time_field = trim(fields[*time_col]);
    if (time_field == "%") continue;  // units row
    if (type_col && lower(trim(fields[*type_col])) != "gpu activities") continue;
    const auto pct = to_number(time_field);
    if (!pct || *pct < 0.0 || *pct > 100.0) throw ValidationError(row_label + ": bad time percentage '" + time_field + "'");
    const std::string name = lower(fields[*name_col]);
    if (name.find("gemv2t") != std::string::npos) {
      shares[0].push_back(*pct);
    } else if (name.find("gemv2n") != std::string::npos) {
      shares[1].push_back(*pct);
    } else if (name.find("gemmk1") != std::string::npos) {
      shares[2].push_back(*pct);
    }
  }
  if (!header_seen) throw ValidationError("row 1: missing header");

  std::array<double, 3> sums{};
  for (std::size_t k = 0; k < 3; ++k) {
    // Sorted summation keeps the result independent of row order.
    std::sort(shares[k].begin(), shares[k].end());
    for (double v : shares[k]) sums[k] += v;
  }
  if (shares[0].empty() && shares[1].empty() && shares[2].empty() && warnings) {
    warnings->push_back("no gemv2T/gemv2N/gemmk1 kernel rows found; kernel mix is zero");
  }
  KernelMix mix{sums[0], sums[1], sums[2]};
  validate(mix);
  return mix;
}

KernelMix ingest_profiler_csv(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  try {
    return parse_profiler_csv(read_file(path), warnings);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

MetricSeries parse_series_csv(std::string_view text) {
  const auto lines = lines_of(text);
  MetricSeries s;
  std::optional<std::size_t> b_col;
  std::vector<std::pair<std::size_t, std::optional<std::vector<double>> MetricSeries::*>> cols;
  std::size_t width = 0;
  bool header_seen = false;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    if (trim(lines[ln]).empty()) continue;
    const auto fields = split_csv_line(lines[ln]);
    const std::string row_label = "row " + std::to_string(ln + 1);
    if (!header_seen) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string h = lower(trim(fields[i]));
        if (h == "b" || h == "batch_size") b_col = i;
        for (const auto& c : kColumns) {
          if (h == lower(c.name)) {
            cols.emplace_back(i, c.member);
            s.*(c.member) = std::vector<double>{};
          }
        }
      }
      if (!b_col) throw ValidationError(row_label + ": header lacks a B column");
      width = fields.size();
      header_seen = true;
      continue;
    }
    if (fields.size() != width) throw ValidationError(row_label + ": field count differs from header");
    const auto b = to_number(fields[*b_col]);
    if (!b || *b <= 0 || std::floor(*b) != *b) throw ValidationError(row_label + ": bad batch size");
    s.batch_sizes.push_back(static_cast<std::int64_t>(*b));
    for (const auto& [i, member] : cols) {
      const auto v = to_number(fields[i]);
      if (!v) throw ValidationError(row_label + ": non-numeric metric value");
      (s.*member)->push_back(*v);
    }
  }
  validate(s);
  return s;
}

std::string to_json(const Fingerprint& fp) {
  json doc;
  if (fp.kernel_mix) {
    doc["kernel_mix"] = {{"gemv2t_pct", fp.kernel_mix->gemv2t_pct},
                         {"gemv2n_pct", fp.kernel_mix->gemv2n_pct},
                         {"gemmk1_pct", fp.kernel_mix->gemmk1_pct}};
  } else {
    doc["kernel_mix"] = nullptr;
  }
  json series;
  series["batch_sizes"] = fp.series.batch_sizes;
  for (const auto& c : kColumns) series[c.name] = column_json(fp.series.*(c.member));
  series["out_of_memory_at"] = fp.series.out_of_memory_at ? json(*fp.series.out_of_memory_at) : json(nullptr);
  doc["series"] = std::move(series);
  doc["hardware"] = fp.hardware ? json(*fp.hardware) : json(nullptr);
  return doc.dump(1) + "\n";
}

Fingerprint fingerprint_from_json(std::string_view text, std::string_view source) {
  const std::string src(source);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(src + ": parse error: " + e.what());
  }
  if (!doc.is_object()) throw ValidationError(src + ": top level must be an object");
  Fingerprint fp;
  try {
    if (auto it = doc.find("kernel_mix"); it != doc.end() && !it->is_null()) {
      fp.kernel_mix = KernelMix{it->at("gemv2t_pct").get<double>(), it->at("gemv2n_pct").get<double>(),
                                it->at("gemmk1_pct").get<double>()};
    }
    if (auto it = doc.find("series"); it != doc.end() && !it->is_null()) {
      if (auto b = it->find("batch_sizes"); b != it->end() && !b->is_null()) {
        fp.series.batch_sizes = b->get<std::vector<std::int64_t>>();
      }
      for (const auto& c : kColumns) fp.series.*(c.member) = column_from(*it, c.name);
      if (auto o = it->find("out_of_memory_at"); o != it->end() && !o->is_null()) {
        fp.series.out_of_memory_at = o->get<std::int64_t>();
      }
    }
    if (auto it = doc.find("hardware"); it != doc.end() && !it->is_null()) fp.hardware = it->get<std::string>();
  } catch (const json::exception& e) {
    throw ValidationError(src + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(src + ": " + e.what());
  }
  try {
    if (fp.kernel_mix) validate(*fp.kernel_mix);
    validate(fp.series);
  } catch (const ValidationError& e) {
    throw ValidationError(src + ": " + e.what());
  }
  return fp;
}

Fingerprint load_fingerprint(const std::filesystem::path& path) {
  return fingerprint_from_json(read_file(path), path.string());
}

}  // namespace peepkit
