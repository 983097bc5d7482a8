// SPDX-License-Identifier: Apache-2.0
#include "peepkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "peepkit/error.hpp"
#include "peepkit/zoo.hpp"

namespace peepkit {
namespace {

using nlohmann::json;
using C = Component;

// Scales the model so MobileNet-V1 runs a single-image forward pass in 29.4 ms on P100.
constexpr double kCalibration = 5.2339;

constexpr double kMiB = 1024.0 * 1024.0;
constexpr double kBytesPerParam = 4.0;
constexpr double kCappedUtil = 0.2;
constexpr double kGemvCap = 60.0;
constexpr double kMaxHeadroom = 0.9;
constexpr double kGroupConvFloor = 10.0;  // gemv2T + gemv2N at G = 32
constexpr double kGroupConvTop = 32.0;

struct Band {
  ComponentSet components;
  KernelMix centre;
};

// Mean measured mix of the models sharing each building-block set.
const std::vector<Band>& bands() {
  static const std::vector<Band> kBands{
      {{}, {0.0, 0.0, 0.0}},
      {{C::FireModule, C::PWConv, C::Branching}, {0.0, 0.0, 0.0}},
      {{C::FireModule, C::PWConv, C::Branching, C::ResidualSkip, C::AsymmetricFilterDecomposition},
       {30.196, 5.402, 9.248}},
      {{C::DWConv, C::PWConv}, {59.23, 30.55, 0.63}},
      {{C::DWConv, C::PWConv, C::ResidualSkip}, {60.31, 28.79, 0.80}},
      {{C::DWConv, C::ChannelShuffling, C::PWConv, C::Branching, C::ResidualSkip}, {44.59, 30.04, 3.89}},
      {{C::DenseBlock, C::PWConv, C::ResidualSkip}, {18.19, 3.66, 7.32}},
      {{C::InceptionModule, C::PWConv, C::Branching}, {0.18, 0.18, 0.05}},
      {{C::InceptionModule, C::PWConv, C::Branching, C::AsymmetricFilterDecomposition}, {5.12, 0.03, 3.69}},
      {{C::InceptionModule, C::PWConv, C::Branching, C::ResidualSkip, C::AsymmetricFilterDecomposition},
       {5.75, 0.03, 3.35}},
  };
  return kBands;
}

const KernelMix* band_centre(const ComponentSet& set) {
  for (const auto& b : bands()) {
    if (b.components == set) return &b.centre;
  }
  return nullptr;
}

std::string describe(const ComponentSet& set) {
  std::string out = "{";
  for (auto c : set) out += (out.size() > 1 ? "," : "") + std::string(to_string(c));
  return out + "}";
}

// Channels per group of the transformed depthwise layers; 1 if there are none.
double channels_per_group(const ArchitectureSpec& arch) {
  for (const auto& l : arch.layers) {
    if (l.kind == LayerKind::GroupConv && l.M == l.N) return static_cast<double>(l.M / l.groups);
  }
  return 1.0;
}

double jitter(std::mt19937_64& rng, double amplitude) {
  if (amplitude <= 0.0) return 1.0;
  std::uniform_real_distribution<double> d(-amplitude, amplitude);
  return 1.0 + d(rng);
}

KernelMix jitter_mix(const KernelMix& m, double amplitude, std::mt19937_64& rng) {
  KernelMix j{m.gemv2t_pct * jitter(rng, amplitude), m.gemv2n_pct * jitter(rng, amplitude),
              m.gemmk1_pct * jitter(rng, amplitude)};
  const double total = j.total();
  if (total > 100.0) {
    j.gemv2t_pct *= 100.0 / total;
    j.gemv2n_pct *= 100.0 / total;
    j.gemmk1_pct *= 100.0 / total;
  }
  return j;
}

PassUtilization pass_utilization(double fixed, double improvable, double gemmk1, const HardwareProfile& hw) {
  const double gemv = fixed + improvable;
  const bool capped = gemv >= kGemvCap;
  PassUtilization u;
  u.u_max = capped ? kCappedUtil : 0.9 - 0.7 * gemv / 100.0;
  const double headroom = capped ? kMaxHeadroom * std::clamp((gemmk1 - 1.0) / 2.0, 0.0, 1.0)
                                 : kMaxHeadroom * (1.0 - fixed / 100.0);
  u.u_min = u.u_max * (1.0 - headroom);
  const double sm = static_cast<double>(hw.sm_count);
  u.b_sat = std::max(2.0, capped ? sm / 2.0 : 2.0 * sm);
  return u;
}

double peak_macs_per_s(const HardwareProfile& hw) { return hw.peak_throughput_tflops * 1e12 / 2.0; }
double bandwidth_bytes_per_s(const HardwareProfile& hw) { return hw.peak_bandwidth_gbps * 1e9; }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

HardwareProfile p100() { return {"p100", 56, 3584, 12193.0, 549.0, 9.3, 250.0}; }
HardwareProfile p4000() { return {"p4000", 14, 1792, 8118.0, 243.0, 5.2, 105.0}; }

void validate(const HardwareProfile& hw) {
  if (hw.id.empty()) throw ValidationError("hardware profile needs an id");
  if (hw.sm_count <= 0 || hw.core_count <= 0 || !(hw.global_memory_mib > 0) || !(hw.peak_bandwidth_gbps > 0) ||
      !(hw.peak_throughput_tflops > 0) || !(hw.tdp_watts > 0)) {
    throw ValidationError("hardware profile '" + hw.id + "': all fields must be positive");
  }
}

HardwareProfile hardware_from_json(std::string_view text, std::string_view source) {
  const std::string src(source);
  HardwareProfile hw;
  try {
    const json doc = json::parse(text);
    hw.id = doc.at("id").get<std::string>();
    hw.sm_count = doc.at("sm_count").get<std::int64_t>();
    hw.core_count = doc.at("core_count").get<std::int64_t>();
    hw.global_memory_mib = doc.at("global_memory_MiB").get<double>();
    hw.peak_bandwidth_gbps = doc.at("peak_bandwidth_GBps").get<double>();
    hw.peak_throughput_tflops = doc.at("peak_throughput_TFLOPS").get<double>();
    hw.tdp_watts = doc.at("tdp_watts").get<double>();
  } catch (const json::exception& e) {
    throw ValidationError(src + ": " + e.what());
  }
  validate(hw);
  return hw;
}

std::string to_json(const HardwareProfile& hw) {
  json doc{{"id", hw.id},
           {"sm_count", hw.sm_count},
           {"core_count", hw.core_count},
           {"global_memory_MiB", hw.global_memory_mib},
           {"peak_bandwidth_GBps", hw.peak_bandwidth_gbps},
           {"peak_throughput_TFLOPS", hw.peak_throughput_tflops},
           {"tdp_watts", hw.tdp_watts}};
  return doc.dump(1) + "\n";
}

HardwareProfile resolve_hardware(std::string_view spec) {
  if (spec == "p100") return p100();
  if (spec == "p4000") return p4000();
  const std::filesystem::path path{std::string(spec)};
  return hardware_from_json(read_file(path), path.string());
}

std::vector<std::int64_t> default_batch_sizes(const HardwareProfile& hw) {
  if (hw.id == "p100") return {1, 4, 8, 16, 32, 56};
  if (hw.id == "p4000") return {1, 4, 8, 14, 28};
  std::vector<std::int64_t> out{1};
  for (std::int64_t b = 4; b <= 2 * hw.sm_count; b *= 2) out.push_back(b);
  if (out.size() < 3) out = {1, 2, 4};
  return out;
}

double PassUtilization::at(double b) const {
  const double x = std::clamp((b - 1.0) / (b_sat - 1.0), 0.0, 1.0);
  return u_min + (u_max - u_min) * x;
}

UtilizationModel utilization_model(const KernelMix& mix, const HardwareProfile& hw) {
  return {pass_utilization(mix.gemv2n_pct, mix.gemv2t_pct, mix.gemmk1_pct, hw),
          pass_utilization(mix.gemv2t_pct, mix.gemv2n_pct, mix.gemmk1_pct, hw)};
}

ArchFeatures arch_features(const ArchitectureSpec& arch) {
  const ModelStats s = aggregate_stats(arch);
  ArchFeatures f;
  f.blobs = static_cast<double>(s.A);
  f.params = static_cast<double>(s.P);
  f.macs = static_cast<double>(s.Mc);
  f.dense = arch.components.count(C::DenseBlock) > 0;
  std::map<std::string, double> outputs{
      {"input", static_cast<double>(arch.input_channels * arch.input_size * arch.input_size)}};
  for (const auto& l : arch.layers) {
    if (l.kind == LayerKind::Concat || l.kind == LayerKind::Add) {
      for (const auto& src : l.fan_in) f.merge_inputs += outputs[src];
    }
    if (is_parametric(l.kind)) f.dispatches += static_cast<double>(l.groups);
    outputs[l.id] = static_cast<double>(count_activations(l));
  }
  return f;
}

double forward_time_ms(const ArchFeatures& f, const HardwareProfile& hw, double fwd_util, std::int64_t b,
                       const SynthConfig& cfg) {
  const double per_image = f.macs / (peak_macs_per_s(hw) * fwd_util) + f.dispatches * cfg.dispatch_us * 1e-6;
  const double weights = f.params * kBytesPerParam / bandwidth_bytes_per_s(hw);
  return kCalibration * 1e3 * (static_cast<double>(b) * per_image + weights);
}

double backward_time_ms(const ArchFeatures& f, const KernelMix& mix, const HardwareProfile& hw, double bwd_util,
                        std::int64_t b, const SynthConfig& cfg) {
  // Gemv-heavy passes do proportionally more backward work.
  const double work = 0.5 + 1.5 * mix.gemv_total() / 100.0;
  const double per_image = f.macs / (peak_macs_per_s(hw) * bwd_util) + f.dispatches * cfg.dispatch_us * 1e-6;
  const double weights = 2.0 * f.params * kBytesPerParam / bandwidth_bytes_per_s(hw);
  return kCalibration * 1e3 * (work * static_cast<double>(b) * per_image + weights);
}

double memory_footprint_mib(const ArchFeatures& f, std::int64_t b, const SynthConfig& cfg) {
  const double fixed = cfg.framework_base_mib + 2.0 * f.params * kBytesPerParam / kMiB;
  const double per_image = (f.blobs + f.merge_inputs) * cfg.bytes_per_activation / kMiB;
  if (f.dense) {
    const double growth = 1.0 + cfg.dense_growth_gain * f.merge_inputs / f.blobs;
    return (fixed + per_image) * std::pow(growth, static_cast<double>(b - 1));
  }
  return fixed + static_cast<double>(b) * per_image;
}

KernelMix synth_kernel_mix(const ArchitectureSpec& arch) {
  if (arch.observed_kernel_mix) return *arch.observed_kernel_mix;
  if (const KernelMix* m = band_centre(arch.components)) return *m;
  if (arch.components.count(C::GroupConv) && !arch.components.count(C::DWConv)) {
    ComponentSet base = arch.components;
    base.erase(C::GroupConv);
    base.insert(C::DWConv);
    if (const KernelMix* m = band_centre(base)) {
      const double g = std::clamp(channels_per_group(arch), 1.0, kGroupConvTop);
      const double step = std::log2(g) / std::log2(kGroupConvTop);
      const double total = m->gemv_total();
      const double target = total + (kGroupConvFloor - total) * step;
      const double scale = total > 0.0 ? target / total : 0.0;
      return {m->gemv2t_pct * scale, m->gemv2n_pct * scale, m->gemmk1_pct};
    }
  }
  throw ValidationError("no kernel-mix band for component set " + describe(arch.components) + " of '" +
                        arch.name + "'");
}

MetricSeries synth_series(const ArchitectureSpec& arch, const KernelMix& mix, const HardwareProfile& hw,
                          const std::vector<std::int64_t>& batch_sizes, const SynthConfig& cfg) {
  validate(hw);
  validate(mix);
  if (batch_sizes.empty()) throw ValidationError("synth_series: empty batch-size list");
  MetricSeries check;
  check.batch_sizes = batch_sizes;
  validate(check);

  const ArchFeatures f = arch_features(arch);
  const UtilizationModel u = utilization_model(mix, hw);
  MetricSeries s;
  s.fpt_ms.emplace();
  s.bpt_ms.emplace();
  s.mfp_mib.emplace();
  s.tp_fps.emplace();
  s.epf_mj.emplace();
  for (std::int64_t b : batch_sizes) {
    const double mfp = memory_footprint_mib(f, b, cfg);
    if (mfp > hw.global_memory_mib) {
      s.out_of_memory_at = b;
      break;
    }
    const double bd = static_cast<double>(b);
    const double fpt = forward_time_ms(f, hw, u.fwd_util(bd), b, cfg);
    const double bpt = backward_time_ms(f, mix, hw, u.bwd_util(bd), b, cfg);
    const double power = hw.tdp_watts * (0.4 + 0.6 * u.fwd_util(bd));
    s.batch_sizes.push_back(b);
    s.fpt_ms->push_back(fpt);
    s.bpt_ms->push_back(bpt);
    s.mfp_mib->push_back(mfp);
    s.tp_fps->push_back(bd / fpt * 1e3);
    s.epf_mj->push_back(power * fpt / bd);
  }
  return s;
}

MetricSeries synth_series(const ArchitectureSpec& arch, const HardwareProfile& hw,
                          const std::vector<std::int64_t>& batch_sizes, const SynthConfig& cfg) {
  return synth_series(arch, synth_kernel_mix(arch), hw, batch_sizes, cfg);
}

Fingerprint synth_reference(const ArchitectureSpec& arch, const HardwareProfile& hw,
                            const std::vector<std::int64_t>& batch_sizes, const SynthConfig& cfg) {
  Fingerprint fp;
  fp.kernel_mix = synth_kernel_mix(arch);
  fp.series = synth_series(arch, *fp.kernel_mix, hw, batch_sizes, cfg);
  fp.hardware = hw.id;
  return fp;
}

Fingerprint synth_fingerprint(const ArchitectureSpec& arch, const HardwareProfile& hw,
                              const std::vector<std::int64_t>& batch_sizes, std::uint64_t seed,
                              const SynthConfig& cfg) {
  std::mt19937_64 rng(seed);
  Fingerprint fp;
  fp.kernel_mix = jitter_mix(synth_kernel_mix(arch), cfg.kernel_jitter, rng);
  fp.series = synth_series(arch, *fp.kernel_mix, hw, batch_sizes, cfg);
  fp.hardware = hw.id;
  // One factor per measured series; memory footprint is reported exactly.
  for (auto* column : {&fp.series.fpt_ms, &fp.series.bpt_ms, &fp.series.tp_fps, &fp.series.epf_mj}) {
    const double factor = jitter(rng, cfg.series_jitter);
    for (double& v : **column) v *= factor;
  }
  return fp;
}

ReferenceSource synth_reference_source(std::filesystem::path zoo_dir, std::vector<HardwareProfile> profiles,
                                       SynthConfig cfg) {
  if (profiles.empty()) throw ValidationError("synth_reference_source: no hardware profiles");
  struct Cache {
    std::mutex mutex;
    std::map<std::tuple<std::string, std::string, std::vector<std::int64_t>>, Fingerprint> entries;
  };
  auto cache = std::make_shared<Cache>();
  return [zoo_dir = std::move(zoo_dir), profiles = std::move(profiles), cfg, cache](
             std::string_view model, const Fingerprint& victim) -> Fingerprint {
    const HardwareProfile* hw = &profiles.front();
    if (victim.hardware) {
      auto it = std::find_if(profiles.begin(), profiles.end(),
                             [&](const HardwareProfile& p) { return p.id == *victim.hardware; });
      if (it == profiles.end()) throw ValidationError("no hardware profile named '" + *victim.hardware + "'");
      hw = &*it;
    }
    std::vector<std::int64_t> b = victim.series.batch_sizes;
    if (b.empty()) b = default_batch_sizes(*hw);
    auto key = std::make_tuple(std::string(model), hw->id, b);
    std::lock_guard<std::mutex> lock(cache->mutex);
    if (auto it = cache->entries.find(key); it != cache->entries.end()) return it->second;
    Fingerprint fp = synth_reference(load_zoo_model(model, zoo_dir), *hw, b, cfg);
    cache->entries.emplace(std::move(key), fp);
    return fp;
  };
}

}  // namespace peepkit
