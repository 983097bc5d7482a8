// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "peepkit/arch.hpp"
#include "peepkit/classifier.hpp"
#include "peepkit/fingerprint.hpp"

namespace peepkit {

struct HardwareProfile {
  std::string id;
  std::int64_t sm_count = 1;
  std::int64_t core_count = 1;
  double global_memory_mib = 1.0;
  double peak_bandwidth_gbps = 1.0;
  double peak_throughput_tflops = 1.0;
  double tdp_watts = 1.0;
};

HardwareProfile p100();
HardwareProfile p4000();

void validate(const HardwareProfile& hw);
HardwareProfile hardware_from_json(std::string_view text, std::string_view source = "<memory>");
std::string to_json(const HardwareProfile& hw);

/// "p100", "p4000", or a path to a hardware JSON file.
HardwareProfile resolve_hardware(std::string_view spec);

/// The batch-size sweep used for a profile: up to 56 on P100, up to 28 on P4000.
std::vector<std::int64_t> default_batch_sizes(const HardwareProfile& hw);

/// Utilization of one pass: rises linearly from u_min at B=1 to u_max at b_sat.
struct PassUtilization {
  double u_min = 1.0;
  double u_max = 1.0;
  double b_sat = 2.0;

  double at(double batch_size) const;
};

/// Forward and backward utilization derived from the kernel mix. gemv2N is the
/// fixed share forward and gemv2T the fixed share backward.
struct UtilizationModel {
  PassUtilization forward;
  PassUtilization backward;

  double fwd_util(double b) const { return forward.at(b); }
  double bwd_util(double b) const { return backward.at(b); }
};

UtilizationModel utilization_model(const KernelMix& mix, const HardwareProfile& hw);

struct SynthConfig {
  double series_jitter = 0.05;  // one uniform factor per measured series
  double kernel_jitter = 0.01;  // one uniform factor per kernel share
  double dispatch_us = 1.0;     // per image, per convolution group, per pass
  double framework_base_mib = 500.0;
  double bytes_per_activation = 6.0;
  double dense_growth_gain = 0.7;
};

/// Architecture quantities the time and memory models read.
struct ArchFeatures {
  double blobs = 0.0;       // activations, framework-blob convention
  double merge_inputs = 0.0;  // activations feeding concat/add nodes
  double params = 0.0;
  double macs = 0.0;
  double dispatches = 0.0;  // convolution groups plus fully-connected layers
  bool dense = false;
};

ArchFeatures arch_features(const ArchitectureSpec& arch);

/// Forward-pass time of a batch at the given forward utilization.
double forward_time_ms(const ArchFeatures& f, const HardwareProfile& hw, double fwd_util, std::int64_t batch_size,
                       const SynthConfig& cfg = {});
double backward_time_ms(const ArchFeatures& f, const KernelMix& mix, const HardwareProfile& hw, double bwd_util,
                        std::int64_t batch_size, const SynthConfig& cfg = {});
double memory_footprint_mib(const ArchFeatures& f, std::int64_t batch_size, const SynthConfig& cfg = {});

/// The architecture's observed kernel mix, else the centre of its band. No jitter.
/// Throws ValidationError for component sets with no band.
KernelMix synth_kernel_mix(const ArchitectureSpec& arch);

/// Noise-free series. Stops at the first batch size that does not fit in memory.
MetricSeries synth_series(const ArchitectureSpec& arch, const HardwareProfile& hw,
                          const std::vector<std::int64_t>& batch_sizes, const SynthConfig& cfg = {});
MetricSeries synth_series(const ArchitectureSpec& arch, const KernelMix& mix, const HardwareProfile& hw,
                          const std::vector<std::int64_t>& batch_sizes, const SynthConfig& cfg = {});

/// Jittered fingerprint; identical inputs and seed give identical output.
Fingerprint synth_fingerprint(const ArchitectureSpec& arch, const HardwareProfile& hw,
                              const std::vector<std::int64_t>& batch_sizes, std::uint64_t seed,
                              const SynthConfig& cfg = {});

/// Noise-free fingerprint, as used for references.
Fingerprint synth_reference(const ArchitectureSpec& arch, const HardwareProfile& hw,
                            const std::vector<std::int64_t>& batch_sizes, const SynthConfig& cfg = {});

/// References synthesized from the zoo on the victim's hardware and batch sizes.
/// Victims without a hardware id are matched against the first profile.
ReferenceSource synth_reference_source(std::filesystem::path zoo_dir,
                                       std::vector<HardwareProfile> profiles = {p100(), p4000()},
                                       SynthConfig cfg = {});

}  // namespace peepkit
