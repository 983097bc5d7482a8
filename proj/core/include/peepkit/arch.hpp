// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "peepkit/kernel_mix.hpp"

namespace peepkit {

enum class LayerKind {
  StandardConv,
  PointwiseConv,
  DepthwiseConv,
  GroupConv,
  FullyConnected,
  // Non-parametric nodes. They carry topology and activations only.
  Pool,
  Op,
  Concat,
  Add,
  Shuffle,
  Slice,
  ChannelScale,
};

enum class Padding { Same, Valid, Ceil };

enum class Component {
  FireModule,
  DWConv,
  ChannelShuffling,
  DenseBlock,
  InceptionModule,
  PWConv,
  Branching,
  ResidualSkip,
  AsymmetricFilterDecomposition,
  GroupConv,
};

enum class Group {
  SqueezeNet,
  SqueezeNext,
  MobileNet,
  ShuffleNet,
  DenseNet,
  InceptionNet,
  NonCompact,
  Unknown,
};

using ComponentSet = std::set<Component>;

std::string_view to_string(LayerKind kind);
std::string_view to_string(Padding padding);
std::string_view to_string(Component component);
std::string_view to_string(Group group);

// The parsers throw ValidationError on unknown names.
LayerKind parse_layer_kind(std::string_view name);
Padding parse_padding(std::string_view name);
Component parse_component(std::string_view name);
Group parse_group(std::string_view name);

bool is_parametric(LayerKind kind);
bool is_conv(LayerKind kind);

/// One node of an architecture graph. Spatial extents are square; `S_Fw`
/// differs from `S_F` only for asymmetric k x 1 / 1 x k filters.
struct LayerSpec {
  std::string id;
  LayerKind kind = LayerKind::StandardConv;
  std::int64_t M = 1;
  std::int64_t N = 1;
  std::int64_t S_M = 1;
  std::int64_t S_F = 1;
  std::int64_t S_Fw = 1;
  std::int64_t S_N = 1;
  std::int64_t stride = 1;
  std::int64_t groups = 1;
  bool has_bias = false;
  Padding padding = Padding::Same;
  std::int64_t pad = 0;
  std::vector<std::string> fan_in;
  std::vector<std::string> post;  // in-place ops applied to the output (bn, relu, ...)
  std::string op;                 // name of a standalone Op node

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// Output side of a sliding window over `side` pixels.
std::int64_t output_side(std::int64_t side, std::int64_t window, std::int64_t stride,
                         Padding padding, std::int64_t pad = 0);

/// Builds a convolution with `S_N` derived from the padding mode, then validates it.
LayerSpec make_conv(std::int64_t M, std::int64_t N, std::int64_t S_M, std::int64_t S_F,
                    std::int64_t stride = 1, std::int64_t groups = 1,
                    Padding padding = Padding::Same, bool has_bias = false);

/// Checks the per-layer invariants (group divisibility, depthwise and
/// pointwise shape rules, output side). Throws ValidationError naming the layer.
void validate(const LayerSpec& layer);

std::uint64_t count_params(const LayerSpec& layer);
std::uint64_t count_activations(const LayerSpec& layer);
std::uint64_t count_macs(const LayerSpec& layer);

struct ArchitectureSpec {
  std::string name;
  Group group = Group::Unknown;
  ComponentSet components;
  std::int64_t input_size = 224;
  std::int64_t input_channels = 3;
  std::vector<LayerSpec> layers;
  std::string provenance;
  bool approximate = false;
  bool reference = false;
  std::optional<KernelMix> observed_kernel_mix;
};

/// How activations are counted.
/// `FrameworkBlobs` counts the input blob and every layer output once per
/// blob the framework materializes (the output plus one per in-place post op).
/// `ParametricOnly` counts N x S_N^2 over parametric layers only.
enum class ActivationConvention { FrameworkBlobs, ParametricOnly };

struct ModelStats {
  std::uint64_t P = 0;
  std::uint64_t A = 0;
  std::uint64_t Mc = 0;

  std::optional<double> a_per_p() const;
  std::optional<double> mc_per_p() const;
  std::optional<double> mc_per_a() const;

  double p_millions() const { return static_cast<double>(P) / 1e6; }
  double a_millions() const { return static_cast<double>(A) / 1e6; }
  double mc_millions() const { return static_cast<double>(Mc) / 1e6; }

  friend ModelStats operator+(const ModelStats& a, const ModelStats& b) {
    return {a.P + b.P, a.A + b.A, a.Mc + b.Mc};
  }
  friend bool operator==(const ModelStats&, const ModelStats&) = default;
};

/// Throws ValidationError for an empty architecture.
ModelStats aggregate_stats(const ArchitectureSpec& arch,
                           ActivationConvention convention = ActivationConvention::FrameworkBlobs);

/// Average power times forward time: W x ms = mJ. Throws ValidationError on non-positive input.
double energy_per_frame(double avg_power_watts, double fpt_ms);

/// Batch work per joule, B x Mc / EPF, in GMACs/J. Throws ValidationError on non-positive input.
double energy_efficiency(double batch_size, double mc_gmacs, double epf_joule);

}  // namespace peepkit
