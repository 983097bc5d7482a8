// SPDX-License-Identifier: Apache-2.0
#include "peepkit/arch.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "peepkit/error.hpp"

namespace peepkit {
namespace {

template <typename E, std::size_t K>
using NameTable = std::array<std::pair<E, std::string_view>, K>;

constexpr NameTable<LayerKind, 12> kLayerKinds{{
    {LayerKind::StandardConv, "standard-conv"},
    {LayerKind::PointwiseConv, "pointwise-conv"},
    {LayerKind::DepthwiseConv, "depthwise-conv"},
    {LayerKind::GroupConv, "group-conv"},
    {LayerKind::FullyConnected, "fully-connected"},
    {LayerKind::Pool, "pool"},
    {LayerKind::Op, "op"},
    {LayerKind::Concat, "concat"},
    {LayerKind::Add, "add"},
    {LayerKind::Shuffle, "shuffle"},
    {LayerKind::Slice, "slice"},
    {LayerKind::ChannelScale, "channel-scale"},
}};

constexpr NameTable<Padding, 3> kPaddings{{
    {Padding::Same, "same"},
    {Padding::Valid, "valid"},
    {Padding::Ceil, "ceil"},
}};

constexpr NameTable<Component, 10> kComponents{{
    {Component::FireModule, "fire-module"},
    {Component::DWConv, "dwconv"},
    {Component::ChannelShuffling, "channel-shuffling"},
    {Component::DenseBlock, "dense-block"},
    {Component::InceptionModule, "inception-module"},
    {Component::PWConv, "pwconv"},
    {Component::Branching, "branching"},
    {Component::ResidualSkip, "residual-skip"},
    {Component::AsymmetricFilterDecomposition, "asymmetric-filter-decomposition"},
    {Component::GroupConv, "group-conv"},
}};

constexpr NameTable<Group, 8> kGroups{{
    {Group::SqueezeNet, "SqueezeNet"},
    {Group::SqueezeNext, "SqueezeNext"},
    {Group::MobileNet, "MobileNet"},
    {Group::ShuffleNet, "ShuffleNet"},
    {Group::DenseNet, "DenseNet"},
    {Group::InceptionNet, "InceptionNet"},
    {Group::NonCompact, "NonCompact"},
    {Group::Unknown, "unknown"},
}};

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

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

std::uint64_t u64(std::int64_t v) { return static_cast<std::uint64_t>(v); }

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::string_view to_string(LayerKind kind) { return name_of(kLayerKinds, kind); }
std::string_view to_string(Padding padding) { return name_of(kPaddings, padding); }
std::string_view to_string(Component component) { return name_of(kComponents, component); }
std::string_view to_string(Group group) { return name_of(kGroups, group); }

LayerKind parse_layer_kind(std::string_view name) { return parse_name(kLayerKinds, name, "layer kind"); }
Padding parse_padding(std::string_view name) { return parse_name(kPaddings, name, "padding"); }
Component parse_component(std::string_view name) { return parse_name(kComponents, name, "component"); }
Group parse_group(std::string_view name) { return parse_name(kGroups, name, "group"); }

bool is_conv(LayerKind kind) {
  switch (kind) {
    case LayerKind::StandardConv:
    case LayerKind::PointwiseConv:
    case LayerKind::DepthwiseConv:
    case LayerKind::GroupConv:
      return true;
    default:
      return false;
  }
}

bool is_parametric(LayerKind kind) { return is_conv(kind) || kind == LayerKind::FullyConnected; }

std::int64_t output_side(std::int64_t side, std::int64_t window, std::int64_t stride,
                         Padding padding, std::int64_t pad) {
  if (side <= 0 || window <= 0 || stride <= 0 || pad < 0) {
    throw ValidationError("output_side: non-positive extent");
  }
  switch (padding) {
    case Padding::Same:
      return ceil_div(side, stride);
    case Padding::Valid: {
      const std::int64_t span = side + 2 * pad - window;
      if (span < 0) throw ValidationError("output_side: window larger than input");
      return span / stride + 1;
    }
    case Padding::Ceil: {
      const std::int64_t span = side + 2 * pad - window;
      if (span < 0) throw ValidationError("output_side: window larger than input");
      return ceil_div(span, stride) + 1;
    }
  }
  return 0;
}

LayerSpec make_conv(std::int64_t M, std::int64_t N, std::int64_t S_M, std::int64_t S_F,
                    std::int64_t stride, std::int64_t groups, Padding padding, bool has_bias) {
  LayerSpec l;
  l.M = M;
  l.N = N;
  l.S_M = S_M;
  l.S_F = S_F;
  l.S_Fw = S_F;
  l.stride = stride;
  l.groups = groups;
  l.padding = padding;
  l.has_bias = has_bias;
  if (groups > 1 && groups == M && N == M) {
    l.kind = LayerKind::DepthwiseConv;
  } else if (groups > 1) {
    l.kind = LayerKind::GroupConv;
  } else if (S_F == 1) {
    l.kind = LayerKind::PointwiseConv;
  } else {
    l.kind = LayerKind::StandardConv;
  }
  l.S_N = output_side(S_M, S_F, stride, padding);
  validate(l);
  return l;
}

void validate(const LayerSpec& l) {
  auto fail = [&](const std::string& what) {
    throw ValidationError("layer '" + l.id + "': " + what);
  };
  if (l.M <= 0 || l.N <= 0 || l.S_M <= 0 || l.S_N <= 0) fail("non-positive shape");
  if (!is_parametric(l.kind)) return;
  if (l.S_F <= 0 || l.S_Fw <= 0 || l.stride <= 0 || l.groups <= 0) fail("non-positive filter");
  if (l.M % l.groups != 0 || l.N % l.groups != 0) fail("channels not divisible by groups");
  if (l.kind == LayerKind::DepthwiseConv && (l.groups != l.M || l.N != l.M)) {
    fail("depthwise-conv requires groups == M == N");
  }
  if (l.kind == LayerKind::PointwiseConv && (l.S_F != 1 || l.S_Fw != 1)) {
    fail("pointwise-conv requires a 1x1 filter");
  }
  if (l.kind == LayerKind::FullyConnected) {
    if (l.S_N != 1) fail("fully-connected output must be 1x1");
    return;
  }
  const std::int64_t window = std::max(l.S_F, l.S_Fw);
  if (l.padding != Padding::Same && window > l.S_M + 2 * l.pad) fail("filter larger than input");
  if (output_side(l.S_M, window, l.stride, l.padding, l.pad) != l.S_N) {
    fail("S_N inconsistent with S_M, S_F, stride and padding");
  }
}

std::uint64_t count_params(const LayerSpec& l) {
  if (!is_parametric(l.kind)) return 0;
  std::uint64_t p = u64(l.N) * u64(l.M / l.groups) * u64(l.S_F) * u64(l.S_Fw);
  if (l.has_bias) p += u64(l.N);
  return p;
}

std::uint64_t count_activations(const LayerSpec& l) { return u64(l.N) * u64(l.S_N) * u64(l.S_N); }

std::uint64_t count_macs(const LayerSpec& l) {
  if (!is_parametric(l.kind)) return 0;
  return u64(l.N) * u64(l.M / l.groups) * u64(l.S_F) * u64(l.S_Fw) * u64(l.S_N) * u64(l.S_N);
}

std::optional<double> ModelStats::a_per_p() const { return ratio(A, P); }
std::optional<double> ModelStats::mc_per_p() const { return ratio(Mc, P); }
std::optional<double> ModelStats::mc_per_a() const { return ratio(Mc, A); }

ModelStats aggregate_stats(const ArchitectureSpec& arch, ActivationConvention convention) {
  if (arch.layers.empty()) {
    throw ValidationError("architecture '" + arch.name + "' has no layers");
  }
  ModelStats s;
  if (convention == ActivationConvention::FrameworkBlobs) {
    s.A = u64(arch.input_channels) * u64(arch.input_size) * u64(arch.input_size);
  }
  for (const auto& l : arch.layers) {
    s.P += count_params(l);
    s.Mc += count_macs(l);
    if (convention == ActivationConvention::FrameworkBlobs) {
      s.A += count_activations(l) * (1 + l.post.size());
    } else if (is_parametric(l.kind)) {
      s.A += count_activations(l);
    }
  }
  return s;
}

double energy_per_frame(double avg_power_watts, double fpt_ms) {
  if (!(avg_power_watts > 0.0) || !(fpt_ms > 0.0)) {
    throw ValidationError("energy_per_frame: inputs must be positive");
  }
  return avg_power_watts * fpt_ms;
}

double energy_efficiency(double batch_size, double mc_gmacs, double epf_joule) {
  if (!(batch_size > 0.0) || !(mc_gmacs > 0.0) || !(epf_joule > 0.0)) {
    throw ValidationError("energy_efficiency: inputs must be positive");
  }
  return batch_size * mc_gmacs / epf_joule;
}

}  // namespace peepkit
