// SPDX-License-Identifier: Apache-2.0
#include "peepkit/zoo.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "peepkit/error.hpp"

namespace peepkit {
namespace {

using nlohmann::json;
using C = Component;

const ComponentSet kSqueezeNet{C::FireModule, C::PWConv, C::Branching};
const ComponentSet kSqueezeNext{C::FireModule, C::PWConv, C::Branching, C::ResidualSkip,
                                C::AsymmetricFilterDecomposition};
const ComponentSet kShuffleNet{C::DWConv, C::ChannelShuffling, C::PWConv, C::Branching,
                               C::ResidualSkip};

const std::vector<ZooEntry> kEntries{
    {"AlexNet", "alexnet", Group::NonCompact, {}, true},
    {"SqueezeNet-V1.0", "squeezenet_v1_0", Group::SqueezeNet, kSqueezeNet, true},
    {"SqueezeNet-V1.1", "squeezenet_v1_1", Group::SqueezeNet, kSqueezeNet, false},
    {"1.0-G-SqNxt-23", "sqnxt_1_0_g_23", Group::SqueezeNext, kSqueezeNext, false},
    {"1.0-SqNxt-23", "sqnxt_1_0_23", Group::SqueezeNext, kSqueezeNext, true},
    {"1.0-SqNxt-23v5", "sqnxt_1_0_23v5", Group::SqueezeNext, kSqueezeNext, false},
    {"2.0-SqNxt-23", "sqnxt_2_0_23", Group::SqueezeNext, kSqueezeNext, false},
    {"2.0-SqNxt-23v5", "sqnxt_2_0_23v5", Group::SqueezeNext, kSqueezeNext, false},
    {"MobileNet-V1", "mobilenet_v1", Group::MobileNet, {C::DWConv, C::PWConv}, true},
    {"MobileNet-V2", "mobilenet_v2", Group::MobileNet, {C::DWConv, C::PWConv, C::ResidualSkip}, false},
    {"ShuffleNet-V1", "shufflenet_v1", Group::ShuffleNet, kShuffleNet, true},
    {"ShuffleNet-V2", "shufflenet_v2", Group::ShuffleNet, kShuffleNet, false},
    {"DenseNet-121", "densenet121", Group::DenseNet, {C::DenseBlock, C::PWConv, C::ResidualSkip}, true},
    {"GoogLeNet", "googlenet", Group::InceptionNet, {C::InceptionModule, C::PWConv, C::Branching}, true},
    {"Inception-V2", "inception_v2", Group::InceptionNet,
     {C::InceptionModule, C::PWConv, C::Branching, C::AsymmetricFilterDecomposition}, false},
    {"SE-BN-Inception", "se_bn_inception", Group::InceptionNet,
     {C::InceptionModule, C::PWConv, C::Branching, C::ResidualSkip, C::AsymmetricFilterDecomposition},
     false},
};

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& field, const std::string& what) const {
    throw ValidationError(source_ + ": field '" + field + "': " + what);
  }

  const json& require(const json& obj, const std::string& key, const std::string& path) const {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + key, "missing");
    return *it;
  }

  std::int64_t integer(const json& obj, const std::string& key, const std::string& path) const {
    const json& v = require(obj, key, path);
    if (!v.is_number_integer()) fail(path + key, "expected an integer");
    return v.get<std::int64_t>();
  }

  std::int64_t integer_or(const json& obj, const std::string& key, const std::string& path,
                          std::int64_t fallback) const {
    return obj.contains(key) ? integer(obj, key, path) : fallback;
  }

  std::string string(const json& obj, const std::string& key, const std::string& path) const {
    const json& v = require(obj, key, path);
    if (!v.is_string()) fail(path + key, "expected a string");
    return v.get<std::string>();
  }

  std::vector<std::string> strings(const json& obj, const std::string& key, const std::string& path,
                                   bool required) const {
    if (!required && !obj.contains(key)) return {};
    const json& v = require(obj, key, path);
    if (!v.is_array()) fail(path + key, "expected an array");
    std::vector<std::string> out;
    for (const auto& e : v) {
      if (!e.is_string()) fail(path + key, "expected an array of strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }

  bool boolean_or(const json& obj, const std::string& key, const std::string& path, bool fallback) const {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean()) fail(path + key, "expected a boolean");
    return obj[key].get<bool>();
  }

  double number(const json& obj, const std::string& key, const std::string& path) const {
    const json& v = require(obj, key, path);
    if (!v.is_number()) fail(path + key, "expected a number");
    return v.get<double>();
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

struct Shape {
  std::int64_t channels;
  std::int64_t side;
};

[[noreturn]] void mismatch(const Reader& r, const std::string& from, const std::string& to,
                           const std::string& what) {
  throw ValidationError(r.source() + ": shape mismatch between '" + from + "' and '" + to + "': " + what);
}

// Fills S_M / S_N from the topology and checks every edge.
void resolve_shapes(ArchitectureSpec& arch, const Reader& r) {
  std::map<std::string, Shape> shapes{{"input", {arch.input_channels, arch.input_size}}};
  for (auto& l : arch.layers) {
    if (shapes.count(l.id)) r.fail("layers." + l.id, "duplicate layer id");
    if (l.fan_in.empty()) r.fail("layers." + l.id + ".fan_in", "empty");
    std::vector<Shape> in;
    for (const auto& src : l.fan_in) {
      auto it = shapes.find(src);
      if (it == shapes.end()) r.fail("layers." + l.id + ".fan_in", "unknown producer '" + src + "'");
      in.push_back(it->second);
    }
    const Shape& first = in.front();
    const std::string& src = l.fan_in.front();
    switch (l.kind) {
      case LayerKind::FullyConnected:
        if (l.M != first.channels * first.side * first.side) {
          mismatch(r, src, l.id, "M != producer N x S_N^2");
        }
        l.S_M = 1;
        l.S_N = 1;
        break;
      case LayerKind::Concat: {
        std::int64_t sum = 0;
        for (std::size_t i = 0; i < in.size(); ++i) {
          if (in[i].side != first.side) mismatch(r, l.fan_in[i], l.id, "concat inputs differ in S_N");
          sum += in[i].channels;
        }
        if (sum != l.N) mismatch(r, src, l.id, "N != sum of concat inputs");
        l.M = l.N;
        l.S_M = l.S_N = first.side;
        break;
      }
      case LayerKind::Add:
        for (std::size_t i = 0; i < in.size(); ++i) {
          if (in[i].side != first.side || in[i].channels != l.N) {
            mismatch(r, l.fan_in[i], l.id, "add inputs differ in shape");
          }
        }
        l.M = l.N;
        l.S_M = l.S_N = first.side;
        break;
      case LayerKind::ChannelScale:
        if (in.size() != 2) r.fail("layers." + l.id + ".fan_in", "channel-scale needs features and gates");
        if (first.channels != l.N || in[1].channels != l.N || in[1].side != 1) {
          mismatch(r, l.fan_in[1], l.id, "gates must be N x 1 x 1");
        }
        l.M = l.N;
        l.S_M = l.S_N = first.side;
        break;
      default: {
        if (in.size() != 1) r.fail("layers." + l.id + ".fan_in", "expected a single producer");
        if (l.kind == LayerKind::Slice) {
          if (l.M != first.channels || l.N > first.channels) mismatch(r, src, l.id, "slice exceeds producer");
        } else if (l.M != first.channels) {
          mismatch(r, src, l.id, "M != producer N");
        }
        l.S_M = first.side;
        if (is_conv(l.kind) || l.kind == LayerKind::Pool) {
          l.S_N = output_side(l.S_M, std::max(l.S_F, l.S_Fw), l.stride, l.padding, l.pad);
        } else {
          l.S_N = l.S_M;
        }
        if (l.kind != LayerKind::Slice && !is_conv(l.kind) && l.N != l.M) {
          mismatch(r, src, l.id, "non-parametric node changes channel count");
        }
      }
    }
    if (is_parametric(l.kind)) validate(l);
    shapes[l.id] = {l.N, l.S_N};
  }
}

LayerSpec parse_layer(const json& j, std::size_t index, const Reader& r) {
  const std::string path = "layers[" + std::to_string(index) + "].";
  if (!j.is_object()) r.fail(path, "expected an object");
  LayerSpec l;
  l.id = r.string(j, "id", path);
  try {
    l.kind = parse_layer_kind(r.string(j, "kind", path));
  } catch (const ValidationError& e) {
    r.fail(path + "kind", e.what());
  }
  l.N = r.integer(j, "N", path);
  const bool merge = l.kind == LayerKind::Concat || l.kind == LayerKind::Add || l.kind == LayerKind::ChannelScale;
  l.M = merge ? r.integer_or(j, "M", path, l.N) : r.integer(j, "M", path);
  const bool windowed = is_conv(l.kind) || l.kind == LayerKind::Pool;
  l.S_F = windowed ? r.integer(j, "S_F", path) : r.integer_or(j, "S_F", path, 1);
  l.S_Fw = r.integer_or(j, "S_Fw", path, l.S_F);
  l.stride = windowed ? r.integer(j, "stride", path) : r.integer_or(j, "stride", path, 1);
  l.groups = is_conv(l.kind) ? r.integer(j, "groups", path) : r.integer_or(j, "groups", path, 1);
  l.pad = r.integer_or(j, "pad", path, 0);
  if (j.contains("padding")) {
    try {
      l.padding = parse_padding(r.string(j, "padding", path));
    } catch (const ValidationError& e) {
      r.fail(path + "padding", e.what());
    }
  } else if (windowed) {
    r.fail(path + "padding", "missing");
  }
  l.has_bias = r.boolean_or(j, "has_bias", path, false);
  l.fan_in = r.strings(j, "fan_in", path, true);
  l.post = r.strings(j, "post", path, false);
  if (l.kind == LayerKind::Op) l.op = r.string(j, "op", path);
  for (auto v : {l.M, l.N, l.S_F, l.S_Fw, l.stride, l.groups}) {
    if (v <= 0) r.fail(path, "non-positive shape field in layer '" + l.id + "'");
  }
  return l;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

const std::vector<ZooEntry>& zoo_entries() { return kEntries; }

const ZooEntry* find_zoo_entry(std::string_view name) {
  for (const auto& e : kEntries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::string_view reference_model(Group group) {
  for (const auto& e : kEntries) {
    if (e.group == group && e.reference) return e.name;
  }
  throw ValidationError("group '" + std::string(to_string(group)) + "' has no reference model");
}

std::vector<std::string_view> group_members(Group group) {
  std::vector<std::string_view> out;
  for (const auto& e : kEntries) {
    if (e.group == group) out.push_back(e.name);
  }
  return out;
}

ArchitectureSpec parse_architecture(std::string_view text, std::string_view source) {
  Reader r{std::string(source)};
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string(source) + ": parse error at " + line_col(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) r.fail("", "top level must be an object");
  if (r.integer(doc, "schema_version", "") != 1) r.fail("schema_version", "unsupported version");

  ArchitectureSpec arch;
  arch.name = r.string(doc, "name", "");
  try {
    arch.group = parse_group(r.string(doc, "group", ""));
  } catch (const ValidationError& e) {
    r.fail("group", e.what());
  }
  arch.input_size = r.integer(doc, "input_size", "");
  arch.input_channels = r.integer_or(doc, "input_channels", "", 3);
  if (arch.input_size <= 0 || arch.input_channels <= 0) r.fail("input_size", "must be positive");
  for (const auto& c : r.strings(doc, "components", "", true)) {
    try {
      arch.components.insert(parse_component(c));
    } catch (const ValidationError& e) {
      r.fail("components", e.what());
    }
  }
  if (doc.contains("provenance")) arch.provenance = r.string(doc, "provenance", "");
  arch.approximate = r.boolean_or(doc, "approximate", "", false);
  arch.reference = r.boolean_or(doc, "reference", "", false);
  if (doc.contains("observed_kernel_mix")) {
    const json& m = doc["observed_kernel_mix"];
    KernelMix mix{r.number(m, "gemv2t_pct", "observed_kernel_mix."),
                  r.number(m, "gemv2n_pct", "observed_kernel_mix."),
                  r.number(m, "gemmk1_pct", "observed_kernel_mix.")};
    try {
      validate(mix);
    } catch (const ValidationError& e) {
      r.fail("observed_kernel_mix", e.what());
    }
    arch.observed_kernel_mix = mix;
  }
  const json& layers = r.require(doc, "layers", "");
  if (!layers.is_array() || layers.empty()) r.fail("layers", "expected a non-empty array");
  for (std::size_t i = 0; i < layers.size(); ++i) arch.layers.push_back(parse_layer(layers[i], i, r));
  resolve_shapes(arch, r);

  if (const ZooEntry* e = find_zoo_entry(arch.name)) {
    if (e->group != arch.group) r.fail("group", "does not match the known group of " + arch.name);
    if (e->components != arch.components) r.fail("components", "do not match the known set of " + arch.name);
  }
  return arch;
}

ArchitectureSpec load_architecture(const std::filesystem::path& path) {
  return parse_architecture(read_file(path), path.string());
}

std::string to_json(const ArchitectureSpec& arch) {
  json doc;
  doc["schema_version"] = 1;
  doc["name"] = arch.name;
  doc["group"] = std::string(to_string(arch.group));
  doc["input_size"] = arch.input_size;
  doc["input_channels"] = arch.input_channels;
  doc["components"] = json::array();
  for (auto c : arch.components) doc["components"].push_back(std::string(to_string(c)));
  doc["provenance"] = arch.provenance;
  doc["approximate"] = arch.approximate;
  doc["reference"] = arch.reference;
  if (arch.observed_kernel_mix) {
    doc["observed_kernel_mix"] = {{"gemv2t_pct", arch.observed_kernel_mix->gemv2t_pct},
                                  {"gemv2n_pct", arch.observed_kernel_mix->gemv2n_pct},
                                  {"gemmk1_pct", arch.observed_kernel_mix->gemmk1_pct}};
  }
  doc["layers"] = json::array();
  for (const auto& l : arch.layers) {
    json j{{"id", l.id}, {"kind", std::string(to_string(l.kind))}, {"M", l.M}, {"N", l.N}, {"fan_in", l.fan_in}};
    if (is_conv(l.kind) || l.kind == LayerKind::Pool || l.kind == LayerKind::FullyConnected) {
      j["S_F"] = l.S_F;
      j["stride"] = l.stride;
      j["padding"] = std::string(to_string(l.padding));
    }
    if (l.S_Fw != l.S_F) j["S_Fw"] = l.S_Fw;
    if (is_parametric(l.kind) || l.kind == LayerKind::Shuffle) j["groups"] = l.groups;
    if (l.pad != 0) j["pad"] = l.pad;
    if (l.has_bias) j["has_bias"] = true;
    if (!l.post.empty()) j["post"] = l.post;
    if (l.kind == LayerKind::Op) j["op"] = l.op;
    doc["layers"].push_back(std::move(j));
  }
  return doc.dump(1) + "\n";
}

std::filesystem::path default_zoo_dir() {
  if (const char* env = std::getenv("PEEPKIT_ZOO_DIR"); env && *env) return env;
  std::filesystem::path source{PEEPKIT_SOURCE_ZOO_DIR};
  if (std::filesystem::is_directory(source)) return source;
  return PEEPKIT_INSTALLED_ZOO_DIR;
}

ArchitectureSpec load_zoo_model(std::string_view name, const std::filesystem::path& dir) {
  const ZooEntry* e = find_zoo_entry(name);
  if (!e) throw ValidationError("unknown zoo model '" + std::string(name) + "'");
  return load_architecture(dir / (std::string(e->file_stem) + ".json"));
}

std::vector<ArchitectureSpec> load_zoo(const std::filesystem::path& dir) {
  std::vector<ArchitectureSpec> out;
  for (const auto& e : kEntries) out.push_back(load_zoo_model(e.name, dir));
  return out;
}

std::vector<std::pair<std::string, ModelStats>> zoo_table(const std::filesystem::path& dir,
                                                          ActivationConvention convention) {
  std::vector<std::pair<std::string, ModelStats>> out;
  for (const auto& arch : load_zoo(dir)) out.emplace_back(arch.name, aggregate_stats(arch, convention));
  return out;
}

}  // namespace peepkit
