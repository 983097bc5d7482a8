// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif
#include <nlohmann/json.hpp>

#include "peepkit/classifier.hpp"
#include "peepkit/defense.hpp"
#include "peepkit/error.hpp"
#include "peepkit/fingerprint.hpp"
#include "peepkit/synth.hpp"
#include "peepkit/zoo.hpp"

namespace peepkit::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string input;
  std::string series;
  std::string hardware;
  std::string reference_dir;
  std::string output;
  std::vector<std::int64_t> batch_sizes;
  std::uint64_t seed = 0;
  std::int64_t G = 4;
  bool json = false;
};

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void require_file(const std::string& path, const char* what) {
  if (!path.empty() && !fs::is_regular_file(path)) {
    throw ValidationError(std::string(what) + " '" + path + "' does not exist or is not a file");
  }
}

void require_dir(const std::string& path) {
  if (!path.empty() && !fs::is_directory(path)) {
    throw ValidationError("reference directory '" + path + "' does not exist");
  }
}

void emit(const std::string& text, const Options& o, std::ostream& out) {
  if (o.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.output, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + o.output + "'");
  f << text;
}

ReferenceSource reference_source(const Options& o) {
  if (o.reference_dir.empty()) return synth_reference_source(default_zoo_dir());
  const fs::path dir = o.reference_dir;
  return [dir](std::string_view model, const Fingerprint&) {
    std::vector<fs::path> tried;
    if (const ZooEntry* e = find_zoo_entry(model)) tried.push_back(dir / (std::string(e->file_stem) + ".json"));
    tried.push_back(dir / (std::string(model) + ".json"));
    for (const auto& p : tried) {
      if (fs::is_regular_file(p)) return load_fingerprint(p);
    }
    throw ValidationError("no reference fingerprint for '" + std::string(model) + "' in '" + dir.string() + "'");
  };
}

int cmd_stats(const Options& o, std::ostream& out) {
  require_file(o.input, "architecture");
  const ArchitectureSpec arch = load_architecture(o.input);
  const ModelStats s = aggregate_stats(arch);
  if (o.json) {
    nlohmann::json doc{{"name", arch.name}, {"P", s.P}, {"A", s.A}, {"Mc", s.Mc}};
    if (auto r = s.a_per_p()) doc["A_per_P"] = *r;
    if (auto r = s.mc_per_p()) doc["Mc_per_P"] = *r;
    if (auto r = s.mc_per_a()) doc["Mc_per_A"] = *r;
    out << doc.dump(1) << "\n";
    return kOk;
  }
  auto ratio = [](std::optional<double> r) { return r ? fixed(*r, 2) : std::string("n/a"); };
  out << arch.name << "\n";
  out << "P=" << fixed(s.p_millions(), 2) << "M  A=" << fixed(s.a_millions(), 2) << "M  Mc="
      << fixed(s.mc_millions(), 2) << "M\n";
  out << "A/P=" << ratio(s.a_per_p()) << "  Mc/P=" << ratio(s.mc_per_p()) << "  Mc/A=" << ratio(s.mc_per_a())
      << "\n";
  return kOk;
}

int cmd_ingest(const Options& o, std::ostream& out, std::ostream& err) {
  require_file(o.input, "profiler dump");
  require_file(o.series, "series table");
  std::vector<std::string> warnings;
  Fingerprint fp;
  fp.kernel_mix = ingest_profiler_csv(o.input, &warnings);
  if (!o.series.empty()) {
    std::ifstream f(o.series, std::ios::binary);
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    fp.series = parse_series_csv(text);
  }
  if (!o.hardware.empty()) fp.hardware = o.hardware;
  validate(fp);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  emit(to_json(fp), o, out);
  return kOk;
}

int cmd_classify(const Options& o, std::ostream& out) {
  require_file(o.input, "fingerprint");
  require_dir(o.reference_dir);
  const Thresholds t = thresholds_from_environment();
  const Fingerprint fp = load_fingerprint(o.input);
  const PredictionReport report = classify(fp, reference_source(o), t);
  if (!o.output.empty()) emit(to_json(report), o, out);
  out << (o.json ? to_json(report) : to_text(report));
  return kOk;
}

int cmd_synth(const Options& o, std::ostream& out) {
  require_file(o.input, "architecture");
  const HardwareProfile hw = resolve_hardware(o.hardware);
  const ArchitectureSpec arch = load_architecture(o.input);
  const auto b = o.batch_sizes.empty() ? default_batch_sizes(hw) : o.batch_sizes;
  emit(to_json(synth_fingerprint(arch, hw, b, o.seed)), o, out);
  return kOk;
}

int cmd_secure(const Options& o, std::ostream& out) {
  require_file(o.input, "architecture");
  const ArchitectureSpec base = load_architecture(o.input);
  const ArchitectureSpec secured = secure_transform(base, {o.G});
  const OverheadReport r = overhead_report(base, secured);
  if (!o.output.empty()) emit(to_json(secured), o, out);
  if (o.json) {
    out << to_json(r);
  } else {
    out << secured.name << " (G=" << o.G << ")\n" << to_text(r);
  }
  return kOk;
}

int cmd_confuse(const Options& o, std::ostream& out) {
  require_file(o.input, "architecture");
  require_dir(o.reference_dir);
  const Thresholds t = thresholds_from_environment();
  const HardwareProfile hw = resolve_hardware(o.hardware);
  const ArchitectureSpec base = load_architecture(o.input);
  const ArchitectureSpec secured = secure_transform(base, {o.G});
  const ConfusabilityReport r = evaluate_confusability(secured, base.name, hw, reference_source(o), t);
  out << (o.json ? to_json(r) : to_text(r));
  return kOk;
}

void error_line(std::ostream& err, const char* kind, const std::string& message,
                const std::string& channel = {}) {
  nlohmann::json doc{{"error", kind}, {"message", message}};
  if (!channel.empty()) doc["channel"] = channel;
  err << doc.dump() << "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Architecture fingerprinting from GPU profiling side channels", "peepkit"};
  app.require_subcommand(1);
  Options o;

  auto* stats = app.add_subcommand("stats", "Parameter, activation and MAC counts of an architecture");
  stats->add_option("arch", o.input, "Architecture JSON")->required();
  stats->add_flag("--json", o.json, "JSON output");

  auto* ingest = app.add_subcommand("ingest", "Build a fingerprint from a profiler CSV dump");
  ingest->add_option("profile", o.input, "nvprof-style CSV")->required();
  ingest->add_option("--series", o.series, "Metric table CSV (B, FPt_ms, BPt_ms, Mfp_MiB, Tp_fps, EPF_mJ)");
  ingest->add_option("--hw", o.hardware, "Hardware id recorded in the fingerprint");
  ingest->add_option("-o,--output", o.output, "Write the fingerprint here instead of stdout");

  auto* classify_cmd = app.add_subcommand("classify", "Predict building blocks, group and model");
  classify_cmd->add_option("fingerprint", o.input, "Fingerprint JSON")->required();
  classify_cmd->add_option("--reference-dir", o.reference_dir,
                           "Reference fingerprints; synthesized from the zoo when absent");
  classify_cmd->add_option("-o,--output", o.output, "Also write the JSON report here");
  classify_cmd->add_flag("--json", o.json, "JSON output");

  auto* synth = app.add_subcommand("synth", "Synthesize a fingerprint for an architecture");
  synth->add_option("arch", o.input, "Architecture JSON")->required();
  synth->add_option("--hw", o.hardware, "p100, p4000 or a hardware JSON file")->required();
  synth->add_option("--seed", o.seed, "Jitter seed");
  synth->add_option("--batch-sizes", o.batch_sizes, "Batch sizes, comma separated")->delimiter(',');
  synth->add_option("-o,--output", o.output, "Write the fingerprint here instead of stdout");

  auto* secure = app.add_subcommand("secure", "Apply the group-convolution defense and report its overhead");
  secure->add_option("arch", o.input, "Architecture JSON")->required();
  secure->add_option("--G", o.G, "Channels per group")->required();
  secure->add_option("-o,--output", o.output, "Write the secured architecture here");
  secure->add_flag("--json", o.json, "JSON output");

  auto* confuse = app.add_subcommand("confuse", "Classify the synthesized fingerprint of a secured architecture");
  confuse->add_option("arch", o.input, "Architecture JSON")->required();
  confuse->add_option("--G", o.G, "Channels per group")->required();
  confuse->add_option("--hw", o.hardware, "p100, p4000 or a hardware JSON file")->required();
  confuse->add_option("--reference-dir", o.reference_dir, "Reference fingerprints");
  confuse->add_flag("--json", o.json, "JSON output");

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    error_line(err, "usage", e.what());
    return kUsage;
  }

  try {
    if (stats->parsed()) return cmd_stats(o, out);
    if (ingest->parsed()) return cmd_ingest(o, out, err);
    if (classify_cmd->parsed()) return cmd_classify(o, out);
    if (synth->parsed()) return cmd_synth(o, out);
    if (secure->parsed()) return cmd_secure(o, out);
    if (confuse->parsed()) return cmd_confuse(o, out);
  } catch (const InsufficientEvidence& e) {
    error_line(err, "insufficient-evidence", e.what(), e.channel());
    return kInsufficientEvidence;
  } catch (const Error& e) {
    error_line(err, "validation", e.what());
    return kValidation;
  } catch (const std::exception& e) {
    error_line(err, "validation", e.what());
    return kValidation;
  }
  error_line(err, "usage", "no subcommand");
  return kUsage;
}

}  // namespace peepkit::cli
