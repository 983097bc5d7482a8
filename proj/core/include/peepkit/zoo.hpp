// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "peepkit/arch.hpp"

namespace peepkit {

/// Bundled models and their expected group and building blocks.
struct ZooEntry {
  std::string_view name;
  std::string_view file_stem;
  Group group;
  ComponentSet components;
  bool reference;
};

const std::vector<ZooEntry>& zoo_entries();

/// Returns nullptr for names outside the bundled zoo.
const ZooEntry* find_zoo_entry(std::string_view name);

/// Name of the reference model of a group. Throws ValidationError for Group::Unknown.
std::string_view reference_model(Group group);

/// Names of all bundled models belonging to `group`, in table order.
std::vector<std::string_view> group_members(Group group);

/// Parses and validates an architecture document. `source` names the input in errors.
/// Throws ValidationError on parse errors, schema violations, unknown components,
/// shape mismatches and disagreement with the bundled table for known names.
ArchitectureSpec parse_architecture(std::string_view json_text, std::string_view source = "<memory>");

ArchitectureSpec load_architecture(const std::filesystem::path& path);

std::string to_json(const ArchitectureSpec& arch);

/// `$PEEPKIT_ZOO_DIR` if set, else the source tree's zoo, else the installed one.
std::filesystem::path default_zoo_dir();

ArchitectureSpec load_zoo_model(std::string_view name, const std::filesystem::path& dir = default_zoo_dir());

/// All bundled models in table order.
std::vector<ArchitectureSpec> load_zoo(const std::filesystem::path& dir = default_zoo_dir());

std::vector<std::pair<std::string, ModelStats>> zoo_table(
    const std::filesystem::path& dir = default_zoo_dir(),
    ActivationConvention convention = ActivationConvention::FrameworkBlobs);

}  // namespace peepkit
