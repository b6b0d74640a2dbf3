#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "geomctl/simulation.hpp"

namespace geomctl {

/// Sectioned key = value text. `#` starts a comment; sections are `[name]`.
/// Every key must be consumed by the loader, otherwise it is reported as unknown.
class ConfigDocument {
 public:
  static ConfigDocument parse(std::string_view text);

  /// "section.key=value"; the key is the part after the last dot, so
  /// "mode.2.start=0.4" targets section "mode.2". Creates missing entries.
  void apply_override(std::string_view assignment);

  void set(const std::string& section, const std::string& key, std::string value);
  bool has_section(const std::string& section) const;
  std::vector<std::string> sections() const;
  std::vector<std::string> keys(const std::string& section) const;
  std::optional<std::string> get(const std::string& section, const std::string& key) const;

 private:
  // Sections keep their keys in insertion order for stable error messages.
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> data_;
};

struct LoadedConfig {
  Scenario scenario;
  std::optional<std::string> csv_path;
};

/// Builds a scenario. Throws ConfigError on missing, malformed or unknown keys
/// and on values rejected by the domain types.
LoadedConfig build_scenario(const ConfigDocument& doc);

/// Reads `path`, applies the overrides in order, and builds the scenario.
/// A missing or unreadable file throws ConfigError naming the path.
LoadedConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

}  // namespace geomctl
