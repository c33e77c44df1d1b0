#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wmi/error.hpp"
#include "wmi/pipeline.hpp"

namespace wmi {

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  PipelineConfig pipeline;
  std::filesystem::path out = "wmi_out";
  bool overlays = false;
};

// Keys accepted by apply_setting / parse_config, in documentation order.
const std::vector<std::string>& config_keys();

// Sets one key. Throws ConfigError for unknown keys or unparsable values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

// Flat `key = value` text; '#' starts a comment. Later lines override earlier ones.
void parse_config(RunConfig& config, std::string_view text, const std::string& origin = "<config>");
// Throws IoError(missing_file) when the file cannot be opened.
void load_config_file(RunConfig& config, const std::filesystem::path& path);

// (key, value) for every key, in config_keys() order.
std::vector<std::pair<std::string, std::string>> config_items(const RunConfig& config);

// Round-trippable `key = value` dump of every key.
std::string dump_config(const RunConfig& config);

}  // namespace wmi
