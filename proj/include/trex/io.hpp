#pragma once

#include <string>
#include <utility>
#include <vector>

namespace trex {

using ConfigItems = std::vector<std::pair<std::string, std::string>>;

/// `# key=value` comment block reproducing the run configuration.
std::string config_block(const ConfigItems& config);

/// Resolve an output path against TREX_OUTPUT_DIR when it is relative.
std::string resolve_output_path(const std::string& path);

/// Write text to path ("-" means stdout).
void write_text_file(const std::string& path, const std::string& text);

}  // namespace trex
