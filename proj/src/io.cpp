#include "trex/io.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "trex/errors.hpp"

namespace trex {

std::string config_block(const ConfigItems& config) {
  std::ostringstream os;
  for (const auto& [k, v] : config) os << "# " << k << "=" << v << "\n";
  return os.str();
}

std::string resolve_output_path(const std::string& path) {
  if (path == "-" || path.empty()) return path;
  if (path.front() == '/') return path;
  const char* dir = std::getenv("TREX_OUTPUT_DIR");
  if (dir == nullptr || *dir == '\0') return path;
  std::string out(dir);
  if (out.back() != '/') out += '/';
  return out + path;
}

void write_text_file(const std::string& path, const std::string& text) {
  if (path == "-" || path.empty()) {
    std::cout << text;
    return;
  }
  const std::string resolved = resolve_output_path(path);
  std::ofstream os(resolved);
  if (!os) fail(errc::config_invalid, "cannot open output file '" + resolved + "'");
  os << text;
}

}  // namespace trex
