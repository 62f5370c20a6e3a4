#pragma once

#include <string>
#include <utility>
#include <vector>

namespace mfsde::cli {

/// Everything needed to regenerate an output directory, plus the content
/// hashes of what was written.
struct Manifest {
  std::string command;
  std::string argument;
  bool double_kappa = false;
  int status = 0;
  std::string config_text;
  std::vector<std::pair<std::string, std::string>> artifacts;  ///< file name, SHA-256
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

/// Hashes every regular file in `dir` except manifest.txt, sorted by name.
std::vector<std::pair<std::string, std::string>> hash_directory(const std::string& dir);

void write_manifest(const std::string& dir, const Manifest& m);
Manifest read_manifest(const std::string& path);

}  // namespace mfsde::cli
