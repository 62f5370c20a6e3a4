#include "manifest.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace mfsde::cli {
namespace fs = std::filesystem;

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return os.str();
}

std::string sha256_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return sha256_hex(ss.str());
}

std::vector<std::pair<std::string, std::string>> hash_directory(const std::string& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name == "manifest.txt") continue;
    out.emplace_back(name, sha256_file(entry.path().string()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

void write_manifest(const std::string& dir, const Manifest& m) {
  std::ofstream os(fs::path(dir) / "manifest.txt", std::ios::binary);
  os << "# mfsde run manifest\n";
  os << "command = " << m.command << '\n';
  os << "argument = " << m.argument << '\n';
  os << "double_kappa = " << (m.double_kappa ? 1 : 0) << '\n';
  os << "status = " << m.status << '\n';
  os << "[config]\n" << m.config_text;
  if (!m.config_text.empty() && m.config_text.back() != '\n') os << '\n';
  os << "[artifacts]\n";
  for (const auto& [name, hash] : m.artifacts) os << name << " = " << hash << '\n';
  if (!os) throw std::runtime_error("cannot write manifest in " + dir);
}

Manifest read_manifest(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open manifest " + path);
  Manifest m;
  enum class Part { header, config, artifacts } part = Part::header;
  std::string line;
  auto value_of = [](const std::string& l) {
    const auto eq = l.find(" = ");
    if (eq == std::string::npos) throw std::runtime_error("malformed manifest line: " + l);
    return std::make_pair(l.substr(0, eq), l.substr(eq + 3));
  };
  while (std::getline(is, line)) {
    if (line == "[config]") {
      part = Part::config;
      continue;
    }
    if (line == "[artifacts]") {
      part = Part::artifacts;
      continue;
    }
    if (part == Part::config) {
      m.config_text += line + '\n';
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    const auto [key, value] = value_of(line);
    if (part == Part::artifacts) {
      m.artifacts.emplace_back(key, value);
    } else if (key == "command") {
      m.command = value;
    } else if (key == "argument") {
      m.argument = value;
    } else if (key == "double_kappa") {
      m.double_kappa = value == "1";
    } else if (key == "status") {
      m.status = std::stoi(value);
    } else {
      throw std::runtime_error("unknown manifest key " + key);
    }
  }
  if (m.command.empty()) throw std::runtime_error("manifest has no command");
  return m;
}

}  // namespace mfsde::cli
