#pragma once

#include <cstdlib>
#include <filesystem>
#include <string>

#include "masc/api_model.hpp"
#include "masc/taxonomy.hpp"

namespace masc::testing {

inline std::filesystem::path data_path() {
  return MASC_DATA_DIR;
}

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(MASC_FIXTURE_DIR) / "projects" / name;
}

inline std::filesystem::path fixture_file(const std::string& name) {
  return std::filesystem::path(MASC_FIXTURE_DIR) / name;
}

inline const Registry& registry() {
  static const Registry r = load_registry(data_path() / "registry.json");
  return r;
}

inline const ApiModel& api_model() {
  static const ApiModel m = load_api_model(data_path() / "api_model.json");
  return m;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    auto pattern = (std::filesystem::temp_directory_path() / "masc-test-XXXXXX").string();
    if (!mkdtemp(pattern.data()))
      throw std::runtime_error("mkdtemp failed");
    path_ = pattern;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const {
    return path_;
  }
  std::filesystem::path operator/(const std::string& child) const {
    return path_ / child;
  }

 private:
  std::filesystem::path path_;
};

/// Drops all whitespace.
inline std::string squash(const std::string& text) {
  std::string out;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c)))
      out += c;
  return out;
}

} // namespace masc::testing
