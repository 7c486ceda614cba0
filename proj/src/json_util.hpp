#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "masc/error.hpp"

namespace masc::detail {

using nlohmann::json;

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out)
    throw IoError("write failed: " + path.string());
}

inline json parse_json(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

inline void require_object(const json& j, const std::string& subject) {
  if (!j.is_object())
    throw ValidationError(subject, "expected an object");
}

/// Rejects keys outside `allowed`.
inline void check_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& subject) {
  require_object(j, subject);
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto name : allowed)
      known = known || key == name;
    if (!known)
      throw ValidationError(subject, "unknown field '" + key + "'");
  }
}

inline const json& required(const json& j, const char* key, const std::string& subject) {
  auto it = j.find(key);
  if (it == j.end())
    throw ValidationError(subject, std::string("missing field '") + key + "'");
  return *it;
}

inline std::string get_string(const json& j, const char* key, const std::string& subject) {
  const auto& v = required(j, key, subject);
  if (!v.is_string())
    throw ValidationError(subject, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

inline std::string get_string_or(const json& j, const char* key, std::string fallback, const std::string& subject) {
  if (!j.contains(key))
    return fallback;
  return get_string(j, key, subject);
}

inline std::vector<std::string> get_strings(const json& j, const char* key, const std::string& subject) {
  if (!j.contains(key))
    return {};
  const auto& v = j.at(key);
  if (!v.is_array())
    throw ValidationError(subject, std::string("field '") + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& item : v) {
    if (!item.is_string())
      throw ValidationError(subject, std::string("field '") + key + "' must hold strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

inline int get_int(const json& j, const char* key, int fallback, const std::string& subject) {
  if (!j.contains(key))
    return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer())
    throw ValidationError(subject, std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

inline bool get_bool(const json& j, const char* key, bool fallback, const std::string& subject) {
  if (!j.contains(key))
    return fallback;
  const auto& v = j.at(key);
  if (!v.is_boolean())
    throw ValidationError(subject, std::string("field '") + key + "' must be a boolean");
  return v.get<bool>();
}

} // namespace masc::detail
