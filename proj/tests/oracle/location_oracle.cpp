#include "location_oracle.hpp"

#include <fstream>
#include <regex>
#include <sstream>

namespace masc {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

enum class Brace { type_body, code, other };

} // namespace

std::set<LocationKey> location_keys(const std::vector<SeedLocation>& locations) {
  std::set<LocationKey> out;
  for (const auto& l : locations)
    out.insert({l.file, l.anchor.offset, l.kind});
  return out;
}

std::set<LocationKey> lexical_locations(const std::string& path, const std::string& src) {
  static const std::regex type_header(R"(\b(class|interface|enum|record)\s+\w+)");
  static const std::regex class_header(R"(\bclass\s+\w+)");
  static const std::regex conditional_header(R"(^(else\b|if\s*\())");
  static const std::regex explicit_call(R"(^\s*(this|super)\s*\()");
  std::set<LocationKey> out;
  std::vector<Brace> stack;
  std::string header;
  int parens = 0;
  auto parent = [&] { return stack.empty() ? Brace::other : stack.back(); };
  for (std::size_t i = 0; i < src.size(); ++i) {
    char c = src[i];
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      i = src.find('\n', i);
      if (i == std::string::npos)
        break;
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      i = src.find("*/", i + 2) + 1;
      continue;
    }
    if (c == '"' || c == '\'') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != c)
        j += src[j] == '\\' ? 2 : 1;
      header += src.substr(i, j - i + 1);
      i = j;
      continue;
    }
    if (c == '(')
      ++parens;
    if (c == ')')
      --parens;
    if (c == ';' && parens == 0) {
      header.clear();
      continue;
    }
    if (c == '}') {
      if (!stack.empty())
        stack.pop_back();
      header.clear();
      continue;
    }
    if (c != '{') {
      header += c;
      continue;
    }
    auto h = trim(header);
    header.clear();
    std::size_t anchor = i + 1;
    bool anonymous = false;
    if (!h.empty() && h.back() == ')') {
      int depth = 0;
      std::size_t k = h.size();
      while (k-- > 0) {
        if (h[k] == ')')
          ++depth;
        if (h[k] == '(' && --depth == 0)
          break;
      }
      anonymous = std::regex_search(h.substr(0, k), std::regex(R"(\bnew\s+[\w.$<>, ]+\s*$)"));
    }
    if (anonymous) {
      out.insert({path, anchor, LocationKind::anonymous_inner_body});
      stack.push_back(Brace::type_body);
    } else if (std::regex_search(h, type_header) && h.back() != ')') {
      if (std::regex_search(h, class_header))
        out.insert({path, anchor, LocationKind::class_body});
      stack.push_back(Brace::type_body);
    } else if (parent() == Brace::type_body) {
      bool callable = h.empty() || h == "static" || h.back() == ')' || h.find(" throws ") != std::string::npos;
      if (callable) {
        std::smatch m;
        auto rest = src.substr(anchor);
        if (std::regex_search(rest, m, explicit_call) && m.position(0) == 0)
          anchor += src.find(';', anchor) + 1 - anchor;
        out.insert({path, anchor, LocationKind::method_body_start});
        stack.push_back(Brace::code);
      } else {
        stack.push_back(Brace::other);
      }
    } else if (parent() == Brace::code) {
      if (std::regex_search(h, conditional_header))
        out.insert({path, anchor, LocationKind::statement_in_conditional});
      bool initializer = !h.empty() && (h.back() == '=' || h.back() == ']');
      stack.push_back(initializer ? Brace::other : Brace::code);
    } else {
      stack.push_back(Brace::other);
    }
  }
  return out;
}

std::set<LocationKey> lexical_locations(const fs::path& root) {
  std::set<LocationKey> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.path().extension() != ".java")
      continue;
    auto rel = fs::relative(e.path(), root).generic_string();
    auto found = lexical_locations(rel, read_file(e.path()));
    out.insert(found.begin(), found.end());
  }
  return out;
}

} // namespace masc
