#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "masc/api_model.hpp"
#include "masc/diagnostic.hpp"
#include "masc/java_parser.hpp"
#include "masc/taxonomy.hpp"

namespace masc {

/// A class body or method body with the names used for locations inside it.
struct ScopeSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string class_name;
  std::optional<std::string> method;
};

struct SourceFile {
  /// Relative to the project root, '/'-separated.
  std::string path;
  std::shared_ptr<const JavaTree> tree;
  std::string package;
  std::vector<std::string> declared_types; // qualified, nested ones use '.'
  std::vector<std::string> imports;        // as written, wildcards end in ".*"
  /// Innermost-last is not guaranteed; use innermost_scope().
  std::vector<ScopeSpan> scopes;

  /// Innermost scope containing `offset`, nullptr outside every class.
  const ScopeSpan* innermost_scope(std::size_t offset) const;
};

struct ByteRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const ByteRange&) const = default;
};

/// One place where an API type is used: a static call, an object creation
/// (anonymous or not) or an extends/implements clause.
struct UsageSite {
  std::string api;
  /// Invoked member, "<init>" for creations, "" for type extension.
  std::string member;
  std::size_t file_index = 0;
  int line = 0;
  ByteRange range;
  /// Arguments of calls and creations.
  std::vector<ByteRange> arguments;
};

struct SourceModel {
  std::filesystem::path root;
  std::vector<SourceFile> files;
  std::map<std::string, std::vector<UsageSite>> usages;
  std::vector<Diagnostic> diagnostics;

  /// nullptr when absent.
  const SourceFile* find_file(std::string_view path) const;
};

struct Anchor {
  int line = 0;   // 1-based
  int column = 0; // 1-based byte column
  std::size_t offset = 0;

  bool operator==(const Anchor&) const = default;
  auto operator<=>(const Anchor&) const = default;
};

struct SeedLocation {
  std::string file;
  Anchor anchor;
  LocationKind kind = LocationKind::method_body_start;
  /// Qualified; anonymous classes are "Outer$N".
  std::string enclosing_class;
  /// "main(String[])", "<init>(int)", "<clinit>", "<init-block>".
  std::optional<std::string> enclosing_method;
  /// Indentation for inserted lines.
  std::string indent;
  /// Similarity sites only: the string argument of the existing call, for
  /// in-place rewriting.
  std::optional<ByteRange> usage_argument;
  int usage_line = 0;
};

/// Parses every .java file below `root` (sorted by path). Files with syntax
/// errors are excluded and reported as diagnostics. The model, when given,
/// is used to resolve wildcard imports. Throws NotFoundError when no source
/// file exists.
SourceModel scan(
    const std::filesystem::path& root,
    const ApiModel* model = nullptr,
    int jobs = 1);

/// One main-entry location per `static void main(String[])`. Throws
/// NotFoundError when the model declares none.
std::vector<SeedLocation> locations_main(const SourceModel& model);

/// A location at the statement boundary next to each in-method use of the
/// case's API (known subtypes included when the API model is given).
std::vector<SeedLocation> locations_similarity(
    const SourceModel& model,
    const MisuseCase& misuse,
    const ApiModel* api_model = nullptr);

/// Every position whose kind is in `kinds`, in document order. Throws
/// ValidationError on an empty set.
std::vector<SeedLocation> locations_exhaustive(const SourceModel& model, const PlacementKinds& kinds);

nlohmann::json to_json(const SeedLocation& location);

} // namespace masc
