#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "masc/api_model.hpp"
#include "masc/operators.hpp"

namespace masc {

enum class ConditionMode { generic, context_specific };

std::string to_string(ConditionMode mode);
std::optional<ConditionMode> parse_condition_mode(std::string_view text);

struct Snippet {
  /// File-level type declarations the snippet depends on (helper classes,
  /// intermediate interfaces).
  std::vector<std::string> helper_declarations;
  /// Statement-form body, one statement per entry.
  std::vector<std::string> statements;
  /// Declaration-form body: a class or variable declaration valid both as a
  /// member and as a local declaration.
  std::optional<std::string> declaration;

  bool operator==(const Snippet&) const = default;
};

struct Mutant {
  std::string id;
  std::string case_id;
  /// Absent for base instantiations.
  std::optional<Operator> op;
  std::optional<Operator> body_op;
  std::string api; // qualified API type
  SnippetForm form = SnippetForm::statement;
  Snippet snippet;
  SyntacticGlue glue;
  std::optional<std::string> effective_value;
  std::optional<ConditionMode> condition_mode;
  ThreatTags threat_tags;
  /// Full argument text (conversion included) that can replace an existing
  /// call's argument (single-expression restrictive mutants only).
  std::optional<std::string> inline_argument;

  /// "OP4", "OP12+OP8" or "BASE".
  std::string operator_label() const;
};

/// Helper declarations, then the statements or declaration, newline-joined.
std::string snippet_text(const Mutant& mutant);

/// Statement form: the statements wrapped in the glue's try/catch (or a bare
/// block). Declaration form: the declaration. `catch_body` uses "{}" for the
/// exception variable.
std::string render_body(const Mutant& mutant);

nlohmann::json to_json(const Mutant& mutant);
nlohmann::json to_json(const SyntacticGlue& glue);

} // namespace masc
