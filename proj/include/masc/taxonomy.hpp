#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "masc/api_model.hpp"
#include "masc/operators.hpp"

namespace masc {

struct Mutant;

enum class NeutralOutcome { suppress_exception, constant_return };

std::string to_string(NeutralOutcome outcome);

/// Insecure behavior of a flexible case: which method is neutralized and how.
struct Behavior {
  std::string method;
  NeutralOutcome outcome = NeutralOutcome::suppress_exception;
  /// Java expression returned for constant-return outcomes ("true", "null").
  std::string value;
  /// Qualified exception type left unthrown for suppress-exception outcomes.
  std::string exception;
};

struct MisuseCase {
  std::string id;
  std::string cluster;
  std::string description;
  ApiKind api_kind = ApiKind::restrictive;
  /// "javax.crypto.Cipher.getInstance" for restrictive cases (constructors
  /// use "<init>"), the bare type name for flexible ones.
  std::string target_api;
  std::vector<std::string> insecure_arguments;
  std::optional<std::string> secure_argument;
  std::optional<Behavior> behavior;
  std::vector<Operator> applicable_operators;
  ThreatTags threat_tags{ThreatTag::t1};
  bool selected = true;

  /// Type part of target_api.
  std::string api_type() const;
  /// Member part of target_api ("" for flexible cases).
  std::string api_member() const;
  bool applies(Operator op) const;
};

/// Insecure arguments like "<system-time>" stand for values derived at run
/// time rather than a literal.
bool is_symbolic_argument(std::string_view argument);

/// Java expression a symbolic argument is rendered as.
std::string symbolic_expression(std::string_view argument);

class Registry {
 public:
  Registry() = default;
  Registry(std::string version, std::vector<std::string> clusters, std::vector<MisuseCase> cases);

  const std::string& version() const {
    return version_;
  }
  const std::vector<std::string>& clusters() const {
    return clusters_;
  }
  const std::vector<MisuseCase>& cases() const {
    return cases_;
  }

  /// nullptr when absent.
  const MisuseCase* find(std::string_view id) const;
  /// Throws NotFoundError.
  const MisuseCase& at(std::string_view id) const;

  std::vector<const MisuseCase*> selected_cases() const;

 private:
  std::string version_;
  std::vector<std::string> clusters_;
  std::vector<MisuseCase> cases_;
};

Registry load_registry(const std::filesystem::path& path);
Registry parse_registry(std::string_view json_text);

struct CaseFilter {
  std::optional<std::string> cluster;
  std::optional<Operator> op;
  std::optional<ApiKind> api_kind;
  bool selected_only = false;
};

/// Cases matching every set field, in registry order. Throws ValidationError
/// for clusters the registry does not declare.
std::vector<const MisuseCase*> list_cases(const Registry& registry, const CaseFilter& filter = {});

/// The most literal, unobfuscated mutant of a case.
Mutant base_instantiation(const MisuseCase& misuse, const ApiModel& model);

} // namespace masc
