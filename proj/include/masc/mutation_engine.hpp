#pragma once

#include <optional>
#include <string>
#include <vector>

#include "masc/api_model.hpp"
#include "masc/mutant.hpp"
#include "masc/taxonomy.hpp"

namespace masc {

struct OperatorConfig {
  /// Variants kept per operator-case pair (per operator-case-body triple for
  /// OP10-OP12). 0 keeps every variant.
  int max_variants = 3;
  /// Body operator for OP10-OP12; unset means every applicable one.
  std::optional<Operator> body_op;
  /// Restricts the conditional variants of OP7/OP8 bodies; unset keeps both.
  std::optional<ConditionMode> condition_mode;
};

/// Throws InapplicableOperatorError when `op` is not applicable to the case
/// (or cannot be realized for it), NotFoundError when the API is missing.
std::vector<Mutant> apply_operator(
    Operator op,
    const MisuseCase& misuse,
    const ApiModel& model,
    const OperatorConfig& config = {});

enum class Polarity { always_true, never_true };

/// Condition expression over a method's parameters. Generic mode compares
/// parameters with null, context mode probes them per their types; both
/// start with a short-circuiting `true ||`.
std::string condition_text(
    ConditionMode mode,
    const AbstractMethod& method,
    Polarity polarity,
    const ContextProbes& probes);

struct GenerationFilter {
  std::vector<std::string> case_ids;   // empty: every selected case
  std::vector<Operator> operators;     // empty: every applicable operator
  bool include_base = true;
};

/// Base instantiations plus every applicable operator over the selected cases,
/// in registry order.
std::vector<Mutant> generate_mutants(
    const Registry& registry,
    const ApiModel& model,
    const OperatorConfig& config,
    const GenerationFilter& filter = {});

/// Escapes a value as a Java string literal, quotes included.
std::string java_string_literal(std::string_view value);

/// Whether `value` counts as one of the case's insecure arguments; matching
/// ignores case when the API does.
bool is_insecure_value(const MisuseCase& misuse, const ApiSpec& spec, std::string_view value);

} // namespace masc
