#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace masc {

/// The twelve usage-based mutation operators. OP1-OP6 vary string arguments
/// of restrictive factory APIs; OP7-OP12 vary overriding and extension
/// structure of flexible APIs.
enum class Operator {
  op1 = 1,
  op2,
  op3,
  op4,
  op5,
  op6,
  op7,
  op8,
  op9,
  op10,
  op11,
  op12,
};

inline constexpr int kOperatorCount = 12;

/// "OP1".."OP12".
std::string to_string(Operator op);

/// Accepts "OP7" or "op7"; nullopt for anything else.
std::optional<Operator> parse_operator(std::string_view text);

/// Throws ValidationError on unknown names.
Operator require_operator(std::string_view text);

inline int operator_number(Operator op) {
  return static_cast<int>(op);
}

inline bool is_restrictive(Operator op) {
  return operator_number(op) <= 6;
}

/// OP7-OP9: operators that produce method bodies.
inline bool is_body_operator(Operator op) {
  int n = operator_number(op);
  return n >= 7 && n <= 9;
}

/// OP10-OP12: container operators composed with a body operator.
inline bool is_container_operator(Operator op) {
  return operator_number(op) >= 10;
}

enum class ThreatTag { t1 = 1, t2, t3 };

std::string to_string(ThreatTag tag);
std::optional<ThreatTag> parse_threat_tag(std::string_view text);

using ThreatTags = std::set<ThreatTag>;

enum class ApiKind { restrictive, flexible };

std::string to_string(ApiKind kind);
std::optional<ApiKind> parse_api_kind(std::string_view text);

} // namespace masc
