#include "masc/operators.hpp"

#include <cctype>
#include <charconv>

#include "masc/error.hpp"

namespace masc {

std::string to_string(Operator op) {
  return "OP" + std::to_string(operator_number(op));
}

std::optional<Operator> parse_operator(std::string_view text) {
  if (text.size() < 3 || std::toupper(static_cast<unsigned char>(text[0])) != 'O' ||
      std::toupper(static_cast<unsigned char>(text[1])) != 'P')
    return std::nullopt;
  auto digits = text.substr(2);
  int n = 0;
  auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc{} || end != digits.data() + digits.size() || digits[0] == '0')
    return std::nullopt;
  if (n < 1 || n > kOperatorCount)
    return std::nullopt;
  return static_cast<Operator>(n);
}

Operator require_operator(std::string_view text) {
  if (auto op = parse_operator(text))
    return *op;
  throw ValidationError(std::string(text), "unknown operator (expected OP1..OP12)");
}

std::string to_string(ThreatTag tag) {
  return "T" + std::to_string(static_cast<int>(tag));
}

std::optional<ThreatTag> parse_threat_tag(std::string_view text) {
  if (text == "T1")
    return ThreatTag::t1;
  if (text == "T2")
    return ThreatTag::t2;
  if (text == "T3")
    return ThreatTag::t3;
  return std::nullopt;
}

std::string to_string(ApiKind kind) {
  return kind == ApiKind::restrictive ? "restrictive" : "flexible";
}

std::optional<ApiKind> parse_api_kind(std::string_view text) {
  if (text == "restrictive")
    return ApiKind::restrictive;
  if (text == "flexible")
    return ApiKind::flexible;
  return std::nullopt;
}

} // namespace masc
