#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "masc/api_model.hpp"

namespace masc {

/// Value standing for anything derived from the system clock.
inline constexpr std::string_view kSystemTimeValue = "<system-time>";

/// Interprets a restricted fragment of Java string code and returns the value
/// passed at the API's string parameter of its factory call.
///
/// Supported: string/char/int literals, `+`, char casts, local declarations and
/// assignments (`=`, `+=`), counted for-loops, toUpperCase/toLowerCase (with
/// an optional locale), replace, trim, toString, getBytes, String.valueOf,
/// Long.toString, and helper classes whose fluent methods assign a field.
/// Clock reads evaluate to kSystemTimeValue. Throws
/// UnsupportedExpressionError for anything else.
std::string effective_value_oracle(
    const std::vector<std::string>& helper_declarations,
    const std::vector<std::string>& statements,
    const ApiSpec& spec);

/// Evaluates one string expression with no variables in scope.
std::string evaluate_string_expression(std::string_view expression);

} // namespace masc
