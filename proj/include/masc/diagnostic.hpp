#pragma once

#include <string>

namespace masc {

/// A non-fatal problem attached to a file (skipped input, placement refusal,
/// syntax error in a mutated copy).
struct Diagnostic {
  std::string file;
  int line = 0; // 0 when not tied to a line
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

std::string to_string(const Diagnostic& diagnostic);

} // namespace masc
