#include "masc/diagnostic.hpp"

namespace masc {

std::string to_string(const Diagnostic& diagnostic) {
  std::string out = diagnostic.file;
  if (diagnostic.line > 0)
    out += ":" + std::to_string(diagnostic.line);
  if (!out.empty())
    out += ": ";
  return out + diagnostic.message;
}

} // namespace masc
