#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "masc/api_model.hpp"
#include "masc/diagnostic.hpp"
#include "masc/mutant.hpp"
#include "masc/target_analyzer.hpp"

namespace masc {

enum class Scope { main, similarity, exhaustive };

std::string to_string(Scope scope);
std::optional<Scope> parse_scope(std::string_view text);

enum class SeedMode { bulk, isolated };

std::string to_string(SeedMode mode);
std::optional<SeedMode> parse_seed_mode(std::string_view text);

struct MutationRecord {
  std::string mutant_id;
  std::string case_id;
  std::string operator_id;
  std::string scope;
  std::string file;
  std::string class_name;
  std::string method;
  int start_line = 0;
  int end_line = 0;
  std::string digest;
  std::string output_copy;

  bool operator==(const MutationRecord&) const = default;
};

nlohmann::json to_json(const MutationRecord& record);
/// Requires exactly the log fields.
MutationRecord record_from_json(const nlohmann::json& j);

struct SeedRequest {
  const Mutant* mutant = nullptr;
  SeedLocation location;
  Scope scope = Scope::exhaustive;
};

struct SeedOptions {
  SeedMode mode = SeedMode::bulk;
  std::filesystem::path out_dir;
  /// Rewrites the existing call's argument instead of inserting next to it
  /// (similarity requests with a usage argument only).
  bool in_place = false;
  int jobs = 1;
};

struct SeedResult {
  std::vector<MutationRecord> records;
  std::vector<Diagnostic> diagnostics;
  std::vector<std::filesystem::path> copies;
};

/// Writes full project copies under out_dir ("bulk", or one per mutant id)
/// and seeds the requests into them. Requests whose location kind is not
/// allowed by the mutant's glue are skipped with a diagnostic.
SeedResult seed(const SourceModel& model, const std::vector<SeedRequest>& requests, const SeedOptions& options);

struct CheckResult {
  bool ok = true;
  std::vector<Diagnostic> errors;
};

/// Re-parses every .java file below `copy`.
CheckResult check_syntax(const std::filesystem::path& copy);

struct CompileResult {
  int exit_status = 0;
  std::string output;
};

/// Runs `command_template` through /bin/sh with every "{}" replaced by the
/// copy path. Throws CommandNotFoundError (status 127) and TimeoutError.
CompileResult compile_check(
    const std::filesystem::path& copy,
    const std::string& command_template,
    std::chrono::seconds timeout = std::chrono::seconds(300));

/// Template for compile_check from the MASC_COMPILE_CMD environment variable.
std::optional<std::string> default_compile_command();

void emit_log(const std::vector<MutationRecord>& records, const std::filesystem::path& path);
std::vector<MutationRecord> load_log(const std::filesystem::path& path);

/// Copies the template app to `out_dir` and seeds the single mutant at its
/// main entry (statement form) or in the main class body (declaration form).
/// Writes `mutation_log.jsonl` next to the sources.
std::vector<MutationRecord> generate_minimal_app(
    const Mutant& mutant,
    const ApiModel& model,
    const std::filesystem::path& template_dir,
    const std::filesystem::path& out_dir);

/// Directory holding the bundled registry, API model and template app:
/// $MASC_DATA_DIR when set, else the build-time default.
std::filesystem::path data_dir();

} // namespace masc
