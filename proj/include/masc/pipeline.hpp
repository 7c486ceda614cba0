#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "masc/kill_analyzer.hpp"
#include "masc/mutation_engine.hpp"
#include "masc/seeder.hpp"

namespace masc {

enum ExitCode : int {
  exit_ok = 0,
  exit_usage = 1,
  exit_validation = 2,
  exit_seeding = 3,
  exit_analysis = 4,
};

struct ReportInput {
  std::filesystem::path report;
  std::optional<std::filesystem::path> baseline;
  std::string format = "sarif"; // sarif | csv
  std::optional<std::filesystem::path> column_map;
  std::vector<std::string> rules;
  std::string root;
};

struct RunConfig {
  std::filesystem::path registry;
  std::filesystem::path api_model;
  /// Unset: the template app (main scope) or an error (other scopes).
  std::optional<std::filesystem::path> project;
  std::filesystem::path template_app;
  Scope scope = Scope::exhaustive;
  SeedMode mode = SeedMode::bulk;
  std::vector<std::string> operators; // "OP3", "BASE"
  std::vector<std::string> cases;
  std::filesystem::path out_dir = "masc-out";
  int drift = 3;
  std::optional<std::string> compile_command;
  int compile_timeout = 300;
  int max_variants = 3;
  std::optional<Operator> body_op;
  std::optional<ConditionMode> condition_mode;
  bool in_place = false;
  std::optional<ReportInput> reports;
  std::string group_by = "operator";
  std::string summary_format = "text";
  int jobs = 1;
  bool dry_run = false;
};

/// Defaults pointing at the bundled data directory.
RunConfig default_run_config();

/// Overlays the fields present in `j` (unknown keys rejected).
void apply_config_json(RunConfig& config, const nlohmann::json& j);

/// Throws ValidationError naming the first problem.
void validate(const RunConfig& config);

/// taxonomy -> generate -> seed -> check -> (analyze). Progress goes to `log`.
int run_pipeline(const RunConfig& config, std::ostream& log);

/// The mutant a (possibly capped) generation run assigned `id`, regenerated
/// without a cap. Throws NotFoundError.
Mutant find_mutant(const Registry& registry, const ApiModel& model, std::string_view id, const OperatorConfig& config = {});

/// Locations for one mutant under one scope.
std::vector<SeedLocation> locations_for(
    const Mutant& mutant,
    Scope scope,
    const SourceModel& model,
    const Registry& registry,
    const ApiModel& api_model);

} // namespace masc
