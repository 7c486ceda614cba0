#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "masc/diagnostic.hpp"
#include "masc/seeder.hpp"
#include "masc/taxonomy.hpp"

namespace masc {

struct DetectorFinding {
  std::string rule_id;
  std::string message;
  std::string file;
  int start_line = 1;
  std::optional<int> end_line;
  std::optional<std::string> class_name;
  std::optional<std::string> method;

  bool operator==(const DetectorFinding&) const = default;
};

struct ParsedReport {
  std::vector<DetectorFinding> findings;
  std::vector<Diagnostic> diagnostics;
};

/// Strips "file://", a leading "./" and, when given, the `root` prefix.
std::string normalize_path(std::string_view path, std::string_view root = {});

/// Equal, or one is a suffix of the other at a '/' boundary.
bool same_file(std::string_view a, std::string_view b);

ParsedReport parse_sarif(const std::filesystem::path& path, std::string_view root = {});
ParsedReport parse_sarif_text(std::string_view text, std::string_view root = {});

struct ColumnMap {
  std::string file = "file";
  std::string line = "line";
  std::string rule = "rule";
  std::string message = "message";
  char delimiter = ',';
};

ColumnMap load_column_map(const std::filesystem::path& path);

ParsedReport parse_tabular(const std::filesystem::path& path, const ColumnMap& columns, std::string_view root = {});
ParsedReport parse_tabular_text(std::string_view text, const ColumnMap& columns, std::string_view root = {});

/// Keeps findings whose rule id is in `rules`.
std::vector<DetectorFinding> filter_rules(std::vector<DetectorFinding> findings, const std::set<std::string>& rules);

/// Mutated findings that have no baseline counterpart (same rule and file,
/// start line within `drift`); duplicates are matched one-for-one.
std::vector<DetectorFinding> baseline_diff(
    const std::vector<DetectorFinding>& mutated,
    const std::vector<DetectorFinding>& baseline,
    int drift = 3);

struct KilledEntry {
  MutationRecord record;
  DetectorFinding finding;
  int match_distance = 0;
};

struct KillStats {
  int total = 0;
  int killed_count = 0;
  int unkilled_count = 0;
  double kill_ratio = 0.0;
};

struct KillReport {
  std::vector<KilledEntry> killed;
  std::vector<MutationRecord> unkilled;
  std::vector<DetectorFinding> unmatched_findings;
  KillStats stats;
};

/// Pairs findings with records one-to-one, nearest line first (ties go to
/// the lower mutant id). Throws ValidationError on an empty record set.
KillReport match(
    const std::vector<DetectorFinding>& delta,
    const std::vector<MutationRecord>& records,
    int drift = 3);

nlohmann::json to_json(const DetectorFinding& finding);
nlohmann::json to_json(const KillReport& report);

enum class GroupBy { op, misuse_case, cluster, scope };

std::optional<GroupBy> parse_group_by(std::string_view text);

struct SummaryRow {
  std::string group;
  int total = 0;
  int killed = 0;
  int unkilled = 0;
  double kill_ratio = 0.0;
};

/// Per-record tallies. Cluster grouping needs the registry.
std::vector<SummaryRow> summarize(const KillReport& report, GroupBy group_by, const Registry* registry = nullptr);

std::string format_summary_text(const std::vector<SummaryRow>& rows, std::string_view group_label);
std::string format_summary_csv(const std::vector<SummaryRow>& rows, std::string_view group_label);

} // namespace masc
