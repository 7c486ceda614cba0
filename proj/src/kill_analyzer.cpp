#include "masc/kill_analyzer.hpp"

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <map>
#include <sstream>

#include "json_util.hpp"
#include "masc/error.hpp"

namespace masc {

namespace {

std::string percent_decode(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '%' && i + 2 < text.size() && std::isxdigit(static_cast<unsigned char>(text[i + 1])) &&
        std::isxdigit(static_cast<unsigned char>(text[i + 2]))) {
      out += static_cast<char>(std::stoi(std::string(text.substr(i + 1, 2)), nullptr, 16));
      i += 2;
    } else {
      out += text[i];
    }
  }
  return out;
}

std::string strip_scheme(std::string_view path) {
  if (path.starts_with("file://"))
    path.remove_prefix(7);
  else if (path.starts_with("file:"))
    path.remove_prefix(5);
  return percent_decode(path);
}

std::optional<int> parse_line(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 1)
    return std::nullopt;
  return value;
}

/// RFC 4180 records; quoted fields may contain delimiters, quotes ("") and
/// newlines.
std::vector<std::vector<std::string>> parse_delimited(std::string_view text, char delimiter) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == delimiter) {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      continue;
    } else if (c == '\n') {
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted)
    throw ParseError("unterminated quoted field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

int line_distance(int line, const MutationRecord& record) {
  if (line < record.start_line)
    return record.start_line - line;
  if (line > record.end_line)
    return line - record.end_line;
  return 0;
}

} // namespace

std::string normalize_path(std::string_view path, std::string_view root) {
  auto p = strip_scheme(path);
  std::replace(p.begin(), p.end(), '\\', '/');
  if (!root.empty()) {
    auto r = strip_scheme(root);
    std::replace(r.begin(), r.end(), '\\', '/');
    while (r.starts_with("./"))
      r.erase(0, 2);
    if (!r.empty() && r.back() != '/')
      r += '/';
    if (!r.empty() && p.starts_with(r))
      p.erase(0, r.size());
  }
  while (p.starts_with("./"))
    p.erase(0, 2);
  return p;
}

bool same_file(std::string_view a, std::string_view b) {
  if (a == b)
    return true;
  if (a.size() < b.size())
    std::swap(a, b);
  return !b.empty() && a.ends_with(b) && a[a.size() - b.size() - 1] == '/';
}

ParsedReport parse_sarif(const std::filesystem::path& path, std::string_view root) {
  return parse_sarif_text(detail::read_file(path), root);
}

ParsedReport parse_sarif_text(std::string_view text, std::string_view root) {
  auto doc = detail::parse_json(text, "SARIF report");
  if (!doc.is_object() || !doc.contains("runs") || !doc["runs"].is_array())
    throw ValidationError("SARIF report", "missing 'runs' array");
  ParsedReport out;
  int run_index = 0;
  for (const auto& run : doc["runs"]) {
    ++run_index;
    if (!run.is_object() || !run.contains("results"))
      continue;
    if (!run["results"].is_array())
      throw ValidationError("SARIF report", "run " + std::to_string(run_index) + ": 'results' is not an array");
    int result_index = 0;
    for (const auto& result : run["results"]) {
      ++result_index;
      auto where = "run " + std::to_string(run_index) + " result " + std::to_string(result_index);
      std::string rule;
      if (result.contains("ruleId") && result["ruleId"].is_string())
        rule = result["ruleId"].get<std::string>();
      else if (result.contains("rule") && result["rule"].is_object() && result["rule"].value("id", "") != "")
        rule = result["rule"]["id"].get<std::string>();
      std::string message;
      if (result.contains("message") && result["message"].is_object())
        message = result["message"].value("text", "");

      const nlohmann::json* physical = nullptr;
      if (result.contains("locations") && result["locations"].is_array() && !result["locations"].empty()) {
        const auto& loc = result["locations"][0];
        if (loc.is_object() && loc.contains("physicalLocation") && loc["physicalLocation"].is_object())
          physical = &loc["physicalLocation"];
      }
      if (!physical || !physical->contains("artifactLocation") || !(*physical)["artifactLocation"].contains("uri") ||
          !physical->contains("region") || !(*physical)["region"].is_object() ||
          !(*physical)["region"].contains("startLine") || !(*physical)["region"]["startLine"].is_number_integer()) {
        out.diagnostics.push_back({"", 0, where + " (" + rule + "): no physical location; not counted"});
        continue;
      }
      DetectorFinding f;
      f.rule_id = rule;
      f.message = message;
      f.file = normalize_path((*physical)["artifactLocation"]["uri"].get<std::string>(), root);
      const auto& region = (*physical)["region"];
      f.start_line = region["startLine"].get<int>();
      if (region.contains("endLine") && region["endLine"].is_number_integer())
        f.end_line = region["endLine"].get<int>();
      if (f.start_line < 1 || (f.end_line && *f.end_line < f.start_line)) {
        out.diagnostics.push_back({f.file, f.start_line, where + ": invalid region; not counted"});
        continue;
      }
      if (result.contains("locations") && result["locations"][0].contains("logicalLocations")) {
        for (const auto& logical : result["locations"][0]["logicalLocations"]) {
          auto kind = logical.value("kind", "");
          auto name = logical.value("fullyQualifiedName", logical.value("name", ""));
          if (kind == "type" && !name.empty())
            f.class_name = name;
          else if ((kind == "function" || kind == "member") && !name.empty())
            f.method = name;
        }
      }
      out.findings.push_back(std::move(f));
    }
  }
  return out;
}

ColumnMap load_column_map(const std::filesystem::path& path) {
  auto j = detail::parse_json(detail::read_file(path), path.string());
  const std::string subject = "column map";
  detail::check_keys(j, {"file", "line", "rule", "message", "delimiter"}, subject);
  ColumnMap m;
  m.file = detail::get_string_or(j, "file", m.file, subject);
  m.line = detail::get_string_or(j, "line", m.line, subject);
  m.rule = detail::get_string_or(j, "rule", m.rule, subject);
  m.message = detail::get_string_or(j, "message", m.message, subject);
  auto delimiter = detail::get_string_or(j, "delimiter", ",", subject);
  if (delimiter == "\\t" || delimiter == "tab")
    delimiter = "\t";
  if (delimiter.size() != 1)
    throw ValidationError(subject, "delimiter must be a single character");
  m.delimiter = delimiter[0];
  return m;
}

ParsedReport parse_tabular(const std::filesystem::path& path, const ColumnMap& columns, std::string_view root) {
  return parse_tabular_text(detail::read_file(path), columns, root);
}

ParsedReport parse_tabular_text(std::string_view text, const ColumnMap& columns, std::string_view root) {
  if (text.starts_with("\xEF\xBB\xBF"))
    text.remove_prefix(3);
  auto rows = parse_delimited(text, columns.delimiter);
  if (rows.empty())
    throw ValidationError("tabular report", "missing header row");
  const auto& header = rows.front();
  auto column = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name)
        return i;
    throw ValidationError("tabular report", "missing column '" + name + "'");
  };
  auto file_col = column(columns.file);
  auto line_col = column(columns.line);
  auto rule_col = column(columns.rule);
  std::optional<std::size_t> message_col;
  if (!columns.message.empty())
    message_col = column(columns.message);

  ParsedReport out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    auto cell = [&](std::size_t c) { return c < row.size() ? row[c] : std::string(); };
    auto line = parse_line(cell(line_col));
    if (!line) {
      out.diagnostics.push_back(
          {normalize_path(cell(file_col), root), 0,
           "row " + std::to_string(r + 1) + ": unparseable line '" + cell(line_col) + "'; skipped"});
      continue;
    }
    DetectorFinding f;
    f.file = normalize_path(cell(file_col), root);
    f.start_line = *line;
    f.rule_id = cell(rule_col);
    if (message_col)
      f.message = cell(*message_col);
    out.findings.push_back(std::move(f));
  }
  return out;
}

std::vector<DetectorFinding> filter_rules(std::vector<DetectorFinding> findings, const std::set<std::string>& rules) {
  std::erase_if(findings, [&](const DetectorFinding& f) { return !rules.count(f.rule_id); });
  return findings;
}

std::vector<DetectorFinding> baseline_diff(
    const std::vector<DetectorFinding>& mutated,
    const std::vector<DetectorFinding>& baseline,
    int drift) {
  std::vector<bool> used(baseline.size(), false);
  std::vector<DetectorFinding> delta;
  for (const auto& m : mutated) {
    std::optional<std::size_t> best;
    int best_distance = 0;
    for (std::size_t i = 0; i < baseline.size(); ++i) {
      const auto& b = baseline[i];
      if (used[i] || b.rule_id != m.rule_id || !same_file(b.file, m.file))
        continue;
      int d = std::abs(b.start_line - m.start_line);
      if (d > drift)
        continue;
      if (!best || d < best_distance) {
        best = i;
        best_distance = d;
      }
    }
    if (best)
      used[*best] = true;
    else
      delta.push_back(m);
  }
  return delta;
}

KillReport match(const std::vector<DetectorFinding>& delta, const std::vector<MutationRecord>& records, int drift) {
  if (records.empty())
    throw ValidationError("mutation log", "no records to match against");
  struct Candidate {
    int distance;
    std::size_t record;
    std::size_t finding;
  };
  std::vector<Candidate> candidates;
  for (std::size_t f = 0; f < delta.size(); ++f)
    for (std::size_t r = 0; r < records.size(); ++r) {
      if (!same_file(delta[f].file, records[r].file))
        continue;
      int d = line_distance(delta[f].start_line, records[r]);
      if (d <= drift)
        candidates.push_back({d, r, f});
    }
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
    const auto& ra = records[a.record];
    const auto& rb = records[b.record];
    return std::tie(a.distance, ra.mutant_id, ra.output_copy, ra.file, ra.start_line, a.record, a.finding) <
           std::tie(b.distance, rb.mutant_id, rb.output_copy, rb.file, rb.start_line, b.record, b.finding);
  });

  std::vector<bool> record_used(records.size(), false);
  std::vector<bool> finding_used(delta.size(), false);
  KillReport report;
  std::vector<std::pair<std::size_t, KilledEntry>> killed;
  for (const auto& c : candidates) {
    if (record_used[c.record] || finding_used[c.finding])
      continue;
    record_used[c.record] = finding_used[c.finding] = true;
    killed.push_back({c.record, {records[c.record], delta[c.finding], c.distance}});
  }
  std::sort(killed.begin(), killed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [index, entry] : killed)
    report.killed.push_back(std::move(entry));
  for (std::size_t r = 0; r < records.size(); ++r)
    if (!record_used[r])
      report.unkilled.push_back(records[r]);
  for (std::size_t f = 0; f < delta.size(); ++f)
    if (!finding_used[f])
      report.unmatched_findings.push_back(delta[f]);
  report.stats.total = static_cast<int>(records.size());
  report.stats.killed_count = static_cast<int>(report.killed.size());
  report.stats.unkilled_count = static_cast<int>(report.unkilled.size());
  report.stats.kill_ratio = static_cast<double>(report.stats.killed_count) / report.stats.total;
  return report;
}

nlohmann::json to_json(const DetectorFinding& f) {
  nlohmann::json j{{"rule_id", f.rule_id}, {"message", f.message}, {"file", f.file}, {"start_line", f.start_line}};
  j["end_line"] = f.end_line ? nlohmann::json(*f.end_line) : nlohmann::json();
  if (f.class_name || f.method) {
    nlohmann::json extra = nlohmann::json::object();
    if (f.class_name)
      extra["class"] = *f.class_name;
    if (f.method)
      extra["method"] = *f.method;
    j["extra"] = extra;
  }
  return j;
}

nlohmann::json to_json(const KillReport& report) {
  nlohmann::json j;
  auto killed = nlohmann::json::array();
  for (const auto& k : report.killed)
    killed.push_back({{"record", to_json(k.record)}, {"finding", to_json(k.finding)}, {"match_distance", k.match_distance}});
  j["killed"] = killed;
  auto unkilled = nlohmann::json::array();
  for (const auto& r : report.unkilled)
    unkilled.push_back(to_json(r));
  j["unkilled"] = unkilled;
  auto unmatched = nlohmann::json::array();
  for (const auto& f : report.unmatched_findings)
    unmatched.push_back(to_json(f));
  j["unmatched_findings"] = unmatched;
  j["stats"] = {{"total", report.stats.total},
                {"killed_count", report.stats.killed_count},
                {"unkilled_count", report.stats.unkilled_count},
                {"kill_ratio", report.stats.kill_ratio}};
  return j;
}

std::optional<GroupBy> parse_group_by(std::string_view text) {
  if (text == "operator" || text == "op")
    return GroupBy::op;
  if (text == "case")
    return GroupBy::misuse_case;
  if (text == "cluster")
    return GroupBy::cluster;
  if (text == "scope")
    return GroupBy::scope;
  return std::nullopt;
}

std::vector<SummaryRow> summarize(const KillReport& report, GroupBy group_by, const Registry* registry) {
  if (group_by == GroupBy::cluster && !registry)
    throw ValidationError("summary", "grouping by cluster needs the registry");
  auto key = [&](const MutationRecord& r) -> std::string {
    switch (group_by) {
      case GroupBy::op:
        return r.operator_id;
      case GroupBy::misuse_case:
        return r.case_id;
      case GroupBy::scope:
        return r.scope;
      case GroupBy::cluster: {
        const auto* c = registry->find(r.case_id);
        return c ? c->cluster : "(unknown)";
      }
    }
    return "";
  };
  std::map<std::string, SummaryRow> rows;
  for (const auto& k : report.killed) {
    auto& row = rows[key(k.record)];
    ++row.total;
    ++row.killed;
  }
  for (const auto& r : report.unkilled) {
    auto& row = rows[key(r)];
    ++row.total;
    ++row.unkilled;
  }
  std::vector<SummaryRow> out;
  for (auto& [group, row] : rows) {
    row.group = group;
    row.kill_ratio = row.total ? static_cast<double>(row.killed) / row.total : 0.0;
    out.push_back(row);
  }
  return out;
}

namespace {

std::string ratio_text(double ratio) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << ratio;
  return s.str();
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos)
    return text;
  std::string out = "\"";
  for (char c : text)
    out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

} // namespace

std::string format_summary_text(const std::vector<SummaryRow>& rows, std::string_view group_label) {
  std::size_t width = group_label.size();
  SummaryRow total;
  for (const auto& r : rows) {
    width = std::max(width, r.group.size());
    total.total += r.total;
    total.killed += r.killed;
    total.unkilled += r.unkilled;
  }
  width = std::max<std::size_t>(width, 5);
  std::ostringstream out;
  auto line = [&](const std::string& g, const std::string& a, const std::string& b, const std::string& c,
                  const std::string& d) {
    out << std::left << std::setw(static_cast<int>(width)) << g << std::right << "  " << std::setw(7) << a << "  "
        << std::setw(7) << b << "  " << std::setw(8) << c << "  " << std::setw(10) << d << "\n";
  };
  line(std::string(group_label), "total", "killed", "unkilled", "kill_ratio");
  for (const auto& r : rows)
    line(r.group, std::to_string(r.total), std::to_string(r.killed), std::to_string(r.unkilled),
         ratio_text(r.kill_ratio));
  line("TOTAL", std::to_string(total.total), std::to_string(total.killed), std::to_string(total.unkilled),
       ratio_text(total.total ? static_cast<double>(total.killed) / total.total : 0.0));
  return out.str();
}

std::string format_summary_csv(const std::vector<SummaryRow>& rows, std::string_view group_label) {
  std::string out = csv_field(std::string(group_label)) + ",total,killed,unkilled,kill_ratio\n";
  for (const auto& r : rows)
    out += csv_field(r.group) + "," + std::to_string(r.total) + "," + std::to_string(r.killed) + "," +
           std::to_string(r.unkilled) + "," + ratio_text(r.kill_ratio) + "\n";
  return out;
}

} // namespace masc
