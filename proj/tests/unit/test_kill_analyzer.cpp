#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <set>

#include "masc/error.hpp"
#include "masc/kill_analyzer.hpp"
#include "masc/mutation_engine.hpp"
#include "support.hpp"

using namespace masc;
using masc::testing::api_model;
using masc::testing::fixture;
using masc::testing::registry;
using masc::testing::TempDir;
using nlohmann::json;

namespace fs = std::filesystem;

namespace {

json sarif_result(const std::string& rule, const std::string& uri, int line) {
  return {{"ruleId", rule},
          {"message", {{"text", rule + " here"}}},
          {"locations",
           json::array({{{"physicalLocation",
                          {{"artifactLocation", {{"uri", uri}}}, {"region", {{"startLine", line}}}}}}})}};
}

std::string sarif(const json& results) {
  return json{{"version", "2.1.0"}, {"runs", json::array({{{"tool", {{"driver", {{"name", "t"}}}}}, {"results", results}}})}}
      .dump();
}

DetectorFinding finding(const std::string& file, int line, const std::string& rule = "R1") {
  DetectorFinding f;
  f.rule_id = rule;
  f.message = "m";
  f.file = file;
  f.start_line = line;
  return f;
}

MutationRecord record(const std::string& id, const std::string& file, int start, int end = -1,
                      const std::string& op = "OP1", const std::string& case_id = "des-cipher") {
  MutationRecord r;
  r.mutant_id = id;
  r.case_id = case_id;
  r.operator_id = op;
  r.scope = "exhaustive";
  r.file = file;
  r.class_name = "C";
  r.start_line = start;
  r.end_line = end < 0 ? start : end;
  r.digest = std::string(64, '0');
  r.output_copy = "bulk";
  return r;
}

std::set<std::string> killed_keys(const KillReport& report) {
  std::set<std::string> out;
  for (const auto& k : report.killed)
    out.insert(k.record.mutant_id + "@" + k.record.file + ":" + std::to_string(k.record.start_line));
  return out;
}

std::string key_of(const MutationRecord& r) {
  return r.mutant_id + "@" + r.file + ":" + std::to_string(r.start_line);
}

/// A real bulk log over the shop fixture.
const std::vector<MutationRecord>& shop_log() {
  static const std::vector<MutationRecord> log = [] {
    auto model = scan(fixture("shop"), &api_model());
    static std::vector<Mutant> mutants;
    GenerationFilter f;
    f.case_ids = {"des-cipher", "md5-hash", "hostname-verifier-true"};
    mutants = generate_mutants(registry(), api_model(), OperatorConfig{}, f);
    auto locs = locations_exhaustive(model, statement_placement_kinds());
    std::vector<SeedRequest> requests;
    for (std::size_t i = 0; i < mutants.size(); ++i)
      requests.push_back({&mutants[i], locs[i % locs.size()], Scope::exhaustive});
    TempDir out;
    SeedOptions o;
    o.out_dir = out.path();
    return seed(model, requests, o).records;
  }();
  return log;
}

} // namespace

TEST(Sarif, OneFindingPerResult) {
  auto parsed = parse_sarif_text(sarif(json::array({sarif_result("R1", "A.java", 10), sarif_result("R2", "B.java", 7)})));
  ASSERT_EQ(parsed.findings.size(), 2u);
  EXPECT_EQ(parsed.findings[0].file, "A.java");
  EXPECT_EQ(parsed.findings[0].start_line, 10);
  EXPECT_EQ(parsed.findings[1].rule_id, "R2");
  EXPECT_EQ(parsed.findings[1].message, "R2 here");
  EXPECT_TRUE(parsed.diagnostics.empty());
}

TEST(Sarif, ResultWithoutRegionBecomesADiagnostic) {
  auto r = sarif_result("R1", "A.java", 10);
  r["locations"][0]["physicalLocation"].erase("region");
  auto parsed = parse_sarif_text(sarif(json::array({r})));
  EXPECT_TRUE(parsed.findings.empty());
  EXPECT_EQ(parsed.diagnostics.size(), 1u);
}

TEST(Sarif, MalformedInputs) {
  EXPECT_THROW(parse_sarif_text("this is not json"), ParseError);
  EXPECT_THROW(parse_sarif_text(R"({"version": "2.1.0"})"), ValidationError);
  TempDir dir;
  std::ofstream(dir / "r.sarif") << "<html/>";
  EXPECT_THROW(parse_sarif(dir / "r.sarif"), ParseError);
}

TEST(Sarif, UrisAreNormalizedAgainstTheRoot) {
  auto parsed = parse_sarif_text(
      sarif(json::array({sarif_result("R", "file:///tmp/out/bulk/src/A%20B.java", 3), sarif_result("R", "./src/C.java", 4)})),
      "/tmp/out/bulk");
  ASSERT_EQ(parsed.findings.size(), 2u);
  EXPECT_EQ(parsed.findings[0].file, "src/A B.java");
  EXPECT_EQ(parsed.findings[1].file, "src/C.java");
}

TEST(Sarif, LogicalLocationsFillClassAndMethod) {
  auto r = sarif_result("R", "A.java", 3);
  r["locations"][0]["logicalLocations"] =
      json::array({{{"fullyQualifiedName", "p.A"}, {"kind", "type"}}, {{"name", "run"}, {"kind", "function"}}});
  auto parsed = parse_sarif_text(sarif(json::array({r})));
  ASSERT_EQ(parsed.findings.size(), 1u);
  EXPECT_EQ(parsed.findings[0].class_name, "p.A");
  EXPECT_EQ(parsed.findings[0].method, "run");
}

TEST(Paths, NormalizationAndSuffixMatching) {
  EXPECT_EQ(normalize_path("./src\\A.java"), "src/A.java");
  EXPECT_EQ(normalize_path("/w/proj/src/A.java", "/w/proj"), "src/A.java");
  EXPECT_TRUE(same_file("src/p/A.java", "p/A.java"));
  EXPECT_TRUE(same_file("src/p/A.java", "src/p/A.java"));
  EXPECT_FALSE(same_file("src/p/XA.java", "A.java"));
}

TEST(Tabular, OneFindingPerRow) {
  auto parsed = parse_tabular_text("file,line,rule,message\nA.java,10,R1,x\nB.java,7,R2,\"y, z\"\nC.java,3,R3,w\n", {});
  ASSERT_EQ(parsed.findings.size(), 3u);
  EXPECT_EQ(parsed.findings[1].message, "y, z");
  EXPECT_EQ(parsed.findings[2].start_line, 3);
}

TEST(Tabular, UnparseableLineSkipsTheRow) {
  auto parsed = parse_tabular_text("file,line,rule,message\nA.java,n/a,R1,x\nB.java,7,R2,y\n", {});
  EXPECT_EQ(parsed.findings.size(), 1u);
  EXPECT_EQ(parsed.diagnostics.size(), 1u);
}

TEST(Tabular, MissingMappedColumnIsAnError) {
  EXPECT_THROW(parse_tabular_text("file,rule,message\nA.java,R1,x\n", {}), ValidationError);
}

TEST(Tabular, ColumnMapRenamesAndChangesTheDelimiter) {
  TempDir dir;
  std::ofstream(dir / "map.json") << R"({"file": "Path", "line": "Line", "rule": "Check", "message": "Text", "delimiter": "\t"})";
  auto map = load_column_map(dir / "map.json");
  EXPECT_EQ(map.delimiter, '\t');
  auto parsed = parse_tabular_text("Check\tText\tPath\tLine\nR\thello\tsrc/A.java\t12\n", map);
  ASSERT_EQ(parsed.findings.size(), 1u);
  EXPECT_EQ(parsed.findings[0].file, "src/A.java");
  EXPECT_EQ(parsed.findings[0].start_line, 12);
}

TEST(Baseline, IdenticalReportsLeaveNothing) {
  std::vector<DetectorFinding> a{finding("A.java", 3), finding("A.java", 9, "R2"), finding("B.java", 1)};
  EXPECT_TRUE(baseline_diff(a, a).empty());
}

TEST(Baseline, NewFindingSurvives) {
  std::vector<DetectorFinding> base{finding("A.java", 3)};
  auto mutated = base;
  mutated.push_back(finding("A.java", 20));
  auto delta = baseline_diff(mutated, base);
  ASSERT_EQ(delta.size(), 1u);
  EXPECT_EQ(delta[0].start_line, 20);
}

TEST(Baseline, ShiftsUpToTheDriftAreAbsorbed) {
  for (int drift : {0, 1, 3, 5})
    for (int k = 0; k <= drift + 2; ++k) {
      auto delta = baseline_diff({finding("A.java", 10 + k)}, {finding("A.java", 10)}, drift);
      EXPECT_EQ(delta.empty(), k <= drift) << "drift " << drift << " shift " << k;
    }
}

TEST(Baseline, DuplicatesMatchOneForOne) {
  std::vector<DetectorFinding> base{finding("A.java", 5)};
  std::vector<DetectorFinding> mutated{finding("A.java", 5), finding("A.java", 5)};
  EXPECT_EQ(baseline_diff(mutated, base).size(), 1u);
}

TEST(Baseline, RuleAndFileMustAgree) {
  std::vector<DetectorFinding> base{finding("A.java", 5, "R1")};
  EXPECT_EQ(baseline_diff({finding("A.java", 5, "R2")}, base).size(), 1u);
  EXPECT_EQ(baseline_diff({finding("B.java", 5, "R1")}, base).size(), 1u);
}

TEST(Match, KilledAndUnkilledPartitionTheLog) {
  std::vector<MutationRecord> log{record("m1", "A.java", 10), record("m2", "A.java", 25), record("m3", "B.java", 7)};
  auto report = match({finding("A.java", 10), finding("B.java", 7)}, log);
  EXPECT_EQ(report.stats.killed_count, 2);
  ASSERT_EQ(report.unkilled.size(), 1u);
  EXPECT_EQ(report.unkilled[0].mutant_id, "m2");
  EXPECT_DOUBLE_EQ(report.stats.kill_ratio, 2.0 / 3.0);
}

TEST(Match, FindingWithoutARecordIsUnmatched) {
  std::vector<MutationRecord> log{record("m1", "A.java", 10)};
  auto report = match({finding("A.java", 10), finding("C.java", 3)}, log);
  EXPECT_EQ(report.stats.killed_count, 1);
  ASSERT_EQ(report.unmatched_findings.size(), 1u);
  EXPECT_EQ(report.unmatched_findings[0].file, "C.java");
}

TEST(Match, NearestRecordWins) {
  for (bool reversed : {false, true}) {
    std::vector<MutationRecord> log{record("z", "A.java", 10), record("a", "A.java", 13)};
    if (reversed)
      std::reverse(log.begin(), log.end());
    auto report = match({finding("A.java", 11)}, log);
    ASSERT_EQ(report.killed.size(), 1u);
    EXPECT_EQ(report.killed[0].record.mutant_id, "z");
    EXPECT_EQ(report.killed[0].match_distance, 1);
  }
}

TEST(Match, TiesGoToTheLowerMutantId) {
  for (bool reversed : {false, true}) {
    std::vector<MutationRecord> log{record("b.op2.1", "A.java", 10), record("a.op1.1", "A.java", 12)};
    if (reversed)
      std::reverse(log.begin(), log.end());
    auto report = match({finding("A.java", 11)}, log);
    ASSERT_EQ(report.killed.size(), 1u);
    EXPECT_EQ(report.killed[0].record.mutant_id, "a.op1.1");
  }
}

TEST(Match, DistanceCountsFromTheSpan) {
  std::vector<MutationRecord> log{record("m", "A.java", 10, 20)};
  EXPECT_EQ(match({finding("A.java", 15)}, log).killed.at(0).match_distance, 0);
  EXPECT_EQ(match({finding("A.java", 23)}, log).killed.at(0).match_distance, 3);
  EXPECT_TRUE(match({finding("A.java", 24)}, log).killed.empty());
  EXPECT_TRUE(match({finding("A.java", 24)}, log, 4).killed.size() == 1);
}

TEST(Match, EmptyLogIsRejected) {
  EXPECT_THROW(match({finding("A.java", 1)}, {}), ValidationError);
}

TEST(Match, RandomSubsetsAreRecoveredExactlyAndDecoysStayUnmatched) {
  const auto& log = shop_log();
  ASSERT_GT(log.size(), 20u);
  std::mt19937 rng(20240611);
  for (int trial = 0; trial < 200; ++trial) {
    std::set<std::string> chosen;
    json results = json::array();
    for (const auto& r : log)
      if (rng() % 2) {
        chosen.insert(key_of(r));
        int line = r.start_line + static_cast<int>(rng() % static_cast<unsigned>(r.end_line - r.start_line + 1));
        results.push_back(sarif_result("R", "file:///out/bulk/" + r.file, line));
      }
    int decoys = static_cast<int>(rng() % 11);
    for (int d = 0; d < decoys; ++d) {
      if (d % 2)
        results.push_back(sarif_result("R", "src/com/example/shop/Decoy" + std::to_string(d) + ".java", 5));
      else
        results.push_back(sarif_result("R", "file:///out/bulk/" + log[0].file, 100000 + d));
    }
    std::shuffle(results.begin(), results.end(), rng);
    auto parsed = parse_sarif_text(sarif(results), "/out/bulk");
    auto report = match(parsed.findings, log);
    EXPECT_EQ(killed_keys(report), chosen) << "trial " << trial;
    EXPECT_EQ(static_cast<int>(report.unmatched_findings.size()), decoys) << "trial " << trial;
    EXPECT_EQ(report.stats.killed_count + report.stats.unkilled_count, static_cast<int>(log.size()));
  }
}

TEST(Match, InputOrderDoesNotChangeTheOutcome) {
  auto log = shop_log();
  std::vector<DetectorFinding> delta;
  for (std::size_t i = 0; i < log.size(); i += 3)
    delta.push_back(finding(log[i].file, log[i].start_line));
  auto expected = summarize(match(delta, log), GroupBy::op);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(log.begin(), log.end(), rng);
    std::shuffle(delta.begin(), delta.end(), rng);
    auto rows = summarize(match(delta, log), GroupBy::op);
    ASSERT_EQ(rows.size(), expected.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      EXPECT_EQ(rows[i].group, expected[i].group);
      EXPECT_EQ(rows[i].killed, expected[i].killed);
      EXPECT_EQ(rows[i].total, expected[i].total);
    }
  }
}

TEST(Summary, AllKilledGivesFullRatios) {
  std::vector<MutationRecord> log;
  std::vector<DetectorFinding> delta;
  const char* ops[] = {"OP1", "OP2", "OP3", "OP4"};
  for (int i = 0; i < 12; ++i) {
    log.push_back(record("m" + std::to_string(i), "A.java", 10 * (i + 1), -1, ops[i % 4]));
    delta.push_back(finding("A.java", 10 * (i + 1)));
  }
  auto rows = summarize(match(delta, log), GroupBy::op);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& row : rows)
    EXPECT_DOUBLE_EQ(row.kill_ratio, 1.0);
}

TEST(Summary, NothingKilledGivesZeroRatios) {
  std::vector<MutationRecord> log{record("a", "A.java", 1), record("b", "A.java", 50, -1, "OP2")};
  for (const auto& row : summarize(match({}, log), GroupBy::op))
    EXPECT_DOUBLE_EQ(row.kill_ratio, 0.0);
}

TEST(Summary, GroupsSumToTheTotal) {
  const auto& log = shop_log();
  std::vector<DetectorFinding> delta;
  for (std::size_t i = 0; i < log.size(); i += 2)
    delta.push_back(finding(log[i].file, log[i].start_line));
  auto report = match(delta, log);
  for (auto g : {GroupBy::op, GroupBy::misuse_case, GroupBy::cluster, GroupBy::scope}) {
    int total = 0;
    int killed = 0;
    for (const auto& row : summarize(report, g, &registry())) {
      total += row.total;
      killed += row.killed;
      EXPECT_EQ(row.killed + row.unkilled, row.total);
    }
    EXPECT_EQ(total, report.stats.total);
    EXPECT_EQ(killed, report.stats.killed_count);
  }
  EXPECT_THROW(summarize(report, GroupBy::cluster), ValidationError);
}

TEST(Summary, TextAndCsvTables) {
  std::vector<SummaryRow> rows{{"OP1", 4, 3, 1, 0.75}, {"OP12+OP8", 2, 0, 2, 0.0}};
  auto text = format_summary_text(rows, "operator");
  EXPECT_NE(text.find("OP12+OP8"), std::string::npos);
  EXPECT_NE(text.find("TOTAL"), std::string::npos);
  auto csv = format_summary_csv(rows, "operator");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "operator,total,killed,unkilled,kill_ratio");
  EXPECT_NE(csv.find("OP1,4,3,1,0.750"), std::string::npos);
}

TEST(Summary, GroupNamesParse) {
  EXPECT_EQ(parse_group_by("operator"), GroupBy::op);
  EXPECT_EQ(parse_group_by("case"), GroupBy::misuse_case);
  EXPECT_EQ(parse_group_by("cluster"), GroupBy::cluster);
  EXPECT_EQ(parse_group_by("scope"), GroupBy::scope);
  EXPECT_FALSE(parse_group_by("color"));
}

TEST(Report, JsonCarriesStatsAndPartitions) {
  std::vector<MutationRecord> log{record("m1", "A.java", 10), record("m2", "A.java", 25)};
  auto j = to_json(match({finding("A.java", 10), finding("Z.java", 1)}, log));
  EXPECT_EQ(j["stats"]["total"], 2);
  EXPECT_EQ(j["stats"]["killed_count"], 1);
  EXPECT_EQ(j["stats"]["unkilled_count"], 1);
  EXPECT_DOUBLE_EQ(j["stats"]["kill_ratio"].get<double>(), 0.5);
  EXPECT_EQ(j["killed"][0]["record"]["mutant_id"], "m1");
  EXPECT_EQ(j["killed"][0]["match_distance"], 0);
  EXPECT_EQ(j["unkilled"][0]["mutant_id"], "m2");
  EXPECT_EQ(j["unmatched_findings"][0]["file"], "Z.java");
}
