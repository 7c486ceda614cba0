#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "masc/error.hpp"
#include "masc/pipeline.hpp"
#include "support.hpp"

using namespace masc;
using masc::testing::api_model;
using masc::testing::fixture;
using masc::testing::registry;
using masc::testing::TempDir;
using nlohmann::json;

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file())
      out[fs::relative(e.path(), dir).generic_string()] = read_file(e.path());
  return out;
}

RunConfig config_for(const fs::path& project, const fs::path& out) {
  auto c = default_run_config();
  c.project = project;
  c.out_dir = out;
  return c;
}

int run_quietly(const RunConfig& c) {
  std::ostringstream log;
  return run_pipeline(c, log);
}

struct Invocation {
  int status = -1;
  std::string out;
};

Invocation cli(const std::string& args) {
  std::string cmd = std::string("'") + MASC_CLI + "' " + args + " 2>/dev/null";
  Invocation r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe)
    return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0)
    r.out.append(buf, n);
  int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string full_coverage_sarif(const std::vector<MutationRecord>& log) {
  json results = json::array();
  for (const auto& r : log)
    results.push_back({{"ruleId", "R"},
                       {"message", {{"text", "hit"}}},
                       {"locations",
                        json::array({{{"physicalLocation",
                                       {{"artifactLocation", {{"uri", r.file}}}, {"region", {{"startLine", r.start_line}}}}}}})}});
  return json{{"version", "2.1.0"}, {"runs", json::array({{{"results", results}}})}}.dump();
}

} // namespace

TEST(Pipeline, ExhaustiveRunOverAFixtureProducesValidCopies) {
  TempDir out;
  auto c = config_for(fixture("shop"), out.path());
  ASSERT_EQ(run_quietly(c), exit_ok);
  auto log = load_log(out / "mutation_log.jsonl");
  EXPECT_GE(log.size(), 100u);
  for (const auto& copy : fs::directory_iterator(out / "copies"))
    EXPECT_TRUE(check_syntax(copy.path()).ok) << copy.path();
}

TEST(Pipeline, MissingProjectIsAValidationFailureWithNoOutputs) {
  TempDir out;
  auto c = config_for(out / "no-such-project", out / "result");
  EXPECT_EQ(run_quietly(c), exit_validation);
  EXPECT_FALSE(fs::exists(out / "result"));
}

TEST(Pipeline, FullCoverageReportKillsEverything) {
  TempDir out;
  auto c = config_for(fixture("two_digests"), out / "run");
  c.cases = {"md5-hash", "sha1-hash"};
  ASSERT_EQ(run_quietly(c), exit_ok);
  auto log = load_log(out / "run/mutation_log.jsonl");
  ASSERT_FALSE(log.empty());
  std::ofstream(out / "report.sarif") << full_coverage_sarif(log);
  c.reports = ReportInput{};
  c.reports->report = out / "report.sarif";
  ASSERT_EQ(run_quietly(c), exit_ok);
  auto report = json::parse(read_file(out / "run/kill_report.json"));
  EXPECT_EQ(report["stats"]["total"], static_cast<int>(log.size()));
  EXPECT_DOUBLE_EQ(report["stats"]["kill_ratio"].get<double>(), 1.0);
  EXPECT_TRUE(fs::exists(out / "run/summary.txt"));
}

TEST(Pipeline, BaselineFindingsAreSubtracted) {
  TempDir out;
  auto c = config_for(fixture("two_digests"), out / "run");
  c.cases = {"md5-hash"};
  ASSERT_EQ(run_quietly(c), exit_ok);
  auto log = load_log(out / "run/mutation_log.jsonl");
  std::ofstream(out / "mutated.sarif") << full_coverage_sarif(log);
  std::ofstream(out / "baseline.sarif") << full_coverage_sarif(log);
  c.reports = ReportInput{};
  c.reports->report = out / "mutated.sarif";
  c.reports->baseline = out / "baseline.sarif";
  ASSERT_EQ(run_quietly(c), exit_ok);
  auto report = json::parse(read_file(out / "run/kill_report.json"));
  EXPECT_EQ(report["stats"]["killed_count"], 0);
}

TEST(Pipeline, RerunsAreByteIdentical) {
  TempDir out;
  auto c = config_for(fixture("shop"), out / "a");
  c.cases = {"des-cipher", "hostname-verifier-true"};
  ASSERT_EQ(run_quietly(c), exit_ok);
  auto first = snapshot(out / "a");
  ASSERT_EQ(run_quietly(c), exit_ok);
  EXPECT_EQ(snapshot(out / "a"), first);
  c.out_dir = out / "b";
  c.jobs = 4;
  ASSERT_EQ(run_quietly(c), exit_ok);
  // Job count must not leak into any artifact.
  EXPECT_EQ(snapshot(out / "b"), first);
}

TEST(Pipeline, DryRunWritesNothing) {
  TempDir out;
  auto c = config_for(fixture("shop"), out / "dry");
  c.dry_run = true;
  EXPECT_EQ(run_quietly(c), exit_ok);
  EXPECT_FALSE(fs::exists(out / "dry"));
}

TEST(Pipeline, MainScopeWithoutProjectUsesTheTemplateApp) {
  TempDir out;
  auto c = default_run_config();
  c.scope = Scope::main;
  c.out_dir = out.path();
  c.cases = {"des-cipher"};
  ASSERT_EQ(run_quietly(c), exit_ok);
  auto log = load_log(out / "mutation_log.jsonl");
  ASSERT_FALSE(log.empty());
  for (const auto& r : log)
    EXPECT_EQ(r.scope, "main");
}

TEST(Pipeline, ReportsNeedBulkMode) {
  auto c = config_for(fixture("shop"), "/tmp/unused");
  c.mode = SeedMode::isolated;
  c.reports = ReportInput{};
  c.reports->report = fixture("shop");
  EXPECT_THROW(validate(c), ValidationError);
}

TEST(Config, JsonOverlayIsStrict) {
  auto c = default_run_config();
  apply_config_json(c, json{{"scope", "similarity"}, {"mode", "isolated"}, {"drift", 5}, {"cases", {"des-cipher"}}});
  EXPECT_EQ(c.scope, Scope::similarity);
  EXPECT_EQ(c.mode, SeedMode::isolated);
  EXPECT_EQ(c.drift, 5);
  EXPECT_EQ(c.cases, std::vector<std::string>{"des-cipher"});
  EXPECT_THROW(apply_config_json(c, json{{"colour", "red"}}), ValidationError);
  EXPECT_THROW(apply_config_json(c, json{{"scope", "everywhere"}}), ValidationError);
}

TEST(Config, UnknownCaseOrOperatorIsRejected) {
  auto c = config_for(fixture("shop"), "/tmp/unused");
  c.cases = {"no-such-case"};
  EXPECT_NE(run_quietly(c), exit_ok);
  c.cases = {};
  c.operators = {"OP99"};
  EXPECT_EQ(run_quietly(c), exit_validation);
}

TEST(FindMutant, ResolvesGeneratedIds) {
  auto mutants = generate_mutants(registry(), api_model(), OperatorConfig{});
  for (std::size_t i = 0; i < mutants.size(); i += 17) {
    auto found = find_mutant(registry(), api_model(), mutants[i].id);
    EXPECT_EQ(found.id, mutants[i].id);
    EXPECT_EQ(snippet_text(found), snippet_text(mutants[i]));
  }
  EXPECT_THROW(find_mutant(registry(), api_model(), "des-cipher.op1.999"), NotFoundError);
  EXPECT_THROW(find_mutant(registry(), api_model(), "nonsense"), NotFoundError);
}

TEST(Cli, VersionAndUsage) {
  auto v = cli("--version");
  EXPECT_EQ(v.status, 0);
  EXPECT_NE(v.out.find('.'), std::string::npos);
  EXPECT_EQ(cli("frobnicate").status, exit_usage);
  EXPECT_EQ(cli("").status, exit_usage);
}

TEST(Cli, TaxonomyAndApiModelAsJson) {
  auto t = cli("--json taxonomy list");
  ASSERT_EQ(t.status, 0);
  EXPECT_EQ(json::parse(t.out).size(), registry().cases().size());
  auto selected = cli("--json taxonomy list --selected");
  EXPECT_EQ(json::parse(selected.out).size(), registry().selected_cases().size());
  auto a = cli("--json api-model show javax.crypto.Cipher");
  ASSERT_EQ(a.status, 0);
  auto specs = json::parse(a.out);
  ASSERT_EQ(specs.size(), 1u);
  EXPECT_EQ(specs[0]["name"], "javax.crypto.Cipher");
  EXPECT_EQ(specs[0]["form"], "statement");
  EXPECT_NE(cli("api-model show no.Such").status, 0);
}

TEST(Cli, GenerateScanSeedAnalyzeMinimize) {
  TempDir dir;
  auto g = cli("--json generate --cases des-cipher --operators OP1");
  ASSERT_EQ(g.status, 0);
  auto mutants = json::parse(g.out);
  ASSERT_FALSE(mutants.empty());
  EXPECT_EQ(mutants[0]["effective_value"], "des");

  auto s = cli("--json scan --project '" + fixture("one_if").string() + "' --scope exhaustive");
  ASSERT_EQ(s.status, 0);
  EXPECT_EQ(json::parse(s.out).size(), 3u);

  auto seeded = cli("seed --project '" + fixture("two_digests").string() +
                    "' --scope similarity --cases md5-hash --operators OP1 --out '" + (dir / "seeded").string() + "'");
  ASSERT_EQ(seeded.status, 0);
  auto log = load_log(dir / "seeded/mutation_log.jsonl");
  ASSERT_FALSE(log.empty());
  EXPECT_EQ(cli("check --copy '" + (dir / "seeded/bulk").string() + "'").status, 0);

  std::ofstream(dir / "r.sarif") << full_coverage_sarif(log);
  auto analyzed = cli("analyze --log '" + (dir / "seeded/mutation_log.jsonl").string() + "' --report '" +
                      (dir / "r.sarif").string() + "' --out '" + (dir / "kill.json").string() + "'");
  ASSERT_EQ(analyzed.status, 0);
  EXPECT_DOUBLE_EQ(json::parse(read_file(dir / "kill.json"))["stats"]["kill_ratio"].get<double>(), 1.0);

  auto minimized = cli("minimize --mutant des-cipher.op1.1 --out '" + (dir / "mini").string() + "'");
  ASSERT_EQ(minimized.status, 0);
  EXPECT_TRUE(fs::exists(dir / "mini/mutation_log.jsonl"));
  EXPECT_TRUE(check_syntax(dir / "mini").ok);
}

TEST(Cli, ExitCodesFollowTheFailingStage) {
  TempDir dir;
  EXPECT_EQ(cli("run --project '" + (dir / "missing").string() + "' --out '" + (dir / "o").string() + "'").status,
            exit_validation);
  std::ofstream(dir / "bad.sarif") << "{not json";
  std::ofstream(dir / "log.jsonl") << "";
  EXPECT_EQ(cli("analyze --log '" + (dir / "log.jsonl").string() + "' --report '" + (dir / "bad.sarif").string() +
                "' --out '" + (dir / "k.json").string() + "'")
                .status,
            exit_analysis);
}
