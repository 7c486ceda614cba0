#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

#include "masc/error.hpp"
#include "masc/mutation_engine.hpp"
#include "masc/seeder.hpp"
#include "support.hpp"

using namespace masc;
using masc::testing::api_model;
using masc::testing::data_path;
using masc::testing::fixture;
using masc::testing::registry;
using masc::testing::squash;
using masc::testing::TempDir;

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line))
    out.push_back(line);
  return out;
}

std::string span_text(const fs::path& copy, const MutationRecord& r) {
  auto lines = lines_of(read_file(copy / r.file));
  std::string out;
  for (int i = r.start_line; i <= r.end_line; ++i)
    out += (i > r.start_line ? "\n" : "") + lines.at(static_cast<std::size_t>(i - 1));
  return out;
}

/// Digest through the coreutils tool, independent of the library's hashing.
std::string external_sha256(const std::string& text) {
  TempDir dir;
  write_file(dir / "in", text);
  std::string cmd = "sha256sum '" + (dir / "in").string() + "'";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe)
    return "";
  char buf[128] = {};
  std::string out = fgets(buf, sizeof buf, pipe) ? buf : "";
  pclose(pipe);
  return out.substr(0, 64);
}

std::string strip_suffixes(const std::string& text) {
  static const std::regex suffix(R"(\b((?:masc|Masc)[A-Z]\w*?\d+)_\d+\b)");
  return std::regex_replace(text, suffix, "$1");
}

std::vector<Mutant> mutants_of(Operator op, const std::string& case_id, int cap = 3) {
  OperatorConfig c;
  c.max_variants = cap;
  return apply_operator(op, registry().at(case_id), api_model(), c);
}

std::vector<SeedLocation> method_starts(const SourceModel& model, std::size_t n) {
  auto all = locations_exhaustive(model, {LocationKind::method_body_start});
  all.resize(std::min(n, all.size()));
  return all;
}

std::vector<SeedRequest> cross(const std::vector<const Mutant*>& mutants, const std::vector<SeedLocation>& locs,
                               Scope scope = Scope::exhaustive) {
  std::vector<SeedRequest> out;
  for (const auto* m : mutants)
    for (const auto& l : locs)
      out.push_back({m, l, scope});
  return out;
}

MutationRecord sample_record(const std::string& file = "src/A.java") {
  MutationRecord r;
  r.mutant_id = "des-cipher.op1.1";
  r.case_id = "des-cipher";
  r.operator_id = "OP1";
  r.scope = "exhaustive";
  r.file = file;
  r.class_name = "A";
  r.method = "f()";
  r.start_line = 3;
  r.end_line = 7;
  r.digest = std::string(64, 'a');
  r.output_copy = "bulk";
  return r;
}

} // namespace

class BulkSeeding : public ::testing::Test {
 protected:
  void SetUp() override {
    model = scan(fixture("shop"), &api_model());
    auto op1 = mutants_of(Operator::op1, "des-cipher");
    auto op2 = mutants_of(Operator::op2, "des-cipher");
    auto op4 = mutants_of(Operator::op4, "des-cipher");
    mutants = {op1[0], op2[0], op4[0]};
    locations = method_starts(model, 4);
    requests = cross({&mutants[0], &mutants[1], &mutants[2]}, locations);
    SeedOptions o;
    o.out_dir = out.path();
    result = seed(model, requests, o);
  }

  TempDir out;
  SourceModel model;
  std::vector<Mutant> mutants;
  std::vector<SeedLocation> locations;
  std::vector<SeedRequest> requests;
  SeedResult result;
};

TEST_F(BulkSeeding, OneRecordPerRequestInRequestOrder) {
  ASSERT_EQ(locations.size(), 4u);
  ASSERT_EQ(result.records.size(), 12u);
  ASSERT_EQ(result.copies.size(), 1u);
  EXPECT_EQ(result.copies[0], out / "bulk");
  for (std::size_t i = 0; i < 12; ++i) {
    EXPECT_EQ(result.records[i].mutant_id, requests[i].mutant->id);
    EXPECT_EQ(result.records[i].file, requests[i].location.file);
    EXPECT_EQ(result.records[i].output_copy, "bulk");
    EXPECT_EQ(result.records[i].scope, "exhaustive");
  }
}

TEST_F(BulkSeeding, SpansAreDisjointWithinEachFile) {
  for (std::size_t i = 0; i < result.records.size(); ++i)
    for (std::size_t j = i + 1; j < result.records.size(); ++j) {
      const auto& a = result.records[i];
      const auto& b = result.records[j];
      if (a.file != b.file)
        continue;
      EXPECT_TRUE(a.end_line < b.start_line || b.end_line < a.start_line) << i << " vs " << j;
    }
}

TEST_F(BulkSeeding, DigestsMatchTheCopiedLines) {
  for (const auto& r : result.records)
    EXPECT_EQ(r.digest, external_sha256(span_text(out / "bulk", r))) << r.mutant_id << " " << r.start_line;
}

TEST_F(BulkSeeding, SpansHoldTheMutantCode) {
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    auto seeded = squash(strip_suffixes(span_text(out / "bulk", result.records[i])));
    for (const auto& s : requests[i].mutant->snippet.statements)
      EXPECT_NE(seeded.find(squash(s)), std::string::npos) << result.records[i].mutant_id;
  }
}

TEST_F(BulkSeeding, OriginalLinesSurviveUnchanged) {
  for (const auto& f : model.files) {
    auto copy = lines_of(read_file(out / "bulk" / f.path));
    std::vector<bool> seeded(copy.size(), false);
    for (const auto& r : result.records)
      if (r.file == f.path)
        for (int l = r.start_line; l <= r.end_line; ++l)
          seeded[static_cast<std::size_t>(l - 1)] = true;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < copy.size(); ++i)
      if (!seeded[i] && copy[i].rfind("import ", 0) != 0)
        rest.push_back(copy[i]);
    std::vector<std::string> original;
    for (const auto& line : lines_of(f.tree->source()))
      if (line.rfind("import ", 0) != 0)
        original.push_back(line);
    EXPECT_EQ(rest, original) << f.path;
  }
}

TEST_F(BulkSeeding, CopyStaysSyntacticallyValidAndSourceUntouched) {
  auto check = check_syntax(out / "bulk");
  EXPECT_TRUE(check.ok);
  for (const auto& e : check.errors)
    ADD_FAILURE() << to_string(e);
  auto rescanned = scan(fixture("shop"), &api_model());
  for (std::size_t i = 0; i < model.files.size(); ++i)
    EXPECT_EQ(rescanned.files[i].tree->source(), model.files[i].tree->source());
}

TEST_F(BulkSeeding, NeededImportsAreAdded) {
  for (const auto& r : result.records) {
    auto text = read_file(out / "bulk" / r.file);
    EXPECT_NE(text.find("import javax.crypto.Cipher;"), std::string::npos) << r.file;
  }
}

TEST_F(BulkSeeding, MatchesIsolatedSeedingModuloFreshNames) {
  for (std::size_t i = 0; i < requests.size(); ++i) {
    TempDir solo;
    SeedOptions o;
    o.out_dir = solo.path();
    o.mode = SeedMode::isolated;
    auto single = seed(model, {requests[i]}, o);
    ASSERT_EQ(single.records.size(), 1u);
    EXPECT_EQ(single.records[0].output_copy, requests[i].mutant->id);
    EXPECT_EQ(strip_suffixes(span_text(solo / requests[i].mutant->id, single.records[0])),
              strip_suffixes(span_text(out / "bulk", result.records[i])));
  }
}

TEST(Seeding, IsolatedModeWritesOneCopyPerMutant) {
  auto model = scan(fixture("shop"), &api_model());
  auto verifier = mutants_of(Operator::op12, "hostname-verifier-true")[0];
  auto locs = locations_exhaustive(model, {LocationKind::class_body});
  locs.resize(2);
  TempDir out;
  SeedOptions o;
  o.out_dir = out.path();
  o.mode = SeedMode::isolated;
  auto result = seed(model, cross({&verifier}, locs), o);
  ASSERT_EQ(result.copies.size(), 1u);
  ASSERT_EQ(result.records.size(), 2u);
  EXPECT_EQ(result.copies[0], out / verifier.id);
  EXPECT_TRUE(check_syntax(result.copies[0]).ok);
  // Two placements in one copy get distinct fresh names.
  auto a = span_text(result.copies[0], result.records[0]);
  auto b = span_text(result.copies[0], result.records[1]);
  EXPECT_NE(a.find("mascVar1_1"), std::string::npos);
  EXPECT_NE(b.find("mascVar1_2"), std::string::npos);
}

TEST(Seeding, PlacementMismatchIsSkippedWithADiagnostic) {
  auto model = scan(fixture("shop"), &api_model());
  auto statement = mutants_of(Operator::op1, "des-cipher")[0];
  auto locs = locations_exhaustive(model, {LocationKind::class_body});
  TempDir out;
  SeedOptions o;
  o.out_dir = out.path();
  auto result = seed(model, cross({&statement}, {locs[0]}), o);
  EXPECT_TRUE(result.records.empty());
  ASSERT_EQ(result.diagnostics.size(), 1u);
  EXPECT_NE(result.diagnostics[0].message.find("skipped"), std::string::npos);
}

TEST(Seeding, ImportConflictFallsBackToQualifiedNames) {
  TempDir project;
  write_file(project / "src/p/A.java",
             "package p;\n\nimport foo.Cipher;\n\npublic class A {\n    void f() {\n        int x = 1;\n    }\n}\n");
  auto model = scan(project.path(), &api_model());
  auto m = mutants_of(Operator::op1, "des-cipher")[0];
  TempDir out;
  SeedOptions o;
  o.out_dir = out.path();
  auto result = seed(model, cross({&m}, method_starts(model, 1)), o);
  ASSERT_EQ(result.records.size(), 1u);
  auto text = read_file(out / "bulk/src/p/A.java");
  EXPECT_NE(text.find("javax.crypto.Cipher.getInstance("), std::string::npos);
  EXPECT_EQ(text.find("import javax.crypto.Cipher;"), std::string::npos);
  bool noted = false;
  for (const auto& d : result.diagnostics)
    noted = noted || d.message.find("javax.crypto.Cipher") != std::string::npos;
  EXPECT_TRUE(noted);
  EXPECT_TRUE(check_syntax(out / "bulk").ok);
}

TEST(Seeding, InPlaceRewritesTheExistingArgument) {
  auto model = scan(fixture("two_digests"), &api_model());
  auto m = mutants_of(Operator::op1, "md5-hash")[0];
  auto locs = locations_similarity(model, registry().at("md5-hash"), &api_model());
  ASSERT_EQ(locs.size(), 2u);
  TempDir out;
  SeedOptions o;
  o.out_dir = out.path();
  o.in_place = true;
  auto result = seed(model, cross({&m}, locs, Scope::similarity), o);
  ASSERT_EQ(result.records.size(), 2u);
  auto copy = lines_of(read_file(out / "bulk/src/util/Hashes.java"));
  auto original = lines_of(model.files[0].tree->source());
  EXPECT_EQ(copy.size(), original.size());
  for (const auto& r : result.records) {
    EXPECT_EQ(r.start_line, r.end_line);
    EXPECT_NE(copy[static_cast<std::size_t>(r.start_line - 1)].find(*m.inline_argument), std::string::npos);
    EXPECT_EQ(copy[static_cast<std::size_t>(r.start_line - 1)].find("SHA-"), std::string::npos);
  }
  EXPECT_TRUE(check_syntax(out / "bulk").ok);
}

TEST(Seeding, InPlaceSkipsASecondRewriteOfTheSameLine) {
  auto model = scan(fixture("two_digests"), &api_model());
  auto ms = mutants_of(Operator::op1, "md5-hash");
  ASSERT_GE(ms.size(), 2u);
  auto loc = locations_similarity(model, registry().at("md5-hash"), &api_model())[0];
  TempDir out;
  SeedOptions o;
  o.out_dir = out.path();
  o.in_place = true;
  auto result = seed(model, cross({&ms[0], &ms[1]}, {loc}, Scope::similarity), o);
  EXPECT_EQ(result.records.size(), 1u);
  EXPECT_EQ(result.diagnostics.size(), 1u);
}

TEST(Seeding, RejectsOutputInsideTheProjectOrNonEmpty) {
  auto model = scan(fixture("one_if"), &api_model());
  auto m = mutants_of(Operator::op1, "des-cipher")[0];
  auto requests = cross({&m}, method_starts(model, 1));
  SeedOptions inside;
  inside.out_dir = fixture("one_if") / "out";
  EXPECT_THROW(seed(model, requests, inside), ValidationError);
  EXPECT_FALSE(fs::exists(fixture("one_if") / "out"));

  TempDir out;
  write_file(out / "bulk/leftover.txt", "x");
  SeedOptions busy;
  busy.out_dir = out.path();
  EXPECT_THROW(seed(model, requests, busy), ValidationError);
}

TEST(Checking, SyntaxErrorsInACopyAreReported) {
  TempDir copy;
  fs::copy(fixture("one_if"), copy.path(), fs::copy_options::recursive);
  EXPECT_TRUE(check_syntax(copy.path()).ok);
  write_file(copy / "src/Solo.java", "public class Solo {\n    void work( {\n}\n");
  auto check = check_syntax(copy.path());
  EXPECT_FALSE(check.ok);
  ASSERT_FALSE(check.errors.empty());
  EXPECT_NE(check.errors[0].file.find("Solo.java"), std::string::npos);
}

TEST(Checking, EmptyCopyIsValidAndMissingCopyIsNotFound) {
  TempDir copy;
  EXPECT_TRUE(check_syntax(copy.path()).ok);
  EXPECT_THROW(check_syntax(copy / "absent"), NotFoundError);
}

TEST(Checking, CompileCommandStatusesAndFailures) {
  TempDir copy;
  EXPECT_EQ(compile_check(copy.path(), "true {}").exit_status, 0);
  EXPECT_NE(compile_check(copy.path(), "false").exit_status, 0);
  auto echoed = compile_check(copy.path(), "echo {}");
  EXPECT_NE(echoed.output.find(copy.path().string()), std::string::npos);
  EXPECT_THROW(compile_check(copy.path(), "masc-no-such-compiler {}"), CommandNotFoundError);
  EXPECT_THROW(compile_check(copy.path(), "sleep 10", std::chrono::seconds(1)), TimeoutError);
}

TEST(Log, RoundTripsEmptyAndFullLogs) {
  TempDir dir;
  emit_log({}, dir / "empty.jsonl");
  EXPECT_TRUE(load_log(dir / "empty.jsonl").empty());

  std::vector<MutationRecord> records;
  for (int i = 0; i < 12; ++i) {
    auto r = sample_record();
    r.start_line = i + 1;
    r.end_line = i + 2;
    records.push_back(r);
  }
  records.push_back(sample_record("src/ünï/Çödé.java"));
  emit_log(records, dir / "log.jsonl");
  EXPECT_EQ(load_log(dir / "log.jsonl"), records);
}

TEST(Log, LinesCarryExactlyTheLogFields) {
  auto j = to_json(sample_record());
  std::set<std::string> fields;
  for (const auto& [k, v] : j.items())
    fields.insert(k);
  EXPECT_EQ(fields, (std::set<std::string>{"mutant_id", "case_id", "operator_id", "scope", "file", "class", "method",
                                           "start_line", "end_line", "digest", "output_copy"}));
}

TEST(Log, RejectsMalformedRecords) {
  auto good = to_json(sample_record());
  auto missing = good;
  missing.erase("digest");
  EXPECT_THROW(record_from_json(missing), ValidationError);
  auto extra = good;
  extra["note"] = "x";
  EXPECT_THROW(record_from_json(extra), ValidationError);
  auto wrong = good;
  wrong["start_line"] = "3";
  EXPECT_THROW(record_from_json(wrong), ValidationError);
  auto inverted = good;
  inverted["start_line"] = 9;
  EXPECT_THROW(record_from_json(inverted), ValidationError);
}

TEST(Log, BlankLinesAreIgnored) {
  TempDir dir;
  write_file(dir / "log.jsonl", "\n" + to_json(sample_record()).dump() + "\n\n");
  EXPECT_EQ(load_log(dir / "log.jsonl").size(), 1u);
}

TEST(MinimalApp, StatementMutantGoesIntoMain) {
  TempDir dir;
  auto m = mutants_of(Operator::op1, "des-cipher")[0];
  auto records = generate_minimal_app(m, api_model(), data_path() / "template-app", dir / "app");
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].scope, "main");
  EXPECT_EQ(records[0].method, "main(String[])");
  EXPECT_TRUE(check_syntax(dir / "app").ok);
  EXPECT_NE(squash(span_text(dir / "app", records[0])).find(squash("Cipher.getInstance(\"des\");")), std::string::npos);
  EXPECT_EQ(load_log(dir / "app/mutation_log.jsonl"), records);
}

TEST(MinimalApp, DeclarationMutantGoesIntoTheMainClassBody) {
  TempDir dir;
  auto m = mutants_of(Operator::op12, "hostname-verifier-true")[0];
  auto records = generate_minimal_app(m, api_model(), data_path() / "template-app", dir / "app");
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].class_name, "masc.template.Main");
  EXPECT_EQ(records[0].method, "");
  EXPECT_TRUE(check_syntax(dir / "app").ok);
  auto text = read_file(dir / "app" / records[0].file);
  EXPECT_NE(text.find("import javax.net.ssl.HostnameVerifier;"), std::string::npos);
  EXPECT_NE(text.find("import javax.net.ssl.SSLSession;"), std::string::npos);
}

TEST(MinimalApp, MissingTemplateIsNotFound) {
  TempDir dir;
  auto m = mutants_of(Operator::op1, "des-cipher")[0];
  EXPECT_THROW(generate_minimal_app(m, api_model(), dir / "none", dir / "app"), NotFoundError);
}

TEST(Seeding, InPlaceImportsOnlyWhatTheArgumentUses) {
  auto model = scan(fixture("two_digests"), &api_model());
  const Mutant* with_locale = nullptr;
  auto ms = mutants_of(Operator::op3, "md5-hash", 0);
  for (const auto& m : ms)
    if (m.inline_argument && m.inline_argument->find("Locale") != std::string::npos)
      with_locale = &m;
  ASSERT_NE(with_locale, nullptr);
  auto loc = locations_similarity(model, registry().at("md5-hash"), &api_model())[0];
  TempDir out;
  SeedOptions o;
  o.out_dir = out.path();
  o.in_place = true;
  auto result = seed(model, cross({with_locale}, {loc}, Scope::similarity), o);
  ASSERT_EQ(result.records.size(), 1u);
  auto text = read_file(out / "bulk/src/util/Hashes.java");
  EXPECT_NE(text.find("import java.util.Locale;"), std::string::npos);
  EXPECT_EQ(text.find("import java.security.NoSuchAlgorithmException;"), std::string::npos);
  EXPECT_TRUE(check_syntax(out / "bulk").ok);
}
