#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "masc/error.hpp"
#include "masc/target_analyzer.hpp"
#include "location_oracle.hpp"
#include "support.hpp"

using namespace masc;
using masc::testing::api_model;
using masc::testing::data_path;
using masc::testing::fixture;
using masc::testing::registry;
using masc::testing::TempDir;

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

fs::path template_app() {
  return data_path() / "template-app";
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

const PlacementKinds kAllExhaustive{LocationKind::method_body_start, LocationKind::statement_in_conditional,
                                    LocationKind::class_body, LocationKind::anonymous_inner_body};

} // namespace

TEST(Scan, IndexesEveryFileOfAValidProject) {
  auto model = scan(fixture("shop"), &api_model());
  EXPECT_EQ(model.files.size(), 5u);
  EXPECT_TRUE(model.diagnostics.empty());
  ASSERT_NE(model.find_file("src/com/example/shop/Main.java"), nullptr);
  EXPECT_EQ(model.find_file("src/com/example/shop/Main.java")->package, "com.example.shop");
}

TEST(Scan, ExcludesFilesWithSyntaxErrors) {
  auto model = scan(fixture("broken"), &api_model());
  EXPECT_EQ(model.files.size(), 1u);
  ASSERT_EQ(model.diagnostics.size(), 1u);
  EXPECT_NE(model.diagnostics[0].file.find("Bad.java"), std::string::npos);
  EXPECT_EQ(model.diagnostics[0].line, 5);
}

TEST(Scan, EmptyDirectoryIsNotFound) {
  TempDir dir;
  EXPECT_THROW(scan(dir.path(), &api_model()), NotFoundError);
}

TEST(Scan, ResolvesUsagesThroughImportsQualifiedNamesAndWildcards) {
  auto digests = scan(fixture("two_digests"), &api_model());
  ASSERT_TRUE(digests.usages.count("java.security.MessageDigest"));
  int calls = 0;
  for (const auto& u : digests.usages.at("java.security.MessageDigest"))
    calls += u.member == "getInstance";
  EXPECT_EQ(calls, 2);

  auto tls = scan(fixture("tls_client"), &api_model());
  EXPECT_TRUE(tls.usages.count("javax.net.ssl.SSLContext"));
  EXPECT_TRUE(tls.usages.count("javax.net.ssl.HostnameVerifier"));
  EXPECT_TRUE(tls.usages.count("javax.net.ssl.X509TrustManager"));
}

TEST(Scan, RecordsScopesWithBinaryNames) {
  auto model = scan(fixture("shop"), &api_model());
  std::set<std::string> classes;
  std::set<std::string> methods;
  for (const auto& f : model.files)
    for (const auto& s : f.scopes) {
      classes.insert(s.class_name);
      if (s.method)
        methods.insert(*s.method);
    }
  EXPECT_TRUE(classes.count("com.example.shop.Inventory$Entry"));
  EXPECT_TRUE(classes.count("com.example.shop.Main$1"));
  EXPECT_TRUE(classes.count("com.example.shop.Printer$1"));
  EXPECT_TRUE(methods.count("main(String[])"));
  EXPECT_TRUE(methods.count("<init>(String, int)"));
  EXPECT_TRUE(methods.count("<clinit>"));
  EXPECT_TRUE(methods.count("<init-block>"));
}

TEST(Locations, MainOfTheTemplateApp) {
  auto model = scan(template_app(), &api_model());
  auto locs = locations_main(model);
  ASSERT_EQ(locs.size(), 1u);
  EXPECT_EQ(locs[0].kind, LocationKind::main_entry);
  EXPECT_EQ(locs[0].enclosing_class, "masc.template.Main");
  EXPECT_EQ(locs[0].enclosing_method, "main(String[])");
}

TEST(Locations, MainAcceptsVarargsAndIgnoresOtherOverloads) {
  auto locs = locations_main(scan(fixture("two_mains"), &api_model()));
  ASSERT_EQ(locs.size(), 2u);
  EXPECT_EQ(locs[1].enclosing_method, "main(String...)");
}

TEST(Locations, MainMissingIsNotFound) {
  EXPECT_THROW(locations_main(scan(fixture("no_main"), &api_model())), NotFoundError);
}

TEST(Locations, SimilarityFindsEveryCallOfTheApi) {
  auto model = scan(fixture("two_digests"), &api_model());
  auto locs = locations_similarity(model, registry().at("md5-hash"), &api_model());
  ASSERT_EQ(locs.size(), 2u);
  EXPECT_EQ(locs[0].usage_line, 7);
  EXPECT_EQ(locs[1].usage_line, 13);
  for (const auto& l : locs) {
    EXPECT_EQ(l.kind, LocationKind::similar_usage_site);
    ASSERT_TRUE(l.usage_argument);
    auto arg = model.find_file(l.file)->tree->source().substr(l.usage_argument->begin,
                                                               l.usage_argument->end - l.usage_argument->begin);
    EXPECT_TRUE(arg == "\"SHA-256\"" || arg == "\"SHA-512\"") << arg;
  }
}

TEST(Locations, SimilarityWithoutUsesIsEmpty) {
  auto model = scan(fixture("tls_client"), &api_model());
  // The only trust manager is a class declaration, not an in-method use.
  EXPECT_TRUE(locations_similarity(model, registry().at("trust-all-trustmanager"), &api_model()).empty());
  EXPECT_TRUE(locations_similarity(model, registry().at("des-cipher"), &api_model()).empty());
  auto verifiers = locations_similarity(model, registry().at("hostname-verifier-true"), &api_model());
  ASSERT_EQ(verifiers.size(), 1u);
  // Placed before the return that creates the verifier.
  EXPECT_EQ(verifiers[0].anchor.line, 15);
  EXPECT_FALSE(verifiers[0].usage_argument);
}

TEST(Locations, SimilarityInsideStaticInitializer) {
  auto model = scan(fixture("static_cipher"), &api_model());
  auto locs = locations_similarity(model, registry().at("des-cipher"), &api_model());
  ASSERT_EQ(locs.size(), 1u);
  EXPECT_EQ(locs[0].enclosing_method, "<clinit>");
  EXPECT_EQ(locs[0].usage_line, 11);
  EXPECT_EQ(locs[0].anchor.line, 11);
}

TEST(Locations, SimilarityAnchorsSitOnStatementBoundaries) {
  for (const char* project : {"shop", "two_digests", "static_cipher", "tls_client"}) {
    auto model = scan(fixture(project), &api_model());
    for (const auto& misuse : registry().cases()) {
      for (const auto& l : locations_similarity(model, misuse, &api_model())) {
        const auto& src = model.find_file(l.file)->tree->source();
        auto before = trim(src.substr(0, l.anchor.offset));
        ASSERT_FALSE(before.empty());
        char last = before.back();
        EXPECT_TRUE(last == ';' || last == '}' || last == '{') << project << " " << l.file << ":" << l.anchor.line;
      }
    }
  }
}

TEST(Locations, ExhaustiveOnASingleIf) {
  auto model = scan(fixture("one_if"), &api_model());
  auto statement = locations_exhaustive(model, statement_placement_kinds());
  std::set<LocationKind> kinds;
  for (const auto& l : statement)
    kinds.insert(l.kind);
  EXPECT_EQ(kinds, (std::set<LocationKind>{LocationKind::method_body_start, LocationKind::statement_in_conditional}));
  EXPECT_EQ(statement.size(), 2u);
  auto declaration = locations_exhaustive(model, kAllExhaustive);
  EXPECT_EQ(declaration.size(), 3u);
}

TEST(Locations, ExhaustiveOnAnEmptyClass) {
  auto model = scan(fixture("empty_class"), &api_model());
  EXPECT_TRUE(locations_exhaustive(model, statement_placement_kinds()).empty());
  EXPECT_EQ(locations_exhaustive(model, kAllExhaustive).size(), 1u);
}

TEST(Locations, ExhaustiveRejectsAnEmptyKindSet) {
  auto model = scan(fixture("one_if"), &api_model());
  EXPECT_THROW(locations_exhaustive(model, {}), ValidationError);
}

TEST(Locations, ExhaustiveMatchesALexicalBraceClassifier) {
  for (auto root : {fixture("shop"), fixture("one_if"), fixture("empty_class"), fixture("tls_client"),
                    fixture("static_cipher"), fixture("two_digests"), fixture("two_mains"), template_app()}) {
    auto model = scan(root, &api_model());
    EXPECT_EQ(location_keys(locations_exhaustive(model, kAllExhaustive)), lexical_locations(root)) << root;
  }
}

TEST(Locations, ConstructorsStartAfterTheExplicitInvocation) {
  auto model = scan(fixture("shop"), &api_model());
  bool seen = false;
  for (const auto& l : locations_exhaustive(model, {LocationKind::method_body_start}))
    if (l.enclosing_class == "com.example.shop.Item" && l.enclosing_method == "<init>(String)") {
      EXPECT_EQ(l.anchor.line, 13);
      EXPECT_EQ(model.find_file(l.file)->tree->source().substr(l.anchor.offset - 14, 14), "this(name, 1);");
      seen = true;
    }
  EXPECT_TRUE(seen);
}

TEST(Locations, AreDeterministicAcrossRunsAndJobCounts) {
  auto one = scan(fixture("shop"), &api_model(), 1);
  auto many = scan(fixture("shop"), &api_model(), 4);
  auto a = locations_exhaustive(one, kAllExhaustive);
  auto b = locations_exhaustive(many, kAllExhaustive);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(to_json(a[i]), to_json(b[i]));
    EXPECT_EQ(a[i].indent, b[i].indent);
  }
}

TEST(Locations, IndentFollowsTheEnclosingLine) {
  auto model = scan(fixture("one_if"), &api_model());
  for (const auto& l : locations_exhaustive(model, statement_placement_kinds())) {
    if (l.kind == LocationKind::method_body_start)
      EXPECT_EQ(l.indent, std::string(8, ' '));
    else
      EXPECT_EQ(l.indent, std::string(12, ' '));
  }
}

TEST(Locations, FilesAddedLaterAreScannedInPathOrder) {
  TempDir dir;
  write_file(dir / "b/Z.java", "class Z { void f() { } }\n");
  write_file(dir / "a/Y.java", "class Y { void f() { } }\n");
  auto model = scan(dir.path(), &api_model());
  ASSERT_EQ(model.files.size(), 2u);
  EXPECT_EQ(model.files[0].path, "a/Y.java");
  EXPECT_EQ(model.files[1].path, "b/Z.java");
}
