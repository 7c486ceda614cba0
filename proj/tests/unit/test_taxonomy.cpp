#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <set>

#include <json.hpp>

#include "masc/error.hpp"
#include "masc/mutant.hpp"
#include "masc/taxonomy.hpp"
#include "support.hpp"

using namespace masc;
using masc::testing::registry;
using nlohmann::json;

namespace {

json shipped() {
  std::ifstream in(masc::testing::data_path() / "registry.json");
  return json::parse(in);
}

json& case_named(json& doc, const std::string& id) {
  for (auto& c : doc["cases"])
    if (c["id"] == id)
      return c;
  throw std::runtime_error("fixture case missing: " + id);
}

} // namespace

TEST(Taxonomy, ShippedRegistryHasNineClustersAndEnoughSelectedCases) {
  const auto& r = registry();
  EXPECT_EQ(r.clusters().size(), 9u);
  auto selected = r.selected_cases();
  EXPECT_GE(selected.size(), 19u);
  std::set<std::string> covered;
  for (const auto* c : selected)
    covered.insert(c->cluster);
  EXPECT_EQ(covered.size(), 9u);
}

TEST(Taxonomy, ListByOperatorReturnsOnlyApplicableCases) {
  CaseFilter f;
  f.op = Operator::op1;
  auto cases = list_cases(registry(), f);
  ASSERT_FALSE(cases.empty());
  for (const auto* c : cases) {
    EXPECT_TRUE(c->applies(Operator::op1)) << c->id;
    EXPECT_EQ(c->api_kind, ApiKind::restrictive) << c->id;
  }
}

TEST(Taxonomy, ListByClusterAndKind) {
  CaseFilter f;
  f.cluster = "ssl-tls";
  for (const auto* c : list_cases(registry(), f))
    EXPECT_EQ(c->cluster, "ssl-tls");
  CaseFilter k;
  k.api_kind = ApiKind::flexible;
  auto flexible = list_cases(registry(), k);
  ASSERT_FALSE(flexible.empty());
  for (const auto* c : flexible)
    EXPECT_TRUE(c->behavior.has_value()) << c->id;
}

TEST(Taxonomy, UnknownClusterIsAValidationError) {
  CaseFilter f;
  f.cluster = "quantum";
  EXPECT_THROW(list_cases(registry(), f), ValidationError);
}

TEST(Taxonomy, EmptyFilterIsWholeRegistryInOrder) {
  auto all = list_cases(registry());
  ASSERT_EQ(all.size(), registry().cases().size());
  for (std::size_t i = 0; i < all.size(); ++i)
    EXPECT_EQ(all[i], &registry().cases()[i]);
}

TEST(Taxonomy, SelectedOnlyDropsUnselected) {
  CaseFilter f;
  f.selected_only = true;
  auto cases = list_cases(registry(), f);
  EXPECT_EQ(cases.size(), registry().selected_cases().size());
  for (const auto* c : cases)
    EXPECT_TRUE(c->selected);
}

TEST(Taxonomy, EveryCaseNamesItsApiAndOperatorsAreKindConsistent) {
  for (const auto& c : registry().cases()) {
    EXPECT_FALSE(c.applicable_operators.empty()) << c.id;
    for (auto op : c.applicable_operators)
      EXPECT_EQ(is_restrictive(op), c.api_kind == ApiKind::restrictive) << c.id << " " << to_string(op);
    if (c.api_kind == ApiKind::restrictive) {
      EXPECT_FALSE(c.insecure_arguments.empty()) << c.id;
      EXPECT_FALSE(c.api_member().empty()) << c.id;
    } else {
      EXPECT_TRUE(c.api_member().empty()) << c.id;
    }
    EXPECT_NE(masc::testing::api_model().find(c.api_type()), nullptr) << c.id;
  }
}

TEST(Taxonomy, EmptyDocumentIsAParseError) {
  EXPECT_THROW(parse_registry(""), ParseError);
  EXPECT_THROW(parse_registry("{not json"), ParseError);
}

TEST(Taxonomy, RestrictiveCaseWithoutArgumentsIsRejected) {
  auto doc = shipped();
  case_named(doc, "des-cipher")["insecure_arguments"] = json::array();
  EXPECT_THROW(parse_registry(doc.dump()), ValidationError);
}

TEST(Taxonomy, FlexibleOperatorOnRestrictiveCaseIsRejected) {
  auto doc = shipped();
  case_named(doc, "des-cipher")["applicable_operators"].push_back("OP8");
  EXPECT_THROW(parse_registry(doc.dump()), ValidationError);
}

TEST(Taxonomy, FlexibleCaseWithoutBehaviorIsRejected) {
  auto doc = shipped();
  case_named(doc, "hostname-verifier-true").erase("behavior");
  EXPECT_THROW(parse_registry(doc.dump()), ValidationError);
}

TEST(Taxonomy, UnknownFieldIsRejected) {
  auto doc = shipped();
  case_named(doc, "des-cipher")["severity"] = "high";
  EXPECT_THROW(parse_registry(doc.dump()), ValidationError);
}

TEST(Taxonomy, DuplicateIdIsRejected) {
  auto doc = shipped();
  doc["cases"].push_back(case_named(doc, "des-cipher"));
  EXPECT_THROW(parse_registry(doc.dump()), ValidationError);
}

TEST(Taxonomy, UndeclaredClusterIsRejected) {
  auto doc = shipped();
  case_named(doc, "des-cipher")["cluster"] = "elsewhere";
  EXPECT_THROW(parse_registry(doc.dump()), ValidationError);
}

TEST(Taxonomy, TooFewSelectedCasesIsRejected) {
  auto doc = shipped();
  int dropped = 0;
  for (auto& c : doc["cases"])
    if (c.value("selected", true) && c["cluster"] == "symmetric-ciphers" && dropped < 3) {
      c["selected"] = false;
      ++dropped;
    }
  ASSERT_EQ(dropped, 3);
  EXPECT_THROW(parse_registry(doc.dump()), ValidationError);
}

TEST(Taxonomy, SelectionMustCoverEveryCluster) {
  auto doc = shipped();
  for (auto& c : doc["cases"])
    if (c["cluster"] == "signatures")
      c["selected"] = false;
  EXPECT_THROW(parse_registry(doc.dump()), ValidationError);
}

TEST(Taxonomy, SymbolicArgumentOnlyWithValueDerivingOperators) {
  auto doc = shipped();
  case_named(doc, "predictable-iv")["applicable_operators"].push_back("OP1");
  EXPECT_THROW(parse_registry(doc.dump()), ValidationError);
  auto bad = shipped();
  case_named(bad, "predictable-iv")["insecure_arguments"] = json::array({"<moon-phase>"});
  EXPECT_THROW(parse_registry(bad.dump()), ValidationError);
}

TEST(Taxonomy, FindAndAt) {
  EXPECT_NE(registry().find("des-cipher"), nullptr);
  EXPECT_EQ(registry().find("nope"), nullptr);
  EXPECT_THROW(registry().at("nope"), NotFoundError);
  const auto& des = registry().at("des-cipher");
  EXPECT_EQ(des.api_type(), "javax.crypto.Cipher");
  EXPECT_EQ(des.api_member(), "getInstance");
}

TEST(Taxonomy, BaseInstantiationExistsForEverySelectedCase) {
  for (const auto* c : registry().selected_cases()) {
    Mutant m;
    ASSERT_NO_THROW(m = base_instantiation(*c, masc::testing::api_model())) << c->id;
    EXPECT_EQ(m.id, c->id + ".base.1");
    EXPECT_EQ(m.operator_label(), "BASE");
    EXPECT_FALSE(m.op.has_value());
    EXPECT_FALSE(snippet_text(m).empty());
  }
}

TEST(Taxonomy, BaseOfDesCipherIsTheLiteralCall) {
  auto m = base_instantiation(registry().at("des-cipher"), masc::testing::api_model());
  ASSERT_EQ(m.snippet.statements.size(), 1u);
  EXPECT_EQ(m.snippet.statements[0], "Cipher.getInstance(\"DES\");");
  EXPECT_EQ(m.effective_value, "DES");
}
