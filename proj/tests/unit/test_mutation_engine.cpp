#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <regex>
#include <set>

#include "masc/error.hpp"
#include "masc/mutation_engine.hpp"
#include "string_oracle.hpp"
#include "support.hpp"

using namespace masc;
using masc::testing::api_model;
using masc::testing::registry;
using masc::testing::squash;

namespace {

std::vector<Mutant> apply(Operator op, const std::string& case_id, int cap = 0) {
  OperatorConfig c;
  c.max_variants = cap;
  return apply_operator(op, registry().at(case_id), api_model(), c);
}

std::string statements_of(const Mutant& m) {
  std::string out;
  for (const auto& s : m.snippet.statements)
    out += s + "\n";
  return out;
}

/// Renames identifiers; keys must be whole words.
std::string rename(std::string text, const std::map<std::string, std::string>& names) {
  for (const auto& [from, to] : names)
    text = std::regex_replace(text, std::regex("\\b" + from + "\\b"), to);
  return text;
}

bool any_statements_equal(const std::vector<Mutant>& mutants, const std::string& expected) {
  for (const auto& m : mutants)
    if (squash(statements_of(m)) == squash(expected))
      return true;
  return false;
}

} // namespace

// Golden snippets. Their identifiers are mapped to the
// generator's fresh names: value/v/val -> mascVar1, i -> mascVar2.

TEST(Golden, LowercaseDes) {
  auto mutants = apply(Operator::op1, "des-cipher");
  EXPECT_TRUE(any_statements_equal(mutants, R"(Cipher.getInstance("des");)"));
}

TEST(Golden, ValueInVariable) {
  auto expected = rename(R"(String value = "DES"; Cipher.getInstance(value);)", {{"value", "mascVar1"}});
  EXPECT_TRUE(any_statements_equal(apply(Operator::op2, "des-cipher"), expected));
}

TEST(Golden, SecureParameterReplacedByInsecure) {
  EXPECT_TRUE(any_statements_equal(
      apply(Operator::op4, "md5-hash"), R"(MessageDigest.getInstance("SHA-256".replace("SHA-256", "MD5"));)"));
}

TEST(Golden, InsecureParameterReplacedByInsecure) {
  EXPECT_TRUE(any_statements_equal(apply(Operator::op4, "des-cipher"), R"(Cipher.getInstance("AES".replace("A", "D"));)"));
}

TEST(Golden, NoiseReplace) {
  EXPECT_TRUE(any_statements_equal(apply(Operator::op4, "des-cipher"), R"(Cipher.getInstance("DE$S".replace("$", ""));)"));
}

TEST(Golden, CaseTransform) {
  // Locale.English is not a Java constant; the real one is ENGLISH.
  auto mutants = apply(Operator::op3, "des-cipher");
  EXPECT_TRUE(any_statements_equal(mutants, R"(Cipher.getInstance("des".toUpperCase(Locale.ENGLISH));)"));
  for (const auto& m : mutants)
    if (statements_of(m).find("Locale") != std::string::npos)
      EXPECT_TRUE(m.glue.imports.count("java.util.Locale"));
}

TEST(Golden, DeterministicBytesFromCharLoop) {
  auto expected = rename(R"(String v=""; for(int i=65; i<75; i++){ v+=(char)i;} new IvParameterSpec(v.getBytes(),0,8);)",
                        {{"v", "mascVar1"}, {"i", "mascVar2"}});
  EXPECT_TRUE(any_statements_equal(apply(Operator::op6, "constant-iv"), expected));
}

TEST(Golden, PredictableBytesFromSystemTime) {
  // The reference shows the assignment without its declaration.
  auto expected = squash(rename(R"(val = new Date(System.currentTimeMillis()).toString();
new IvParameterSpec(val.getBytes(),0,8);)",
                               {{"val", "mascVar1"}}));
  bool found = false;
  for (const auto& m : apply(Operator::op6, "predictable-iv"))
    if (squash(statements_of(m)).find(expected) != std::string::npos) {
      found = true;
      EXPECT_TRUE(m.glue.imports.count("java.util.Date"));
    }
  EXPECT_TRUE(found);
}

TEST(Golden, AnonymousHostnameVerifier) {
  auto expected = rename(R"(new HostnameVerifier(){
  public boolean verify(String h, SSLSession s) {
    return true; } };)",
                        {{"h", "hostname"}, {"s", "session"}});
  OperatorConfig c;
  c.max_variants = 0;
  c.body_op = Operator::op8;
  bool found = false;
  for (const auto& m : apply_operator(Operator::op12, registry().at("hostname-verifier-true"), api_model(), c)) {
    ASSERT_TRUE(m.snippet.declaration);
    if (m.snippet.helper_declarations.empty() &&
        squash(*m.snippet.declaration) == squash("HostnameVerifier mascVar1 = " + expected))
      found = true;
  }
  EXPECT_TRUE(found);
}

TEST(Golden, AnonymousObjectOfEmptyAbstractTrustManager) {
  OperatorConfig c;
  c.max_variants = 0;
  c.body_op = Operator::op7;
  auto helper = squash(rename("abstract class AbstractTM implements X509TrustManager{}", {{"AbstractTM", "MascAbstract1"}}));
  auto creation = squash("new MascAbstract1(){");
  auto server = squash(
      "public void checkServerTrusted(X509Certificate[] chain, String authType) throws CertificateException {}");
  auto issuers = squash("public X509Certificate[] getAcceptedIssuers() {return null;}");
  bool found = false;
  for (const auto& m : apply_operator(Operator::op12, registry().at("trust-all-trustmanager"), api_model(), c)) {
    if (m.snippet.helper_declarations.size() != 1 || squash(m.snippet.helper_declarations[0]) != helper)
      continue;
    auto decl = squash(*m.snippet.declaration);
    if (decl.find(creation) != std::string::npos && decl.find(server) != std::string::npos &&
        decl.find(issuers) != std::string::npos)
      found = true;
  }
  EXPECT_TRUE(found);
}

TEST(Golden, MethodChainShape) {
  auto mutants = apply(Operator::op5, "des-cipher");
  ASSERT_FALSE(mutants.empty());
  const auto& m = mutants.front();
  ASSERT_EQ(m.snippet.helper_declarations.size(), 1u);
  auto helper = squash(m.snippet.helper_declarations[0]);
  EXPECT_NE(helper.find("MascHelper1mthd1(){"), std::string::npos);
  EXPECT_NE(helper.find("MascHelper1mthd2(){"), std::string::npos);
  EXPECT_NE(helper.find("returnthis;"), std::string::npos);
  EXPECT_NE(squash(statements_of(m)).find("Cipher.getInstance(newMascHelper1().mthd1().mthd2().getValue());"),
            std::string::npos);
}

TEST(Golden, GenericConditionInCheckServerTrusted) {
  // if(!(true || arg0==null || arg1==null)) { throw new CertificateException();}
  const auto& spec = lookup(api_model(), "javax.net.ssl.X509TrustManager");
  const AbstractMethod* server = nullptr;
  for (const auto& m : spec.abstract_methods)
    if (m.name == "checkServerTrusted")
      server = &m;
  ASSERT_NE(server, nullptr);
  auto text = condition_text(ConditionMode::generic, *server, Polarity::never_true, api_model().context_probes());
  auto expected = rename("!(true || arg0==null || arg1==null)", {{"arg0", "chain"}, {"arg1", "authType"}});
  EXPECT_EQ(squash(text), squash(expected));
}

TEST(Golden, ContextConditionInVerify) {
  const auto& spec = lookup(api_model(), "javax.net.ssl.HostnameVerifier");
  auto text = condition_text(ConditionMode::context_specific, spec.abstract_methods[0], Polarity::always_true,
                             api_model().context_probes());
  EXPECT_EQ(squash(text), squash("true || session.getCipherSuite().length()>=0"));
}

// Properties over the whole registry.

TEST(Engine, EveryRestrictiveMutantYieldsAnInsecureValueThatTheOracleReproduces) {
  OperatorConfig c;
  c.max_variants = 0;
  int checked = 0;
  for (const auto& misuse : registry().cases()) {
    if (misuse.api_kind != ApiKind::restrictive)
      continue;
    const auto& spec = lookup(api_model(), misuse.api_type());
    for (auto op : misuse.applicable_operators) {
      for (const auto& m : apply_operator(op, misuse, api_model(), c)) {
        ASSERT_TRUE(m.effective_value) << m.id;
        auto value = effective_value_oracle(m.snippet.helper_declarations, m.snippet.statements, spec);
        EXPECT_EQ(value, *m.effective_value) << m.id;
        EXPECT_TRUE(is_insecure_value(misuse, spec, value)) << m.id << " -> " << value;
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(Engine, IdsAreUniqueAndStable) {
  OperatorConfig c;
  auto first = generate_mutants(registry(), api_model(), c);
  auto second = generate_mutants(registry(), api_model(), c);
  ASSERT_EQ(first.size(), second.size());
  std::set<std::string> ids;
  for (std::size_t i = 0; i < first.size(); ++i) {
    EXPECT_TRUE(ids.insert(first[i].id).second) << first[i].id;
    EXPECT_EQ(first[i].id, second[i].id);
    EXPECT_EQ(snippet_text(first[i]), snippet_text(second[i]));
  }
}

TEST(Engine, CapKeepsAPrefixOfTheUncappedList) {
  for (const char* id : {"des-cipher", "md5-hash", "constant-iv"}) {
    const auto& misuse = registry().at(id);
    for (auto op : misuse.applicable_operators) {
      auto all = apply(op, id, 0);
      auto capped = apply(op, id, 2);
      ASSERT_LE(capped.size(), 2u);
      for (std::size_t i = 0; i < capped.size(); ++i)
        EXPECT_EQ(capped[i].id, all[i].id);
    }
  }
}

TEST(Engine, Op1VariantsDifferOnlyInCase) {
  for (const auto& m : apply(Operator::op1, "sha1-hash")) {
    ASSERT_TRUE(m.effective_value);
    std::string upper = *m.effective_value;
    std::transform(upper.begin(), upper.end(), upper.begin(), ::toupper);
    const auto& args = registry().at("sha1-hash").insecure_arguments;
    EXPECT_NE(std::find(args.begin(), args.end(), upper), args.end()) << m.id;
    EXPECT_EQ(std::find(args.begin(), args.end(), *m.effective_value), args.end()) << m.id;
  }
}

TEST(Engine, Op1NeedsCaseInsensitiveApi) {
  EXPECT_THROW(apply(Operator::op1, "constant-iv"), InapplicableOperatorError);
}

TEST(Engine, OperatorOutsideTheCaseIsInapplicable) {
  EXPECT_THROW(apply(Operator::op8, "des-cipher"), InapplicableOperatorError);
  EXPECT_THROW(apply(Operator::op1, "hostname-verifier-true"), InapplicableOperatorError);
}

TEST(Engine, ThreatTagsFollowTheOperator) {
  for (const auto& m : apply(Operator::op1, "des-cipher"))
    EXPECT_EQ(m.threat_tags, ThreatTags{ThreatTag::t1});
  for (const auto& m : apply(Operator::op4, "des-cipher"))
    EXPECT_EQ(m.threat_tags, ThreatTags{ThreatTag::t2});
  for (const auto& m : apply(Operator::op5, "des-cipher"))
    EXPECT_EQ(m.threat_tags, ThreatTags{ThreatTag::t3});
}

TEST(Engine, RestrictiveMutantsAreStatementsFlexibleAreDeclarations) {
  for (const auto& m : generate_mutants(registry(), api_model(), OperatorConfig{})) {
    const auto& misuse = registry().at(m.case_id);
    if (misuse.api_kind == ApiKind::restrictive) {
      EXPECT_EQ(m.form, SnippetForm::statement) << m.id;
      EXPECT_FALSE(m.snippet.statements.empty()) << m.id;
      EXPECT_FALSE(m.glue.placement_kinds.count(LocationKind::class_body)) << m.id;
    } else {
      EXPECT_EQ(m.form, SnippetForm::declaration) << m.id;
      EXPECT_TRUE(m.snippet.declaration) << m.id;
      EXPECT_FALSE(m.glue.try_catch) << m.id;
    }
  }
}

TEST(Engine, FlexibleMutantsOverrideEveryAbstractMethod) {
  for (const auto& m : generate_mutants(registry(), api_model(), OperatorConfig{})) {
    const auto& misuse = registry().at(m.case_id);
    if (misuse.api_kind != ApiKind::flexible)
      continue;
    const auto& spec = lookup(api_model(), misuse.api_type());
    auto text = snippet_text(m);
    for (const auto& method : spec.abstract_methods)
      EXPECT_NE(text.find(" " + method.name + "("), std::string::npos) << m.id << " misses " << method.name;
  }
}

TEST(Engine, ComposedOperatorsCarryABodyOperator) {
  OperatorConfig c;
  for (auto layer : {Operator::op10, Operator::op11, Operator::op12})
    for (const auto& m : apply_operator(layer, registry().at("trust-all-trustmanager"), api_model(), c)) {
      ASSERT_TRUE(m.body_op) << m.id;
      EXPECT_TRUE(is_body_operator(*m.body_op));
      EXPECT_EQ(m.operator_label(), to_string(layer) + "+" + to_string(*m.body_op));
    }
}

TEST(Engine, ConditionModeFiltersGuardedBodies) {
  OperatorConfig c;
  c.max_variants = 0;
  c.condition_mode = ConditionMode::generic;
  for (const auto& m : apply_operator(Operator::op7, registry().at("trust-all-trustmanager"), api_model(), c))
    EXPECT_NE(m.condition_mode, ConditionMode::context_specific) << m.id;
}

TEST(Engine, ContextModeWithoutSubjectsIsRejected) {
  AbstractMethod m;
  m.name = "f";
  m.return_type = "void";
  EXPECT_THROW(condition_text(ConditionMode::context_specific, m, Polarity::always_true, api_model().context_probes()),
               ValidationError);
}

TEST(Engine, JavaStringLiteralEscapes) {
  EXPECT_EQ(java_string_literal("a\"b\\c\n"), R"("a\"b\\c\n")");
}

TEST(Engine, GenerationFilterRestrictsCasesAndOperators) {
  GenerationFilter f;
  f.case_ids = {"des-cipher"};
  f.operators = {Operator::op2};
  f.include_base = false;
  auto mutants = generate_mutants(registry(), api_model(), OperatorConfig{}, f);
  ASSERT_FALSE(mutants.empty());
  for (const auto& m : mutants) {
    EXPECT_EQ(m.case_id, "des-cipher");
    EXPECT_EQ(m.op, Operator::op2);
  }
}
