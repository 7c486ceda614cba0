#include <gtest/gtest.h>

#include <fstream>
#include <map>

#include <json.hpp>

#include "masc/api_model.hpp"
#include "masc/error.hpp"
#include "support.hpp"

using namespace masc;
using masc::testing::api_model;
using masc::testing::squash;
using nlohmann::json;

namespace {

json shipped() {
  std::ifstream in(masc::testing::data_path() / "api_model.json");
  return json::parse(in);
}

json& api_named(json& doc, const std::string& name) {
  for (auto& a : doc["apis"])
    if (a["qualified_name"] == name)
      return a;
  throw std::runtime_error("fixture api missing: " + name);
}

} // namespace

// Checked exceptions of each factory as declared by the Java platform
// (javadoc of the respective getInstance/constructor). Frozen here so a
// model edit cannot silently change the glue.
TEST(ApiModel, CheckedExceptionsMatchPlatformSignatures) {
  const std::map<std::string, std::vector<std::string>> expected{
      {"javax.crypto.Cipher", {"java.security.NoSuchAlgorithmException", "javax.crypto.NoSuchPaddingException"}},
      {"java.security.MessageDigest", {"java.security.NoSuchAlgorithmException"}},
      {"javax.net.ssl.SSLContext", {"java.security.NoSuchAlgorithmException"}},
      {"java.security.Signature", {"java.security.NoSuchAlgorithmException"}},
      {"javax.crypto.SecretKeyFactory", {"java.security.NoSuchAlgorithmException"}},
      {"java.security.SecureRandom", {}},
      {"javax.crypto.spec.IvParameterSpec", {}},
      {"javax.crypto.spec.SecretKeySpec", {}},
  };
  for (const auto& [name, exceptions] : expected) {
    const auto& spec = lookup(api_model(), name);
    ASSERT_TRUE(spec.factory) << name;
    EXPECT_EQ(spec.factory->checked_exceptions, exceptions) << name;
    auto glue = glue_for(api_model(), spec, SnippetForm::statement);
    if (exceptions.empty())
      EXPECT_FALSE(glue.try_catch) << name;
    else
      EXPECT_EQ(glue.try_catch, exceptions) << name;
  }
}

TEST(ApiModel, ShipsTheRequiredApis) {
  for (const char* name :
       {"javax.crypto.Cipher", "java.security.MessageDigest", "javax.net.ssl.SSLContext", "java.security.SecureRandom",
        "javax.crypto.spec.IvParameterSpec", "java.security.Signature", "javax.net.ssl.X509TrustManager",
        "javax.net.ssl.X509ExtendedTrustManager", "javax.net.ssl.HostnameVerifier"})
    EXPECT_NE(api_model().find(name), nullptr) << name;
}

TEST(ApiModel, LookupUnknownThrows) {
  EXPECT_THROW(lookup(api_model(), "javax.crypto.KeyAgreement"), NotFoundError);
}

TEST(ApiModel, CipherGlueImportsAndTryCatch) {
  auto glue = glue_for(api_model(), lookup(api_model(), "javax.crypto.Cipher"), SnippetForm::statement);
  EXPECT_TRUE(glue.imports.count("javax.crypto.Cipher"));
  EXPECT_TRUE(glue.imports.count("java.security.NoSuchAlgorithmException"));
  EXPECT_TRUE(glue.imports.count("javax.crypto.NoSuchPaddingException"));
  EXPECT_EQ(glue.placement_kinds, statement_placement_kinds());
  EXPECT_FALSE(glue.placement_kinds.count(LocationKind::class_body));
  EXPECT_TRUE(glue.stub_methods.empty());
}

TEST(ApiModel, TrustManagerDeclarationGlueStubsEveryAbstractMethod) {
  const auto& spec = lookup(api_model(), "javax.net.ssl.X509TrustManager");
  auto glue = glue_for(api_model(), spec, SnippetForm::declaration);
  ASSERT_EQ(glue.stub_methods.size(), 3u);
  std::set<std::string> names;
  for (const auto& s : glue.stub_methods)
    names.insert(s.method.name);
  EXPECT_EQ(names, (std::set<std::string>{"checkClientTrusted", "checkServerTrusted", "getAcceptedIssuers"}));
  EXPECT_TRUE(glue.imports.count("java.security.cert.X509Certificate"));
  EXPECT_TRUE(glue.imports.count("java.security.cert.CertificateException"));
  EXPECT_TRUE(glue.placement_kinds.count(LocationKind::class_body));
  EXPECT_FALSE(glue.try_catch);
}

TEST(ApiModel, ExtendedTrustManagerHasSevenAbstractMethods) {
  const auto& spec = lookup(api_model(), "javax.net.ssl.X509ExtendedTrustManager");
  EXPECT_EQ(spec.type_kind, TypeKind::abstract_class);
  EXPECT_EQ(spec.abstract_methods.size(), 7u);
}

TEST(ApiModel, IncompatibleFormsThrow) {
  EXPECT_THROW(glue_for(api_model(), lookup(api_model(), "javax.crypto.Cipher"), SnippetForm::declaration),
               IncompatibleFormError);
  EXPECT_THROW(glue_for(api_model(), lookup(api_model(), "javax.net.ssl.HostnameVerifier"), SnippetForm::statement),
               IncompatibleFormError);
}

TEST(ApiModel, RenderMethodUsesSimpleNames) {
  const auto& spec = lookup(api_model(), "javax.net.ssl.X509TrustManager");
  const AbstractMethod* server = nullptr;
  for (const auto& m : spec.abstract_methods)
    if (m.name == "checkServerTrusted")
      server = &m;
  ASSERT_NE(server, nullptr);
  EXPECT_EQ(squash(render_method(*server, "")),
            squash("public void checkServerTrusted(X509Certificate[] chain, String authType) "
                   "throws CertificateException {}"));
  EXPECT_EQ(server->signature_text(), "checkServerTrusted(X509Certificate[], String)");
}

TEST(ApiModel, TypeNameHelpers) {
  EXPECT_EQ(simple_type_name("java.security.cert.X509Certificate[]"), "X509Certificate[]");
  EXPECT_EQ(element_type_name("a.b.C[][]"), "a.b.C");
  EXPECT_TRUE(is_primitive_type("boolean"));
  EXPECT_FALSE(is_primitive_type("String"));
  EXPECT_FALSE(needs_import("java.lang.String"));
  EXPECT_FALSE(needs_import("int"));
  EXPECT_TRUE(needs_import("javax.net.ssl.SSLSession"));
  EXPECT_EQ(package_of("javax.net.ssl.SSLSession"), "javax.net.ssl");
  EXPECT_EQ(package_of("Solo"), "");
  EXPECT_TRUE(is_qualified_identifier("a.b.C"));
  EXPECT_FALSE(is_qualified_identifier("a..C"));
}

TEST(ApiModel, RestrictiveWithoutFactoryIsRejected) {
  auto doc = shipped();
  api_named(doc, "javax.crypto.Cipher").erase("factory");
  EXPECT_THROW(parse_api_model(doc.dump()), ValidationError);
}

TEST(ApiModel, FlexibleConcreteClassIsRejected) {
  auto doc = shipped();
  api_named(doc, "javax.net.ssl.HostnameVerifier")["type_kind"] = "class";
  EXPECT_THROW(parse_api_model(doc.dump()), ValidationError);
}

TEST(ApiModel, FixedArgumentsMustCoverNonStringParameters) {
  auto doc = shipped();
  api_named(doc, "javax.crypto.spec.IvParameterSpec")["factory"]["fixed_arguments"] = json::array({"0"});
  EXPECT_THROW(parse_api_model(doc.dump()), ValidationError);
}

TEST(ApiModel, ProbeWithoutPlaceholderIsRejected) {
  auto doc = shipped();
  doc["context_probes"]["java.lang.String"] = "true";
  EXPECT_THROW(parse_api_model(doc.dump()), ValidationError);
}

TEST(ApiModel, MalformedJsonIsAParseError) {
  EXPECT_THROW(parse_api_model("[1,"), ParseError);
}
