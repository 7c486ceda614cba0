#include <gtest/gtest.h>

#include "masc/error.hpp"
#include "string_oracle.hpp"
#include "support.hpp"

using namespace masc;
using masc::testing::api_model;

TEST(StringOracle, Literals) {
  EXPECT_EQ(evaluate_string_expression(R"("DES")"), "DES");
  EXPECT_EQ(evaluate_string_expression(R"("a\"b")"), "a\"b");
}

TEST(StringOracle, StringMethods) {
  EXPECT_EQ(evaluate_string_expression(R"("des".toUpperCase())"), "DES");
  EXPECT_EQ(evaluate_string_expression(R"("DES".toLowerCase())"), "des");
  EXPECT_EQ(evaluate_string_expression(R"("DE$S".replace("$", ""))"), "DES");
  EXPECT_EQ(evaluate_string_expression(R"("SHA-256".replace("SHA-256", "MD5"))"), "MD5");
  EXPECT_EQ(evaluate_string_expression(R"("  x ".trim())"), "x");
  EXPECT_EQ(evaluate_string_expression(R"("D" + "E" + "S")"), "DES");
}

TEST(StringOracle, ClockReadsAreSymbolic) {
  EXPECT_EQ(evaluate_string_expression("String.valueOf(System.currentTimeMillis())"), std::string(kSystemTimeValue));
  EXPECT_EQ(evaluate_string_expression("new Date(System.currentTimeMillis()).toString()"),
            std::string(kSystemTimeValue));
}

TEST(StringOracle, LoopsAndCasts) {
  const auto& spec = lookup(api_model(), "javax.crypto.spec.IvParameterSpec");
  auto value = effective_value_oracle(
      {},
      {"String v = \"\";", "for (int i = 65; i < 70; i++) {\n    v += (char) i;\n}",
       "new IvParameterSpec(v.getBytes(), 0, 8);"},
      spec);
  EXPECT_EQ(value, "ABCDE");
}

TEST(StringOracle, FluentHelperClass) {
  const auto& spec = lookup(api_model(), "javax.crypto.Cipher");
  auto value = effective_value_oracle(
      {"class T {\n  String algo = \"AES\";\n  T a() { algo = \"DE\"; return this; }\n"
       "  T b() { algo = algo + \"S\"; return this; }\n  String getValue() { return algo; }\n}"},
      {"Cipher.getInstance(new T().a().b().getValue());"}, spec);
  EXPECT_EQ(value, "DES");
}

TEST(StringOracle, UnknownCallsAreUnsupported) {
  EXPECT_THROW(evaluate_string_expression("System.getenv(\"X\")"), UnsupportedExpressionError);
  const auto& spec = lookup(api_model(), "javax.crypto.Cipher");
  EXPECT_THROW(effective_value_oracle({}, {"MessageDigest.getInstance(\"MD5\");"}, spec), UnsupportedExpressionError);
}
