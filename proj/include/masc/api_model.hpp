#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "masc/operators.hpp"

namespace masc {

/// How a restrictive API is invoked with its configuration string.
struct FactorySpec {
  /// Static factory name, or "<init>" for a constructor.
  std::string method;
  int parameter_count = 1;
  int string_parameter_index = 0;
  /// Checked exceptions, in declaration order.
  std::vector<std::string> checked_exceptions;
  /// Argument text for every non-string parameter, in parameter order.
  std::vector<std::string> fixed_arguments;
  /// Appended to the string argument, e.g. ".getBytes()" for byte[] params.
  std::string string_conversion;

  bool is_constructor() const {
    return method == "<init>";
  }
};

struct Parameter {
  std::string type; // qualified, may end in []
  std::string name;
};

struct AbstractMethod {
  std::string name;
  std::vector<Parameter> parameters;
  std::string return_type;
  std::vector<std::string> throws;
  /// Body used when the method is stubbed but not targeted by a mutant.
  std::string default_body;
  /// Parameters a generated condition may reference; empty means all.
  std::vector<std::string> condition_parameters;

  /// Parameters selected by condition_parameters, in declaration order.
  std::vector<Parameter> condition_subjects() const;

  /// "checkServerTrusted(X509Certificate[], String)" with simple type names.
  std::string signature_text() const;
};

enum class TypeKind { interface_type, abstract_class, concrete_class };

struct ApiSpec {
  std::string qualified_name;
  ApiKind kind = ApiKind::restrictive;
  TypeKind type_kind = TypeKind::concrete_class;
  /// Whether the platform matches the string argument case-insensitively
  /// (JCA algorithm names are).
  bool argument_case_insensitive = false;
  std::optional<FactorySpec> factory;
  std::vector<AbstractMethod> abstract_methods;
  std::vector<std::string> known_subtypes;
  std::vector<std::string> required_imports;

  std::string simple_name() const;
};

enum class LocationKind {
  main_entry,
  method_body_start,
  statement_in_conditional,
  class_body,
  anonymous_inner_body,
  similar_usage_site,
};

std::string to_string(LocationKind kind);
std::optional<LocationKind> parse_location_kind(std::string_view text);

using PlacementKinds = std::set<LocationKind>;

/// Placement kinds for statement-form snippets (everything with a statement
/// boundary).
PlacementKinds statement_placement_kinds();
/// Placement kinds for declaration-form snippets (statement boundaries plus
/// class bodies).
PlacementKinds declaration_placement_kinds();

enum class SnippetForm { statement, declaration };

std::string to_string(SnippetForm form);

struct MethodStub {
  AbstractMethod method;
  /// Rendered method with its default body.
  std::string text;
};

/// Everything needed around a snippet for it to compile in context.
struct SyntacticGlue {
  std::set<std::string> imports;
  std::optional<std::vector<std::string>> try_catch;
  /// Catch-block body with "{}" standing for the exception variable.
  std::string catch_body;
  std::vector<MethodStub> stub_methods;
  PlacementKinds placement_kinds;
};

/// Maps a qualified parameter type to a condition fragment with "{}" standing
/// for the parameter name, e.g. SSLSession -> "{}.getCipherSuite().length()>=0".
using ContextProbes = std::map<std::string, std::string>;

/// Static metadata catalog of crypto APIs; immutable after load.
class ApiModel {
 public:
  ApiModel() = default;
  ApiModel(
      std::string version,
      std::string catch_body,
      ContextProbes probes,
      std::vector<ApiSpec> apis);

  const std::string& version() const {
    return version_;
  }
  const std::string& catch_body() const {
    return catch_body_;
  }
  const ContextProbes& context_probes() const {
    return probes_;
  }
  const std::vector<ApiSpec>& apis() const {
    return apis_;
  }

  /// nullptr when absent.
  const ApiSpec* find(std::string_view qualified_name) const;

 private:
  std::string version_;
  std::string catch_body_;
  ContextProbes probes_;
  std::vector<ApiSpec> apis_;
};

ApiModel load_api_model(const std::filesystem::path& path);
ApiModel parse_api_model(std::string_view json_text);

/// Throws NotFoundError when the name is not in the model.
const ApiSpec& lookup(const ApiModel& model, std::string_view qualified_name);

/// Restrictive specs only take the statement form, flexible specs only the
/// declaration form; anything else throws IncompatibleFormError.
SyntacticGlue glue_for(
    const ApiModel& model,
    const ApiSpec& spec,
    SnippetForm form);

/// Renders `public <ret> name(<params>) throws ... {\n<body>\n}` using
/// simple type names.
std::string render_method(const AbstractMethod& method, std::string_view body);

// Java type-name helpers.

/// "java.security.cert.X509Certificate[]" -> "X509Certificate[]".
std::string simple_type_name(std::string_view qualified);
/// Strips array suffixes: "a.b.C[]" -> "a.b.C".
std::string element_type_name(std::string_view qualified);
bool is_primitive_type(std::string_view name);
/// Whether a use of `qualified` needs an import (not primitive, not java.lang).
bool needs_import(std::string_view qualified);
/// Package part of a qualified name ("" for unqualified names).
std::string package_of(std::string_view qualified);
bool is_qualified_identifier(std::string_view text);

} // namespace masc
