#include "masc/api_model.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "json_util.hpp"
#include "masc/error.hpp"

namespace masc {

using detail::json;

namespace {

constexpr std::array kPrimitives = {"boolean", "byte", "char", "short", "int", "long", "float", "double", "void"};

bool is_identifier(std::string_view s) {
  if (s.empty())
    return false;
  auto start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; };
  if (!start(s[0]))
    return false;
  return std::all_of(s.begin() + 1, s.end(), [&](char c) {
    return start(c) || std::isdigit(static_cast<unsigned char>(c));
  });
}

bool is_type_name(std::string_view s) {
  auto base = element_type_name(s);
  return is_primitive_type(base) || is_qualified_identifier(base);
}

void check_type(std::string_view type, const std::string& subject) {
  if (!is_type_name(type))
    throw ValidationError(subject, "invalid type name '" + std::string(type) + "'");
}

TypeKind parse_type_kind(const std::string& text, const std::string& subject) {
  if (text == "interface")
    return TypeKind::interface_type;
  if (text == "abstract-class")
    return TypeKind::abstract_class;
  if (text == "class")
    return TypeKind::concrete_class;
  throw ValidationError(subject, "type_kind must be interface, abstract-class or class");
}

FactorySpec parse_factory(const json& j, const std::string& subject) {
  detail::check_keys(
      j,
      {"method", "parameter_count", "string_parameter_index", "checked_exceptions", "fixed_arguments",
       "string_conversion"},
      subject + ".factory");
  FactorySpec f;
  f.method = detail::get_string(j, "method", subject);
  f.parameter_count = detail::get_int(j, "parameter_count", 1, subject);
  f.string_parameter_index = detail::get_int(j, "string_parameter_index", 0, subject);
  f.checked_exceptions = detail::get_strings(j, "checked_exceptions", subject);
  f.fixed_arguments = detail::get_strings(j, "fixed_arguments", subject);
  f.string_conversion = detail::get_string_or(j, "string_conversion", "", subject);
  if (f.method != "<init>" && !is_identifier(f.method))
    throw ValidationError(subject, "invalid factory method '" + f.method + "'");
  if (f.parameter_count < 1 || f.string_parameter_index < 0 || f.string_parameter_index >= f.parameter_count)
    throw ValidationError(subject, "string_parameter_index out of range");
  if (static_cast<int>(f.fixed_arguments.size()) != f.parameter_count - 1)
    throw ValidationError(subject, "fixed_arguments must cover every non-string parameter");
  for (const auto& e : f.checked_exceptions)
    check_type(e, subject);
  return f;
}

AbstractMethod parse_method(const json& j, const std::string& subject) {
  detail::check_keys(
      j, {"name", "parameters", "return_type", "throws", "default_body", "condition_parameters"}, subject);
  AbstractMethod m;
  m.name = detail::get_string(j, "name", subject);
  if (!is_identifier(m.name))
    throw ValidationError(subject, "invalid method name '" + m.name + "'");
  if (j.contains("parameters")) {
    if (!j.at("parameters").is_array())
      throw ValidationError(subject, "parameters must be an array");
    for (const auto& p : j.at("parameters")) {
      detail::check_keys(p, {"type", "name"}, subject + ".parameters");
      Parameter param{detail::get_string(p, "type", subject), detail::get_string(p, "name", subject)};
      check_type(param.type, subject);
      if (!is_identifier(param.name))
        throw ValidationError(subject, "invalid parameter name '" + param.name + "'");
      m.parameters.push_back(std::move(param));
    }
  }
  m.return_type = detail::get_string(j, "return_type", subject);
  check_type(m.return_type, subject);
  m.throws = detail::get_strings(j, "throws", subject);
  for (const auto& t : m.throws)
    check_type(t, subject);
  m.default_body = detail::get_string(j, "default_body", subject);
  m.condition_parameters = detail::get_strings(j, "condition_parameters", subject);
  for (const auto& name : m.condition_parameters) {
    bool found = std::any_of(m.parameters.begin(), m.parameters.end(), [&](const Parameter& p) {
      return p.name == name;
    });
    if (!found)
      throw ValidationError(subject, "condition parameter '" + name + "' is not a parameter");
  }
  return m;
}

ApiSpec parse_spec(const json& j) {
  std::string subject = j.is_object() && j.contains("qualified_name") && j["qualified_name"].is_string()
                            ? j["qualified_name"].get<std::string>()
                            : std::string("api");
  detail::check_keys(
      j,
      {"qualified_name", "kind", "type_kind", "argument_case_insensitive", "factory", "abstract_methods",
       "known_subtypes", "required_imports"},
      subject);
  ApiSpec spec;
  spec.qualified_name = detail::get_string(j, "qualified_name", subject);
  if (!is_qualified_identifier(spec.qualified_name))
    throw ValidationError(subject, "qualified_name is not a qualified identifier");
  auto kind = parse_api_kind(detail::get_string(j, "kind", subject));
  if (!kind)
    throw ValidationError(subject, "kind must be restrictive or flexible");
  spec.kind = *kind;
  spec.type_kind = parse_type_kind(detail::get_string_or(j, "type_kind", "class", subject), subject);
  spec.argument_case_insensitive = detail::get_bool(j, "argument_case_insensitive", false, subject);
  if (j.contains("factory"))
    spec.factory = parse_factory(j.at("factory"), subject);
  if (j.contains("abstract_methods")) {
    if (!j.at("abstract_methods").is_array())
      throw ValidationError(subject, "abstract_methods must be an array");
    for (const auto& m : j.at("abstract_methods"))
      spec.abstract_methods.push_back(parse_method(m, subject));
  }
  spec.known_subtypes = detail::get_strings(j, "known_subtypes", subject);
  spec.required_imports = detail::get_strings(j, "required_imports", subject);
  for (const auto& t : spec.known_subtypes)
    check_type(t, subject);
  for (const auto& t : spec.required_imports)
    check_type(t, subject);

  if (spec.kind == ApiKind::restrictive) {
    if (!spec.factory)
      throw ValidationError(subject, "restrictive API requires a factory");
    if (!spec.abstract_methods.empty())
      throw ValidationError(subject, "restrictive API must not list abstract methods");
  } else {
    if (spec.abstract_methods.empty())
      throw ValidationError(subject, "flexible API requires abstract methods");
    if (spec.factory)
      throw ValidationError(subject, "flexible API must not declare a factory");
    if (spec.type_kind == TypeKind::concrete_class)
      throw ValidationError(subject, "flexible API must be an interface or abstract class");
  }
  return spec;
}

void add_import(std::set<std::string>& imports, std::string_view type) {
  auto base = element_type_name(type);
  if (needs_import(base))
    imports.insert(base);
}

} // namespace

std::vector<Parameter> AbstractMethod::condition_subjects() const {
  if (condition_parameters.empty())
    return parameters;
  std::vector<Parameter> out;
  for (const auto& p : parameters)
    if (std::find(condition_parameters.begin(), condition_parameters.end(), p.name) != condition_parameters.end())
      out.push_back(p);
  return out;
}

std::string AbstractMethod::signature_text() const {
  std::string out = name + "(";
  for (std::size_t i = 0; i < parameters.size(); ++i) {
    if (i)
      out += ", ";
    out += simple_type_name(parameters[i].type);
  }
  return out + ")";
}

std::string ApiSpec::simple_name() const {
  return simple_type_name(qualified_name);
}

std::string to_string(LocationKind kind) {
  switch (kind) {
    case LocationKind::main_entry:
      return "main-entry";
    case LocationKind::method_body_start:
      return "method-body-start";
    case LocationKind::statement_in_conditional:
      return "statement-in-conditional";
    case LocationKind::class_body:
      return "class-body";
    case LocationKind::anonymous_inner_body:
      return "anonymous-inner-body";
    case LocationKind::similar_usage_site:
      return "similar-usage-site";
  }
  return "unknown";
}

std::optional<LocationKind> parse_location_kind(std::string_view text) {
  for (auto kind :
       {LocationKind::main_entry, LocationKind::method_body_start, LocationKind::statement_in_conditional,
        LocationKind::class_body, LocationKind::anonymous_inner_body, LocationKind::similar_usage_site})
    if (to_string(kind) == text)
      return kind;
  return std::nullopt;
}

PlacementKinds statement_placement_kinds() {
  return {LocationKind::main_entry, LocationKind::method_body_start, LocationKind::statement_in_conditional,
          LocationKind::similar_usage_site};
}

PlacementKinds declaration_placement_kinds() {
  auto kinds = statement_placement_kinds();
  kinds.insert(LocationKind::class_body);
  kinds.insert(LocationKind::anonymous_inner_body);
  return kinds;
}

std::string to_string(SnippetForm form) {
  return form == SnippetForm::statement ? "statement" : "declaration";
}

ApiModel::ApiModel(std::string version, std::string catch_body, ContextProbes probes, std::vector<ApiSpec> apis)
    : version_(std::move(version)),
      catch_body_(std::move(catch_body)),
      probes_(std::move(probes)),
      apis_(std::move(apis)) {}

const ApiSpec* ApiModel::find(std::string_view qualified_name) const {
  for (const auto& spec : apis_)
    if (spec.qualified_name == qualified_name)
      return &spec;
  return nullptr;
}

ApiModel parse_api_model(std::string_view json_text) {
  auto j = detail::parse_json(json_text, "api model");
  detail::check_keys(j, {"version", "catch_body", "context_probes", "apis"}, "api model");
  auto version = detail::get_string(j, "version", "api model");
  auto catch_body = detail::get_string_or(j, "catch_body", "", "api model");
  ContextProbes probes;
  if (j.contains("context_probes")) {
    detail::require_object(j["context_probes"], "context_probes");
    for (const auto& [type, probe] : j["context_probes"].items()) {
      if (!probe.is_string() || probe.get<std::string>().find("{}") == std::string::npos)
        throw ValidationError("context_probes." + type, "probe must be a string containing {}");
      check_type(type, "context_probes");
      probes[type] = probe.get<std::string>();
    }
  }
  const auto& apis = detail::required(j, "apis", "api model");
  if (!apis.is_array())
    throw ValidationError("api model", "apis must be an array");
  std::vector<ApiSpec> specs;
  for (const auto& a : apis) {
    auto spec = parse_spec(a);
    for (const auto& other : specs)
      if (other.qualified_name == spec.qualified_name)
        throw ValidationError(spec.qualified_name, "duplicate API");
    specs.push_back(std::move(spec));
  }
  return ApiModel(std::move(version), std::move(catch_body), std::move(probes), std::move(specs));
}

ApiModel load_api_model(const std::filesystem::path& path) {
  auto text = detail::read_file(path);
  return parse_api_model(text);
}

const ApiSpec& lookup(const ApiModel& model, std::string_view qualified_name) {
  if (const auto* spec = model.find(qualified_name))
    return *spec;
  throw NotFoundError("API not in model: " + std::string(qualified_name));
}

std::string render_method(const AbstractMethod& method, std::string_view body) {
  std::string out = "public " + simple_type_name(method.return_type) + " " + method.name + "(";
  for (std::size_t i = 0; i < method.parameters.size(); ++i) {
    if (i)
      out += ", ";
    out += simple_type_name(method.parameters[i].type) + " " + method.parameters[i].name;
  }
  out += ")";
  for (std::size_t i = 0; i < method.throws.size(); ++i)
    out += (i ? ", " : " throws ") + simple_type_name(method.throws[i]);
  out += " {\n";
  std::size_t pos = 0;
  while (pos < body.size()) {
    auto nl = body.find('\n', pos);
    auto line = body.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (!line.empty())
      out += "    " + std::string(line) + "\n";
    if (nl == std::string_view::npos)
      break;
    pos = nl + 1;
  }
  return out + "}";
}

SyntacticGlue glue_for(const ApiModel& model, const ApiSpec& spec, SnippetForm form) {
  SyntacticGlue glue;
  glue.catch_body = model.catch_body();
  add_import(glue.imports, spec.qualified_name);
  for (const auto& t : spec.required_imports)
    add_import(glue.imports, t);

  if (form == SnippetForm::statement) {
    if (spec.kind != ApiKind::restrictive)
      throw IncompatibleFormError(spec.qualified_name + ": flexible APIs only take the declaration form");
    const auto& exceptions = spec.factory->checked_exceptions;
    for (const auto& e : exceptions)
      add_import(glue.imports, e);
    if (!exceptions.empty())
      glue.try_catch = exceptions;
    glue.placement_kinds = statement_placement_kinds();
    return glue;
  }

  if (spec.kind != ApiKind::flexible)
    throw IncompatibleFormError(spec.qualified_name + ": restrictive APIs only take the statement form");
  for (const auto& m : spec.abstract_methods) {
    add_import(glue.imports, m.return_type);
    for (const auto& p : m.parameters)
      add_import(glue.imports, p.type);
    for (const auto& t : m.throws)
      add_import(glue.imports, t);
    glue.stub_methods.push_back({m, render_method(m, m.default_body)});
  }
  glue.placement_kinds = declaration_placement_kinds();
  return glue;
}

std::string simple_type_name(std::string_view qualified) {
  auto base = element_type_name(qualified);
  auto suffix = qualified.substr(base.size());
  auto dot = base.rfind('.');
  return (dot == std::string::npos ? base : base.substr(dot + 1)) + std::string(suffix);
}

std::string element_type_name(std::string_view qualified) {
  while (qualified.size() >= 2 && qualified.substr(qualified.size() - 2) == "[]")
    qualified.remove_suffix(2);
  return std::string(qualified);
}

bool is_primitive_type(std::string_view name) {
  return std::find(kPrimitives.begin(), kPrimitives.end(), name) != kPrimitives.end();
}

bool needs_import(std::string_view qualified) {
  auto base = element_type_name(qualified);
  if (is_primitive_type(base) || base.find('.') == std::string::npos)
    return false;
  return package_of(base) != "java.lang";
}

std::string package_of(std::string_view qualified) {
  auto dot = qualified.rfind('.');
  return dot == std::string_view::npos ? std::string() : std::string(qualified.substr(0, dot));
}

bool is_qualified_identifier(std::string_view text) {
  if (text.empty())
    return false;
  std::size_t pos = 0;
  while (true) {
    auto dot = text.find('.', pos);
    auto part = text.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
    if (!is_identifier(part))
      return false;
    if (dot == std::string_view::npos)
      return true;
    pos = dot + 1;
  }
}

} // namespace masc
