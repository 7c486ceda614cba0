#include "masc/taxonomy.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "json_util.hpp"
#include "masc/error.hpp"

namespace masc {

using detail::json;

namespace {

constexpr std::size_t kClusterCount = 9;
constexpr std::size_t kMinimumSelected = 19;

const std::regex& slug_pattern() {
  static const std::regex pattern("^[a-z0-9]+(-[a-z0-9]+)*$");
  return pattern;
}

Behavior parse_behavior(const json& j, const std::string& subject) {
  detail::check_keys(j, {"method", "outcome", "value", "exception"}, subject + ".behavior");
  Behavior b;
  b.method = detail::get_string(j, "method", subject);
  auto outcome = detail::get_string(j, "outcome", subject);
  if (outcome == "suppress-exception")
    b.outcome = NeutralOutcome::suppress_exception;
  else if (outcome == "constant-return")
    b.outcome = NeutralOutcome::constant_return;
  else
    throw ValidationError(subject, "behavior.outcome must be suppress-exception or constant-return");
  b.value = detail::get_string_or(j, "value", "", subject);
  b.exception = detail::get_string_or(j, "exception", "", subject);
  if (b.outcome == NeutralOutcome::constant_return && b.value.empty())
    throw ValidationError(subject, "constant-return behavior requires a value");
  if (b.outcome == NeutralOutcome::suppress_exception && !is_qualified_identifier(b.exception))
    throw ValidationError(subject, "suppress-exception behavior requires a qualified exception type");
  return b;
}

MisuseCase parse_case(const json& j, const std::vector<std::string>& clusters) {
  std::string subject =
      j.is_object() && j.contains("id") && j["id"].is_string() ? j["id"].get<std::string>() : std::string("case");
  detail::check_keys(
      j,
      {"id", "cluster", "description", "api_kind", "target_api", "insecure_arguments", "secure_argument",
       "behavior", "applicable_operators", "threat_tags", "selected"},
      subject);
  MisuseCase c;
  c.id = detail::get_string(j, "id", subject);
  if (!std::regex_match(c.id, slug_pattern()))
    throw ValidationError(subject, "id must be a lowercase hyphenated slug");
  c.cluster = detail::get_string(j, "cluster", subject);
  if (std::find(clusters.begin(), clusters.end(), c.cluster) == clusters.end())
    throw ValidationError(subject, "cluster '" + c.cluster + "' is not declared");
  c.description = detail::get_string(j, "description", subject);
  auto kind = parse_api_kind(detail::get_string(j, "api_kind", subject));
  if (!kind)
    throw ValidationError(subject, "api_kind must be restrictive or flexible");
  c.api_kind = *kind;
  c.target_api = detail::get_string(j, "target_api", subject);
  c.insecure_arguments = detail::get_strings(j, "insecure_arguments", subject);
  if (j.contains("secure_argument"))
    c.secure_argument = detail::get_string(j, "secure_argument", subject);
  if (j.contains("behavior"))
    c.behavior = parse_behavior(j["behavior"], subject);
  for (const auto& name : detail::get_strings(j, "applicable_operators", subject)) {
    auto op = parse_operator(name);
    if (!op)
      throw ValidationError(subject, "unknown operator '" + name + "'");
    if (std::find(c.applicable_operators.begin(), c.applicable_operators.end(), *op) == c.applicable_operators.end())
      c.applicable_operators.push_back(*op);
  }
  std::sort(c.applicable_operators.begin(), c.applicable_operators.end());
  if (j.contains("threat_tags")) {
    c.threat_tags.clear();
    for (const auto& name : detail::get_strings(j, "threat_tags", subject)) {
      auto tag = parse_threat_tag(name);
      if (!tag)
        throw ValidationError(subject, "unknown threat tag '" + name + "'");
      c.threat_tags.insert(*tag);
    }
  }
  c.selected = detail::get_bool(j, "selected", true, subject);

  if (c.api_kind == ApiKind::restrictive) {
    if (c.insecure_arguments.empty())
      throw ValidationError(subject, "restrictive case requires insecure_arguments");
    if (c.behavior)
      throw ValidationError(subject, "restrictive case must not declare a behavior");
    auto member = c.api_member();
    if (member.empty() || !is_qualified_identifier(c.api_type()) ||
        (member != "<init>" && !is_qualified_identifier(member)))
      throw ValidationError(subject, "target_api must be <qualified type>.<member>");
    for (auto op : c.applicable_operators)
      if (!is_restrictive(op))
        throw ValidationError(subject, "restrictive case lists flexible operator " + to_string(op));
    for (const auto& arg : c.insecure_arguments) {
      if (!is_symbolic_argument(arg))
        continue;
      if (arg != "<system-time>")
        throw ValidationError(subject, "unknown symbolic argument " + arg);
      for (auto op : c.applicable_operators)
        if (op != Operator::op2 && op != Operator::op5 && op != Operator::op6)
          throw ValidationError(subject, to_string(op) + " cannot realize a symbolic argument");
    }
  } else {
    if (!c.behavior)
      throw ValidationError(subject, "flexible case requires a behavior");
    if (!c.insecure_arguments.empty() || c.secure_argument)
      throw ValidationError(subject, "flexible case must not list arguments");
    if (!is_qualified_identifier(c.target_api))
      throw ValidationError(subject, "target_api must be a qualified type name");
    for (auto op : c.applicable_operators)
      if (is_restrictive(op))
        throw ValidationError(subject, "flexible case lists restrictive operator " + to_string(op));
  }
  if (c.selected && c.applicable_operators.empty())
    throw ValidationError(subject, "selected case lists no applicable operator");
  return c;
}

} // namespace

std::string to_string(NeutralOutcome outcome) {
  return outcome == NeutralOutcome::suppress_exception ? "suppress-exception" : "constant-return";
}

std::string MisuseCase::api_type() const {
  if (api_kind == ApiKind::flexible)
    return target_api;
  auto dot = target_api.rfind('.');
  return dot == std::string::npos ? std::string() : target_api.substr(0, dot);
}

std::string MisuseCase::api_member() const {
  if (api_kind == ApiKind::flexible)
    return {};
  auto dot = target_api.rfind('.');
  return dot == std::string::npos ? std::string() : target_api.substr(dot + 1);
}

bool MisuseCase::applies(Operator op) const {
  return std::find(applicable_operators.begin(), applicable_operators.end(), op) != applicable_operators.end();
}

bool is_symbolic_argument(std::string_view argument) {
  return argument.size() > 2 && argument.front() == '<' && argument.back() == '>';
}

std::string symbolic_expression(std::string_view argument) {
  if (argument == "<system-time>")
    return "String.valueOf(System.currentTimeMillis())";
  throw ValidationError(std::string(argument), "unknown symbolic argument");
}

Registry::Registry(std::string version, std::vector<std::string> clusters, std::vector<MisuseCase> cases)
    : version_(std::move(version)), clusters_(std::move(clusters)), cases_(std::move(cases)) {}

const MisuseCase* Registry::find(std::string_view id) const {
  for (const auto& c : cases_)
    if (c.id == id)
      return &c;
  return nullptr;
}

const MisuseCase& Registry::at(std::string_view id) const {
  if (const auto* c = find(id))
    return *c;
  throw NotFoundError("no misuse case '" + std::string(id) + "'");
}

std::vector<const MisuseCase*> Registry::selected_cases() const {
  std::vector<const MisuseCase*> out;
  for (const auto& c : cases_)
    if (c.selected)
      out.push_back(&c);
  return out;
}

Registry parse_registry(std::string_view json_text) {
  if (json_text.find_first_not_of(" \t\r\n") == std::string_view::npos)
    throw ParseError("registry: empty document");
  auto j = detail::parse_json(json_text, "registry");
  detail::check_keys(j, {"version", "clusters", "cases"}, "registry");
  auto version = detail::get_string(j, "version", "registry");
  auto clusters = detail::get_strings(j, "clusters", "registry");
  if (clusters.size() != kClusterCount)
    throw ValidationError("registry", "exactly nine clusters must be declared");
  if (std::set<std::string>(clusters.begin(), clusters.end()).size() != clusters.size())
    throw ValidationError("registry", "duplicate cluster name");
  const auto& cases_json = detail::required(j, "cases", "registry");
  if (!cases_json.is_array())
    throw ValidationError("registry", "cases must be an array");

  std::vector<MisuseCase> cases;
  std::set<std::string> ids;
  for (const auto& cj : cases_json) {
    auto c = parse_case(cj, clusters);
    if (!ids.insert(c.id).second)
      throw ValidationError(c.id, "duplicate case id");
    cases.push_back(std::move(c));
  }

  std::set<std::string> covered;
  std::size_t selected = 0;
  for (const auto& c : cases) {
    if (!c.selected)
      continue;
    ++selected;
    covered.insert(c.cluster);
  }
  if (selected < kMinimumSelected)
    throw ValidationError("registry", "at least 19 cases must be selected");
  if (covered.size() != clusters.size())
    throw ValidationError("registry", "selected cases must span all nine clusters");
  return Registry(std::move(version), std::move(clusters), std::move(cases));
}

Registry load_registry(const std::filesystem::path& path) {
  return parse_registry(detail::read_file(path));
}

std::vector<const MisuseCase*> list_cases(const Registry& registry, const CaseFilter& filter) {
  if (filter.cluster) {
    const auto& clusters = registry.clusters();
    if (std::find(clusters.begin(), clusters.end(), *filter.cluster) == clusters.end())
      throw ValidationError(*filter.cluster, "unknown cluster");
  }
  std::vector<const MisuseCase*> out;
  for (const auto& c : registry.cases()) {
    if (filter.cluster && c.cluster != *filter.cluster)
      continue;
    if (filter.op && !c.applies(*filter.op))
      continue;
    if (filter.api_kind && c.api_kind != *filter.api_kind)
      continue;
    if (filter.selected_only && !c.selected)
      continue;
    out.push_back(&c);
  }
  return out;
}

} // namespace masc
