#include "masc/mutant.hpp"

#include <sstream>

namespace masc {

namespace {

void append_indented(std::string& out, std::string_view text, std::string_view indent) {
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (!line.empty()) {
      out += indent;
      out += line;
    }
    out += '\n';
    if (nl == std::string_view::npos)
      break;
    pos = nl + 1;
  }
}

std::string replace_all(std::string text, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
  return text;
}

} // namespace

std::string to_string(ConditionMode mode) {
  return mode == ConditionMode::generic ? "generic" : "context";
}

std::optional<ConditionMode> parse_condition_mode(std::string_view text) {
  if (text == "generic")
    return ConditionMode::generic;
  if (text == "context" || text == "context-specific" || text == "context_specific")
    return ConditionMode::context_specific;
  return std::nullopt;
}

std::string Mutant::operator_label() const {
  if (!op)
    return "BASE";
  auto label = to_string(*op);
  if (body_op)
    label += "+" + to_string(*body_op);
  return label;
}

std::string snippet_text(const Mutant& mutant) {
  std::string out;
  for (const auto& helper : mutant.snippet.helper_declarations)
    out += helper + "\n";
  for (const auto& statement : mutant.snippet.statements)
    out += statement + "\n";
  if (mutant.snippet.declaration)
    out += *mutant.snippet.declaration + "\n";
  return out;
}

std::string render_body(const Mutant& mutant) {
  if (mutant.form == SnippetForm::declaration)
    return mutant.snippet.declaration.value_or("");
  std::string body;
  for (const auto& statement : mutant.snippet.statements)
    append_indented(body, statement, "    ");
  if (!mutant.glue.try_catch)
    return "{\n" + body + "}";
  std::string out = "try {\n" + body + "}";
  for (const auto& exception : *mutant.glue.try_catch) {
    out += " catch (" + simple_type_name(exception) + " mascEx) {\n";
    append_indented(out, replace_all(mutant.glue.catch_body, "{}", "mascEx"), "    ");
    out += "}";
  }
  return out;
}

nlohmann::json to_json(const SyntacticGlue& glue) {
  nlohmann::json j;
  j["imports"] = glue.imports;
  j["try_catch"] = glue.try_catch ? nlohmann::json(*glue.try_catch) : nlohmann::json();
  j["catch_body"] = glue.catch_body;
  auto stubs = nlohmann::json::array();
  for (const auto& stub : glue.stub_methods)
    stubs.push_back({{"signature", stub.method.signature_text()},
                     {"return_type", stub.method.return_type},
                     {"text", stub.text}});
  j["stub_methods"] = stubs;
  auto kinds = nlohmann::json::array();
  for (auto kind : glue.placement_kinds)
    kinds.push_back(to_string(kind));
  j["placement_kinds"] = kinds;
  return j;
}

nlohmann::json to_json(const Mutant& mutant) {
  nlohmann::json j;
  j["id"] = mutant.id;
  j["case_id"] = mutant.case_id;
  j["operator_id"] = mutant.operator_label();
  j["body_operator_id"] = mutant.body_op ? nlohmann::json(to_string(*mutant.body_op)) : nlohmann::json();
  j["api"] = mutant.api;
  j["form"] = to_string(mutant.form);
  j["snippet"] = {
      {"helper_declarations", mutant.snippet.helper_declarations},
      {"statements", mutant.snippet.statements},
      {"declaration", mutant.snippet.declaration ? nlohmann::json(*mutant.snippet.declaration) : nlohmann::json()},
  };
  j["glue"] = to_json(mutant.glue);
  j["effective_value"] = mutant.effective_value ? nlohmann::json(*mutant.effective_value) : nlohmann::json();
  j["condition_mode"] =
      mutant.condition_mode ? nlohmann::json(to_string(*mutant.condition_mode)) : nlohmann::json();
  auto tags = nlohmann::json::array();
  for (auto tag : mutant.threat_tags)
    tags.push_back(to_string(tag));
  j["threat_tags"] = tags;
  j["inline_argument"] = mutant.inline_argument ? nlohmann::json(*mutant.inline_argument) : nlohmann::json();
  return j;
}

} // namespace masc
