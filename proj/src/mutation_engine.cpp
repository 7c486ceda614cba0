#include "masc/mutation_engine.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>

#include "masc/error.hpp"

namespace masc {

namespace {

// --- string helpers -------------------------------------------------------

std::string lower(std::string s) {
  for (auto& c : s)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string upper(std::string s) {
  for (auto& c : s)
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

bool has_letters(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)); });
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

std::string replace_all(std::string text, std::string_view from, std::string_view to) {
  if (from.empty())
    return text;
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
  return text;
}

std::string indent_lines(std::string_view text, std::string_view indent) {
  std::string out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (!line.empty()) {
      out += indent;
      out += line;
    }
    if (nl == std::string_view::npos)
      break;
    out += '\n';
    pos = nl + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i)
      out += sep;
    out += parts[i];
  }
  return out;
}

// --- restrictive operators ------------------------------------------------

struct Variant {
  std::vector<std::string> helpers;
  std::vector<std::string> statements;
  std::optional<std::string> declaration;
  std::optional<std::string> effective_value;
  std::optional<std::string> inline_argument;
  std::set<std::string> imports;
  ThreatTags tags;
  std::optional<ConditionMode> condition_mode;
};

std::string call_expression(const ApiSpec& spec, std::string_view argument) {
  const auto& f = *spec.factory;
  std::vector<std::string> args;
  std::size_t fixed = 0;
  for (int i = 0; i < f.parameter_count; ++i) {
    if (i == f.string_parameter_index)
      args.push_back(std::string(argument) + f.string_conversion);
    else
      args.push_back(f.fixed_arguments[fixed++]);
  }
  if (f.is_constructor())
    return "new " + spec.simple_name() + "(" + join(args, ", ") + ")";
  return spec.simple_name() + "." + f.method + "(" + join(args, ", ") + ")";
}

std::string literal_for(std::string_view argument) {
  return is_symbolic_argument(argument) ? symbolic_expression(argument) : java_string_literal(argument);
}

/// A one-expression variant: the call with `expression` as its argument.
Variant inline_variant(const ApiSpec& spec, std::string expression, std::string value, ThreatTags tags) {
  Variant v;
  v.statements = {call_expression(spec, expression) + ";"};
  v.effective_value = std::move(value);
  v.inline_argument = expression + spec.factory->string_conversion;
  v.tags = std::move(tags);
  return v;
}

/// First noise token absent from the argument, spliced in before its last
/// character.
std::optional<std::pair<std::string, std::string>> noisy_form(const std::string& argument) {
  for (std::string token : {"$", "//", "#", "~"}) {
    if (argument.find(token) != std::string::npos)
      continue;
    std::string noisy = argument.size() >= 2
                            ? argument.substr(0, argument.size() - 1) + token + argument.substr(argument.size() - 1)
                            : argument + token;
    if (replace_all(noisy, token, "") == argument)
      return std::make_pair(noisy, token);
  }
  return std::nullopt;
}

std::vector<Variant> op1_variants(const MisuseCase& misuse, const ApiSpec& spec) {
  const auto& arg = misuse.insecure_arguments.front();
  if (!spec.argument_case_insensitive)
    throw InapplicableOperatorError(misuse.id + ": OP1 needs a case-insensitive API");
  if (is_symbolic_argument(arg) || !has_letters(arg))
    throw InapplicableOperatorError(misuse.id + ": OP1 needs a literal with letters");
  std::vector<std::string> forms;
  forms.push_back(lower(arg));
  std::string first = arg;
  for (auto& c : first) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      break;
    }
  }
  forms.push_back(first);
  std::string alternating = arg;
  for (std::size_t i = 0; i < alternating.size(); ++i) {
    auto c = static_cast<unsigned char>(alternating[i]);
    alternating[i] = static_cast<char>(i % 2 == 0 ? std::tolower(c) : std::toupper(c));
  }
  forms.push_back(alternating);

  std::vector<Variant> out;
  std::set<std::string> seen{arg};
  for (const auto& form : forms) {
    if (!seen.insert(form).second)
      continue;
    out.push_back(inline_variant(spec, java_string_literal(form), form, {ThreatTag::t1}));
  }
  return out;
}

std::vector<Variant> op2_variants(const MisuseCase& misuse, const ApiSpec& spec) {
  const auto& arg = misuse.insecure_arguments.front();
  auto init = literal_for(arg);
  Variant direct;
  direct.statements = {"String mascVar1 = " + init + ";", call_expression(spec, "mascVar1") + ";"};
  direct.effective_value = arg;
  direct.tags = {ThreatTag::t1};
  Variant hop;
  hop.statements = {"String mascVar1 = " + init + ";", "String mascVar2 = mascVar1;",
                    call_expression(spec, "mascVar2") + ";"};
  hop.effective_value = arg;
  hop.tags = {ThreatTag::t1};
  return {direct, hop};
}

std::vector<Variant> op3_variants(const MisuseCase& misuse, const ApiSpec& spec) {
  const auto& arg = misuse.insecure_arguments.front();
  if (is_symbolic_argument(arg) || !has_letters(arg))
    throw InapplicableOperatorError(misuse.id + ": OP3 needs a literal with letters");
  struct Candidate {
    std::string expression;
    std::string value;
    bool locale;
  };
  std::vector<Candidate> candidates = {
      {java_string_literal(lower(arg)) + ".toUpperCase()", upper(arg), false},
      {java_string_literal(lower(arg)) + ".toUpperCase(Locale.ENGLISH)", upper(arg), true},
      {java_string_literal(upper(arg)) + ".toLowerCase()", lower(arg), false},
  };
  std::vector<Variant> out;
  for (auto& c : candidates) {
    bool ok = spec.argument_case_insensitive ? iequals(c.value, arg) : c.value == arg;
    if (!ok)
      continue;
    auto v = inline_variant(spec, c.expression, c.value, {ThreatTag::t2});
    if (c.locale)
      v.imports.insert("java.util.Locale");
    out.push_back(std::move(v));
  }
  if (out.empty())
    throw InapplicableOperatorError(misuse.id + ": no case transformation restores the argument");
  return out;
}

std::optional<std::pair<char, char>> substitution(const std::string& argument) {
  if (argument.empty())
    return std::nullopt;
  char original = argument.front();
  bool lower_case = std::islower(static_cast<unsigned char>(original));
  for (char r = lower_case ? 'a' : 'A'; r <= (lower_case ? 'z' : 'Z'); ++r)
    if (argument.find(r) == std::string::npos)
      return std::make_pair(original, r);
  return std::nullopt;
}

std::vector<Variant> op4_variants(const MisuseCase& misuse, const ApiSpec& spec) {
  const auto& arg = misuse.insecure_arguments.front();
  if (is_symbolic_argument(arg))
    throw InapplicableOperatorError(misuse.id + ": OP4 needs a literal argument");
  std::vector<Variant> out;
  if (auto noise = noisy_form(arg)) {
    auto expr = java_string_literal(noise->first) + ".replace(" + java_string_literal(noise->second) + ", \"\")";
    out.push_back(inline_variant(spec, expr, arg, {ThreatTag::t2}));
  }
  if (misuse.secure_argument && *misuse.secure_argument != arg) {
    auto secure = java_string_literal(*misuse.secure_argument);
    auto expr = secure + ".replace(" + secure + ", " + java_string_literal(arg) + ")";
    out.push_back(inline_variant(spec, expr, arg, {ThreatTag::t2}));
  }
  if (auto sub = substitution(arg)) {
    auto [original, replacement] = *sub;
    std::string source = arg;
    std::replace(source.begin(), source.end(), original, replacement);
    auto expr = java_string_literal(source) + ".replace(" + java_string_literal(std::string(1, replacement)) + ", " +
                java_string_literal(std::string(1, original)) + ")";
    out.push_back(inline_variant(spec, expr, arg, {ThreatTag::t2}));
  }
  if (out.empty())
    throw InapplicableOperatorError(misuse.id + ": no replacement form found");
  return out;
}

std::string helper_class(std::string_view field_init, std::string_view first, std::string_view second) {
  std::string out = "class MascHelper1 {\n";
  out += "    String algo = " + std::string(field_init) + ";\n\n";
  out += "    MascHelper1 mthd1() {\n        " + std::string(first) + "\n        return this;\n    }\n\n";
  out += "    MascHelper1 mthd2() {\n        " + std::string(second) + "\n        return this;\n    }\n\n";
  out += "    String getValue() {\n        return algo;\n    }\n}";
  return out;
}

std::vector<Variant> op5_variants(const MisuseCase& misuse, const ApiSpec& spec) {
  const auto& arg = misuse.insecure_arguments.front();
  std::string field_init = misuse.secure_argument ? java_string_literal(*misuse.secure_argument) : "\"\"";
  std::vector<std::tuple<std::string, std::string>> steps;
  if (is_symbolic_argument(arg)) {
    steps.emplace_back("algo = \"\";", "algo = " + symbolic_expression(arg) + ";");
    steps.emplace_back("algo = \"\";", "algo = Long.toString(System.currentTimeMillis());");
  } else {
    auto lit = java_string_literal(arg);
    if (misuse.secure_argument && *misuse.secure_argument != arg)
      steps.emplace_back("algo = " + java_string_literal(*misuse.secure_argument) + ";", "algo = " + lit + ";");
    if (auto noise = noisy_form(arg))
      steps.emplace_back(
          "algo = " + java_string_literal(noise->first) + ";",
          "algo = algo.replace(" + java_string_literal(noise->second) + ", \"\");");
    if (spec.argument_case_insensitive && has_letters(arg) && lower(arg) != arg)
      steps.emplace_back("algo = " + java_string_literal(lower(arg)) + ";", "algo = algo.toUpperCase();");
    if (arg.size() >= 2) {
      auto half = arg.size() / 2;
      steps.emplace_back(
          "algo = " + java_string_literal(arg.substr(0, half)) + ";",
          "algo = algo + " + java_string_literal(arg.substr(half)) + ";");
    }
  }
  std::vector<Variant> out;
  for (const auto& [first, second] : steps) {
    Variant v;
    v.helpers = {helper_class(field_init, first, second)};
    v.statements = {call_expression(spec, "new MascHelper1().mthd1().mthd2().getValue()") + ";"};
    v.tags = {ThreatTag::t3};
    out.push_back(std::move(v));
  }
  // Case-split values come back upper-cased; record what the chain yields.
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& second = std::get<1>(steps[i]);
    out[i].effective_value = second == "algo = algo.toUpperCase();" ? upper(arg) : arg;
  }
  return out;
}

std::string char_loop(int start, int end, bool offset, bool inclusive) {
  std::string header;
  std::string body;
  if (offset) {
    header = "for (int mascVar2 = 0; mascVar2 < " + std::to_string(end - start) + "; mascVar2++) {";
    body = "    mascVar1 += (char) (" + std::to_string(start) + " + mascVar2);";
  } else if (inclusive) {
    header = "for (int mascVar2 = " + std::to_string(start) + "; mascVar2 <= " + std::to_string(end - 1) +
             "; mascVar2++) {";
    body = "    mascVar1 += (char) mascVar2;";
  } else {
    header = "for (int mascVar2 = " + std::to_string(start) + "; mascVar2 < " + std::to_string(end) +
             "; mascVar2++) {";
    body = "    mascVar1 += (char) mascVar2;";
  }
  return header + "\n" + body + "\n}";
}

std::vector<Variant> op6_variants(const MisuseCase& misuse, const ApiSpec& spec) {
  const auto& arg = misuse.insecure_arguments.front();
  std::vector<Variant> out;
  auto finish = [&](std::vector<std::string> statements, std::set<std::string> imports) {
    statements.push_back(call_expression(spec, "mascVar1") + ";");
    Variant v;
    v.statements = std::move(statements);
    v.imports = std::move(imports);
    v.effective_value = arg;
    v.tags = {ThreatTag::t1};
    out.push_back(std::move(v));
  };
  if (is_symbolic_argument(arg)) {
    finish({"String mascVar1 = new Date(System.currentTimeMillis()).toString();"}, {"java.util.Date"});
    finish({"String mascVar1 = String.valueOf(System.nanoTime());"}, {});
    finish({"String mascVar1 = Long.toString(System.currentTimeMillis());"}, {});
    return out;
  }
  if (arg.empty() || !std::all_of(arg.begin(), arg.end(), [](char c) {
        return c >= 0x20 && c < 0x7f;
      }))
    throw InapplicableOperatorError(misuse.id + ": OP6 needs a printable ASCII literal");

  // Maximal runs of consecutive code points.
  std::vector<std::pair<int, int>> runs; // [start, end)
  for (char c : arg) {
    int code = static_cast<unsigned char>(c);
    if (!runs.empty() && runs.back().second == code)
      ++runs.back().second;
    else
      runs.emplace_back(code, code + 1);
  }
  std::vector<std::string> statements{"String mascVar1 = \"\";"};
  for (auto [start, end] : runs) {
    if (end - start >= 2)
      statements.push_back(char_loop(start, end, false, false));
    else
      statements.push_back("mascVar1 += " + java_string_literal(std::string(1, static_cast<char>(start))) + ";");
  }
  finish(statements, {});
  if (runs.size() == 1 && runs[0].second - runs[0].first >= 2) {
    auto [start, end] = runs[0];
    finish({"String mascVar1 = \"\";", char_loop(start, end, true, false)}, {});
    finish({"String mascVar1 = \"\";", char_loop(start, end, false, true)}, {});
  }
  return out;
}

// --- flexible operators ---------------------------------------------------

struct BodyVariant {
  std::string key;
  std::string body;
  ThreatTags tags;
  std::optional<ConditionMode> mode;
};

std::string neutral_statement(const Behavior& behavior) {
  return behavior.outcome == NeutralOutcome::constant_return ? "return " + behavior.value + ";" : "";
}

bool has_condition_subjects(const AbstractMethod& method) {
  auto subjects = method.condition_subjects();
  return std::any_of(subjects.begin(), subjects.end(), [](const Parameter& p) {
    return !is_primitive_type(p.type);
  });
}

std::vector<BodyVariant> body_variants(
    Operator op,
    const MisuseCase& misuse,
    const AbstractMethod& method,
    const ContextProbes& probes) {
  const auto& behavior = *misuse.behavior;
  std::vector<BodyVariant> out;
  auto neutral = neutral_statement(behavior);
  const std::array modes = {ConditionMode::generic, ConditionMode::context_specific};

  if (op == Operator::op7) {
    if (behavior.outcome != NeutralOutcome::suppress_exception)
      throw InapplicableOperatorError(misuse.id + ": OP7 needs a suppress-exception behavior");
    auto exception = simple_type_name(behavior.exception);
    out.push_back({"empty", "", {ThreatTag::t1}, std::nullopt});
    for (auto mode : modes) {
      if (mode == ConditionMode::context_specific && !has_condition_subjects(method))
        continue;
      auto cond = condition_text(mode, method, Polarity::never_true, probes);
      out.push_back({"guarded-" + to_string(mode),
                     "if (" + cond + ") {\n    throw new " + exception + "();\n}",
                     {ThreatTag::t3},
                     mode});
    }
  } else if (op == Operator::op8) {
    if (behavior.outcome != NeutralOutcome::constant_return)
      throw InapplicableOperatorError(misuse.id + ": OP8 needs a constant-return behavior");
    out.push_back({"constant", neutral, {ThreatTag::t1}, std::nullopt});
    bool boolean = behavior.value == "true" || behavior.value == "false";
    if (boolean && method.return_type == "boolean") {
      auto negated = behavior.value == "true" ? "false" : "true";
      for (auto mode : modes) {
        if (mode == ConditionMode::context_specific && !has_condition_subjects(method))
          continue;
        auto cond = condition_text(mode, method, Polarity::always_true, probes);
        out.push_back({"guarded-" + to_string(mode),
                       "if (" + cond + ") {\n    return " + behavior.value + ";\n}\nreturn " + negated + ";",
                       {ThreatTag::t3},
                       mode});
      }
    }
  } else if (op == Operator::op9) {
    auto tail = neutral.empty() ? std::string() : "\n" + neutral;
    for (const auto& p : method.parameters) {
      if (p.type.size() > 2 && p.type.ends_with("[]")) {
        auto element = simple_type_name(p.type.substr(0, p.type.size() - 2));
        out.push_back({"loop-array",
                       "int mascVar1 = 0;\nfor (" + element + " mascVar2 : " + p.name +
                           ") {\n    mascVar1++;\n}" + tail,
                       {ThreatTag::t3},
                       std::nullopt});
        break;
      }
    }
    for (const auto& p : method.parameters) {
      if (p.type == "java.lang.String" || p.type == "String") {
        out.push_back({"loop-string",
                       "int mascVar1 = 0;\nfor (char mascVar2 : " + p.name +
                           ".toCharArray()) {\n    mascVar1 += mascVar2;\n}" + tail,
                       {ThreatTag::t3},
                       std::nullopt});
        break;
      }
    }
    out.push_back({"loop-range",
                   "int mascVar1 = 0;\nfor (int mascVar2 = 0; mascVar2 < 10; mascVar2++) {\n    mascVar1 += "
                   "mascVar2;\n}" +
                       tail,
                   {ThreatTag::t3},
                   std::nullopt});
  } else {
    throw InapplicableOperatorError(to_string(op) + " does not produce method bodies");
  }
  return out;
}

/// Body variants indexed by the first target overload; other overloads reuse
/// the variant with the same key.
struct TargetBodies {
  std::vector<const AbstractMethod*> targets;
  std::vector<std::vector<BodyVariant>> per_target;

  std::size_t size() const {
    return per_target.empty() ? 0 : per_target.front().size();
  }
  const BodyVariant& canonical(std::size_t i) const {
    return per_target.front()[i];
  }
};

TargetBodies target_bodies(Operator op, const MisuseCase& misuse, const ApiSpec& spec, const ApiModel& model) {
  TargetBodies tb;
  for (const auto& m : spec.abstract_methods)
    if (m.name == misuse.behavior->method)
      tb.targets.push_back(&m);
  if (tb.targets.empty())
    throw ValidationError(misuse.id, "behavior method '" + misuse.behavior->method + "' is not abstract in " +
                                         spec.qualified_name);
  for (const auto* m : tb.targets)
    tb.per_target.push_back(body_variants(op, misuse, *m, model.context_probes()));
  return tb;
}

/// Methods of the API with target overloads using body variant `index`;
/// `targets_only`/`others_only` select a subset.
std::string methods_text(
    const ApiSpec& spec,
    const TargetBodies& bodies,
    std::size_t index,
    int subset /* 0 all, 1 targets, 2 others */) {
  const auto& key = bodies.canonical(index).key;
  std::vector<std::string> rendered;
  for (const auto& m : spec.abstract_methods) {
    auto it = std::find(bodies.targets.begin(), bodies.targets.end(), &m);
    bool is_target = it != bodies.targets.end();
    if ((subset == 1 && !is_target) || (subset == 2 && is_target))
      continue;
    if (!is_target) {
      rendered.push_back(render_method(m, m.default_body));
      continue;
    }
    const auto& variants = bodies.per_target[static_cast<std::size_t>(it - bodies.targets.begin())];
    auto found = std::find_if(variants.begin(), variants.end(), [&](const BodyVariant& v) { return v.key == key; });
    rendered.push_back(render_method(m, found != variants.end() ? found->body : variants.front().body));
  }
  return indent_lines(join(rendered, "\n\n"), "    ");
}

std::string extension_keyword(const ApiSpec& spec) {
  return spec.type_kind == TypeKind::interface_type ? "implements" : "extends";
}

std::string class_decl(std::string_view head, std::string_view body) {
  return std::string(head) + " {\n" + std::string(body) + "\n}";
}

enum class Layer { direct, interface_layer, abstract_layer };

std::vector<Layer> layers_for(Operator op, const ApiSpec& spec) {
  bool interface = spec.type_kind == TypeKind::interface_type;
  if (op == Operator::op10)
    return {Layer::direct};
  if (op == Operator::op11) {
    std::vector<Layer> out{Layer::direct, Layer::abstract_layer};
    if (interface)
      out.push_back(Layer::interface_layer);
    return out;
  }
  std::vector<Layer> out{Layer::direct};
  if (interface)
    out.push_back(Layer::interface_layer);
  out.push_back(Layer::abstract_layer);
  return out;
}

Variant flexible_variant(
    Operator op,
    Layer layer,
    const ApiSpec& spec,
    const TargetBodies& bodies,
    std::size_t index) {
  const auto api = spec.simple_name();
  const auto& body = bodies.canonical(index);
  Variant v;
  v.tags = body.tags;
  v.condition_mode = body.mode;
  std::string base = api;
  std::string base_keyword = extension_keyword(spec);
  if (layer == Layer::interface_layer) {
    v.helpers.push_back("interface MascInterface1 extends " + api + " {\n}");
    base = "MascInterface1";
    base_keyword = "implements";
  } else if (layer == Layer::abstract_layer) {
    v.helpers.push_back("abstract class MascAbstract1 " + extension_keyword(spec) + " " + api + " {\n}");
    base = "MascAbstract1";
    base_keyword = "extends";
  }
  switch (op) {
    case Operator::op7:
    case Operator::op8:
    case Operator::op9:
    case Operator::op11:
      v.declaration = class_decl("class MascImpl1 " + base_keyword + " " + base, methods_text(spec, bodies, index, 0));
      break;
    case Operator::op10: {
      auto factory = "    " + api + " mascNewInstance() {\n        return new MascAbstract1() {\n" +
                     indent_lines(methods_text(spec, bodies, index, 2), "        ") + "\n        };\n    }";
      v.declaration = class_decl(
          "abstract class MascAbstract1 " + extension_keyword(spec) + " " + api,
          methods_text(spec, bodies, index, 1) + "\n\n" + factory);
      break;
    }
    case Operator::op12:
      v.declaration = api + " mascVar1 = new " + base + "() {\n" + methods_text(spec, bodies, index, 0) + "\n};";
      break;
    default:
      throw InapplicableOperatorError(to_string(op) + " is not a flexible operator");
  }
  return v;
}

bool mode_allowed(const std::optional<ConditionMode>& variant_mode, const OperatorConfig& config) {
  return !variant_mode || !config.condition_mode || *variant_mode == *config.condition_mode;
}

std::string op_slug(Operator op) {
  return "op" + std::to_string(operator_number(op));
}

Mutant make_mutant(
    const MisuseCase& misuse,
    const ApiSpec& spec,
    const ApiModel& model,
    std::optional<Operator> op,
    std::optional<Operator> body_op,
    std::string id,
    Variant v) {
  Mutant m;
  m.id = std::move(id);
  m.case_id = misuse.id;
  m.op = op;
  m.body_op = body_op;
  m.api = spec.qualified_name;
  m.form = spec.kind == ApiKind::restrictive ? SnippetForm::statement : SnippetForm::declaration;
  m.glue = glue_for(model, spec, m.form);
  m.glue.imports.insert(v.imports.begin(), v.imports.end());
  m.snippet.helper_declarations = std::move(v.helpers);
  m.snippet.statements = std::move(v.statements);
  m.snippet.declaration = std::move(v.declaration);
  m.effective_value = std::move(v.effective_value);
  m.inline_argument = std::move(v.inline_argument);
  m.condition_mode = v.condition_mode;
  m.threat_tags = std::move(v.tags);
  return m;
}

std::size_t cap_of(const OperatorConfig& config) {
  return config.max_variants <= 0 ? std::numeric_limits<std::size_t>::max()
                                  : static_cast<std::size_t>(config.max_variants);
}

std::vector<Operator> body_ops_for(const MisuseCase& misuse, const OperatorConfig& config) {
  if (config.body_op) {
    if (!is_body_operator(*config.body_op))
      throw ValidationError(to_string(*config.body_op), "body operator must be OP7, OP8 or OP9");
    return {*config.body_op};
  }
  std::vector<Operator> out;
  for (auto op : {Operator::op7, Operator::op8, Operator::op9}) {
    if (!misuse.applies(op))
      continue;
    bool feasible = op == Operator::op9 ||
                    (op == Operator::op7 && misuse.behavior->outcome == NeutralOutcome::suppress_exception) ||
                    (op == Operator::op8 && misuse.behavior->outcome == NeutralOutcome::constant_return);
    if (feasible)
      out.push_back(op);
  }
  return out;
}

} // namespace

std::string java_string_literal(std::string_view value) {
  std::string out = "\"";
  for (char c : value) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      case '\r':
        out += "\\r";
        break;
      default:
        out += c;
    }
  }
  return out + "\"";
}

bool is_insecure_value(const MisuseCase& misuse, const ApiSpec& spec, std::string_view value) {
  return std::any_of(misuse.insecure_arguments.begin(), misuse.insecure_arguments.end(), [&](const std::string& a) {
    return spec.argument_case_insensitive && !is_symbolic_argument(a) ? iequals(a, value) : a == value;
  });
}

std::string condition_text(
    ConditionMode mode,
    const AbstractMethod& method,
    Polarity polarity,
    const ContextProbes& probes) {
  std::vector<std::string> parts{"true"};
  for (const auto& p : method.condition_subjects()) {
    if (is_primitive_type(p.type))
      continue;
    if (mode == ConditionMode::generic) {
      parts.push_back(p.name + " == null");
      continue;
    }
    auto it = probes.find(p.type);
    auto probe = it != probes.end() ? it->second : std::string("{} != null");
    parts.push_back(replace_all(probe, "{}", p.name));
  }
  if (mode == ConditionMode::context_specific && parts.size() == 1)
    throw ValidationError(method.name, "context-specific condition needs a parameter in scope");
  auto expression = join(parts, " || ");
  return polarity == Polarity::always_true ? expression : "!(" + expression + ")";
}

std::vector<Mutant> apply_operator(
    Operator op,
    const MisuseCase& misuse,
    const ApiModel& model,
    const OperatorConfig& config) {
  if (!misuse.applies(op))
    throw InapplicableOperatorError(to_string(op) + " is not applicable to " + misuse.id);
  const auto& spec = lookup(model, misuse.api_type());
  if ((spec.kind == ApiKind::restrictive) != (misuse.api_kind == ApiKind::restrictive))
    throw ValidationError(misuse.id, "case kind does not match API kind of " + spec.qualified_name);
  const auto cap = cap_of(config);
  std::vector<Mutant> out;

  if (is_restrictive(op)) {
    if (spec.factory->is_constructor() != (misuse.api_member() == "<init>") ||
        (!spec.factory->is_constructor() && spec.factory->method != misuse.api_member()))
      throw ValidationError(misuse.id, "target member does not match the API factory");
    std::vector<Variant> variants;
    switch (op) {
      case Operator::op1:
        variants = op1_variants(misuse, spec);
        break;
      case Operator::op2:
        variants = op2_variants(misuse, spec);
        break;
      case Operator::op3:
        variants = op3_variants(misuse, spec);
        break;
      case Operator::op4:
        variants = op4_variants(misuse, spec);
        break;
      case Operator::op5:
        variants = op5_variants(misuse, spec);
        break;
      default:
        variants = op6_variants(misuse, spec);
        break;
    }
    for (std::size_t i = 0; i < variants.size() && out.size() < cap; ++i) {
      if (!variants[i].effective_value || !is_insecure_value(misuse, spec, *variants[i].effective_value))
        continue;
      auto id = misuse.id + "." + op_slug(op) + "." + std::to_string(i + 1);
      out.push_back(make_mutant(misuse, spec, model, op, std::nullopt, std::move(id), std::move(variants[i])));
    }
    if (out.empty())
      throw InapplicableOperatorError(to_string(op) + " yields no variant for " + misuse.id);
    return out;
  }

  if (is_body_operator(op)) {
    auto bodies = target_bodies(op, misuse, spec, model);
    for (std::size_t i = 0; i < bodies.size() && out.size() < cap; ++i) {
      if (!mode_allowed(bodies.canonical(i).mode, config))
        continue;
      auto id = misuse.id + "." + op_slug(op) + "." + std::to_string(i + 1);
      out.push_back(make_mutant(
          misuse, spec, model, op, std::nullopt, std::move(id), flexible_variant(op, Layer::direct, spec, bodies, i)));
    }
    return out;
  }

  auto layers = layers_for(op, spec);
  auto body_ops = body_ops_for(misuse, config);
  if (body_ops.empty())
    throw InapplicableOperatorError(to_string(op) + ": no body operator applies to " + misuse.id);
  for (auto body_op : body_ops) {
    auto bodies = target_bodies(body_op, misuse, spec, model);
    std::size_t kept = 0;
    std::size_t ordinal = 0;
    for (std::size_t shift = 0; shift < layers.size(); ++shift) {
      for (std::size_t b = 0; b < bodies.size(); ++b, ++ordinal) {
        if (kept >= cap || !mode_allowed(bodies.canonical(b).mode, config))
          continue;
        auto layer = layers[(b + shift) % layers.size()];
        auto id = misuse.id + "." + op_slug(op) + "-" + op_slug(body_op) + "." + std::to_string(ordinal + 1);
        out.push_back(make_mutant(
            misuse, spec, model, op, body_op, std::move(id), flexible_variant(op, layer, spec, bodies, b)));
        ++kept;
      }
    }
  }
  return out;
}

Mutant base_instantiation(const MisuseCase& misuse, const ApiModel& model) {
  const auto& spec = lookup(model, misuse.api_type());
  auto id = misuse.id + ".base.1";
  if (misuse.api_kind == ApiKind::restrictive) {
    const auto& arg = misuse.insecure_arguments.front();
    auto v = inline_variant(spec, literal_for(arg), arg, misuse.threat_tags);
    return make_mutant(misuse, spec, model, std::nullopt, std::nullopt, std::move(id), std::move(v));
  }
  TargetBodies bodies;
  for (const auto& m : spec.abstract_methods)
    if (m.name == misuse.behavior->method)
      bodies.targets.push_back(&m);
  if (bodies.targets.empty())
    throw ValidationError(misuse.id, "behavior method is not abstract in " + spec.qualified_name);
  for (std::size_t i = 0; i < bodies.targets.size(); ++i)
    bodies.per_target.push_back({{"neutral", neutral_statement(*misuse.behavior), misuse.threat_tags, std::nullopt}});
  auto v = flexible_variant(Operator::op11, Layer::direct, spec, bodies, 0);
  return make_mutant(misuse, spec, model, std::nullopt, std::nullopt, std::move(id), std::move(v));
}

std::vector<Mutant> generate_mutants(
    const Registry& registry,
    const ApiModel& model,
    const OperatorConfig& config,
    const GenerationFilter& filter) {
  std::vector<const MisuseCase*> cases;
  if (filter.case_ids.empty()) {
    cases = registry.selected_cases();
  } else {
    for (const auto& id : filter.case_ids)
      cases.push_back(&registry.at(id));
  }
  std::vector<Mutant> out;
  for (const auto* misuse : cases) {
    if (filter.include_base)
      out.push_back(base_instantiation(*misuse, model));
    for (auto op : misuse->applicable_operators) {
      if (!filter.operators.empty() &&
          std::find(filter.operators.begin(), filter.operators.end(), op) == filter.operators.end())
        continue;
      try {
        auto mutants = apply_operator(op, *misuse, model, config);
        std::move(mutants.begin(), mutants.end(), std::back_inserter(out));
      } catch (const InapplicableOperatorError&) {
        // The registry may list operators a particular argument cannot use.
      }
    }
  }
  return out;
}

} // namespace masc
