#include "string_oracle.hpp"

#include <cctype>
#include <map>
#include <memory>
#include <variant>

#include "masc/error.hpp"

namespace masc {

namespace {

enum class Tok { ident, number, string, character, punct, end };

struct Token {
  Tok kind;
  std::string text;
};

[[noreturn]] void unsupported(const std::string& what) {
  throw UnsupportedExpressionError("unsupported: " + what);
}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto escape = [&](char c) -> char {
    switch (c) {
      case 'n':
        return '\n';
      case 't':
        return '\t';
      case 'r':
        return '\r';
      case '0':
        return '\0';
      default:
        return c;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n')
        ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
      auto start = i;
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_' || src[i] == '$'))
        ++i;
      out.push_back({Tok::ident, std::string(src.substr(start, i - start))});
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      auto start = i;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i])))
        ++i;
      if (i < src.size() && (src[i] == 'L' || src[i] == 'l'))
        ++i;
      out.push_back({Tok::number, std::string(src.substr(start, i - start))});
    } else if (c == '"' || c == '\'') {
      char quote = c;
      std::string value;
      ++i;
      while (i < src.size() && src[i] != quote) {
        if (src[i] == '\\' && i + 1 < src.size()) {
          value += escape(src[i + 1]);
          i += 2;
        } else {
          value += src[i++];
        }
      }
      if (i >= src.size())
        unsupported("unterminated literal");
      ++i;
      out.push_back({quote == '"' ? Tok::string : Tok::character, value});
    } else {
      static const char* const two[] = {"+=", "++", "--", "<=", ">=", "==", "!=", "&&", "||"};
      std::string op(1, c);
      for (const char* t : two)
        if (src.substr(i, 2) == t)
          op = t;
      i += op.size();
      out.push_back({Tok::punct, op});
    }
  }
  out.push_back({Tok::end, ""});
  return out;
}

struct Object;

struct Symbolic {};
struct This {};
struct Locale {};
struct DateValue {
  bool symbolic;
  std::string text;
};

using Value = std::variant<std::string, long long, char, Symbolic, Locale, DateValue, This, std::shared_ptr<Object>>;

struct MethodDef {
  std::size_t body_begin = 0; // token index after '{'
};

struct ClassDef {
  std::string name;
  std::vector<Token> tokens;
  std::vector<std::pair<std::string, std::size_t>> fields; // name, init expr index
  std::map<std::string, MethodDef> methods;
};

struct Object {
  const ClassDef* cls;
  std::map<std::string, Value> fields;
};

std::string as_text(const Value& v) {
  if (auto s = std::get_if<std::string>(&v))
    return *s;
  if (auto n = std::get_if<long long>(&v))
    return std::to_string(*n);
  if (auto c = std::get_if<char>(&v))
    return std::string(1, *c);
  unsupported("value is not a string");
}

bool is_symbolic(const Value& v) {
  if (std::holds_alternative<Symbolic>(v))
    return true;
  if (auto d = std::get_if<DateValue>(&v))
    return d->symbolic;
  return false;
}

long long as_int(const Value& v) {
  if (auto n = std::get_if<long long>(&v))
    return *n;
  if (auto c = std::get_if<char>(&v))
    return static_cast<unsigned char>(*c);
  unsupported("value is not numeric");
}

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
  if (from.empty())
    return text;
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
  return text;
}

struct Target {
  std::string simple;
  std::string method; // "<init>" for constructors
  int index = 0;
};

class Interpreter {
 public:
  Interpreter(std::map<std::string, ClassDef>* classes, std::optional<Target> target)
      : classes_(classes), target_(std::move(target)) {}

  std::optional<Value> captured;

  /// Runs statements until the end token or a closing brace.
  void run_block(const std::vector<Token>& toks, std::size_t& pos, std::map<std::string, Value>& scope) {
    while (toks[pos].kind != Tok::end && toks[pos].text != "}")
      statement(toks, pos, scope);
  }

  Value expression(const std::vector<Token>& toks, std::size_t& pos, std::map<std::string, Value>& scope) {
    auto lhs = unary(toks, pos, scope);
    while (toks[pos].text == "+" && toks[pos].kind == Tok::punct) {
      ++pos;
      auto rhs = unary(toks, pos, scope);
      lhs = add(lhs, rhs);
    }
    return lhs;
  }

  Value call_method(Object& obj, const std::string& name) {
    auto it = obj.cls->methods.find(name);
    if (it == obj.cls->methods.end())
      unsupported("unknown helper method " + name);
    const auto& toks = obj.cls->tokens;
    auto pos = it->second.body_begin;
    while (toks[pos].text != "}") {
      if (toks[pos].text == "return") {
        ++pos;
        if (toks[pos].text == "this") {
          ++pos;
          expect(toks, pos, ";");
          return This{};
        }
        auto v = expression(toks, pos, obj.fields);
        expect(toks, pos, ";");
        return v;
      }
      statement(toks, pos, obj.fields);
    }
    unsupported("helper method without return");
  }

  std::shared_ptr<Object> instantiate(const ClassDef& cls) {
    auto obj = std::make_shared<Object>();
    obj->cls = &cls;
    for (const auto& [name, init] : cls.fields) {
      auto pos = init;
      auto value = expression(cls.tokens, pos, obj->fields);
      obj->fields[name] = std::move(value);
    }
    return obj;
  }

 private:
  std::map<std::string, ClassDef>* classes_;
  std::optional<Target> target_;

  static void expect(const std::vector<Token>& toks, std::size_t& pos, std::string_view text) {
    if (toks[pos].text != text)
      unsupported("expected '" + std::string(text) + "' near '" + toks[pos].text + "'");
    ++pos;
  }

  static bool is_type_name(const std::string& s) {
    return s == "String" || s == "int" || s == "char" || s == "long";
  }

  static Value add(const Value& a, const Value& b) {
    if (is_symbolic(a) || is_symbolic(b))
      return Symbolic{};
    bool a_str = std::holds_alternative<std::string>(a);
    bool b_str = std::holds_alternative<std::string>(b);
    if (a_str || b_str)
      return as_text(a) + as_text(b);
    return as_int(a) + as_int(b);
  }

  static Value cast(const std::string& type, const Value& v) {
    if (type == "char")
      return static_cast<char>(as_int(v));
    if (type == "int" || type == "long")
      return as_int(v);
    return v;
  }

  void skip_block(const std::vector<Token>& toks, std::size_t& pos) {
    expect(toks, pos, "{");
    int depth = 1;
    while (depth > 0) {
      if (toks[pos].kind == Tok::end)
        unsupported("unbalanced block");
      if (toks[pos].text == "{" && toks[pos].kind == Tok::punct)
        ++depth;
      if (toks[pos].text == "}" && toks[pos].kind == Tok::punct)
        --depth;
      ++pos;
    }
  }

  bool compare(const std::vector<Token>& toks, std::size_t& pos, std::map<std::string, Value>& scope) {
    auto lhs = expression(toks, pos, scope);
    auto op = toks[pos++].text;
    auto rhs = expression(toks, pos, scope);
    auto a = as_int(lhs);
    auto b = as_int(rhs);
    if (op == "<")
      return a < b;
    if (op == "<=")
      return a <= b;
    if (op == ">")
      return a > b;
    if (op == ">=")
      return a >= b;
    unsupported("loop condition operator " + op);
  }

  void update(const std::vector<Token>& toks, std::size_t& pos, std::map<std::string, Value>& scope) {
    std::string name;
    if (toks[pos].text == "++") {
      name = toks[pos + 1].text;
      pos += 2;
    } else {
      name = toks[pos].text;
      if (toks[pos + 1].text != "++")
        unsupported("loop update");
      pos += 2;
    }
    scope.at(name) = as_int(scope.at(name)) + 1;
  }

  void for_loop(const std::vector<Token>& toks, std::size_t& pos, std::map<std::string, Value>& scope) {
    expect(toks, pos, "(");
    if (toks[pos].text != "int")
      unsupported("for-loop without int counter");
    ++pos;
    auto var = toks[pos++].text;
    expect(toks, pos, "=");
    auto local = scope;
    local[var] = as_int(expression(toks, pos, local));
    expect(toks, pos, ";");
    auto cond_pos = pos;
    int guard = 0;
    while (true) {
      auto p = cond_pos;
      bool go = compare(toks, p, local);
      expect(toks, p, ";");
      auto update_pos = p;
      while (toks[p].text != ")")
        ++p;
      ++p;
      auto body_pos = p;
      if (!go) {
        skip_block(toks, body_pos);
        pos = body_pos;
        break;
      }
      if (++guard > 100000)
        unsupported("loop does not terminate");
      expect(toks, body_pos, "{");
      run_block(toks, body_pos, local);
      expect(toks, body_pos, "}");
      auto u = update_pos;
      update(toks, u, local);
    }
    for (auto& [name, value] : scope)
      value = local.at(name);
  }

  void statement(const std::vector<Token>& toks, std::size_t& pos, std::map<std::string, Value>& scope) {
    const auto& t = toks[pos];
    if (t.kind == Tok::punct && t.text == "{") {
      ++pos;
      auto local = scope;
      run_block(toks, pos, local);
      expect(toks, pos, "}");
      for (auto& [name, value] : scope)
        value = local.at(name);
      return;
    }
    if (t.kind == Tok::punct && t.text == ";") {
      ++pos;
      return;
    }
    if (t.kind == Tok::ident && t.text == "for") {
      ++pos;
      for_loop(toks, pos, scope);
      return;
    }
    if (t.kind == Tok::ident && is_type_name(t.text) && toks[pos + 1].kind == Tok::ident) {
      auto name = toks[pos + 1].text;
      pos += 2;
      if (toks[pos].text == ";") {
        ++pos;
        scope[name] = std::string();
        return;
      }
      expect(toks, pos, "=");
      scope[name] = cast(t.text, expression(toks, pos, scope));
      expect(toks, pos, ";");
      return;
    }
    if (t.kind == Tok::ident && (toks[pos + 1].text == "=" || toks[pos + 1].text == "+=") &&
        scope.count(t.text)) {
      auto name = t.text;
      auto op = toks[pos + 1].text;
      pos += 2;
      auto v = expression(toks, pos, scope);
      scope[name] = op == "=" ? v : add(scope[name], v);
      expect(toks, pos, ";");
      return;
    }
    expression(toks, pos, scope);
    expect(toks, pos, ";");
  }

  std::vector<Value> arguments(const std::vector<Token>& toks, std::size_t& pos, std::map<std::string, Value>& scope) {
    expect(toks, pos, "(");
    std::vector<Value> args;
    while (toks[pos].text != ")") {
      args.push_back(expression(toks, pos, scope));
      if (toks[pos].text == ",")
        ++pos;
      else if (toks[pos].text != ")")
        unsupported("argument list near '" + toks[pos].text + "'");
    }
    ++pos;
    return args;
  }

  void capture(const std::string& simple, const std::string& method, const std::vector<Value>& args) {
    if (!target_ || target_->simple != simple || target_->method != method)
      unsupported("call to " + simple + "." + method);
    if (target_->index >= static_cast<int>(args.size()))
      unsupported("target call has too few arguments");
    if (captured)
      unsupported("target call appears more than once");
    captured = args[static_cast<std::size_t>(target_->index)];
  }

  Value unary(const std::vector<Token>& toks, std::size_t& pos, std::map<std::string, Value>& scope) {
    if (toks[pos].text == "(" && toks[pos + 1].kind == Tok::ident && is_type_name(toks[pos + 1].text) &&
        toks[pos + 2].text == ")") {
      auto type = toks[pos + 1].text;
      pos += 3;
      return cast(type, unary(toks, pos, scope));
    }
    return postfix(toks, pos, scope);
  }

  Value primary(const std::vector<Token>& toks, std::size_t& pos, std::map<std::string, Value>& scope) {
    const auto& t = toks[pos];
    switch (t.kind) {
      case Tok::string:
        ++pos;
        return t.text;
      case Tok::character:
        ++pos;
        if (t.text.size() != 1)
          unsupported("char literal");
        return t.text[0];
      case Tok::number:
        ++pos;
        return std::stoll(t.text);
      case Tok::punct:
        if (t.text == "(") {
          ++pos;
          auto v = expression(toks, pos, scope);
          expect(toks, pos, ")");
          return v;
        }
        unsupported("token '" + t.text + "'");
      case Tok::end:
        unsupported("end of input");
      case Tok::ident:
        break;
    }
    if (t.text == "new") {
      auto type = toks[pos + 1].text;
      pos += 2;
      auto args = arguments(toks, pos, scope);
      if (auto it = classes_->find(type); it != classes_->end())
        return instantiate(it->second);
      if (type == "Date") {
        if (args.size() != 1)
          unsupported("Date constructor");
        return DateValue{is_symbolic(args[0]), is_symbolic(args[0]) ? "" : as_text(args[0])};
      }
      capture(type, "<init>", args);
      return std::string();
    }
    if (auto it = scope.find(t.text); it != scope.end()) {
      ++pos;
      return it->second;
    }
    // Static member access on a class name.
    auto cls = t.text;
    if (toks[pos + 1].text != ".")
      unsupported("unknown name " + cls);
    auto member = toks[pos + 2].text;
    pos += 3;
    if (cls == "Locale") {
      return Locale{};
    }
    if (toks[pos].text != "(")
      unsupported("static field " + cls + "." + member);
    auto args = arguments(toks, pos, scope);
    if (cls == "System" && (member == "currentTimeMillis" || member == "nanoTime") && args.empty())
      return Symbolic{};
    if ((cls == "String" && member == "valueOf") || (cls == "Long" && member == "toString") ||
        (cls == "Integer" && member == "toString")) {
      if (args.size() != 1)
        unsupported(cls + "." + member + " arity");
      if (is_symbolic(args[0]))
        return Symbolic{};
      return as_text(args[0]);
    }
    capture(cls, member, args);
    return std::string();
  }

  Value postfix(const std::vector<Token>& toks, std::size_t& pos, std::map<std::string, Value>& scope) {
    auto v = primary(toks, pos, scope);
    while (toks[pos].text == ".") {
      auto name = toks[pos + 1].text;
      pos += 2;
      auto args = arguments(toks, pos, scope);
      v = invoke(v, name, args);
    }
    return v;
  }

  Value invoke(Value& receiver, const std::string& name, const std::vector<Value>& args) {
    if (auto obj = std::get_if<std::shared_ptr<Object>>(&receiver)) {
      auto keep = *obj;
      auto result = call_method(*keep, name);
      if (std::holds_alternative<This>(result))
        return keep;
      return result;
    }
    if (auto d = std::get_if<DateValue>(&receiver)) {
      if (name != "toString" || !args.empty())
        unsupported("Date." + name);
      if (d->symbolic)
        return Symbolic{};
      unsupported("Date from a constant");
    }
    if (is_symbolic(receiver)) {
      if (name == "toString" || name == "getBytes" || name == "trim" || name == "toUpperCase" ||
          name == "toLowerCase")
        return Symbolic{};
      unsupported("method on clock value: " + name);
    }
    auto s = as_text(receiver);
    if (name == "toUpperCase" || name == "toLowerCase") {
      if (args.size() > 1 || (args.size() == 1 && !std::holds_alternative<Locale>(args[0])))
        unsupported(name + " arguments");
      for (auto& c : s)
        c = static_cast<char>(
            name == "toUpperCase" ? std::toupper(static_cast<unsigned char>(c))
                                  : std::tolower(static_cast<unsigned char>(c)));
      return s;
    }
    if (name == "replace") {
      if (args.size() != 2)
        unsupported("replace arity");
      return replace_all(s, as_text(args[0]), as_text(args[1]));
    }
    if (name == "trim") {
      auto b = s.find_first_not_of(" \t\n\r");
      auto e = s.find_last_not_of(" \t\n\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    }
    if ((name == "toString" || name == "getBytes") && args.empty())
      return s;
    unsupported("String." + name);
  }
};

/// Parses `class Name { String f = expr; Name m() { ... } String getValue() { ... } }`.
ClassDef parse_class(std::string_view text) {
  ClassDef cls;
  cls.tokens = tokenize(text);
  const auto& toks = cls.tokens;
  std::size_t pos = 0;
  while (toks[pos].kind == Tok::ident && toks[pos].text != "class")
    ++pos; // modifiers
  if (toks[pos].text != "class")
    unsupported("helper declaration is not a class");
  cls.name = toks[pos + 1].text;
  pos += 2;
  if (toks[pos].text != "{")
    unsupported("helper class with supertypes");
  ++pos;
  while (toks[pos].text != "}") {
    if (toks[pos].kind != Tok::ident || toks[pos + 1].kind != Tok::ident)
      unsupported("helper member");
    auto name = toks[pos + 1].text;
    if (toks[pos + 2].text == "=") {
      cls.fields.emplace_back(name, pos + 3);
      while (toks[pos].text != ";")
        ++pos;
      ++pos;
    } else if (toks[pos + 2].text == "(" && toks[pos + 3].text == ")" && toks[pos + 4].text == "{") {
      cls.methods[name] = MethodDef{pos + 5};
      pos += 5;
      int depth = 1;
      while (depth > 0) {
        if (toks[pos].kind == Tok::end)
          unsupported("unbalanced helper method");
        if (toks[pos].text == "{")
          ++depth;
        if (toks[pos].text == "}")
          --depth;
        ++pos;
      }
    } else {
      unsupported("helper member shape");
    }
  }
  return cls;
}

} // namespace

std::string effective_value_oracle(
    const std::vector<std::string>& helper_declarations,
    const std::vector<std::string>& statements,
    const ApiSpec& spec) {
  if (!spec.factory)
    unsupported("API without a factory");
  std::map<std::string, ClassDef> classes;
  for (const auto& helper : helper_declarations) {
    auto cls = parse_class(helper);
    auto name = cls.name;
    classes.emplace(name, std::move(cls));
  }
  Target target{spec.simple_name(), spec.factory->method, spec.factory->string_parameter_index};
  Interpreter interp(&classes, target);
  std::string source;
  for (const auto& s : statements)
    source += s + "\n";
  auto toks = tokenize(source);
  std::size_t pos = 0;
  std::map<std::string, Value> scope;
  interp.run_block(toks, pos, scope);
  if (toks[pos].kind != Tok::end)
    unsupported("stray '}'");
  if (!interp.captured)
    unsupported("no call to " + spec.simple_name());
  if (is_symbolic(*interp.captured))
    return std::string(kSystemTimeValue);
  return as_text(*interp.captured);
}

std::string evaluate_string_expression(std::string_view expression) {
  std::map<std::string, ClassDef> classes;
  Interpreter interp(&classes, std::nullopt);
  auto toks = tokenize(expression);
  std::size_t pos = 0;
  std::map<std::string, Value> scope;
  auto v = interp.expression(toks, pos, scope);
  if (toks[pos].kind != Tok::end)
    unsupported("trailing tokens after expression");
  if (is_symbolic(v))
    return std::string(kSystemTimeValue);
  return as_text(v);
}

} // namespace masc
