#include "masc/target_analyzer.hpp"

#include <algorithm>
#include <functional>
#include <future>
#include <set>

#include "json_util.hpp"
#include "masc/error.hpp"

namespace masc {

namespace fs = std::filesystem;

namespace {

bool is_type_declaration(std::string_view type) {
  return type == "class_declaration" || type == "interface_declaration" || type == "enum_declaration" ||
         type == "record_declaration" || type == "annotation_type_declaration";
}

std::string strip_whitespace(std::string_view text) {
  std::string out;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c)))
      out += c;
  return out;
}

std::string strip_generics(std::string_view text) {
  std::string out;
  int depth = 0;
  for (char c : text) {
    if (c == '<')
      ++depth;
    else if (c == '>')
      --depth;
    else if (depth == 0 && !std::isspace(static_cast<unsigned char>(c)))
      out += c;
  }
  return out;
}

TSNode first_child_of_type(TSNode node, std::string_view type) {
  for (auto child : children(node))
    if (node_type(child) == type)
      return child;
  return TSNode{};
}

std::string parameter_signature(const JavaTree& tree, TSNode params) {
  std::vector<std::string> types;
  for (auto p : named_children(params)) {
    auto type = node_type(p);
    if (type == "formal_parameter") {
      auto t = strip_whitespace(tree.text(field(p, "type")));
      auto dims = field(p, "dimensions");
      if (!is_null(dims))
        t += strip_whitespace(tree.text(dims));
      types.push_back(t);
    } else if (type == "spread_parameter") {
      for (auto c : named_children(p)) {
        auto ct = node_type(c);
        if (ct != "modifiers" && ct != "variable_declarator" && ct != "annotation" && ct != "marker_annotation") {
          types.push_back(strip_whitespace(tree.text(c)) + "...");
          break;
        }
      }
    }
  }
  std::string out = "(";
  for (std::size_t i = 0; i < types.size(); ++i)
    out += (i ? ", " : "") + types[i];
  return out + ")";
}

/// Records class and method scopes plus declared types.
class ScopeWalker {
 public:
  ScopeWalker(const JavaTree& tree, SourceFile& file) : tree_(tree), file_(file) {}

  void walk(TSNode node, const std::string& cls, const std::string& dotted, const std::optional<std::string>& method) {
    auto type = node_type(node);
    if (is_type_declaration(type)) {
      auto name = std::string(tree_.text(field(node, "name")));
      auto qualified = cls.empty() ? (file_.package.empty() ? name : file_.package + "." + name) : cls + "$" + name;
      auto dotted_name =
          dotted.empty() ? (file_.package.empty() ? name : file_.package + "." + name) : dotted + "." + name;
      file_.declared_types.push_back(dotted_name);
      auto body = field(node, "body");
      for (auto child : children(node)) {
        if (!is_null(body) && ts_node_eq(child, body)) {
          add_scope(body, qualified, std::nullopt);
          walk_children(body, qualified, dotted_name, std::nullopt);
        } else {
          walk(child, cls, dotted, method);
        }
      }
      return;
    }
    if (type == "object_creation_expression") {
      auto body = first_child_of_type(node, "class_body");
      for (auto child : children(node)) {
        if (!is_null(body) && ts_node_eq(child, body)) {
          auto anon = cls + "$" + std::to_string(++anonymous_[cls]);
          add_scope(body, anon, std::nullopt);
          walk_children(body, anon, anon, std::nullopt);
        } else {
          walk(child, cls, dotted, method);
        }
      }
      return;
    }
    if (type == "method_declaration" || type == "constructor_declaration") {
      auto sig = type == "method_declaration" ? std::string(tree_.text(field(node, "name"))) : std::string("<init>");
      sig += parameter_signature(tree_, field(node, "parameters"));
      auto body = field(node, "body");
      if (!is_null(body))
        add_scope(body, cls, sig);
      walk_children(node, cls, dotted, sig);
      return;
    }
    if (type == "static_initializer") {
      auto block = first_child_of_type(node, "block");
      if (!is_null(block))
        add_scope(block, cls, "<clinit>");
      walk_children(node, cls, dotted, std::string("<clinit>"));
      return;
    }
    if (type == "block" && !is_null(ts_node_parent(node)) && node_type(ts_node_parent(node)) == "class_body") {
      add_scope(node, cls, "<init-block>");
      walk_children(node, cls, dotted, std::string("<init-block>"));
      return;
    }
    walk_children(node, cls, dotted, method);
  }

 private:
  const JavaTree& tree_;
  SourceFile& file_;
  std::map<std::string, int> anonymous_;

  void walk_children(
      TSNode node,
      const std::string& cls,
      const std::string& dotted,
      const std::optional<std::string>& method) {
    for (auto child : children(node))
      walk(child, cls, dotted, method);
  }

  void add_scope(TSNode node, const std::string& cls, std::optional<std::string> method) {
    file_.scopes.push_back({ts_node_start_byte(node), ts_node_end_byte(node), cls, std::move(method)});
  }
};

std::string import_text(const JavaTree& tree, TSNode node) {
  std::string name;
  bool is_static = false;
  for (auto child : children(node)) {
    auto type = node_type(child);
    if (type == "static")
      is_static = true;
    else if (type == "identifier" || type == "scoped_identifier")
      name = std::string(tree.text(child));
    else if (type == "asterisk")
      name += ".*";
  }
  return is_static ? std::string() : strip_whitespace(name);
}

class UsageWalker {
 public:
  UsageWalker(const SourceFile& file, std::size_t index, const ApiModel* model, SourceModel& out)
      : file_(file), tree_(*file.tree), index_(index), model_(model), out_(out) {}

  void walk(TSNode node) {
    auto type = node_type(node);
    if (type == "method_invocation") {
      auto object = field(node, "object");
      if (!is_null(object)) {
        auto ot = node_type(object);
        if (ot == "identifier" || ot == "field_access" || ot == "scoped_identifier")
          record(node, strip_whitespace(tree_.text(object)), std::string(tree_.text(field(node, "name"))),
                 field(node, "arguments"));
      }
    } else if (type == "object_creation_expression") {
      record(node, strip_generics(tree_.text(field(node, "type"))), "<init>", field(node, "arguments"));
    } else if (type == "superclass" || type == "super_interfaces" || type == "extends_interfaces") {
      std::function<void(TSNode)> types = [&](TSNode n) {
        auto nt = node_type(n);
        if (nt == "type_identifier" || nt == "scoped_type_identifier" || nt == "generic_type") {
          record(n, strip_generics(tree_.text(n)), "", TSNode{});
          return;
        }
        for (auto c : named_children(n))
          types(c);
      };
      for (auto c : named_children(node))
        types(c);
      return;
    }
    for (auto child : children(node))
      walk(child);
  }

 private:
  const SourceFile& file_;
  const JavaTree& tree_;
  std::size_t index_;
  const ApiModel* model_;
  SourceModel& out_;

  std::optional<std::string> resolve(const std::string& name) const {
    if (name.empty())
      return std::nullopt;
    auto known = [&](const std::string& q) { return !model_ || model_->find(q) != nullptr; };
    if (name.find('.') != std::string::npos)
      return known(name) ? std::optional(name) : std::nullopt;
    if (!std::isupper(static_cast<unsigned char>(name[0])))
      return std::nullopt;
    for (const auto& imp : file_.imports)
      if (imp.size() > name.size() && imp.ends_with("." + name))
        return known(imp) ? std::optional(imp) : std::nullopt;
    for (const auto& declared : file_.declared_types)
      if (declared == name || declared.ends_with("." + name))
        return std::nullopt;
    if (model_) {
      for (const auto& imp : file_.imports) {
        if (!imp.ends_with(".*"))
          continue;
        auto candidate = imp.substr(0, imp.size() - 1) + name;
        if (model_->find(candidate))
          return candidate;
      }
    }
    return std::nullopt;
  }

  void record(TSNode node, const std::string& type_name, std::string member, TSNode arguments) {
    auto api = resolve(type_name);
    if (!api)
      return;
    UsageSite site;
    site.api = *api;
    site.member = std::move(member);
    site.file_index = index_;
    site.line = start_line(node);
    site.range = {ts_node_start_byte(node), ts_node_end_byte(node)};
    if (!is_null(arguments))
      for (auto arg : named_children(arguments))
        if (node_type(arg) != "line_comment" && node_type(arg) != "block_comment")
          site.arguments.push_back({ts_node_start_byte(arg), ts_node_end_byte(arg)});
    out_.usages[site.api].push_back(std::move(site));
  }
};

struct Parsed {
  std::string path;
  std::shared_ptr<const JavaTree> tree;
  std::vector<SyntaxIssue> issues;
  std::string error;
};

Parsed parse_one(const fs::path& root, const fs::path& file) {
  Parsed p;
  p.path = fs::relative(file, root).generic_string();
  try {
    auto tree = std::make_shared<JavaTree>(detail::read_file(file));
    p.issues = tree->syntax_issues();
    p.tree = std::move(tree);
  } catch (const std::exception& e) {
    p.error = e.what();
  }
  return p;
}

std::string indent_of_line(std::string_view source, std::size_t offset) {
  auto line_start = source.rfind('\n', offset == 0 ? 0 : offset - 1);
  line_start = line_start == std::string_view::npos ? 0 : line_start + 1;
  std::string indent;
  for (auto i = line_start; i < source.size() && (source[i] == ' ' || source[i] == '\t'); ++i)
    indent += source[i];
  return indent;
}

Anchor anchor_at(const JavaTree& tree, std::size_t offset) {
  const auto& src = tree.source();
  Anchor a;
  a.offset = offset;
  a.line = 1 + static_cast<int>(std::count(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
  auto line_start = offset == 0 ? std::string::npos : src.rfind('\n', offset - 1);
  a.column = static_cast<int>(offset - (line_start == std::string::npos ? 0 : line_start + 1)) + 1;
  return a;
}

SeedLocation make_location(
    const SourceFile& file,
    std::size_t offset,
    std::size_t indent_from,
    LocationKind kind,
    bool nested) {
  SeedLocation loc;
  loc.file = file.path;
  loc.anchor = anchor_at(*file.tree, offset);
  loc.kind = kind;
  if (const auto* scope = file.innermost_scope(offset)) {
    loc.enclosing_class = scope->class_name;
    loc.enclosing_method = scope->method;
  }
  loc.indent = indent_of_line(file.tree->source(), indent_from) + (nested ? "    " : "");
  return loc;
}

/// Anchor just inside the opening brace of a body node.
std::optional<std::size_t> after_open_brace(TSNode body) {
  for (auto child : children(body))
    if (node_type(child) == "{")
      return ts_node_end_byte(child);
  return std::nullopt;
}

class ExhaustiveWalker {
 public:
  ExhaustiveWalker(const SourceFile& file, const PlacementKinds& kinds, std::vector<SeedLocation>& out)
      : file_(file), kinds_(kinds), out_(out) {}

  void walk(TSNode node) {
    auto type = node_type(node);
    auto parent = ts_node_parent(node);
    auto parent_type = is_null(parent) ? std::string_view() : node_type(parent);
    if (type == "class_body" && parent_type == "class_declaration") {
      emit(node, LocationKind::class_body);
    } else if (type == "class_body" && parent_type == "object_creation_expression") {
      emit(node, LocationKind::anonymous_inner_body);
    } else if (type == "block" &&
               (parent_type == "method_declaration" || parent_type == "static_initializer" ||
                parent_type == "class_body")) {
      emit(node, LocationKind::method_body_start);
    } else if (type == "constructor_body") {
      emit_constructor(node);
    } else if (type == "block" && parent_type == "if_statement") {
      bool branch = ts_node_eq(node, field(parent, "consequence")) || ts_node_eq(node, field(parent, "alternative"));
      if (branch)
        emit(node, LocationKind::statement_in_conditional);
    }
    for (auto child : children(node))
      walk(child);
  }

 private:
  const SourceFile& file_;
  const PlacementKinds& kinds_;
  std::vector<SeedLocation>& out_;

  void emit(TSNode body, LocationKind kind) {
    if (!kinds_.count(kind))
      return;
    if (auto offset = after_open_brace(body))
      out_.push_back(make_location(file_, *offset, ts_node_start_byte(body), kind, true));
  }

  void emit_constructor(TSNode body) {
    if (!kinds_.count(LocationKind::method_body_start))
      return;
    auto offset = after_open_brace(body);
    if (!offset)
      return;
    auto named = named_children(body);
    if (!named.empty() && node_type(named.front()) == "explicit_constructor_invocation")
      offset = ts_node_end_byte(named.front());
    out_.push_back(make_location(file_, *offset, ts_node_start_byte(body), LocationKind::method_body_start, true));
  }
};

bool is_jump(std::string_view type) {
  return type == "return_statement" || type == "throw_statement" || type == "break_statement" ||
         type == "continue_statement" || type == "yield_statement";
}

/// Statement containing `node` whose parent is a statement list, or null.
TSNode enclosing_statement(TSNode node) {
  auto cur = node;
  while (true) {
    auto parent = ts_node_parent(cur);
    if (is_null(parent))
      return TSNode{};
    auto pt = node_type(parent);
    if (pt == "block" || pt == "constructor_body" || pt == "switch_block_statement_group") {
      // Instance initializer blocks are statement lists too.
      return cur;
    }
    if (pt == "class_body" || pt == "interface_body" || pt == "enum_body" || pt == "program" ||
        pt == "enum_body_declarations")
      return TSNode{};
    cur = parent;
  }
}

} // namespace

const ScopeSpan* SourceFile::innermost_scope(std::size_t offset) const {
  const ScopeSpan* best = nullptr;
  for (const auto& s : scopes)
    if (s.begin < offset && offset < s.end && (!best || s.begin >= best->begin))
      best = &s;
  return best;
}

const SourceFile* SourceModel::find_file(std::string_view path) const {
  for (const auto& f : files)
    if (f.path == path)
      return &f;
  return nullptr;
}

SourceModel scan(const fs::path& root, const ApiModel* model, int jobs) {
  if (!fs::is_directory(root))
    throw NotFoundError("project directory not found: " + root.string());
  std::vector<fs::path> paths;
  for (const auto& entry : fs::recursive_directory_iterator(root))
    if (entry.is_regular_file() && entry.path().extension() == ".java")
      paths.push_back(entry.path());
  if (paths.empty())
    throw NotFoundError("no .java files under " + root.string());
  std::sort(paths.begin(), paths.end(), [&](const fs::path& a, const fs::path& b) {
    return fs::relative(a, root).generic_string() < fs::relative(b, root).generic_string();
  });

  std::vector<Parsed> parsed(paths.size());
  auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1) {
    for (std::size_t i = 0; i < paths.size(); ++i)
      parsed[i] = parse_one(root, paths[i]);
  } else {
    std::vector<std::future<void>> tasks;
    for (std::size_t w = 0; w < workers; ++w)
      tasks.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < paths.size(); i += workers)
          parsed[i] = parse_one(root, paths[i]);
      }));
    for (auto& t : tasks)
      t.get();
  }

  SourceModel out;
  out.root = root;
  for (auto& p : parsed) {
    if (!p.error.empty()) {
      out.diagnostics.push_back({p.path, 0, p.error});
      continue;
    }
    if (!p.issues.empty()) {
      out.diagnostics.push_back(
          {p.path, p.issues.front().line,
           p.issues.front().message + " (" + std::to_string(p.issues.size()) + " issue(s)); file excluded"});
      continue;
    }
    SourceFile file;
    file.path = p.path;
    file.tree = p.tree;
    auto root_node = file.tree->root();
    for (auto child : named_children(root_node)) {
      auto type = node_type(child);
      if (type == "package_declaration") {
        for (auto c : named_children(child))
          if (node_type(c) == "identifier" || node_type(c) == "scoped_identifier")
            file.package = strip_whitespace(file.tree->text(c));
      } else if (type == "import_declaration") {
        auto text = import_text(*file.tree, child);
        if (!text.empty())
          file.imports.push_back(text);
      }
    }
    ScopeWalker(*file.tree, file).walk(root_node, "", "", std::nullopt);
    out.files.push_back(std::move(file));
  }
  for (std::size_t i = 0; i < out.files.size(); ++i)
    UsageWalker(out.files[i], i, model, out).walk(out.files[i].tree->root());
  return out;
}

std::vector<SeedLocation> locations_main(const SourceModel& model) {
  std::vector<SeedLocation> out;
  for (const auto& file : model.files) {
    const auto& tree = *file.tree;
    std::function<void(TSNode)> visit = [&](TSNode node) {
      if (node_type(node) == "method_declaration" && tree.text(field(node, "name")) == "main") {
        auto mods = first_child_of_type(node, "modifiers");
        bool is_static = !is_null(mods) && tree.text(mods).find("static") != std::string_view::npos;
        bool is_void = tree.text(field(node, "type")) == "void";
        auto params = parameter_signature(tree, field(node, "parameters"));
        auto body = field(node, "body");
        if (is_static && is_void && (params == "(String[])" || params == "(String...)") && !is_null(body)) {
          if (auto offset = after_open_brace(body))
            out.push_back(
                make_location(file, *offset, ts_node_start_byte(body), LocationKind::main_entry, true));
        }
      }
      for (auto child : children(node))
        visit(child);
    };
    visit(tree.root());
  }
  if (out.empty())
    throw NotFoundError("no static void main(String[]) entry point");
  return out;
}

std::vector<SeedLocation> locations_similarity(
    const SourceModel& model,
    const MisuseCase& misuse,
    const ApiModel* api_model) {
  std::vector<std::string> apis{misuse.api_type()};
  int string_index = 0;
  if (api_model) {
    if (const auto* spec = api_model->find(misuse.api_type())) {
      apis.insert(apis.end(), spec->known_subtypes.begin(), spec->known_subtypes.end());
      if (spec->factory)
        string_index = spec->factory->string_parameter_index;
    }
  }
  auto member = misuse.api_member();

  std::vector<const UsageSite*> sites;
  for (const auto& api : apis) {
    auto it = model.usages.find(api);
    if (it == model.usages.end())
      continue;
    for (const auto& site : it->second)
      if (misuse.api_kind == ApiKind::flexible || site.member == member)
        sites.push_back(&site);
  }
  std::sort(sites.begin(), sites.end(), [](const UsageSite* a, const UsageSite* b) {
    return std::tie(a->file_index, a->range.begin) < std::tie(b->file_index, b->range.begin);
  });

  std::vector<SeedLocation> out;
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
  for (const auto* site : sites) {
    const auto& file = model.files[site->file_index];
    auto node = ts_node_descendant_for_byte_range(
        file.tree->root(), static_cast<uint32_t>(site->range.begin), static_cast<uint32_t>(site->range.end));
    auto statement = enclosing_statement(node);
    if (is_null(statement))
      continue;
    bool before = is_jump(node_type(statement));
    std::size_t offset = before ? ts_node_start_byte(statement) : ts_node_end_byte(statement);
    auto loc = make_location(file, offset, ts_node_start_byte(statement), LocationKind::similar_usage_site, false);
    loc.usage_line = site->line;
    if (misuse.api_kind == ApiKind::restrictive && static_cast<int>(site->arguments.size()) > string_index)
      loc.usage_argument = site->arguments[static_cast<std::size_t>(string_index)];
    auto key = std::make_tuple(site->file_index, offset, loc.usage_argument ? loc.usage_argument->begin : 0);
    if (!seen.insert(key).second)
      continue;
    out.push_back(std::move(loc));
  }
  return out;
}

std::vector<SeedLocation> locations_exhaustive(const SourceModel& model, const PlacementKinds& kinds) {
  if (kinds.empty())
    throw ValidationError("placement kinds", "constraint set must not be empty");
  std::vector<SeedLocation> out;
  for (const auto& file : model.files)
    ExhaustiveWalker(file, kinds, out).walk(file.tree->root());
  return out;
}

nlohmann::json to_json(const SeedLocation& location) {
  nlohmann::json j;
  j["file"] = location.file;
  j["line"] = location.anchor.line;
  j["column"] = location.anchor.column;
  j["offset"] = location.anchor.offset;
  j["kind"] = to_string(location.kind);
  j["enclosing_class"] = location.enclosing_class;
  j["enclosing_method"] = location.enclosing_method ? nlohmann::json(*location.enclosing_method) : nlohmann::json();
  if (location.usage_line > 0)
    j["usage_line"] = location.usage_line;
  return j;
}

} // namespace masc
