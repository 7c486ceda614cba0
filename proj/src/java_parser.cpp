#include "masc/java_parser.hpp"

#include <cstring>
#include <set>

#include "masc/error.hpp"

extern "C" const TSLanguage* tree_sitter_java(void);

namespace masc {

namespace {

const std::set<std::string_view>& top_level_types() {
  static const std::set<std::string_view> types = {
      "package_declaration", "import_declaration",          "class_declaration",  "interface_declaration",
      "enum_declaration",    "annotation_type_declaration", "record_declaration", "module_declaration",
      "line_comment",        "block_comment",
  };
  return types;
}

void collect_errors(TSNode node, std::vector<SyntaxIssue>& out) {
  if (ts_node_is_missing(node)) {
    out.push_back({start_line(node), std::string("missing ") + ts_node_type(node)});
    return;
  }
  if (ts_node_is_error(node)) {
    out.push_back({start_line(node), "syntax error"});
    return;
  }
  if (!ts_node_has_error(node))
    return;
  for (auto child : children(node))
    collect_errors(child, out);
}

} // namespace

JavaTree::JavaTree(std::string source) : source_(std::move(source)) {
  TSParser* parser = ts_parser_new();
  ts_parser_set_language(parser, tree_sitter_java());
  tree_ = ts_parser_parse_string(parser, nullptr, source_.data(), static_cast<uint32_t>(source_.size()));
  ts_parser_delete(parser);
  if (!tree_)
    throw ParseError("parser returned no tree");
}

JavaTree::~JavaTree() {
  if (tree_)
    ts_tree_delete(tree_);
}

TSNode JavaTree::root() const {
  return ts_tree_root_node(tree_);
}

std::string_view JavaTree::text(TSNode node) const {
  if (ts_node_is_null(node))
    return {};
  auto begin = ts_node_start_byte(node);
  auto end = ts_node_end_byte(node);
  return std::string_view(source_).substr(begin, end - begin);
}

std::vector<SyntaxIssue> JavaTree::syntax_issues() const {
  std::vector<SyntaxIssue> out;
  auto r = root();
  collect_errors(r, out);
  for (auto child : named_children(r)) {
    auto type = node_type(child);
    if (!top_level_types().count(type) && type != "ERROR")
      out.push_back({start_line(child), "unexpected top-level " + std::string(type)});
  }
  return out;
}

std::string_view node_type(TSNode node) {
  return ts_node_type(node);
}

TSNode field(TSNode node, const char* name) {
  return ts_node_child_by_field_name(node, name, static_cast<uint32_t>(std::strlen(name)));
}

std::vector<TSNode> children(TSNode node) {
  std::vector<TSNode> out;
  TSTreeCursor cursor = ts_tree_cursor_new(node);
  if (ts_tree_cursor_goto_first_child(&cursor)) {
    do {
      out.push_back(ts_tree_cursor_current_node(&cursor));
    } while (ts_tree_cursor_goto_next_sibling(&cursor));
  }
  ts_tree_cursor_delete(&cursor);
  return out;
}

std::vector<TSNode> named_children(TSNode node) {
  std::vector<TSNode> out;
  for (auto child : children(node))
    if (ts_node_is_named(child))
      out.push_back(child);
  return out;
}

int start_line(TSNode node) {
  return static_cast<int>(ts_node_start_point(node).row) + 1;
}

int end_line(TSNode node) {
  return static_cast<int>(ts_node_end_point(node).row) + 1;
}

bool is_null(TSNode node) {
  return ts_node_is_null(node);
}

} // namespace masc
