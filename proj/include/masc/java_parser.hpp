#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <tree_sitter/api.h>

namespace masc {

struct SyntaxIssue {
  int line = 0; // 1-based
  std::string message;
};

/// Owning wrapper around a tree-sitter Java parse.
class JavaTree {
 public:
  explicit JavaTree(std::string source);
  ~JavaTree();
  JavaTree(const JavaTree&) = delete;
  JavaTree& operator=(const JavaTree&) = delete;

  const std::string& source() const {
    return source_;
  }
  TSNode root() const;

  std::string_view text(TSNode node) const;

  /// ERROR and MISSING nodes, plus top-level children that are not package,
  /// import or type declarations (the grammar tolerates stray statements).
  std::vector<SyntaxIssue> syntax_issues() const;
  bool ok() const {
    return syntax_issues().empty();
  }

 private:
  std::string source_;
  TSTree* tree_ = nullptr;
};

// Thin node helpers.
std::string_view node_type(TSNode node);
TSNode field(TSNode node, const char* name);
std::vector<TSNode> named_children(TSNode node);
std::vector<TSNode> children(TSNode node);
/// 1-based line of the node start.
int start_line(TSNode node);
int end_line(TSNode node);
bool is_null(TSNode node);

} // namespace masc
