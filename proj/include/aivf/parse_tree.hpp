#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aivf/rational.hpp"
#include "aivf/source_model.hpp"

namespace aivf {

/// A node of a parse tree. Children are kept in ascending label order.
struct TreeNode {
  struct Child;

  std::vector<Child> children;
  /// 1-based codeword index; absent on complete internal nodes and on a
  /// complete root.
  std::optional<int> codeword;
  /// Type of the tree used after this node's word is parsed. Only meaningful
  /// when `codeword` is set.
  int target = 0;

  std::size_t node_count() const;
  const TreeNode* child(Symbol label) const;
  bool operator==(const TreeNode& other) const;
};

struct TreeNode::Child {
  Symbol label;
  TreeNode node;

  bool operator==(const Child& other) const = default;
};

/// One dictionary word of a parse tree.
struct DictEntry {
  int index = 0;
  std::vector<Symbol> word;
  int target = 0;
  /// p_{C_i}(w); zero until filled in by occurrence_probs().
  Rational occurrence_prob;

  std::size_t length() const { return word.size(); }
};

/// A type-i parse tree with its dictionary. Immutable value type.
class ParseTree {
 public:
  /// Wraps an already-labelled node structure (for example one read from a
  /// code file). No validation is done here; see validate_tree().
  ParseTree(int type, TreeNode root, std::size_t alphabet_size);

  /// Builds a tree from a node shape, assigning codewords with the standard
  /// rule: every non-root node with fewer than |S| children gets a codeword in
  /// depth-first label order, and the root gets the last index (the empty word)
  /// when it has fewer than |S| - type children.
  static ParseTree from_shape(int type, TreeNode shape, std::size_t alphabet_size);

  /// The single-node building block of the given type. Its only word is the
  /// empty word, which leads back to a tree of the same type.
  static ParseTree root_only(int type, std::size_t alphabet_size);

  int type() const { return type_; }
  std::size_t alphabet_size() const { return alphabet_size_; }
  const TreeNode& root() const { return root_; }
  /// Dictionary entries sorted by codeword index.
  const std::vector<DictEntry>& dictionary() const { return dict_; }
  std::size_t codeword_count() const { return dict_.size(); }
  std::size_t node_count() const { return root_.node_count(); }

  /// Shape-only serialization, e.g. `(0()1(0()))`; equal shapes give equal
  /// strings. Used for deterministic ordering and hashing.
  std::string canonical() const;

  bool operator==(const ParseTree& other) const;

 private:
  int type_;
  std::size_t alphabet_size_;
  TreeNode root_;
  std::vector<DictEntry> dict_;
};

struct Violation {
  std::string rule;
  std::vector<Symbol> path;
  std::string detail;
};

std::string to_string(const Violation& v);

/// Checks the structural properties of a type-i parse tree, its codeword
/// assignment (including the empty-word rule for an incomplete root and its
/// target range), index uniqueness, and the 2D node bound. Returns every
/// violation found; an empty result means the tree is valid.
std::vector<Violation> validate_tree(const ParseTree& t, const SourceModel& src);

/// Throws Error(InvalidTree) carrying the first violation.
void require_valid(const ParseTree& t, const SourceModel& src);

/// Product of symbol probabilities; 1 for the empty word.
Rational word_prob(const SourceModel& src, std::span<const Symbol> word);

/// Probability of `word` given that the parse starts with a symbol a_u, u >= type.
Rational conditional_word_prob(const SourceModel& src, int type, std::span<const Symbol> word);

/// Dictionary annotated with occurrence probabilities p_{C_i}(w) under
/// longest-prefix parsing. Precondition: the tree is valid for `src`.
std::vector<DictEntry> occurrence_probs(const ParseTree& t, const SourceModel& src);

Rational expected_parse_length(const ParseTree& t, const SourceModel& src);

/// q_j(t_i) for j = 0..|S|-2.
RationalVector transition_probs(const ParseTree& t, const SourceModel& src);

struct TreeStats {
  Rational expected_length;
  RationalVector q;
};

/// Expected parse length and transition vector in one pass.
TreeStats tree_stats(const ParseTree& t, const SourceModel& src);

/// Attaches `left` (type 0) under a new edge a_i at the root of `right`
/// (type i+1). Valid for 0 <= i <= |S|-3.
ParseTree tie(int i, const ParseTree& left, const ParseTree& right);

/// New root with edges a_{|S|-2} -> left and a_{|S|-1} -> right (both type 0).
ParseTree tie_last(const ParseTree& left, const ParseTree& right);

/// Inverse of tie / tie_last for a tree with at least two codewords.
std::pair<ParseTree, ParseTree> untie(const ParseTree& t);

}  // namespace aivf
