#include "aivf/parse_tree.hpp"

#include <algorithm>
#include <set>

#include "aivf/error.hpp"

namespace aivf {

std::size_t TreeNode::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.node.node_count();
  return n;
}

const TreeNode* TreeNode::child(Symbol label) const {
  for (const auto& c : children) {
    if (c.label == label) return &c.node;
  }
  return nullptr;
}

bool TreeNode::operator==(const TreeNode& other) const {
  return codeword == other.codeword && (!codeword || target == other.target) && children == other.children;
}

namespace {

void collect_dictionary(const TreeNode& node, std::vector<Symbol>& path, bool is_root,
                        std::vector<DictEntry>& out, std::optional<DictEntry>& lambda) {
  if (node.codeword) {
    DictEntry e;
    e.index = *node.codeword;
    e.word = path;
    e.target = node.target;
    if (is_root) {
      lambda = std::move(e);
    } else {
      out.push_back(std::move(e));
    }
  }
  for (const auto& c : node.children) {
    path.push_back(c.label);
    collect_dictionary(c.node, path, false, out, lambda);
    path.pop_back();
  }
}

void assign_codewords(TreeNode& node, std::size_t alphabet_size, int& next) {
  if (node.children.size() < alphabet_size) {
    node.codeword = next++;
    node.target = static_cast<int>(node.children.size());
  } else {
    node.codeword.reset();
    node.target = 0;
  }
  for (auto& c : node.children) assign_codewords(c.node, alphabet_size, next);
}

void canonical_into(const TreeNode& node, std::string& out) {
  out.push_back('(');
  for (const auto& c : node.children) {
    out += std::to_string(c.label);
    canonical_into(c.node, out);
  }
  out.push_back(')');
}

}  // namespace

ParseTree::ParseTree(int type, TreeNode root, std::size_t alphabet_size)
    : type_(type), alphabet_size_(alphabet_size), root_(std::move(root)) {
  std::vector<Symbol> path;
  std::optional<DictEntry> lambda;
  collect_dictionary(root_, path, true, dict_, lambda);
  if (lambda) dict_.push_back(std::move(*lambda));
  std::stable_sort(dict_.begin(), dict_.end(), [](const DictEntry& a, const DictEntry& b) { return a.index < b.index; });
}

ParseTree ParseTree::from_shape(int type, TreeNode shape, std::size_t alphabet_size) {
  int next = 1;
  for (auto& c : shape.children) assign_codewords(c.node, alphabet_size, next);
  const auto j = static_cast<int>(shape.children.size());
  if (static_cast<std::size_t>(j + type) < alphabet_size) {
    shape.codeword = next;
    shape.target = type + j;
  } else {
    shape.codeword.reset();
    shape.target = 0;
  }
  return ParseTree(type, std::move(shape), alphabet_size);
}

ParseTree ParseTree::root_only(int type, std::size_t alphabet_size) {
  return from_shape(type, TreeNode{}, alphabet_size);
}

std::string ParseTree::canonical() const {
  std::string s;
  canonical_into(root_, s);
  return s;
}

bool ParseTree::operator==(const ParseTree& other) const {
  return type_ == other.type_ && alphabet_size_ == other.alphabet_size_ && root_ == other.root_;
}

std::string to_string(const Violation& v) {
  std::string path = "root";
  for (Symbol s : v.path) path += "/a" + std::to_string(s);
  return "(" + v.rule + ") at " + path + ": " + v.detail;
}

namespace {

struct Validator {
  const ParseTree& tree;
  std::size_t alphabet;
  std::vector<Violation> out;
  std::vector<int> indices;
  std::vector<Symbol> path;

  void report(std::string rule, std::string detail) { out.push_back({std::move(rule), path, std::move(detail)}); }

  bool labels_are_range(const TreeNode& node, Symbol first) const {
    for (std::size_t k = 0; k < node.children.size(); ++k) {
      if (node.children[k].label != first + static_cast<Symbol>(k)) return false;
    }
    return true;
  }

  void check_codeword(const TreeNode& node, bool wants_codeword, int expected_target) {
    if (wants_codeword && !node.codeword) {
      report("codeword", "incomplete node carries no codeword");
    } else if (!wants_codeword && node.codeword) {
      report("codeword", "complete node carries codeword " + std::to_string(*node.codeword));
    } else if (node.codeword) {
      indices.push_back(*node.codeword);
      if (node.target != expected_target) {
        report("codeword", "target type " + std::to_string(node.target) + ", expected " + std::to_string(expected_target));
      }
    }
  }

  void visit_inner(const TreeNode& node) {
    const std::size_t j = node.children.size();
    if (j == alphabet - 1 && j > 0) {
      report("p3", "internal node has |S|-1 = " + std::to_string(j) + " children");
    }
    if (!labels_are_range(node, 0)) {
      report("p3", "child labels must be a_0..a_" + std::to_string(static_cast<int>(j) - 1));
    }
    check_codeword(node, j < alphabet, static_cast<int>(j));
    for (const auto& c : node.children) {
      path.push_back(c.label);
      visit_inner(c.node);
      path.pop_back();
    }
  }

  void run() {
    const int type = tree.type();
    if (type < 0 || alphabet < 2 || static_cast<std::size_t>(type) > alphabet - 2) {
      report("type", "type index " + std::to_string(type) + " outside [0, " + std::to_string(alphabet - 2) + "]");
      return;
    }
    const TreeNode& root = tree.root();
    const std::size_t j = root.children.size();
    const std::size_t max_j = alphabet - static_cast<std::size_t>(type);
    if (j < 1 || j > max_j) {
      report("p1", "root has " + std::to_string(j) + " children, expected 1.." + std::to_string(max_j));
    }
    if (!labels_are_range(root, type)) {
      report("p1", "root child labels must start at a_" + std::to_string(type) + " and be consecutive");
    }
    const bool incomplete = j < max_j;
    if (incomplete && static_cast<std::size_t>(type) + j > alphabet - 2) {
      report("lambda-range", "empty word would lead to tree type " + std::to_string(type + static_cast<int>(j)) +
                                 " > |S|-2 = " + std::to_string(alphabet - 2));
    }
    check_codeword(root, incomplete, type + static_cast<int>(j));
    for (const auto& c : root.children) {
      path.push_back(c.label);
      visit_inner(c.node);
      path.pop_back();
    }

    const std::size_t d = indices.size();
    std::set<int> distinct(indices.begin(), indices.end());
    if (distinct.size() != d || (d > 0 && (*distinct.begin() != 1 || *distinct.rbegin() != static_cast<int>(d)))) {
      report("index", "codeword indices are not exactly 1.." + std::to_string(d));
    }
    if (tree.node_count() > 2 * d) {
      report("node-bound", std::to_string(tree.node_count()) + " nodes exceed 2D = " + std::to_string(2 * d));
    }
  }
};

void require_alphabet(const ParseTree& t, const SourceModel& src) {
  if (t.alphabet_size() != src.size()) {
    throw Error(Errc::TypeMismatch, "tree built for |S| = " + std::to_string(t.alphabet_size()) +
                                        " used with a source of size " + std::to_string(src.size()));
  }
}

// Walks the tree accumulating p_{W_i} top-down; p_{C_i} of a codeword node is
// its own p_{W_i} minus the p_{W_i} of all its children.
struct OccurrenceWalker {
  const SourceModel& src;
  Rational first_scale;  // 1 / tail_sum(type)
  std::vector<std::pair<int, Rational>> probs;  // (codeword index, p_C)

  void visit(const TreeNode& node, const Rational& pw, bool is_root) {
    Rational children_mass = 0;
    for (const auto& c : node.children) {
      Rational child_pw = pw * src.prob(c.label);
      if (is_root) child_pw *= first_scale;
      children_mass += child_pw;
      visit(c.node, child_pw, false);
    }
    if (node.codeword) probs.emplace_back(*node.codeword, pw - children_mass);
  }
};

std::vector<std::pair<int, Rational>> occurrence_by_index(const ParseTree& t, const SourceModel& src) {
  require_alphabet(t, src);
  OccurrenceWalker w{src, 1 / src.tail_sum(static_cast<std::size_t>(t.type())), {}};
  w.visit(t.root(), Rational(1), true);
  std::sort(w.probs.begin(), w.probs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return std::move(w.probs);
}

}  // namespace

std::vector<Violation> validate_tree(const ParseTree& t, const SourceModel& src) {
  if (t.alphabet_size() != src.size()) {
    return {{"alphabet", {}, "tree alphabet size " + std::to_string(t.alphabet_size()) + " != source size " +
                                 std::to_string(src.size())}};
  }
  Validator v{t, src.size(), {}, {}, {}};
  v.run();
  return std::move(v.out);
}

void require_valid(const ParseTree& t, const SourceModel& src) {
  auto violations = validate_tree(t, src);
  if (!violations.empty()) {
    throw Error(Errc::InvalidTree, "type-" + std::to_string(t.type()) + " tree " + to_string(violations.front()));
  }
}

Rational word_prob(const SourceModel& src, std::span<const Symbol> word) {
  Rational p = 1;
  for (Symbol s : word) p *= src.prob(s);
  return p;
}

Rational conditional_word_prob(const SourceModel& src, int type, std::span<const Symbol> word) {
  if (word.empty()) return 1;
  if (word.front() < type) {
    throw Error(Errc::FirstSymbolBelowType, "word starts with a_" + std::to_string(word.front()) +
                                                " but a type-" + std::to_string(type) + " tree starts at a_" +
                                                std::to_string(type));
  }
  return word_prob(src, word) / src.tail_sum(static_cast<std::size_t>(type));
}

std::vector<DictEntry> occurrence_probs(const ParseTree& t, const SourceModel& src) {
  auto probs = occurrence_by_index(t, src);
  std::vector<DictEntry> dict = t.dictionary();
  for (std::size_t k = 0; k < dict.size() && k < probs.size(); ++k) dict[k].occurrence_prob = probs[k].second;
  return dict;
}

TreeStats tree_stats(const ParseTree& t, const SourceModel& src) {
  TreeStats stats;
  stats.expected_length = 0;
  stats.q.assign(src.size() - 1, Rational(0));
  for (const auto& e : occurrence_probs(t, src)) {
    stats.expected_length += e.occurrence_prob * static_cast<unsigned long>(e.length());
    if (e.target >= 0 && static_cast<std::size_t>(e.target) < stats.q.size()) {
      stats.q[static_cast<std::size_t>(e.target)] += e.occurrence_prob;
    }
  }
  return stats;
}

Rational expected_parse_length(const ParseTree& t, const SourceModel& src) {
  return tree_stats(t, src).expected_length;
}

RationalVector transition_probs(const ParseTree& t, const SourceModel& src) {
  return tree_stats(t, src).q;
}

ParseTree tie(int i, const ParseTree& left, const ParseTree& right) {
  const std::size_t n = left.alphabet_size();
  if (right.alphabet_size() != n) throw Error(Errc::TypeMismatch, "tie operands use different alphabets");
  if (i < 0 || static_cast<std::size_t>(i) + 3 > n) {
    throw Error(Errc::TypeMismatch, "tie type " + std::to_string(i) + " outside [0, |S|-3]");
  }
  if (left.type() != 0 || right.type() != i + 1) {
    throw Error(Errc::TypeMismatch, "tie_" + std::to_string(i) + " needs (type 0, type " + std::to_string(i + 1) +
                                        "), got (" + std::to_string(left.type()) + ", " +
                                        std::to_string(right.type()) + ")");
  }
  TreeNode root = right.root();
  root.children.insert(root.children.begin(), TreeNode::Child{i, left.root()});
  return ParseTree::from_shape(i, std::move(root), n);
}

ParseTree tie_last(const ParseTree& left, const ParseTree& right) {
  const std::size_t n = left.alphabet_size();
  if (right.alphabet_size() != n) throw Error(Errc::TypeMismatch, "tie operands use different alphabets");
  if (left.type() != 0 || right.type() != 0) throw Error(Errc::TypeMismatch, "tie_last needs two type-0 trees");
  TreeNode root;
  const auto first = static_cast<Symbol>(n - 2);
  root.children.push_back({first, left.root()});
  root.children.push_back({first + 1, right.root()});
  return ParseTree::from_shape(static_cast<int>(n - 2), std::move(root), n);
}

std::pair<ParseTree, ParseTree> untie(const ParseTree& t) {
  const std::size_t n = t.alphabet_size();
  const int type = t.type();
  const TreeNode& root = t.root();
  if (root.children.empty()) throw Error(Errc::TypeMismatch, "a single-node tree has no decomposition");
  if (static_cast<std::size_t>(type) + 2 == n) {
    if (root.children.size() != 2) throw Error(Errc::InvalidTree, "last-type tree root must have two children");
    return {ParseTree::from_shape(0, root.children[0].node, n), ParseTree::from_shape(0, root.children[1].node, n)};
  }
  TreeNode rest = root;
  TreeNode first = std::move(rest.children.front().node);
  rest.children.erase(rest.children.begin());
  return {ParseTree::from_shape(0, std::move(first), n), ParseTree::from_shape(type + 1, std::move(rest), n)};
}

}  // namespace aivf
