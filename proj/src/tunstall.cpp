#include "aivf/tunstall.hpp"

#include <mpfr.h>

#include <algorithm>

#include "aivf/error.hpp"

namespace aivf {

namespace {

TreeNode& node_at(TreeNode& root, const std::vector<Symbol>& word) {
  TreeNode* node = &root;
  for (Symbol s : word) {
    auto it = std::find_if(node->children.begin(), node->children.end(),
                           [s](const TreeNode::Child& c) { return c.label == s; });
    node = &it->node;
  }
  return *node;
}

void expand(TreeNode& node, std::size_t alphabet_size) {
  for (std::size_t a = 0; a < alphabet_size; ++a) node.children.push_back({static_cast<Symbol>(a), TreeNode{}});
}

}  // namespace

TunstallCode build_tunstall(const SourceModel& src, std::size_t expansions) {
  const std::size_t n = src.size();
  TreeNode shape;
  expand(shape, n);

  struct Leaf {
    std::vector<Symbol> word;
    Rational prob;
  };
  std::vector<Leaf> leaves;
  for (std::size_t a = 0; a < n; ++a) leaves.push_back({{static_cast<Symbol>(a)}, src.probs()[a]});

  TunstallCode code{ParseTree::root_only(0, n), {}, {}, 0};
  for (std::size_t step = 0; step < expansions; ++step) {
    auto best = std::min_element(leaves.begin(), leaves.end(), [](const Leaf& a, const Leaf& b) {
      if (a.prob != b.prob) return a.prob > b.prob;
      return a.word < b.word;
    });
    Leaf chosen = std::move(*best);
    leaves.erase(best);
    expand(node_at(shape, chosen.word), n);
    for (std::size_t a = 0; a < n; ++a) {
      Leaf child{chosen.word, chosen.prob * src.probs()[a]};
      child.word.push_back(static_cast<Symbol>(a));
      leaves.push_back(std::move(child));
    }
    code.expansions.emplace_back(std::move(chosen.word), std::move(chosen.prob));
  }

  code.tree = ParseTree::from_shape(0, std::move(shape), n);
  code.dictionary = occurrence_probs(code.tree, src);
  code.expected_length = 0;
  for (const auto& e : code.dictionary) code.expected_length += e.occurrence_prob * static_cast<unsigned long>(e.length());
  return code;
}

std::size_t tunstall_expansions_for(std::size_t alphabet_size, std::size_t dict_size) {
  if (dict_size < alphabet_size || (dict_size - alphabet_size) % (alphabet_size - 1) != 0) {
    throw Error(Errc::Parse, "a Tunstall dictionary over " + std::to_string(alphabet_size) +
                                 " symbols has |S| + (|S|-1)k words; " + std::to_string(dict_size) +
                                 " is not of that form");
  }
  return (dict_size - alphabet_size) / (alphabet_size - 1);
}

CodingRate coding_rate(const Rational& expected_length, std::size_t dict_size, int digits) {
  if (sgn(expected_length) <= 0 || dict_size < 2) {
    throw Error(Errc::IndexOutOfRange, "coding rate needs E[L] > 0 and D >= 2");
  }
  mpfr_t log_d, el, rate;
  mpfr_inits2(512, log_d, el, rate, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_ui(log_d, static_cast<unsigned long>(dict_size), MPFR_RNDN);
  mpfr_log2(log_d, log_d, MPFR_RNDN);
  mpfr_set_q(el, expected_length.get_mpq_t(), MPFR_RNDN);
  mpfr_div(rate, log_d, el, MPFR_RNDN);
  char* text = nullptr;
  mpfr_asprintf(&text, "%.*RNf", digits, rate);
  std::string decimal(text);
  mpfr_free_str(text);
  mpfr_clears(log_d, el, rate, static_cast<mpfr_ptr>(nullptr));
  return {dict_size, expected_length, decimal};
}

}  // namespace aivf
