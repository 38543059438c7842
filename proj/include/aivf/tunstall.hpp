#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "aivf/parse_tree.hpp"
#include "aivf/rational.hpp"
#include "aivf/source_model.hpp"

namespace aivf {

/// A prefix-free Tunstall code. Its tree is a valid type-0 tree whose internal
/// nodes are all complete, so every word is a leaf and leads back to type 0.
struct TunstallCode {
  ParseTree tree;
  /// Leaf words with p_C(w) = p_W(w), in codeword order.
  std::vector<DictEntry> dictionary;
  /// Words expanded by the greedy loop, in expansion order, with p_C at the
  /// time of expansion.
  std::vector<std::pair<std::vector<Symbol>, Rational>> expansions;
  Rational expected_length;

  std::size_t dict_size() const { return dictionary.size(); }
};

/// Greedy Tunstall construction: start from the |S| single-symbol words and
/// expand the most probable leaf `expansions` times (lexicographically
/// smallest word on ties). The result has |S| + (|S|-1)*k words.
TunstallCode build_tunstall(const SourceModel& src, std::size_t expansions);

/// Number of expansions giving `dict_size` words; throws Error(Parse) when
/// dict_size is not of the form |S| + (|S|-1)k.
std::size_t tunstall_expansions_for(std::size_t alphabet_size, std::size_t dict_size);

/// log2(D) / E[L], kept both as the exact pair and as a decimal.
struct CodingRate {
  std::size_t dict_size;
  Rational expected_length;
  std::string decimal;
};

CodingRate coding_rate(const Rational& expected_length, std::size_t dict_size, int digits = 12);

}  // namespace aivf
