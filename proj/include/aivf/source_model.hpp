#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "aivf/rational.hpp"

namespace aivf {

/// Index of a symbol in the sorted alphabet (a_0 is the most probable).
using Symbol = int;

struct SymbolProb {
  std::string name;
  Rational prob;
};

/// A memoryless source over a finite alphabet, sorted by non-increasing
/// probability. Immutable after construction.
class SourceModel {
 public:
  /// Sorts `entries` by descending probability (stable, so equal
  /// probabilities keep their input order) and validates them.
  /// Throws NonPositive, SumNotOne or TooSmall.
  explicit SourceModel(std::vector<SymbolProb> entries);

  /// Convenience for anonymous alphabets; symbols are named a0, a1, ...
  /// in input order before sorting.
  static SourceModel from_probs(const std::vector<Rational>& probs);

  std::size_t size() const { return probs_.size(); }
  const std::vector<std::string>& symbols() const { return symbols_; }
  const std::string& name(Symbol s) const;
  const RationalVector& probs() const { return probs_; }
  const Rational& prob(Symbol s) const;
  /// tail_sum(i) = sum_{j >= i} p(a_j); tail_sum(0) == 1.
  const Rational& tail_sum(std::size_t i) const;
  const RationalVector& tail_sums() const { return tail_sums_; }
  const Rational& min_prob() const { return probs_.back(); }
  /// Largest bit length over every numerator and denominator of p(a_i).
  std::size_t bits() const { return bits_; }

  /// Probability that a parse with a type-i tree starts with a_i, given that
  /// it starts with one of a_i..a_{|S|-1}. Valid for 0 <= i <= |S|-2.
  Rational alpha(std::size_t i) const;

  /// Looks up a symbol by name; throws UnknownSymbol.
  Symbol index_of(const std::string& name) const;

 private:
  std::vector<std::string> symbols_;
  RationalVector probs_;
  RationalVector tail_sums_;
  std::size_t bits_ = 0;
};

/// Reads the text probability format: one `<symbol> <probability>` per line,
/// `#` comment lines and blank lines ignored, probabilities given as `n/d` or
/// exact decimals.
SourceModel read_source(std::istream& in);
SourceModel load_source(const std::filesystem::path& path);

}  // namespace aivf
