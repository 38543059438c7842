#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "aivf/parse_tree.hpp"
#include "aivf/rational.hpp"
#include "aivf/source_model.hpp"

namespace aivf {

/// Weights (x_1, ..., x_{|S|-2}); x[j-1] holds x_j. Empty when |S| = 2.
using CostVector = RationalVector;

/// Set of admissible next-tree types, indexed 0..|S|-2. Type 0 is always
/// admitted.
class TypeSet {
 public:
  static TypeSet all(std::size_t alphabet_size);
  /// Throws Error(IndexOutOfRange) for a type outside [0, |S|-2]; adds 0.
  static TypeSet of(std::size_t alphabet_size, const std::vector<int>& types);

  bool contains(int type) const;
  std::size_t type_count() const { return member_.size(); }
  std::vector<int> members() const;
  /// Every subset of {0..|S|-2} that contains 0.
  static std::vector<TypeSet> all_restrictions(std::size_t alphabet_size);

 private:
  std::vector<bool> member_;
};

/// Copy with every entry in lowest terms. mpq_class(n, d) does not reduce,
/// and exact comparisons need reduced values.
CostVector canonical_costs(const CostVector& x);

/// x_k with the convention x_0 = 0.
const Rational& cost_weight(const CostVector& x, std::size_t k);

/// E[L_{t_i}] + sum_j q_j(t_i) x_j.
Rational tree_cost(const ParseTree& t, const SourceModel& src, const CostVector& x);

/// OPT(i:d) and the split table of the dynamic program, d = 1..D.
class OptTables {
 public:
  OptTables(std::size_t types, std::size_t max_size);

  std::size_t type_count() const { return opt_.size(); }
  std::size_t max_size() const { return opt_.empty() ? 0 : opt_.front().size() - 1; }
  bool feasible(std::size_t type, std::size_t d) const;
  /// Throws Error(Infeasible) when no admissible tree of that size exists.
  const Rational& value(std::size_t type, std::size_t d) const;
  /// Codewords in the left part of the optimal split; 0 when d == 1 or infeasible.
  std::size_t split(std::size_t type, std::size_t d) const { return split_[type][d]; }

  std::optional<Rational>& cell(std::size_t type, std::size_t d) { return opt_[type][d]; }
  std::size_t& split_cell(std::size_t type, std::size_t d) { return split_[type][d]; }

 private:
  std::vector<std::vector<std::optional<Rational>>> opt_;
  std::vector<std::vector<std::size_t>> split_;
};

struct LocalOptimum {
  OptTables tables;
  /// t_i^{(D)} per type; empty where no admissible tree exists.
  std::vector<std::optional<ParseTree>> trees;

  /// Throws Error(Infeasible).
  const ParseTree& tree(std::size_t type) const;
  const Rational& value(std::size_t type) const { return tables.value(type, tables.max_size()); }
};

/// For every type i, the tree with exactly D codewords that maximizes
/// tree_cost among trees whose transitions stay inside `allowed`. Trees are
/// rebuilt once from the split table after the fill. Ties prefer the smallest
/// left size.
LocalOptimum dp_optimize(const SourceModel& src, std::size_t dict_size, const CostVector& x,
                         const TypeSet& allowed);

/// Same table fill as dp_optimize without split bookkeeping or trees.
OptTables dp_costs_only(const SourceModel& src, std::size_t dict_size, const CostVector& x,
                        const TypeSet& allowed);

/// Smallest admissible tree per type under a restriction: the single node when
/// its type is admitted, otherwise the forced chain of single-leaf edges ending
/// in an incomplete root that leads to the next admitted type, or a complete
/// root when no larger type is admitted.
struct BaseTree {
  int type;
  std::size_t codewords;
  ParseTree tree;
};

std::vector<BaseTree> restricted_base_trees(const SourceModel& src, const TypeSet& allowed);

/// Aligned text dump of OPT (as decimals) and the split table.
std::string format_tables(const OptTables& tables, int digits = 6);

}  // namespace aivf
