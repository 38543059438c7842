#include "aivf/local_dp.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "aivf/error.hpp"

namespace aivf {

TypeSet TypeSet::all(std::size_t alphabet_size) {
  TypeSet s;
  s.member_.assign(alphabet_size - 1, true);
  return s;
}

TypeSet TypeSet::of(std::size_t alphabet_size, const std::vector<int>& types) {
  TypeSet s;
  s.member_.assign(alphabet_size - 1, false);
  s.member_[0] = true;
  for (int t : types) {
    if (t < 0 || static_cast<std::size_t>(t) >= s.member_.size()) {
      throw Error(Errc::IndexOutOfRange, "type " + std::to_string(t) + " outside [0, " +
                                             std::to_string(s.member_.size() - 1) + "]");
    }
    s.member_[static_cast<std::size_t>(t)] = true;
  }
  return s;
}

bool TypeSet::contains(int type) const {
  return type >= 0 && static_cast<std::size_t>(type) < member_.size() && member_[static_cast<std::size_t>(type)];
}

std::vector<int> TypeSet::members() const {
  std::vector<int> out;
  for (std::size_t k = 0; k < member_.size(); ++k) {
    if (member_[k]) out.push_back(static_cast<int>(k));
  }
  return out;
}

std::vector<TypeSet> TypeSet::all_restrictions(std::size_t alphabet_size) {
  const std::size_t others = alphabet_size - 2;
  std::vector<TypeSet> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << others); ++mask) {
    std::vector<int> types;
    for (std::size_t k = 0; k < others; ++k) {
      if (mask & (std::size_t{1} << k)) types.push_back(static_cast<int>(k + 1));
    }
    out.push_back(of(alphabet_size, types));
  }
  return out;
}

const Rational& cost_weight(const CostVector& x, std::size_t k) {
  static const Rational zero(0);
  if (k == 0) return zero;
  if (k > x.size()) throw Error(Errc::IndexOutOfRange, "cost vector has no x_" + std::to_string(k));
  return x[k - 1];
}

CostVector canonical_costs(const CostVector& x) {
  CostVector out(x);
  for (auto& v : out) v.canonicalize();
  return out;
}

Rational tree_cost(const ParseTree& t, const SourceModel& src, const CostVector& x_in) {
  const CostVector x = canonical_costs(x_in);
  if (x.size() + 2 != src.size()) {
    throw Error(Errc::IndexOutOfRange, "cost vector length " + std::to_string(x.size()) + ", expected " +
                                           std::to_string(src.size() - 2));
  }
  TreeStats s = tree_stats(t, src);
  Rational cost = s.expected_length;
  for (std::size_t j = 1; j < s.q.size(); ++j) cost += s.q[j] * x[j - 1];
  return cost;
}

OptTables::OptTables(std::size_t types, std::size_t max_size)
    : opt_(types, std::vector<std::optional<Rational>>(max_size + 1)),
      split_(types, std::vector<std::size_t>(max_size + 1, 0)) {}

bool OptTables::feasible(std::size_t type, std::size_t d) const {
  return type < opt_.size() && d < opt_[type].size() && opt_[type][d].has_value();
}

const Rational& OptTables::value(std::size_t type, std::size_t d) const {
  if (!feasible(type, d)) {
    throw Error(Errc::Infeasible, "no admissible type-" + std::to_string(type) + " tree with " + std::to_string(d) +
                                      " codewords");
  }
  return *opt_[type][d];
}

namespace {

void check_inputs(const SourceModel& src, std::size_t dict_size, const CostVector& x, const TypeSet& allowed) {
  if (dict_size < 2) throw Error(Errc::TooSmall, "dictionary size must be at least 2");
  if (x.size() + 2 != src.size()) {
    throw Error(Errc::IndexOutOfRange, "cost vector length " + std::to_string(x.size()) + ", expected " +
                                           std::to_string(src.size() - 2));
  }
  if (allowed.type_count() + 1 != src.size()) throw Error(Errc::TypeMismatch, "restriction built for another alphabet");
}

// Recurrences, with d = l + r:
//   type i <= |S|-3: OPT(i:d) = alpha_i (1 + OPT(0:l)) + (1 - alpha_i) OPT(i+1:r)
//   type |S|-2:      OPT(i:d) = 1 + alpha_i OPT(0:l) + (1 - alpha_i) OPT(0:r)
// The single node of type k has cost x_k (its empty word leads to type k), and
// is admissible only when k is.
OptTables fill_tables(const SourceModel& src, std::size_t dict_size, const CostVector& x_in, const TypeSet& allowed,
                      bool track_split) {
  check_inputs(src, dict_size, x_in, allowed);
  const CostVector x = canonical_costs(x_in);
  const std::size_t types = src.size() - 1;
  const std::size_t last = types - 1;
  OptTables t(types, dict_size);
  for (std::size_t k = 0; k < types; ++k) {
    if (allowed.contains(static_cast<int>(k))) t.cell(k, 1) = cost_weight(x, k);
  }

  std::vector<Rational> alpha(types), beta(types);
  for (std::size_t i = 0; i < types; ++i) {
    alpha[i] = src.alpha(i);
    beta[i] = 1 - alpha[i];
  }

  Rational candidate, scratch;
  for (std::size_t d = 2; d <= dict_size; ++d) {
    for (std::size_t i = 0; i < types; ++i) {
      const std::size_t right_type = i == last ? 0 : i + 1;
      std::optional<Rational>& best = t.cell(i, d);
      std::size_t best_l = 0;
      for (std::size_t l = 1; l < d; ++l) {
        const auto& left = t.cell(0, l);
        const auto& right = t.cell(right_type, d - l);
        if (!left || !right) continue;
        mpq_mul(candidate.get_mpq_t(), alpha[i].get_mpq_t(), left->get_mpq_t());
        mpq_mul(scratch.get_mpq_t(), beta[i].get_mpq_t(), right->get_mpq_t());
        mpq_add(candidate.get_mpq_t(), candidate.get_mpq_t(), scratch.get_mpq_t());
        if (!best || mpq_cmp(candidate.get_mpq_t(), best->get_mpq_t()) > 0) {
          best = candidate;
          best_l = l;
        }
      }
      if (best) {
        *best += i == last ? Rational(1) : alpha[i];
        if (track_split) t.split_cell(i, d) = best_l;
      }
    }
  }
  return t;
}

// Builds the node shape of t_type^{(d)} by replaying the split table.
TreeNode build_shape(const OptTables& t, std::size_t type, std::size_t d, std::size_t alphabet_size) {
  if (d == 1) return TreeNode{};
  const std::size_t l = t.split(type, d);
  const std::size_t last = alphabet_size - 2;
  if (type == last) {
    TreeNode root;
    root.children.push_back({static_cast<Symbol>(last), build_shape(t, 0, l, alphabet_size)});
    root.children.push_back({static_cast<Symbol>(last + 1), build_shape(t, 0, d - l, alphabet_size)});
    return root;
  }
  TreeNode root = build_shape(t, type + 1, d - l, alphabet_size);
  root.children.insert(root.children.begin(),
                       TreeNode::Child{static_cast<Symbol>(type), build_shape(t, 0, l, alphabet_size)});
  return root;
}

}  // namespace

const ParseTree& LocalOptimum::tree(std::size_t type) const {
  if (type >= trees.size() || !trees[type]) {
    throw Error(Errc::Infeasible, "no admissible type-" + std::to_string(type) + " tree with " +
                                      std::to_string(tables.max_size()) + " codewords");
  }
  return *trees[type];
}

LocalOptimum dp_optimize(const SourceModel& src, std::size_t dict_size, const CostVector& x,
                         const TypeSet& allowed) {
  LocalOptimum out{fill_tables(src, dict_size, x, allowed, true), {}};
  const std::size_t types = src.size() - 1;
  out.trees.resize(types);
  for (std::size_t i = 0; i < types; ++i) {
    if (!out.tables.feasible(i, dict_size)) continue;
    out.trees[i] = ParseTree::from_shape(static_cast<int>(i), build_shape(out.tables, i, dict_size, src.size()),
                                         src.size());
  }
  return out;
}

OptTables dp_costs_only(const SourceModel& src, std::size_t dict_size, const CostVector& x,
                        const TypeSet& allowed) {
  return fill_tables(src, dict_size, x, allowed, false);
}

std::vector<BaseTree> restricted_base_trees(const SourceModel& src, const TypeSet& allowed) {
  const std::size_t n = src.size();
  const std::size_t types = n - 1;
  std::vector<BaseTree> out;
  for (std::size_t j = 0; j < types; ++j) {
    if (allowed.contains(static_cast<int>(j))) {
      out.push_back({static_cast<int>(j), 1, ParseTree::root_only(static_cast<int>(j), n)});
      continue;
    }
    std::size_t stop = j + 1;
    while (stop < types && !allowed.contains(static_cast<int>(stop))) ++stop;
    // Root with single-leaf children a_j..a_{stop-1}; incomplete (empty word to
    // type `stop`) when stop is admitted, complete otherwise.
    const std::size_t width = stop < types ? stop - j : n - j;
    TreeNode root;
    for (std::size_t k = 0; k < width; ++k) root.children.push_back({static_cast<Symbol>(j + k), TreeNode{}});
    ParseTree tree = ParseTree::from_shape(static_cast<int>(j), std::move(root), n);
    const std::size_t count = tree.codeword_count();
    out.push_back({static_cast<int>(j), count, std::move(tree)});
  }
  return out;
}

std::string format_tables(const OptTables& tables, int digits) {
  std::ostringstream os;
  const std::size_t width = static_cast<std::size_t>(digits) + 8;
  os << std::setw(5) << "d";
  for (std::size_t i = 0; i < tables.type_count(); ++i) os << std::setw(static_cast<int>(width)) << ("OPT(" + std::to_string(i) + ")");
  for (std::size_t i = 0; i < tables.type_count(); ++i) os << std::setw(9) << ("E(" + std::to_string(i) + ")");
  os << '\n';
  for (std::size_t d = 1; d <= tables.max_size(); ++d) {
    os << std::setw(5) << d;
    for (std::size_t i = 0; i < tables.type_count(); ++i) {
      os << std::setw(static_cast<int>(width)) << (tables.feasible(i, d) ? to_decimal_string(tables.value(i, d), digits) : "-");
    }
    for (std::size_t i = 0; i < tables.type_count(); ++i) {
      os << std::setw(9) << (tables.split(i, d) ? std::to_string(tables.split(i, d)) : "-");
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace aivf
