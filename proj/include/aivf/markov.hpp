#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "aivf/local_dp.hpp"
#include "aivf/parse_tree.hpp"
#include "aivf/rational.hpp"
#include "aivf/source_model.hpp"

namespace aivf {

/// One tree per type 0..m-1, m = |S| - 1.
struct Chain {
  std::vector<ParseTree> trees;

  std::size_t size() const { return trees.size(); }
  /// Canonical shapes joined by '|'.
  std::string key() const;
  /// 64-bit FNV-1a of key().
  std::uint64_t hash() const;
};

/// Checks tree count, per-slot types, each tree's validity and q_0 > 0.
/// Throws InvalidTree or TypeMismatch.
void validate_chain(const Chain& c, const SourceModel& src);

/// Q[i][j] = q_j(t_i).
RationalMatrix transition_matrix(const Chain& c, const SourceModel& src);

/// Exact solution of pi Q = pi, sum pi = 1. Throws SingularSystem.
RationalVector stationary(const RationalMatrix& q);

/// sum_i pi_i E[L_{t_i}].
Rational global_parse_length(const Chain& c, const SourceModel& src);

/// State hyperplane of a tree: cost L = D - E[L] and transition vector q.
struct Hyperplane {
  int type = 0;
  Rational cost;
  RationalVector q;
};

Hyperplane mcmc_state(const ParseTree& t, const SourceModel& src, std::size_t dict_size);

/// L + sum_{j>=1} q_j x_j - x_k (no -x_k term for k = 0).
Rational f_k(const Hyperplane& h, const CostVector& x);

struct IntersectionPoint {
  CostVector x;
  Rational y;
};

/// Solves y = f_k(x) for k = 0..m-1 in the unknowns (x_1..x_{m-1}, y).
/// Throws SingularSystem.
IntersectionPoint intersect(const std::vector<Hyperplane>& planes);

/// intersect() over the chain's states, then checks y == sum_k L_k pi_k and
/// throws CertificateMismatch if it does not hold.
IntersectionPoint multityped_intersection(const Chain& c, const SourceModel& src, std::size_t dict_size);

}  // namespace aivf
