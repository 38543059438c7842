#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aivf/local_dp.hpp"
#include "aivf/markov.hpp"
#include "aivf/parse_tree.hpp"
#include "aivf/rational.hpp"
#include "aivf/source_model.hpp"

namespace aivf {

struct EnvelopeValue {
  Rational value;
  ParseTree witness;
};

/// g_k(x) = min over admissible type-k trees of f_k(x, .), with a tree that
/// attains it. Throws Infeasible.
EnvelopeValue envelope_g(const SourceModel& src, std::size_t dict_size, int k, const CostVector& x,
                         const TypeSet& allowed);

/// g_k(x) for every k from a single table fill.
std::vector<EnvelopeValue> envelope_all(const SourceModel& src, std::size_t dict_size, const CostVector& x,
                                        const TypeSet& allowed);

/// h(x) = min_k g_k(x).
Rational envelope_h(const SourceModel& src, std::size_t dict_size, const CostVector& x, const TypeSet& allowed);

/// Box [-C, C]^{m-1} with C = N / beta, N = D, beta = p_min^D.
struct BoundingBox {
  Rational beta;
  Rational n;
  Rational c;

  bool contains(const CostVector& x) const;
};

BoundingBox bounding_box(const SourceModel& src, std::size_t dict_size);

struct CertificateEntry {
  int type = 0;
  Rational g;
  bool equal = false;
};

struct TraceEntry {
  std::uint64_t chain_hash = 0;
  Rational y;
};

struct SolverResult {
  std::string solver;
  Chain chain;
  CostVector x_star;
  Rational y_star;
  /// D - y_star.
  Rational parse_length;
  std::vector<CertificateEntry> certificate;
  bool certified = false;
  std::size_t iterations = 0;
  std::vector<TraceEntry> trace;
  /// Cutting-plane only: hyperplanes in the final relaxation.
  std::size_t cuts = 0;
  /// Brute force only: chains evaluated.
  std::uint64_t chains_enumerated = 0;
};

struct SolverOptions {
  /// 0 selects the default cap: 10*m*D for the iterative solver and
  /// 50*m*D rounds for the cutting-plane solver.
  std::size_t iteration_cap = 0;
  /// Worker threads for brute force; 0 or 1 runs inline.
  unsigned threads = 1;
  /// Brute force refuses more than this many trees of one type.
  std::uint64_t max_trees_per_type = 100000;
  /// Brute force refuses more chains than this; 0 disables the check.
  std::uint64_t max_chains = 50000000;
};

/// g_k(x*) for all k, compared to y* exactly.
std::vector<CertificateEntry> certify(const SourceModel& src, std::size_t dict_size, const CostVector& x,
                                      const Rational& y);

/// Fixed-point iteration from x = 0: take per-type minimizers of f_k at the
/// current point, move to their intersection, stop when every g_k there equals
/// the intersection height. A tree already in the chain is kept while it is
/// still a minimizer. Throws CycleDetected or IterationCap.
SolverResult solve_iterative(const SourceModel& src, std::size_t dict_size, const SolverOptions& opts = {});

/// Kelley cutting planes: maximize y over the box subject to y <= f_k(x, S)
/// for every hyperplane returned so far, adding each violated one per round.
/// Throws IterationCap, LpUnbounded, LpInfeasible or CertificateMismatch.
SolverResult solve_cutting_plane(const SourceModel& src, std::size_t dict_size, const SolverOptions& opts = {});

/// |T_i^{(d)}| for d = 0..D (index 0 unused), saturating at UINT64_MAX.
std::vector<std::vector<std::uint64_t>> tree_counts(std::size_t alphabet_size, std::size_t dict_size);

/// Every type-i tree with exactly D codewords, generated by tie
/// decompositions and sorted by canonical(). With `allowed`, only trees whose
/// words all lead to admitted types are kept. Throws TooLarge past the limit.
std::vector<ParseTree> enumerate_trees(const SourceModel& src, std::size_t dict_size, int type,
                                       const std::optional<TypeSet>& allowed = std::nullopt,
                                       std::uint64_t limit = 100000);

/// Exhaustive search over all chains for the largest global parse length.
/// Among equally good chains the first in enumeration order whose
/// intersection passes an enumeration-based certificate is returned.
SolverResult brute_force_optimum(const SourceModel& src, std::size_t dict_size, const SolverOptions& opts = {});

}  // namespace aivf
