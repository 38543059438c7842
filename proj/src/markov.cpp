#include "aivf/markov.hpp"

#include "aivf/error.hpp"
#include "aivf/linalg.hpp"

namespace aivf {

std::string Chain::key() const {
  std::string out;
  for (std::size_t k = 0; k < trees.size(); ++k) {
    if (k) out += '|';
    out += trees[k].canonical();
  }
  return out;
}

std::uint64_t Chain::hash() const {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : key()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

void validate_chain(const Chain& c, const SourceModel& src) {
  const std::size_t m = src.size() - 1;
  if (c.size() != m) {
    throw Error(Errc::TypeMismatch, "chain has " + std::to_string(c.size()) + " trees, expected " + std::to_string(m));
  }
  for (std::size_t k = 0; k < m; ++k) {
    const ParseTree& t = c.trees[k];
    if (t.type() != static_cast<int>(k)) {
      throw Error(Errc::TypeMismatch, "chain slot " + std::to_string(k) + " holds a type-" + std::to_string(t.type()) +
                                          " tree");
    }
    require_valid(t, src);
    if (sgn(transition_probs(t, src)[0]) <= 0) {
      throw Error(Errc::InvalidTree, "type-" + std::to_string(k) + " tree never returns to type 0");
    }
  }
}

RationalMatrix transition_matrix(const Chain& c, const SourceModel& src) {
  RationalMatrix q;
  q.reserve(c.size());
  for (const auto& t : c.trees) q.push_back(transition_probs(t, src));
  return q;
}

RationalVector stationary(const RationalMatrix& q) {
  const std::size_t m = q.size();
  if (m == 0) throw Error(Errc::SingularSystem, "empty transition matrix");
  // (Q^T - I) pi = 0 with the last equation replaced by sum pi = 1.
  RationalMatrix a(m, RationalVector(m));
  RationalVector b(m, Rational(0));
  for (std::size_t i = 0; i + 1 < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) a[i][j] = q[j][i] - (i == j ? 1 : 0);
  }
  for (std::size_t j = 0; j < m; ++j) a[m - 1][j] = 1;
  b[m - 1] = 1;
  return solve_exact(a, b);
}

Rational global_parse_length(const Chain& c, const SourceModel& src) {
  RationalMatrix q;
  RationalVector lengths;
  for (const auto& t : c.trees) {
    TreeStats s = tree_stats(t, src);
    q.push_back(std::move(s.q));
    lengths.push_back(std::move(s.expected_length));
  }
  RationalVector pi = stationary(q);
  Rational total = 0;
  for (std::size_t k = 0; k < pi.size(); ++k) total += pi[k] * lengths[k];
  return total;
}

Hyperplane mcmc_state(const ParseTree& t, const SourceModel& src, std::size_t dict_size) {
  TreeStats s = tree_stats(t, src);
  return {t.type(), Rational(static_cast<unsigned long>(dict_size)) - s.expected_length, std::move(s.q)};
}

Rational f_k(const Hyperplane& h, const CostVector& x_in) {
  const CostVector x = canonical_costs(x_in);
  if (x.size() + 1 != h.q.size()) {
    throw Error(Errc::IndexOutOfRange, "point has " + std::to_string(x.size()) + " coordinates, expected " +
                                           std::to_string(h.q.size() - 1));
  }
  Rational value = h.cost;
  for (std::size_t j = 1; j < h.q.size(); ++j) value += h.q[j] * x[j - 1];
  if (h.type > 0) value -= x[static_cast<std::size_t>(h.type) - 1];
  return value;
}

IntersectionPoint intersect(const std::vector<Hyperplane>& planes) {
  const std::size_t m = planes.size();
  if (m == 0) throw Error(Errc::SingularSystem, "no hyperplanes");
  // Row k: y - sum_{j>=1} q_j x_j + [k>0] x_k = L_k; columns x_1..x_{m-1}, y.
  RationalMatrix a(m, RationalVector(m));
  RationalVector b(m);
  for (std::size_t k = 0; k < m; ++k) {
    const Hyperplane& h = planes[k];
    if (h.q.size() != m || h.type != static_cast<int>(k)) {
      throw Error(Errc::TypeMismatch, "hyperplane " + std::to_string(k) + " does not belong to type " + std::to_string(k));
    }
    for (std::size_t j = 1; j < m; ++j) a[k][j - 1] = -h.q[j];
    if (k > 0) a[k][k - 1] += 1;
    a[k][m - 1] = 1;
    b[k] = h.cost;
  }
  RationalVector sol = solve_exact(a, b);
  IntersectionPoint p;
  p.y = sol.back();
  sol.pop_back();
  p.x = std::move(sol);
  return p;
}

IntersectionPoint multityped_intersection(const Chain& c, const SourceModel& src, std::size_t dict_size) {
  std::vector<Hyperplane> planes;
  RationalMatrix q;
  for (const auto& t : c.trees) {
    planes.push_back(mcmc_state(t, src, dict_size));
    q.push_back(planes.back().q);
  }
  IntersectionPoint p = intersect(planes);
  RationalVector pi = stationary(q);
  Rational cost = 0;
  for (std::size_t k = 0; k < pi.size(); ++k) cost += pi[k] * planes[k].cost;
  if (cost != p.y) {
    throw Error(Errc::CertificateMismatch, "intersection height " + to_fraction_string(p.y) +
                                               " differs from stationary cost " + to_fraction_string(cost));
  }
  return p;
}

}  // namespace aivf
