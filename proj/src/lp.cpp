#include "aivf/lp.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "aivf/error.hpp"

namespace aivf {

namespace {

// Rows hold [coefficients | rhs]; obj holds reduced costs (enter when > 0) and
// minus the current objective value in its last slot.
struct Tableau {
  std::vector<RationalVector> rows;
  RationalVector obj;
  std::vector<std::size_t> basis;
  std::size_t cols = 0;

  void pivot(std::size_t r, std::size_t e) {
    RationalVector& pr = rows[r];
    const Rational inv = 1 / pr[e];
    for (auto& v : pr) v *= inv;
    Rational factor;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || sgn(rows[i][e]) == 0) continue;
      factor = rows[i][e];
      for (std::size_t j = 0; j <= cols; ++j) {
        if (sgn(pr[j]) != 0) rows[i][j] -= factor * pr[j];
      }
    }
    if (sgn(obj[e]) != 0) {
      factor = obj[e];
      for (std::size_t j = 0; j <= cols; ++j) {
        if (sgn(pr[j]) != 0) obj[j] -= factor * pr[j];
      }
    }
    basis[r] = e;
  }

  // Bland: lowest-index improving column; ratio ties go to the lowest basic index.
  // Returns false at optimality; throws when unbounded.
  bool step(std::size_t usable_cols) {
    std::optional<std::size_t> enter;
    for (std::size_t j = 0; j < usable_cols; ++j) {
      if (sgn(obj[j]) > 0) {
        enter = j;
        break;
      }
    }
    if (!enter) return false;
    std::optional<std::size_t> leave;
    Rational best, ratio;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (sgn(rows[i][*enter]) <= 0) continue;
      ratio = rows[i][cols] / rows[i][*enter];
      if (!leave || ratio < best || (ratio == best && basis[i] < basis[*leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (!leave) throw Error(Errc::LpUnbounded, "objective unbounded along column " + std::to_string(*enter));
    pivot(*leave, *enter);
    return true;
  }
};

}  // namespace

LpSolution lp_maximize(const RationalMatrix& a, const RationalVector& b, const RationalVector& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  if (b.size() != m) throw Error(Errc::IndexOutOfRange, "constraint bound count does not match rows");
  for (const auto& row : a) {
    if (row.size() != n) throw Error(Errc::IndexOutOfRange, "constraint row has the wrong width");
  }

  // Columns: n structural, m slacks, then one artificial per negative-rhs row.
  std::vector<std::size_t> negative;
  for (std::size_t i = 0; i < m; ++i) {
    if (sgn(b[i]) < 0) negative.push_back(i);
  }
  const std::size_t first_art = n + m;
  Tableau t;
  t.cols = first_art + negative.size();
  t.rows.assign(m, RationalVector(t.cols + 1, Rational(0)));
  t.basis.assign(m, 0);
  std::size_t art = first_art;
  for (std::size_t i = 0; i < m; ++i) {
    RationalVector& row = t.rows[i];
    const bool neg = sgn(b[i]) < 0;
    for (std::size_t j = 0; j < n; ++j) row[j] = neg ? Rational(-a[i][j]) : a[i][j];
    row[n + i] = neg ? -1 : 1;
    row[t.cols] = neg ? Rational(-b[i]) : b[i];
    if (neg) {
      row[art] = 1;
      t.basis[i] = art++;
    } else {
      t.basis[i] = n + i;
    }
  }

  if (!negative.empty()) {
    // Phase 1: maximize -sum(artificials).
    t.obj.assign(t.cols + 1, Rational(0));
    for (std::size_t i : negative) {
      for (std::size_t j = 0; j <= t.cols; ++j) {
        if (j < first_art) t.obj[j] += t.rows[i][j];
      }
      t.obj[t.cols] += t.rows[i][t.cols];
    }
    while (t.step(t.cols)) {
    }
    if (sgn(t.obj[t.cols]) != 0) throw Error(Errc::LpInfeasible, "constraints admit no feasible point");
    // Pivot zero-level artificials out; rows with no other support are redundant.
    for (std::size_t i = 0; i < t.rows.size();) {
      if (t.basis[i] < first_art) {
        ++i;
        continue;
      }
      std::optional<std::size_t> col;
      for (std::size_t j = 0; j < first_art; ++j) {
        if (sgn(t.rows[i][j]) != 0) {
          col = j;
          break;
        }
      }
      if (col) {
        t.pivot(i, *col);
        ++i;
      } else {
        t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(i));
        t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
  }

  // Phase 2 over structural and slack columns only.
  t.obj.assign(t.cols + 1, Rational(0));
  for (std::size_t j = 0; j < n; ++j) t.obj[j] = c[j];
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::size_t bj = t.basis[i];
    if (bj >= n || sgn(t.obj[bj]) == 0) continue;
    const Rational factor = t.obj[bj];
    for (std::size_t j = 0; j <= t.cols; ++j) t.obj[j] -= factor * t.rows[i][j];
  }
  while (t.step(first_art)) {
  }

  LpSolution sol;
  sol.z.assign(n, Rational(0));
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.basis[i] < n) sol.z[t.basis[i]] = t.rows[i][t.cols];
  }
  sol.objective = 0;
  for (std::size_t j = 0; j < n; ++j) sol.objective += c[j] * sol.z[j];
  return sol;
}

}  // namespace aivf
