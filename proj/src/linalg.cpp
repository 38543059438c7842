#include "aivf/linalg.hpp"

#include <string>
#include <utility>
#include <vector>

#include "aivf/error.hpp"

namespace aivf {

RationalVector solve_exact(const RationalMatrix& a, const RationalVector& b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw Error(Errc::SingularSystem, "right-hand side has the wrong length");
  for (const auto& row : a) {
    if (row.size() != n) throw Error(Errc::SingularSystem, "matrix is not square");
  }
  if (n == 0) return {};

  // Augmented integer matrix [A | b], each row multiplied by the lcm of its denominators.
  std::vector<std::vector<Integer>> m(n, std::vector<Integer>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    Integer scale = 1;
    for (std::size_t j = 0; j < n; ++j) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), a[i][j].get_den_mpz_t());
    mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), b[i].get_den_mpz_t());
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a[i][j].get_num() * (scale / a[i][j].get_den());
    m[i][n] = b[i].get_num() * (scale / b[i].get_den());
  }

  Integer prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = n;
    for (std::size_t i = k; i < n; ++i) {
      if (m[i][k] == 0) continue;
      if (pivot == n || mpz_cmpabs(m[i][k].get_mpz_t(), m[pivot][k].get_mpz_t()) < 0) pivot = i;
    }
    if (pivot == n) throw Error(Errc::SingularSystem, "matrix is singular (column " + std::to_string(k) + ")");
    if (pivot != k) std::swap(m[pivot], m[k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j <= n; ++j) {
        m[i][j] = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }

  RationalVector x(n);
  for (std::size_t i = n; i-- > 0;) {
    Rational sum(m[i][n]);
    for (std::size_t j = i + 1; j < n; ++j) sum -= Rational(m[i][j]) * x[j];
    x[i] = sum / Rational(m[i][i]);
  }
  return x;
}

}  // namespace aivf
