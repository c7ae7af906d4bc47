#pragma once

// Exact linear algebra over Q for recovering coefficients from a transform given only
// as a forward matrix.

#include <stdexcept>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace oracle {

using Rational = boost::multiprecision::mpq_rational;
using Matrix = std::vector<std::vector<Rational>>;

/// Solves A x = b by Gauss-Jordan elimination with exact pivots.
inline std::vector<Rational> solve(Matrix a, std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) throw std::runtime_error("singular system");
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col] == 0) continue;
      const Rational f = a[row][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[row][k] -= f * a[col][k];
      b[row] -= f * b[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

/// Matrix of phi -> F(l) = sum_{n<=l} (phi_n - phi_{n+1}) w_n with phi_{L+1} = 0, where
/// w_n = q^{n m_n}: row l, column n holds the coefficient of phi_n.
inline Matrix forward_matrix(const std::vector<Rational>& w) {
  const std::size_t size = w.size();
  Matrix a(size, std::vector<Rational>(size, Rational(0)));
  for (std::size_t l = 0; l < size; ++l) {
    for (std::size_t n = 0; n <= l; ++n) {
      a[l][n] += w[n];
      if (n + 1 < size) a[l][n + 1] -= w[n];
    }
  }
  return a;
}

}  // namespace oracle
