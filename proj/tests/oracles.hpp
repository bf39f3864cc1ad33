#pragma once

// Test-only oracles, kept independent of the library's computation paths:
// closed-form 2x2 singular values via the characteristic polynomial of
// M^T M, cofactor determinants, minor extraction, and an inverse-transform
// sampler for a prescribed survival law.

#include "affrec/linalg.hpp"
#include "affrec/rng.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace oracles {

// singular values of a 2x2 matrix from the characteristic polynomial of
// M^T M: lambda^2 - tr lambda + det = 0
inline std::array<double, 2> svd2x2(const affrec::Matrix& M) {
  const double a = M(0, 0), b = M(0, 1), c = M(1, 0), d = M(1, 1);
  const double t = a * a + b * b + c * c + d * d;        // trace(M^T M)
  const double de = (a * d - b * c) * (a * d - b * c);   // det(M^T M)
  const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * de));
  const double l1 = 0.5 * (t + disc), l2 = 0.5 * (t - disc);
  return {std::sqrt(std::max(0.0, l1)), std::sqrt(std::max(0.0, l2))};
}

// cofactor-expansion determinant, recursive, for independence from Eigen
inline double det_cofactor(const affrec::Matrix& M) {
  const int n = static_cast<int>(M.rows());
  if (n == 1) return M(0, 0);
  if (n == 2) return M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    affrec::Matrix sub(n - 1, n - 1);
    for (int r = 1; r < n; ++r) {
      int cc = 0;
      for (int col = 0; col < n; ++col) {
        if (col == j) continue;
        sub(r - 1, cc++) = M(r, col);
      }
    }
    acc += ((j % 2 == 0) ? 1.0 : -1.0) * M(0, j) * det_cofactor(sub);
  }
  return acc;
}

inline affrec::Matrix minor_of(const affrec::Matrix& A,
                               const std::vector<int>& rows,
                               const std::vector<int>& cols) {
  affrec::Matrix m(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) m(i, j) = A(rows[i], cols[j]);
  return m;
}

// integer samples with survival P(T > n) = (n + 1)^{-1/2} (asymptotically
// n^{-1/2}): T = floor(U^{-2})
inline std::size_t sqrt_tail_sample(affrec::RngStream& rng, std::size_t cap) {
  double u = rng.uniform();
  while (u <= 0.0) u = rng.uniform();
  const double t = 1.0 / (u * u);
  if (t >= static_cast<double>(cap)) return cap;
  return static_cast<std::size_t>(t);
}

// composite Simpson integration
template <class F>
double simpson(F f, double a, double b, int n_even) {
  const int n = n_even % 2 == 0 ? n_even : n_even + 1;
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace oracles
