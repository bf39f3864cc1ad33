#pragma once

// Dense small-dimension linear algebra (d <= 8) with a log-scaled matrix
// representation that keeps products of millions of random matrices inside
// double range: the matrix is stored as exp(log_scale) * factor with
// ||factor|| = 1 in operator norm.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace affrec {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr int kMaxDim = 8;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Largest singular value. Closed form for d <= 2, symmetric eigensolver on
// M^T M otherwise; both routes are accurate to ~1e-14 relative on the top
// value for these dimensions.
inline double operator_norm(const Matrix& M) {
  const auto n = M.rows();
  if (n == 1 && M.cols() == 1) return std::abs(M(0, 0));
  if (n == 2 && M.cols() == 2) {
    const double a = M(0, 0) * M(0, 0) + M(1, 0) * M(1, 0);
    const double c = M(0, 1) * M(0, 1) + M(1, 1) * M(1, 1);
    const double b = M(0, 0) * M(0, 1) + M(1, 0) * M(1, 1);
    const double lmax = 0.5 * ((a + c) + std::hypot(a - c, 2.0 * b));
    return std::sqrt(std::max(0.0, lmax));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(M.transpose() * M,
                                           Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

// All singular values, descending.
inline std::vector<double> singular_values(const Matrix& M) {
  Eigen::JacobiSVD<Matrix> svd(M);
  const auto& s = svd.singularValues();
  std::vector<double> out(s.data(), s.data() + s.size());
  return out;  // Eigen returns them sorted descending
}

// min over columns j of sum_i M(i,j); defined for nonnegative matrices only
inline double min_column_sum(const Matrix& M) {
  if ((M.array() < 0.0).any())
    throw std::invalid_argument("min_column_sum: negative entry");
  return M.colwise().sum().minCoeff();
}

struct LogScaledMatrix {
  Matrix factor;     // operator norm 1, or the zero matrix
  double log_scale;  // -inf iff factor is zero

  bool is_zero() const { return log_scale == kNegInf; }

  // exp(log_scale) * factor; only safe when the scale fits in double range
  Matrix materialize() const {
    if (is_zero()) return Matrix::Zero(factor.rows(), factor.cols());
    return std::exp(log_scale) * factor;
  }
};

inline LogScaledMatrix logscaled_identity(int d) {
  return {Matrix::Identity(d, d), 0.0};
}

inline LogScaledMatrix logscaled_from(const Matrix& M) {
  const double nrm = operator_norm(M);
  if (nrm == 0.0) return {Matrix::Zero(M.rows(), M.cols()), kNegInf};
  return {M / nrm, std::log(nrm)};
}

inline LogScaledMatrix logscaled_multiply(const LogScaledMatrix& L,
                                          const LogScaledMatrix& R) {
  if (L.is_zero() || R.is_zero())
    return {Matrix::Zero(L.factor.rows(), R.factor.cols()), kNegInf};
  Matrix P = L.factor * R.factor;
  const double nrm = operator_norm(P);
  if (nrm == 0.0) return {Matrix::Zero(P.rows(), P.cols()), kNegInf};
  P /= nrm;
  return {std::move(P), L.log_scale + R.log_scale + std::log(nrm)};
}

inline LogScaledMatrix operator*(const LogScaledMatrix& L,
                                 const LogScaledMatrix& R) {
  return logscaled_multiply(L, R);
}

// P <- A * P, the update for running left products A_n ... A_1.
inline void left_multiply(LogScaledMatrix& P, const Matrix& A) {
  P = logscaled_multiply(logscaled_from(A), P);
}

struct LogScaledApply {
  double log_gain;   // ln |factor * v|; the caller adds log_scale if needed
  Vector direction;  // unit, or zero vector when absorbed
  bool zero;
};

// v must be a unit vector.
inline LogScaledApply logscaled_apply(const LogScaledMatrix& L,
                                      const Vector& v) {
  if (std::abs(v.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("logscaled_apply: input must be unit norm");
  if (L.is_zero())
    return {kNegInf, Vector::Zero(L.factor.rows()), true};
  Vector w = L.factor * v;
  const double g = w.norm();
  if (g == 0.0) return {kNegInf, Vector::Zero(w.size()), true};
  w /= g;
  return {std::log(g), std::move(w), false};
}

}  // namespace affrec
