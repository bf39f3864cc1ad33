#pragma once

// Action on exterior powers: compound matrices (r x r minors over the
// lexicographic r-subset basis), the singular-value identity for their
// operator norm, empirical proximal-dimension estimation through the
// discrete-QR Lyapunov spectrum, and the generalized reverse-norm-control
// coefficient driven by the lifted gain cocycle.

#include "affrec/estimators.hpp"
#include "affrec/models.hpp"
#include "affrec/projective.hpp"
#include "affrec/simulate.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace affrec {

inline std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// r-element subsets of {0..d-1} in lexicographic order.
inline std::vector<std::vector<int>> r_subsets(int d, int r) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(r);
  for (int i = 0; i < r; ++i) cur[i] = i;
  for (;;) {
    out.push_back(cur);
    int i = r - 1;
    while (i >= 0 && cur[i] == d - r + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < r; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

// Compound matrix: entry (I, J) is the determinant of the minor of A with
// rows I and columns J. r = 1 returns A itself; r = d the 1x1 determinant.
// Multiplicativity compound(AB) = compound(A) compound(B) is Cauchy-Binet.
inline Matrix compound(const Matrix& A, int r) {
  const int d = static_cast<int>(A.rows());
  if (A.cols() != d) throw std::invalid_argument("compound: square input");
  if (r < 1 || r > d) throw std::invalid_argument("compound: 1 <= r <= d");
  if (r == 1) return A;
  const auto subs = r_subsets(d, r);
  const auto D = static_cast<Eigen::Index>(subs.size());
  Matrix C(D, D);
  Matrix minor(r, r);
  for (Eigen::Index a = 0; a < D; ++a)
    for (Eigen::Index b = 0; b < D; ++b) {
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) minor(i, j) = A(subs[a][i], subs[b][j]);
      C(a, b) = minor.determinant();
    }
  return C;
}

// ||compound(A, r)|| equals the product of the top r singular values of A.
struct WedgeNormCheck {
  double compound_norm = 0.0;
  double sv_product = 0.0;
};

inline WedgeNormCheck wedge_norm_check(const Matrix& A, int r) {
  WedgeNormCheck out;
  out.compound_norm = operator_norm(compound(A, r));
  const auto sv = singular_values(A);
  double p = 1.0;
  for (int i = 0; i < r; ++i) p *= sv[static_cast<std::size_t>(i)];
  out.sv_product = p;
  return out;
}

// --- Lyapunov spectrum and proximal dimension ------------------------------

struct ProximalDimEstimate {
  int r_hat = 0;  // 0 = undetermined
  std::vector<double> exponents;  // descending
  std::vector<double> stderrs;
  double gap_tol = 0.0;
  bool ambiguous = false;
};

// Discrete-QR estimation of the full Lyapunov spectrum: accumulate matrices
// onto an orthonormal frame and re-orthogonalize every `qr_cadence` steps,
// summing ln of the R-diagonal. The proximal dimension estimate is the
// multiplicity of the top exponent at the resolved gap tolerance
// 3 * combined stderr + 0.01.
inline ProximalDimEstimate estimate_proximal_dimension(
    const ModelSpec& spec, std::size_t horizon, std::size_t replicas,
    std::uint64_t seed, int workers = 1, std::size_t qr_cadence = 20) {
  validate(spec);
  if (horizon < qr_cadence || replicas < 2)
    throw std::invalid_argument("estimate_proximal_dimension: budget");
  const int d = spec.d;
  auto rows = parallel_map_indexed<std::vector<double>>(
      replicas, workers, [&](std::size_t i) {
        RngStream rng = RngStream::substream(seed, i);
        Matrix Q = Matrix::Identity(d, d);
        std::vector<double> acc(d, 0.0);
        std::size_t pending = 0;
        auto flush = [&] {
          if (pending == 0) return;
          Eigen::HouseholderQR<Matrix> qr(Q);
          Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
          Q = qr.householderQ();
          for (int j = 0; j < d; ++j) {
            acc[j] += std::log(std::abs(R(j, j)));
            if (R(j, j) < 0) Q.col(j) = -Q.col(j);
          }
          pending = 0;
        };
        for (std::size_t k = 0; k < horizon; ++k) {
          Matrix A = sample_matrix(spec, rng);
          Q = A * Q;
          if (++pending == qr_cadence) flush();
        }
        flush();
        for (int j = 0; j < d; ++j) acc[j] /= static_cast<double>(horizon);
        return acc;
      });

  ProximalDimEstimate out;
  std::vector<RunningStat> st(d);
  for (const auto& row : rows)
    for (int j = 0; j < d; ++j) st[j].add(row[j]);
  for (int j = 0; j < d; ++j) {
    out.exponents.push_back(st[j].mean);
    out.stderrs.push_back(st[j].stderr_mean());
  }
  double comb = 0.0;
  for (int j = 0; j < d; ++j) comb += out.stderrs[j] * out.stderrs[j];
  out.gap_tol = 3.0 * std::sqrt(comb) + 0.01;

  int k = 1;
  while (k < d && out.exponents[0] - out.exponents[k] < out.gap_tol) ++k;
  out.r_hat = k;
  // the separating gap being barely above tolerance leaves r ambiguous
  if (k < d && out.exponents[0] - out.exponents[k] < 2.0 * out.gap_tol) {
    out.ambiguous = true;
    out.r_hat = 0;
  }
  return out;
}

// --- lifted reverse norm control ---------------------------------------------

// Generalized coefficient sup_n ||A_{n,1}|| / |compound^r A_{n,1} w|^{1/r},
// with the base product and the lifted gain driven by the same matrix
// stream. r = 1 reproduces rnc_coefficient arithmetic exactly.
inline RncSample lifted_rnc_coefficient(
    const ModelSpec& spec, const ProjectivePoint& w0, int r,
    std::size_t horizon, RngStream& rng,
    const std::vector<std::size_t>& checkpoints = {}) {
  validate(spec);
  if (r < 1 || r > spec.d) throw std::invalid_argument("lifted_rnc: 1 <= r <= d");
  if (w0.is_zero()) throw std::invalid_argument("lifted_rnc: w0 nonzero");
  const auto D = binomial(spec.d, r);
  if (w0.dim() != static_cast<int>(D))
    throw std::invalid_argument("lifted_rnc: w0 must live in dimension C(d,r)");
  RncSample out;
  out.horizon = horizon;
  LogScaledMatrix P = logscaled_identity(spec.d);
  ProjectivePoint w = w0;
  double lifted_gain = 0.0;
  double sup = 0.0;
  std::size_t arg = 0;
  std::size_t ci = 0;
  const double inv_r = 1.0 / static_cast<double>(r);
  for (std::size_t n = 1; n <= horizon; ++n) {
    auto [A, B] = sample_pair(spec, rng);
    left_multiply(P, A);
    auto rr = act(compound(A, r), w);
    if (rr.image.is_zero()) {
      out.infinite = true;
      out.log_value = std::numeric_limits<double>::infinity();
      out.argmax = n;
      return out;
    }
    lifted_gain += rr.log_gain;
    w = rr.image;
    const double val = P.log_scale - inv_r * lifted_gain;
    if (val > sup) {
      sup = val;
      arg = n;
    }
    while (ci < checkpoints.size() && checkpoints[ci] == n) {
      out.checkpoints.push_back({n, sup, arg <= n / 2});
      ++ci;
    }
  }
  out.log_value = sup;
  out.argmax = arg;
  out.stabilized = arg <= horizon / 2;
  return out;
}

// Ladder epoch of the lifted gain: first n with |compound^r A_{n,1} w| <= rho.
inline LadderSample lifted_ladder_time(const ModelSpec& spec,
                                       const ProjectivePoint& w0, int r,
                                       double rho, std::size_t cap,
                                       RngStream& rng) {
  validate(spec);
  if (r < 1 || r > spec.d) throw std::invalid_argument("lifted_ladder: r");
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument("lifted_ladder: rho in (0,1)");
  if (w0.is_zero() || w0.dim() != static_cast<int>(binomial(spec.d, r)))
    throw std::invalid_argument("lifted_ladder: bad start");
  const double threshold = std::log(rho);
  ProjectivePoint w = w0;
  double S = 0.0;
  for (std::size_t step = 1; step <= cap; ++step) {
    auto [A, B] = sample_pair(spec, rng);
    auto rr = act(compound(A, r), w);
    if (rr.image.is_zero()) return {step, false, rho, cap};
    S += rr.log_gain;
    if (S <= threshold) return {step, false, rho, cap};
    w = rr.image;
  }
  return {cap, true, rho, cap};
}

// Uniform starting point on the projective space of the r-th exterior power.
inline ProjectivePoint sample_lifted_direction(int d, int r, RngStream& rng) {
  return canonicalize(sample_unit_sphere(static_cast<int>(binomial(d, r)), rng));
}

}  // namespace affrec
