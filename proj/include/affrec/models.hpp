#pragma once

// Samplers for the distribution of the random pair (A, B) in each supported
// family, centring calibration driving the top Lyapunov exponent to zero,
// approximate sampling from the invariant direction measure, and the
// truncated backward series for contractive models.
//
// Families:
//   similarity               A = a R, ln a Gaussian, R Haar on O(d)
//   rank_one                 A = a w w~^T (image span(w), kernel w~^perp)
//   invertible_proximal      mixture of fixed GL(d) atoms (default: a
//                            conjugated hyperbolic plus an irrational
//                            rotation), proximal and strongly irreducible
//   nonnegative              i.i.d. positive entries exp(Gaussian)
//   diagonal_counterexample  A = diag(alpha, 1/alpha), reducible
//   permutation_counterexample  A in {antidiag(lambda, 1/lambda),
//                            antidiag(1,1)}, irreducible but not strongly
//
// The additive centring correction log_scale_shift multiplies every sampled
// A by exp(shift); for all families the Lyapunov exponent moves by exactly
// the shift, which is what makes one-shot recalibration possible.

#include "affrec/linalg.hpp"
#include "affrec/parallel.hpp"
#include "affrec/projective.hpp"
#include "affrec/rng.hpp"
#include "affrec/stats.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace affrec {

enum class Family {
  similarity,
  rank_one,
  invertible_proximal,
  nonnegative,
  diagonal_counterexample,
  permutation_counterexample,
};

inline std::string family_name(Family f) {
  switch (f) {
    case Family::similarity: return "similarity";
    case Family::rank_one: return "rank_one";
    case Family::invertible_proximal: return "invertible_proximal";
    case Family::nonnegative: return "nonnegative";
    case Family::diagonal_counterexample: return "diagonal_counterexample";
    case Family::permutation_counterexample: return "permutation_counterexample";
  }
  return "?";
}

inline Family family_from_name(const std::string& s) {
  if (s == "similarity") return Family::similarity;
  if (s == "rank_one") return Family::rank_one;
  if (s == "invertible_proximal") return Family::invertible_proximal;
  if (s == "nonnegative") return Family::nonnegative;
  if (s == "diagonal_counterexample") return Family::diagonal_counterexample;
  if (s == "permutation_counterexample") return Family::permutation_counterexample;
  throw std::invalid_argument("unknown family: " + s);
}

struct ModelSpec {
  Family family = Family::similarity;
  int d = 2;
  double log_scale_shift = 0.0;

  // similarity / rank_one: ln a ~ N(mean_a, sigma_a^2)
  double mean_a = 0.0;
  double sigma_a = 1.0;
  bool rotation_free = false;  // similarity only: R = I (scalar matrices)

  // rank_one direction law: kappa = 0 gives both directions uniform;
  // kappa > 0 concentrates w~ around e1 (w stays uniform); a fixed
  // alignment c in (0,1] makes both directions deterministic with
  // <w~, w> = c (degenerate chains for tests).
  double wtilde_kappa = 0.0;
  double fixed_alignment = 0.0;

  // invertible_proximal: atom mixture, optional small random rotation
  std::vector<Matrix> atoms;
  std::vector<double> weights;
  double jitter = 0.0;

  // nonnegative: entries exp(N(entry_mu, entry_sigma^2))
  double entry_mu = 0.0;
  double entry_sigma = 1.0;

  // counterexamples
  double s = 1.0;        // diagonal: ln alpha ~ N(0, s^2)
  double lambda = 2.0;   // permutation: antidiagonal scale, > 1

  // B law: Gaussian(b_mean, sigma_b^2 I), or |B| = exp(Pareto(pareto_index))
  // in a uniform direction for heavy-tail stress tests
  double sigma_b = 1.0;
  double b_mean = 0.0;
  bool heavy_tail_b = false;
  double pareto_index = 3.0;
};

inline void validate(const ModelSpec& m) {
  if (m.d < 1 || m.d > kMaxDim)
    throw std::invalid_argument("ModelSpec: d out of range [1,8]");
  if (m.sigma_a < 0 || m.sigma_b < 0 || m.entry_sigma < 0 || m.jitter < 0)
    throw std::invalid_argument("ModelSpec: negative scale parameter");
  if (m.family == Family::diagonal_counterexample ||
      m.family == Family::permutation_counterexample) {
    if (m.d != 2)
      throw std::invalid_argument("ModelSpec: counterexamples require d = 2");
  }
  if (m.family == Family::permutation_counterexample && m.lambda <= 1.0)
    throw std::invalid_argument("ModelSpec: permutation lambda must exceed 1");
  if (m.family == Family::diagonal_counterexample && m.s <= 0.0)
    throw std::invalid_argument("ModelSpec: diagonal s must be positive");
  if (m.family == Family::rank_one &&
      (m.fixed_alignment < 0.0 || m.fixed_alignment > 1.0))
    throw std::invalid_argument("ModelSpec: fixed_alignment outside [0,1]");
  if (m.family == Family::invertible_proximal && !m.atoms.empty()) {
    if (m.atoms.size() != m.weights.size())
      throw std::invalid_argument("ModelSpec: atoms/weights size mismatch");
    double tot = 0;
    for (double w : m.weights) {
      if (w < 0) throw std::invalid_argument("ModelSpec: negative weight");
      tot += w;
    }
    if (tot <= 0) throw std::invalid_argument("ModelSpec: weights sum to zero");
    for (const auto& a : m.atoms)
      if (a.rows() != m.d || a.cols() != m.d)
        throw std::invalid_argument("ModelSpec: atom dimension mismatch");
  }
  if (m.heavy_tail_b && m.pareto_index <= 0)
    throw std::invalid_argument("ModelSpec: pareto_index must be positive");
}

inline Matrix rotation2(double angle) {
  Matrix R(2, 2);
  const double c = std::cos(angle), s = std::sin(angle);
  R << c, -s, s, c;
  return R;
}

// Reference mixture for the invertible case: a hyperbolic matrix
// diag(2, 1/2) conjugated by a fixed rotation, plus a rotation by one
// radian. The hyperbolic atom is proximal; the irrational rotation rules
// out any finite invariant union of lines.
inline std::vector<Matrix> default_proximal_atoms() {
  Matrix C = rotation2(0.7);
  Matrix H = C * Eigen::DiagonalMatrix<double, 2>(2.0, 0.5) * C.transpose();
  return {H, rotation2(1.0)};
}

inline Vector sample_unit_sphere(int d, RngStream& rng) {
  Vector v(d);
  double n = 0.0;
  do {
    for (int i = 0; i < d; ++i) v[i] = rng.normal();
    n = v.norm();
  } while (n == 0.0);
  return v / n;
}

// Haar measure on O(d): QR of a Gaussian matrix with the R-diagonal sign
// correction. d = 2 takes the cheap angle/reflection route (same measure).
inline Matrix sample_haar_orthogonal(int d, RngStream& rng) {
  if (d == 1) {
    Matrix R(1, 1);
    R(0, 0) = rng.bernoulli(0.5) ? 1.0 : -1.0;
    return R;
  }
  if (d == 2) {
    Matrix R = rotation2(rng.uniform(0.0, 6.283185307179586476925286766559));
    if (rng.bernoulli(0.5)) {
      R(0, 1) = -R(0, 1);
      R(1, 1) = -R(1, 1);
    }
    return R;
  }
  Matrix G(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) G(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ();
  Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i)
    if (R(i, i) < 0) Q.col(i) = -Q.col(i);
  return Q;
}

namespace detail {

inline Vector sample_wtilde(const ModelSpec& m, RngStream& rng) {
  if (m.fixed_alignment > 0.0) {
    Vector w = Vector::Zero(m.d);
    if (m.d == 1) {
      w[0] = 1.0;
    } else {
      w[0] = m.fixed_alignment;
      w[1] = std::sqrt(std::max(0.0, 1.0 - m.fixed_alignment * m.fixed_alignment));
    }
    return w;
  }
  if (m.wtilde_kappa > 0.0) {
    Vector v(m.d);
    for (int i = 0; i < m.d; ++i) v[i] = rng.normal();
    v[0] += m.wtilde_kappa;
    const double n = v.norm();
    return n > 0 ? Vector(v / n) : sample_unit_sphere(m.d, rng);
  }
  return sample_unit_sphere(m.d, rng);
}

inline Vector sample_w(const ModelSpec& m, RngStream& rng) {
  if (m.fixed_alignment > 0.0) {
    Vector w = Vector::Zero(m.d);
    w[0] = 1.0;
    return w;
  }
  return sample_unit_sphere(m.d, rng);
}

}  // namespace detail

// One draw of the matrix part. Draw order within each family is fixed; it is
// part of the reproducibility contract.
inline Matrix sample_matrix(const ModelSpec& m, RngStream& rng) {
  const double shift = std::exp(m.log_scale_shift);
  switch (m.family) {
    case Family::similarity: {
      const double a = std::exp(rng.normal(m.mean_a, m.sigma_a));
      Matrix R = m.rotation_free ? Matrix::Identity(m.d, m.d)
                                 : sample_haar_orthogonal(m.d, rng);
      return (a * shift) * R;
    }
    case Family::rank_one: {
      Vector wt = detail::sample_wtilde(m, rng);
      Vector w = detail::sample_w(m, rng);
      const double a = std::exp(rng.normal(m.mean_a, m.sigma_a));
      return (a * shift) * (w * wt.transpose());
    }
    case Family::invertible_proximal: {
      const std::vector<Matrix>& atoms =
          m.atoms.empty() ? default_proximal_atoms() : m.atoms;
      std::vector<double> w = m.weights;
      if (m.atoms.empty()) w = {0.5, 0.5};
      double tot = 0;
      for (double x : w) tot += x;
      double u = rng.uniform() * tot;
      std::size_t k = 0;
      for (; k + 1 < w.size(); ++k) {
        if (u < w[k]) break;
        u -= w[k];
      }
      Matrix A = atoms[k];
      if (m.jitter > 0.0 && m.d == 2)
        A = rotation2(rng.normal(0.0, m.jitter)) * A;
      return shift * A;
    }
    case Family::nonnegative: {
      Matrix A(m.d, m.d);
      for (int i = 0; i < m.d; ++i)
        for (int j = 0; j < m.d; ++j)
          A(i, j) = std::exp(rng.normal(m.entry_mu, m.entry_sigma));
      return shift * A;
    }
    case Family::diagonal_counterexample: {
      const double la = rng.normal(0.0, m.s);
      Matrix A = Matrix::Zero(2, 2);
      A(0, 0) = std::exp(la) * shift;
      A(1, 1) = std::exp(-la) * shift;
      return A;
    }
    case Family::permutation_counterexample: {
      Matrix A = Matrix::Zero(2, 2);
      if (rng.bernoulli(0.5)) {
        A(0, 1) = m.lambda;
        A(1, 0) = 1.0 / m.lambda;
      } else {
        A(0, 1) = 1.0;
        A(1, 0) = 1.0;
      }
      return shift * A;
    }
  }
  throw std::logic_error("sample_matrix: unreachable");
}

inline Vector sample_b(const ModelSpec& m, RngStream& rng) {
  if (m.heavy_tail_b) {
    const double mag = std::exp(rng.pareto(m.pareto_index));
    return mag * sample_unit_sphere(m.d, rng);
  }
  Vector b(m.d);
  for (int i = 0; i < m.d; ++i) b[i] = m.b_mean + m.sigma_b * rng.normal();
  return b;
}

// The i.i.d. pair (A, B). All trajectory drivers draw full pairs even when
// only the matrix is used, so different observables computed on the same
// stream see the same matrices.
inline std::pair<Matrix, Vector> sample_pair(const ModelSpec& m,
                                             RngStream& rng) {
  Matrix A = sample_matrix(m, rng);
  Vector B = sample_b(m, rng);
  return {std::move(A), std::move(B)};
}

// --- invariant direction measure ---------------------------------------

// similarity: exactly uniform on P(R^d). rank_one: exactly the law of the
// image direction. Other families: forward iteration from a uniform (or
// simplex-uniform) start; the bias decays at the projective contraction
// rate, so the default burn-in of 200 steps is far below measurement noise.
inline ProjectivePoint sample_invariant_direction(const ModelSpec& m,
                                                  RngStream& rng,
                                                  int burn_in = 200) {
  if (burn_in < 0) throw std::invalid_argument("burn_in must be >= 0");
  switch (m.family) {
    case Family::similarity: {
      Vector g(m.d);
      for (int i = 0; i < m.d; ++i) g[i] = rng.normal();
      if (g.norm() == 0.0) g[0] = 1.0;
      return canonicalize(g);
    }
    case Family::rank_one: {
      Matrix A = sample_matrix(m, rng);
      // image of a rank-one matrix: its largest column
      Eigen::Index jmax = 0;
      A.colwise().norm().maxCoeff(&jmax);
      return canonicalize(A.col(jmax));
    }
    case Family::nonnegative: {
      Vector v(m.d);
      for (int i = 0; i < m.d; ++i) v[i] = std::abs(rng.normal());
      ProjectivePoint p = canonicalize(v);
      for (int k = 0; k < burn_in; ++k) {
        Matrix A = sample_matrix(m, rng);
        auto r = act(A, p);
        if (r.image.is_zero()) break;
        p = r.image;
      }
      return p;
    }
    default: {
      ProjectivePoint p = canonicalize(sample_unit_sphere(m.d, rng));
      for (int k = 0; k < burn_in; ++k) {
        Matrix A = sample_matrix(m, rng);
        auto r = act(A, p);
        if (r.image.is_zero()) break;
        p = r.image;
      }
      return p;
    }
  }
}

// --- centring calibration ------------------------------------------------

struct CalibrationError : std::runtime_error {
  explicit CalibrationError(const std::string& what, double gamma)
      : std::runtime_error(what), last_gamma(gamma) {}
  double last_gamma;
};

// (1/n) ln||A_n ... A_1|| averaged over replicas; replica i runs on the
// stream derived from (seed, i), so the estimate is worker-count invariant.
// Lives here because centring calibration iterates on it.
inline EstimateReport estimate_lyapunov(const ModelSpec& spec,
                                        std::size_t horizon,
                                        std::size_t replicas,
                                        std::uint64_t seed, int workers = 1) {
  validate(spec);
  if (horizon < 1 || replicas < 2)
    throw std::invalid_argument("estimate_lyapunov: horizon >= 1, replicas >= 2");
  auto vals = parallel_map_indexed<double>(replicas, workers, [&](std::size_t i) {
    RngStream rng = RngStream::substream(seed, i);
    LogScaledMatrix P = logscaled_identity(spec.d);
    for (std::size_t k = 0; k < horizon; ++k) {
      Matrix A = sample_matrix(spec, rng);
      left_multiply(P, A);
      if (P.is_zero()) return kNegInf;
    }
    return P.log_scale / static_cast<double>(horizon);
  });
  RunningStat st;
  for (double v : vals) st.add(v);
  EstimateReport r;
  r.point = st.mean;
  r.std_err = st.stderr_mean();
  r.n_samples = replicas;
  r.metadata["horizon"] = std::to_string(horizon);
  r.metadata["estimator"] = "lyapunov_norm";
  return r;
}

// Returns a copy of the spec with log_scale_shift set so that the estimated
// Lyapunov exponent is within tol of zero.
//   similarity: exact, shift = -mean_a.
//   rank_one:   exact in the a-part; the direction term E ln|<w~, w>| is
//               Monte Carlo estimated to tol/2 (budget = sample count).
//   invertible_proximal / nonnegative: iterative re-estimation, at most
//               5 rounds, budget = total matrix steps across all rounds.
//   counterexample families are rejected: the diagonal model is centred
//   coordinate-wise by construction and the permutation model is centred
//   through its two-step walk; neither admits a scale recalibration.
inline ModelSpec calibrate_centring(const ModelSpec& spec, double tol,
                                    std::size_t budget,
                                    std::uint64_t seed = 0x5eedu,
                                    int workers = 1) {
  validate(spec);
  if (tol <= 0) throw std::invalid_argument("calibrate_centring: tol <= 0");
  ModelSpec out = spec;
  switch (spec.family) {
    case Family::similarity:
      out.log_scale_shift = -spec.mean_a;
      return out;
    case Family::rank_one: {
      if (spec.fixed_alignment > 0.0) {
        out.log_scale_shift = -(spec.mean_a + std::log(spec.fixed_alignment));
        return out;
      }
      RngStream rng = RngStream::substream(seed, 0);
      RunningStat st;
      const std::size_t n = std::max<std::size_t>(budget, 1000);
      for (std::size_t i = 0; i < n; ++i) {
        Vector wt = detail::sample_wtilde(spec, rng);
        Vector w = detail::sample_w(spec, rng);
        st.add(std::log(std::abs(wt.dot(w))));
      }
      if (3.0 * st.stderr_mean() > 0.5 * tol)
        throw CalibrationError("rank_one centring: budget too small for tol",
                               spec.mean_a + st.mean);
      out.log_scale_shift = -(spec.mean_a + st.mean);
      return out;
    }
    case Family::invertible_proximal:
    case Family::nonnegative: {
      const int rounds = 5;
      const std::size_t per_round = std::max<std::size_t>(budget / rounds, 10000);
      const std::size_t m = 32;
      const std::size_t n = std::max<std::size_t>(per_round / m, 500);
      double gamma = 0.0;
      for (int r = 0; r < rounds; ++r) {
        EstimateReport g = estimate_lyapunov(out, n, m, seed + 1 + r, workers);
        gamma = g.point;
        if (std::abs(gamma) <= tol) return out;
        out.log_scale_shift -= gamma;
      }
      EstimateReport g = estimate_lyapunov(out, n, m, seed + 99, workers);
      if (std::abs(g.point) <= tol) return out;
      throw CalibrationError("calibrate_centring: budget exhausted", g.point);
    }
    default:
      throw std::invalid_argument(
          "calibrate_centring: not applicable to counterexample families");
  }
}

// --- contractive fixed point ----------------------------------------------

// Truncated backward series sum_k A_1...A_{k-1} B_k for a verifiably
// contractive spec; the truncation stops when the prefix product norm times
// the running B scale drops below tol.
inline Vector sample_contractive_fixed_point(const ModelSpec& spec,
                                             RngStream& rng, double tol,
                                             std::size_t max_terms = 100000,
                                             bool check_contraction = true,
                                             std::uint64_t check_seed = 0xc0ffee) {
  validate(spec);
  if (tol <= 0) throw std::invalid_argument("tol must be positive");
  if (check_contraction) {
    EstimateReport g = estimate_lyapunov(spec, 2000, 16, check_seed, 1);
    if (!(g.point + 3.0 * g.std_err < 0.0))
      throw std::runtime_error(
          "sample_contractive_fixed_point: spec not verifiably contractive");
  }
  Vector x = Vector::Zero(spec.d);
  LogScaledMatrix prefix = logscaled_identity(spec.d);
  double b_scale = 1.0;
  for (std::size_t k = 0; k < max_terms; ++k) {
    auto [A, B] = sample_pair(spec, rng);
    if (prefix.is_zero()) return x;  // absorbed: all later terms vanish
    x += std::exp(prefix.log_scale) * (prefix.factor * B);
    b_scale = std::max(b_scale, B.norm());
    prefix = logscaled_multiply(prefix, logscaled_from(A));
    if (prefix.is_zero() ||
        std::exp(prefix.log_scale) * b_scale < tol)
      return x;
  }
  throw std::runtime_error(
      "sample_contractive_fixed_point: no contraction within horizon");
}

}  // namespace affrec
