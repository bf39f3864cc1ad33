#pragma once

// The renormalized Markov chain Z_n = +- A_n Z_{n-1} / |Z_{n-1}| on rays,
// identified with (log gain, direction) pairs, and the rank-one fluctuation
// identities built on it: exact stationarity of the chain law from the
// second step on, the 3N bounds for the polynomial weight function, and the
// closed-form asymptotic variance of the log-gain walk.

#include "affrec/estimators.hpp"
#include "affrec/models.hpp"
#include "affrec/projective.hpp"
#include "affrec/simulate.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace affrec {

struct SignedRay {
  double log_norm = 0.0;  // ln of the current gain; -inf when absorbed
  ProjectivePoint direction;

  bool absorbed() const { return direction.is_zero(); }

  static SignedRay from_direction(const ProjectivePoint& p, double log_norm = 0.0) {
    SignedRay z;
    z.log_norm = p.is_zero() ? kNegInf : log_norm;
    z.direction = p;
    return z;
  }
};

// f(z) = ln|z|, the increment of the log-gain walk.
inline double f_value(const SignedRay& z) {
  if (z.absorbed()) throw std::domain_error("f_value: absorbed ray");
  return z.log_norm;
}

// One chain step: the new ray carries only the one-step gain (the chain
// renormalizes every step). Works for any family; absorption propagates.
inline SignedRay step_Z(const ModelSpec& spec, const SignedRay& z,
                        RngStream& rng) {
  if (z.absorbed()) {
    SignedRay out = z;
    sample_pair(spec, rng);  // keep the stream aligned with live chains
    return out;
  }
  auto [A, B] = sample_pair(spec, rng);
  auto r = act(A, z.direction);
  SignedRay out;
  out.log_norm = r.log_gain;
  out.direction = r.image;
  return out;
}

// Empirical laws of f(Z_k) after `chain_steps` steps from each start,
// compared pairwise and against a stationary draw by the two-sample KS
// statistic. For rank-one models the direction after one step is already a
// fresh image direction, so for chain_steps >= 2 all these laws coincide
// exactly and the statistic sits at its null level.
struct StationarityCheck {
  double max_ks = 0.0;
  std::vector<double> pairwise;  // row-major over (starts..., stationary)
  std::size_t n_samples = 0;
};

inline StationarityCheck two_step_stationarity_check(
    const ModelSpec& spec, const std::vector<SignedRay>& starts,
    std::size_t n_samples, std::uint64_t seed, int chain_steps = 2,
    int workers = 1) {
  validate(spec);
  if (spec.family != Family::rank_one)
    throw std::invalid_argument("two_step_stationarity_check: rank_one only");
  if (starts.empty()) throw std::invalid_argument("need at least one start");
  if (chain_steps < 1) throw std::invalid_argument("chain_steps >= 1");

  const std::size_t groups = starts.size() + 1;
  auto samples = parallel_map_indexed<std::vector<double>>(
      groups, workers, [&](std::size_t g) {
        std::vector<double> xs;
        xs.reserve(n_samples);
        RngStream rng = RngStream::substream(seed, g);
        if (g < starts.size()) {
          for (std::size_t i = 0; i < n_samples; ++i) {
            SignedRay z = starts[g];
            for (int k = 0; k < chain_steps; ++k) z = step_Z(spec, z, rng);
            if (!z.absorbed()) xs.push_back(f_value(z));
          }
        } else {
          // stationary draw: gain of one step from an invariant direction
          for (std::size_t i = 0; i < n_samples; ++i) {
            ProjectivePoint v = sample_invariant_direction(spec, rng);
            Matrix A = sample_matrix(spec, rng);
            auto r = act(A, v);
            if (!r.image.is_zero()) xs.push_back(r.log_gain);
          }
        }
        return xs;
      });

  StationarityCheck out;
  out.n_samples = n_samples;
  for (std::size_t a = 0; a < groups; ++a)
    for (std::size_t b = a + 1; b < groups; ++b) {
      std::vector<double> xa = samples[a], xb = samples[b];
      const double d = ks_statistic(xa, xb);
      out.pairwise.push_back(d);
      out.max_ks = std::max(out.max_ks, d);
    }
  return out;
}

// Weight function N(z) = sup_n (P^n |f|^{dp}(z))^{1/p}. For rank-one chains
// the law of Z_n is independent of the start from n = 2 on, so the sup runs
// over n in {0, 1, 2} only:
//   n = 0 term: |f(z)|^d        (exact)
//   n = 1 term: one-step Monte Carlo from z
//   n = 2 term: the stationary moment (shared across z)
struct WeightEstimate {
  double value = 0.0;
  double term_f = 0.0;
  double term_one_step = 0.0;
  double term_stationary = 0.0;
  double stderr_value = 0.0;
};

namespace detail {

// E |f|^{dp} after one step from direction u, with its standard error.
inline std::pair<double, double> one_step_abs_moment(const ModelSpec& spec,
                                                     const ProjectivePoint& u,
                                                     double dp,
                                                     std::size_t n,
                                                     RngStream& rng) {
  RunningStat st;
  for (std::size_t i = 0; i < n; ++i) {
    Matrix A = sample_matrix(spec, rng);
    auto r = act(A, u);
    if (r.image.is_zero()) continue;  // null set for continuous laws
    st.add(std::pow(std::abs(r.log_gain), dp));
  }
  return {st.mean, st.stderr_mean()};
}

inline std::pair<double, double> stationary_abs_moment(const ModelSpec& spec,
                                                       double dp,
                                                       std::size_t n,
                                                       RngStream& rng) {
  RunningStat st;
  for (std::size_t i = 0; i < n; ++i) {
    ProjectivePoint v = sample_invariant_direction(spec, rng);
    Matrix A = sample_matrix(spec, rng);
    auto r = act(A, v);
    if (r.image.is_zero()) continue;
    st.add(std::pow(std::abs(r.log_gain), dp));
  }
  return {st.mean, st.stderr_mean()};
}

}  // namespace detail

inline WeightEstimate weight_N(const ModelSpec& spec, const SignedRay& z,
                               double delta_exp, double p,
                               std::size_t n_samples, std::uint64_t seed) {
  validate(spec);
  if (spec.family != Family::rank_one)
    throw std::invalid_argument("weight_N: rank_one only");
  if (!(delta_exp > 1.0 && p > 2.0))
    throw std::invalid_argument("weight_N: need delta > 1, p > 2");
  if (z.absorbed()) throw std::invalid_argument("weight_N: absorbed start");
  const double dp = delta_exp * p;
  RngStream rng = RngStream::substream(seed, 0);
  WeightEstimate w;
  w.term_f = std::pow(std::abs(f_value(z)), delta_exp);
  auto [m1, se1] =
      detail::one_step_abs_moment(spec, z.direction, dp, n_samples, rng);
  w.term_one_step = std::pow(m1, 1.0 / p);
  auto [m2, se2] = detail::stationary_abs_moment(spec, dp, n_samples, rng);
  w.term_stationary = std::pow(m2, 1.0 / p);
  w.value = std::max({w.term_f, w.term_one_step, w.term_stationary});
  // error on the max via the larger of the two propagated term errors
  const double e1 = m1 > 0 ? w.term_one_step * se1 / (p * m1) : 0.0;
  const double e2 = m2 > 0 ? w.term_stationary * se2 / (p * m2) : 0.0;
  w.stderr_value = std::max(e1, e2);
  return w;
}

// E_z N(Z_n) by nested Monte Carlo: outer paths of n steps, inner one-step
// moment at each endpoint. The stationary term is shared.
inline std::pair<double, double> pn_weight_N(const ModelSpec& spec,
                                             const SignedRay& z, int n,
                                             double delta_exp, double p,
                                             std::size_t n_outer,
                                             std::size_t n_inner,
                                             std::uint64_t seed) {
  validate(spec);
  if (n < 1) throw std::invalid_argument("pn_weight_N: n >= 1");
  const double dp = delta_exp * p;
  RngStream rng = RngStream::substream(seed, 1);
  auto [mstat, se_stat] =
      detail::stationary_abs_moment(spec, dp, n_outer, rng);
  const double term_stat = std::pow(mstat, 1.0 / p);
  RunningStat st;
  for (std::size_t i = 0; i < n_outer; ++i) {
    SignedRay zz = z;
    for (int k = 0; k < n; ++k) zz = step_Z(spec, zz, rng);
    if (zz.absorbed()) continue;
    const double tf = std::pow(std::abs(f_value(zz)), delta_exp);
    auto [m1, se1] =
        detail::one_step_abs_moment(spec, zz.direction, dp, n_inner, rng);
    st.add(std::max({tf, std::pow(m1, 1.0 / p), term_stat}));
  }
  return {st.mean, st.stderr_mean()};
}

// sigma^2 = V(Y_2) + 2 cov(Y_2, Y_1) with Y_k = ln a_k + ln|<w~_k, w_{k-1}>|,
// estimated from i.i.d. consecutive pairs that share the middle direction.
// Batched for the standard error; a value within noise of zero is flagged
// degenerate in the metadata.
inline EstimateReport rk1_sigma2_closed_form(const ModelSpec& spec,
                                             std::size_t n_samples,
                                             std::uint64_t seed,
                                             std::size_t batches = 50) {
  validate(spec);
  if (spec.family != Family::rank_one)
    throw std::invalid_argument("rk1_sigma2_closed_form: rank_one only");
  if (n_samples < batches * 10)
    throw std::invalid_argument("rk1_sigma2_closed_form: too few samples");
  RngStream rng = RngStream::substream(seed, 0);
  const std::size_t per = n_samples / batches;
  RunningStat batch_stat;
  const double la_shift = spec.mean_a + spec.log_scale_shift;
  for (std::size_t b = 0; b < batches; ++b) {
    RunningStat y2, y1, prod;
    for (std::size_t i = 0; i < per; ++i) {
      Vector w0 = detail::sample_w(spec, rng);
      Vector wt1 = detail::sample_wtilde(spec, rng);
      Vector w1 = detail::sample_w(spec, rng);
      Vector wt2 = detail::sample_wtilde(spec, rng);
      const double Y1 = la_shift + spec.sigma_a * rng.normal() +
                        std::log(std::abs(wt1.dot(w0)));
      const double Y2 = la_shift + spec.sigma_a * rng.normal() +
                        std::log(std::abs(wt2.dot(w1)));
      y1.add(Y1);
      y2.add(Y2);
      prod.add(Y1 * Y2);
    }
    const double cov =
        prod.mean - y1.mean * y2.mean;  // biased covariance within the batch
    const double var2 = y2.m2 / static_cast<double>(per);
    batch_stat.add(var2 + 2.0 * cov);
  }
  EstimateReport r;
  r.point = batch_stat.mean;
  r.std_err = batch_stat.stderr_mean();
  r.n_samples = n_samples;
  r.metadata["estimator"] = "rk1_sigma2_closed_form";
  if (r.point <= 3.0 * r.std_err) r.metadata["degenerate"] = "true";
  return r;
}

}  // namespace affrec
