#pragma once

// Monte Carlo estimators and diagnostics over the simulation primitives:
// Lyapunov exponent, asymptotic variance of the log-gain walk, ladder-tail
// exponent, projective contraction rate, truncated RNC moment curves,
// recurrence classification, and the max-over-random-index moment bound.
//
// Replicated estimators take (seed, workers); replica i always runs on the
// stream derived from (seed, i), so estimates do not depend on the worker
// count. Censoring is never dropped silently: any estimator fed censored
// samples reports the censored fraction and the cap in its metadata.

#include "affrec/models.hpp"
#include "affrec/parallel.hpp"
#include "affrec/simulate.hpp"
#include "affrec/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace affrec {

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

// estimate_lyapunov lives in models.hpp (centring calibration iterates on
// it); it is part of this module's surface all the same.

// Var(S_n)/n across replicas, each started from a fresh invariant direction.
inline EstimateReport estimate_sigma2(const ModelSpec& spec,
                                      std::size_t horizon,
                                      std::size_t replicas, std::uint64_t seed,
                                      int workers = 1) {
  validate(spec);
  if (horizon < 1 || replicas < 8)
    throw std::invalid_argument("estimate_sigma2: horizon >= 1, replicas >= 8");
  auto vals = parallel_map_indexed<double>(replicas, workers, [&](std::size_t i) {
    RngStream rng = RngStream::substream(seed, i);
    ProjectivePoint v0 = sample_invariant_direction(spec, rng);
    ProjectiveWalk w = run_projective_walk(spec, v0, horizon, rng);
    if (w.absorbed_at) return std::numeric_limits<double>::quiet_NaN();
    return w.S.back();
  });
  RunningStat st;
  std::size_t absorbed = 0;
  for (double v : vals) {
    if (std::isnan(v))
      ++absorbed;
    else
      st.add(v);
  }
  EstimateReport r;
  r.point = st.variance() / static_cast<double>(horizon);
  // relative error of a sample variance ~ sqrt(2/(m-1)) under normal-ish S_n
  r.std_err = r.point * std::sqrt(2.0 / static_cast<double>(st.n > 1 ? st.n - 1 : 1));
  r.n_samples = st.n;
  r.censored_fraction =
      static_cast<double>(absorbed) / static_cast<double>(replicas);
  r.metadata["horizon"] = std::to_string(horizon);
  r.metadata["estimator"] = "sigma2_replica";
  if (absorbed) r.metadata["absorbed"] = std::to_string(absorbed);
  return r;
}

// Batch-means variant on a single long trajectory.
inline EstimateReport estimate_sigma2_batch(const ModelSpec& spec,
                                            std::size_t batches,
                                            std::size_t batch_len,
                                            std::uint64_t seed) {
  validate(spec);
  if (batches < 8 || batch_len < 1)
    throw std::invalid_argument("estimate_sigma2_batch: batches >= 8");
  RngStream rng = RngStream::substream(seed, 0);
  ProjectivePoint v0 = sample_invariant_direction(spec, rng);
  ProjectiveWalk w = run_projective_walk(spec, v0, batches * batch_len, rng);
  if (w.absorbed_at) throw NumericalError("sigma2_batch: walk absorbed");
  RunningStat st;
  double prev = 0.0;
  for (std::size_t b = 0; b < batches; ++b) {
    const double cur = w.S[(b + 1) * batch_len - 1];
    st.add(cur - prev);
    prev = cur;
  }
  EstimateReport r;
  r.point = st.variance() / static_cast<double>(batch_len);
  r.std_err = r.point * std::sqrt(2.0 / static_cast<double>(batches - 1));
  r.n_samples = batches;
  r.metadata["batch_len"] = std::to_string(batch_len);
  r.metadata["estimator"] = "sigma2_batch";
  return r;
}

// Least-squares slope of ln P(l > n) against ln n on a dyadic grid inside
// [n_min, cap/4]. Censored samples count as survivals up to the cap. Grid
// points whose survivor count drops below `min_survivors` are truncated away
// (recorded in metadata); fewer than two usable points is an error.
inline EstimateReport fit_tail_exponent(const std::vector<LadderSample>& samples,
                                        std::size_t n_min = 16,
                                        std::size_t min_survivors = 10) {
  if (samples.empty()) throw std::invalid_argument("fit_tail_exponent: empty");
  const std::size_t cap = samples.front().cap;
  std::size_t uncensored = 0;
  for (const auto& s : samples) {
    if (s.cap != cap)
      throw std::invalid_argument("fit_tail_exponent: mixed caps");
    if (!s.censored) ++uncensored;
  }
  if (uncensored < 1000)
    throw std::invalid_argument("fit_tail_exponent: need >= 1000 uncensored samples");

  std::vector<double> lx, ly;
  bool truncated = false;
  for (std::size_t g = n_min; g <= cap / 4; g *= 2) {
    std::size_t survivors = 0;
    for (const auto& s : samples)
      if (s.censored || s.value > g) ++survivors;
    if (survivors < min_survivors) {
      truncated = true;
      break;
    }
    lx.push_back(std::log(static_cast<double>(g)));
    ly.push_back(std::log(static_cast<double>(survivors) /
                          static_cast<double>(samples.size())));
  }
  if (lx.size() < 2)
    throw NumericalError("fit_tail_exponent: survival vanishes on the grid");
  LineFit f = least_squares(lx, ly);
  EstimateReport r;
  r.point = f.slope;
  r.std_err = f.slope_stderr;
  r.n_samples = samples.size();
  r.censored_fraction =
      1.0 - static_cast<double>(uncensored) / static_cast<double>(samples.size());
  r.metadata["cap"] = std::to_string(cap);
  r.metadata["grid_points"] = std::to_string(lx.size());
  r.metadata["rho"] = detail::fmt(samples.front().rho);
  if (truncated) r.metadata["grid_truncated"] = "true";
  return r;
}

enum class ContractionLabel { contracting, flat, collapsed };

struct ContractionFit {
  EstimateReport rho_hat;
  ContractionLabel label = ContractionLabel::flat;
};

// Slope of ln(mean distance at step k) over independent coupled pairs.
// metric: delta for general directions, the simplex metric for cone models.
inline ContractionFit fit_contraction_rate(const ModelSpec& spec,
                                           std::size_t n_steps,
                                           std::size_t m_pairs,
                                           std::uint64_t seed, int workers = 1,
                                           bool use_hennion = false) {
  validate(spec);
  if (n_steps < 4 || m_pairs < 8)
    throw std::invalid_argument("fit_contraction_rate: budget too small");
  auto series = parallel_map_indexed<std::vector<double>>(
      m_pairs, workers, [&](std::size_t i) {
        RngStream rng = RngStream::substream(seed, i);
        ProjectivePoint u0 = sample_invariant_direction(spec, rng);
        ProjectivePoint v0 = sample_invariant_direction(spec, rng);
        PairWalk w = contraction_pair_walk(spec, u0, v0, n_steps, rng);
        return use_hennion ? w.hennion_series : w.delta_series;
      });
  std::vector<RunningStat> by_step(n_steps);
  for (const auto& s : series)
    for (std::size_t k = 0; k < s.size(); ++k) by_step[k].add(s[k]);

  ContractionFit out;
  out.rho_hat.n_samples = m_pairs;
  out.rho_hat.metadata["steps"] = std::to_string(n_steps);
  out.rho_hat.metadata["metric"] = use_hennion ? "hennion" : "delta";

  if (by_step[0].n == 0 || by_step[0].mean == 0.0) {
    out.label = ContractionLabel::collapsed;
    out.rho_hat.point = 0.0;
    out.rho_hat.metadata["label"] = "collapsed";
    return out;
  }
  std::vector<double> ks, lm;
  for (std::size_t k = 0; k < n_steps; ++k) {
    if (by_step[k].n < m_pairs / 2) break;
    if (by_step[k].mean <= 1e-15) break;  // numerical floor
    ks.push_back(static_cast<double>(k + 1));
    lm.push_back(std::log(by_step[k].mean));
  }
  if (ks.size() < 4) throw NumericalError("fit_contraction_rate: series too short");
  LineFit f = least_squares(ks, lm);
  out.rho_hat.point = std::exp(f.slope);
  out.rho_hat.std_err = out.rho_hat.point * f.slope_stderr;
  out.rho_hat.metadata["fit_range"] = std::to_string(ks.size());
  if (f.slope + 3.0 * f.slope_stderr < 0.0) {
    out.label = ContractionLabel::contracting;
    out.rho_hat.metadata["label"] = "contracting";
  } else {
    out.label = ContractionLabel::flat;
    out.rho_hat.metadata["label"] = "flat";
  }
  return out;
}

// Empirical moments of (ln+ C)^beta at each checkpoint horizon. Finiteness of
// the untruncated moment is not provable from samples; what is reported is
// the stabilization profile across nested horizons, flagged unreliable when
// too few samples have a stabilized sup.
struct RncMomentCurve {
  std::vector<std::size_t> horizons;
  // curve[b][h] = estimate of E (ln+ C)^beta_grid[b] at horizons[h]
  std::vector<std::vector<EstimateReport>> curve;
  double stabilized_fraction = 0.0;
  bool unreliable = false;
};

inline RncMomentCurve rnc_moment_curve(const std::vector<RncSample>& samples,
                                       const std::vector<double>& beta_grid) {
  if (samples.empty()) throw std::invalid_argument("rnc_moment_curve: empty");
  if (beta_grid.empty()) throw std::invalid_argument("rnc_moment_curve: betas");
  RncMomentCurve out;
  for (const auto& c : samples.front().checkpoints)
    out.horizons.push_back(c.horizon);
  out.horizons.push_back(samples.front().horizon);
  std::size_t stab = 0, infinite = 0;
  for (const auto& s : samples) {
    if (s.checkpoints.size() + 1 != out.horizons.size())
      throw std::invalid_argument("rnc_moment_curve: mismatched schedules");
    if (s.stabilized) ++stab;
    if (s.infinite) ++infinite;
  }
  out.stabilized_fraction = static_cast<double>(stab) / samples.size();
  out.unreliable = out.stabilized_fraction < 0.5;
  for (double beta : beta_grid) {
    std::vector<EstimateReport> row;
    for (std::size_t hi = 0; hi < out.horizons.size(); ++hi) {
      RunningStat st;
      for (const auto& s : samples) {
        if (s.infinite) continue;  // censored at +inf, counted separately
        const double lv = hi + 1 < out.horizons.size()
                              ? s.checkpoints[hi].log_value
                              : s.log_value;
        st.add(std::pow(lv, beta));
      }
      EstimateReport r;
      r.point = st.mean;
      r.std_err = st.stderr_mean();
      r.n_samples = st.n;
      r.censored_fraction = static_cast<double>(infinite) / samples.size();
      r.metadata["beta"] = detail::fmt(beta);
      r.metadata["horizon"] = std::to_string(out.horizons[hi]);
      row.push_back(std::move(r));
    }
    out.curve.push_back(std::move(row));
  }
  return out;
}

// --- recurrence classification ---------------------------------------------

struct RecurrenceThresholds {
  double recurrent_min_frequency = 0.01;
  double transient_max_frequency = 1e-3;
  double significance = 3.0;
};

enum class RecurrenceLabel { recurrent_like, transient_like, inconclusive };

inline std::string to_string(RecurrenceLabel l) {
  switch (l) {
    case RecurrenceLabel::recurrent_like: return "recurrent-like";
    case RecurrenceLabel::transient_like: return "transient-like";
    case RecurrenceLabel::inconclusive: return "inconclusive";
  }
  return "?";
}

struct RecurrenceVerdict {
  RecurrenceLabel label = RecurrenceLabel::inconclusive;
  // fraction of trajectories visiting {|X| <= K} during the late window
  double late_return_frequency = 0.0;
  double late_return_stderr = 0.0;
  double median_lognorm_slope = 0.0;
  double slope_stderr = 0.0;
  double frac_last_window_min_above_K = 0.0;
  RecurrenceThresholds thresholds;
};

// Verdict rule:
//   transient-like: median ln|X_n| slope > 0 at `significance` sigma AND
//                   late return frequency < transient_max_frequency;
//   recurrent-like: late return frequency > recurrent_min_frequency at
//                   `significance` sigma;
//   otherwise inconclusive.
// The late return frequency is the fraction of trajectories that re-enter
// the K-ball at least once during the second half of the run. A critical
// recurrent chain is null recurrent, so its per-step occupation frequency
// decays like n^{-1/2} and cannot separate families at a fixed threshold;
// the per-trajectory event frequency is scale-free and does.
inline RecurrenceVerdict classify_recurrence(
    const std::vector<TrajectoryStats>& stats, double K,
    const RecurrenceThresholds& th = {}) {
  if (stats.size() < 100)
    throw std::invalid_argument("classify_recurrence: need >= 100 trajectories");
  for (const auto& s : stats) {
    if (s.n_steps < 100000)
      throw std::invalid_argument("classify_recurrence: horizon >= 1e5");
    if (s.K != K) throw std::invalid_argument("classify_recurrence: mixed K");
    if (s.stride != stats.front().stride ||
        s.lognorm_samples.size() != stats.front().lognorm_samples.size())
      throw std::invalid_argument("classify_recurrence: mixed sampling");
  }
  RecurrenceVerdict v;
  v.thresholds = th;
  const double m = static_cast<double>(stats.size());
  std::size_t returned = 0, min_above = 0;
  for (const auto& s : stats) {
    if (s.returned_in_late_window) ++returned;
    if (!s.window_min_lognorm.empty() &&
        s.window_min_lognorm.back() > std::log1p(K))
      ++min_above;
  }
  v.late_return_frequency = returned / m;
  v.late_return_stderr = std::sqrt(
      std::max(0.0, v.late_return_frequency * (1.0 - v.late_return_frequency)) / m);
  v.frac_last_window_min_above_K = min_above / m;

  const std::size_t ns = stats.front().lognorm_samples.size();
  std::vector<double> ts(ns), med(ns), buf(stats.size());
  for (std::size_t j = 0; j < ns; ++j) {
    for (std::size_t i = 0; i < stats.size(); ++i)
      buf[i] = stats[i].lognorm_samples[j];
    ts[j] = static_cast<double>((j + 1) * stats.front().stride);
    med[j] = median_of(buf);
  }
  LineFit f = least_squares(ts, med);
  v.median_lognorm_slope = f.slope;
  v.slope_stderr = f.slope_stderr;

  const bool slope_positive = f.slope - th.significance * f.slope_stderr > 0.0;
  if (slope_positive && v.late_return_frequency < th.transient_max_frequency) {
    v.label = RecurrenceLabel::transient_like;
  } else if (v.late_return_frequency -
                 th.significance * v.late_return_stderr >
             th.recurrent_min_frequency) {
    v.label = RecurrenceLabel::recurrent_like;
  } else {
    v.label = RecurrenceLabel::inconclusive;
  }
  return v;
}

// --- max over a random number of terms ----------------------------------------

struct LemmaCheckResult {
  bool pass = false;
  double lhs = 0.0, lhs_stderr = 0.0;
  double rhs = 0.0, rhs_stderr = 0.0;
  double constant = 0.0;  // zeta(alpha (beta - 1))
};

// Monte Carlo check of
//   E max_{1<=i<=tau} Y_i <= C(a,b) E(tau^a)^{(b-1)/b} sup_i E(Y_i^b)^{1/b}
// with C(a,b) = sum_{i>=1} i^{-a(b-1)}, valid for b > (1+a)/a. The samplers
// are arbitrary; tau must be a positive integer variable. Passing requires
// lhs <= rhs within three combined standard errors.
inline LemmaCheckResult lemma_max_bound_check(
    const std::function<double(RngStream&)>& sample_y,
    const std::function<std::uint64_t(RngStream&)>& sample_tau, double alpha,
    double beta, std::size_t trials, std::uint64_t seed) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha > 0 required");
  if (!(beta > (1.0 + alpha) / alpha))
    throw std::invalid_argument("beta must exceed (1+alpha)/alpha");
  if (alpha * (beta - 1.0) <= 1.0)
    throw std::invalid_argument("series exponent alpha(beta-1) <= 1");
  LemmaCheckResult out;
  out.constant = zeta_series(alpha * (beta - 1.0));

  RngStream rng = RngStream::substream(seed, 0);
  RunningStat max_stat, tau_stat, ybeta_stat;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t tau = sample_tau(rng);
    if (tau < 1) throw std::invalid_argument("tau sampler returned 0");
    double mx = -std::numeric_limits<double>::infinity();
    for (std::uint64_t i = 0; i < tau; ++i) {
      const double y = sample_y(rng);
      if (y < 0) throw std::invalid_argument("Y sampler returned negative");
      mx = std::max(mx, y);
      ybeta_stat.add(std::pow(y, beta));
    }
    max_stat.add(mx);
    tau_stat.add(std::pow(static_cast<double>(tau), alpha));
  }
  out.lhs = max_stat.mean;
  out.lhs_stderr = max_stat.stderr_mean();
  const double e1 = (beta - 1.0) / beta;
  const double ta = std::pow(tau_stat.mean, e1);
  const double yb = std::pow(ybeta_stat.mean, 1.0 / beta);
  out.rhs = out.constant * ta * yb;
  // first-order error propagation through the two powers
  const double rel = e1 * tau_stat.stderr_mean() / tau_stat.mean +
                     (1.0 / beta) * ybeta_stat.stderr_mean() / ybeta_stat.mean;
  out.rhs_stderr = out.rhs * rel;
  out.pass = out.lhs <= out.rhs + 3.0 * (out.lhs_stderr + out.rhs_stderr);
  return out;
}

}  // namespace affrec
