#pragma once

// Streaming generation of the stochastic objects attached to one driving
// sequence (A_1, B_1), (A_2, B_2), ...: the affine chain X_n, the projective
// chain with its log-gain walk S_n, ladder epochs, truncated reverse-norm-
// control suprema, the i.i.d. block decomposition over ladder segments, and
// coupled direction pairs for contraction estimation.
//
// Everything is O(1) memory beyond requested samples, and deterministic
// given (spec, stream).

#include "affrec/linalg.hpp"
#include "affrec/models.hpp"
#include "affrec/projective.hpp"
#include "affrec/rng.hpp"
#include "affrec/stats.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace affrec {

// --- affine trajectory -----------------------------------------------------

struct TrajectoryStats {
  std::size_t n_steps = 0;
  double K = 0.0;

  // ln(1 + |X_n|) sampled every `stride` steps (n = stride, 2*stride, ...)
  std::size_t stride = 1;
  std::vector<double> lognorm_samples;

  // per-window minimum of ln(1 + |X_n|) over consecutive windows
  std::size_t window_width = 0;
  std::vector<double> window_min_lognorm;

  std::size_t return_count = 0;       // #{n : |X_n| <= K}
  std::size_t late_return_count = 0;  // same, restricted to n > n_steps/2
  bool returned_in_late_window = false;

  double lognorm_slope = 0.0;  // least-squares slope of the sampled series

  friend bool operator==(const TrajectoryStats&, const TrajectoryStats&) = default;
};

namespace detail {

// Overflow-safe euclidean norm (entries may approach the double limit).
inline double safe_norm(const Vector& x) {
  const double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0 || !std::isfinite(m)) return m;
  if (m < 1e100) return x.norm();
  return m * (x / m).norm();
}

}  // namespace detail

// Iterates X_{n+1} = A X_n + B in plain doubles, switching to a
// (log magnitude, direction) representation once ln|X| exceeds 700 so that
// transient trajectories are followed without overflow. While saturated the
// B-term is dropped only when ln|X| - ln(1+|B|) > 40 (perturbs the log by
// less than e^{-39}); otherwise the sum is formed under a common rescaling,
// exact to double rounding.
inline TrajectoryStats run_affine_trajectory(const ModelSpec& spec,
                                             const Vector& x0, std::size_t n,
                                             double K, RngStream& rng,
                                             std::size_t stride = 0,
                                             std::size_t window_width = 0) {
  validate(spec);
  if (n < 1) throw std::invalid_argument("run_affine_trajectory: n >= 1");
  if (x0.size() != spec.d)
    throw std::invalid_argument("run_affine_trajectory: x0 dimension");
  if (stride == 0) stride = std::max<std::size_t>(1, n / 512);
  if (window_width == 0) window_width = std::max<std::size_t>(1, n / 16);

  TrajectoryStats st;
  st.n_steps = n;
  st.K = K;
  st.stride = stride;
  st.window_width = window_width;

  constexpr double kSatUp = 700.0;
  constexpr double kSatDown = 660.0;

  Vector x = x0;
  Vector u = Vector::Zero(spec.d);  // saturated-mode direction
  double logmag = 0.0;              // saturated-mode ln|X|
  bool saturated = false;

  const std::size_t half = n / 2;
  double window_min = std::numeric_limits<double>::infinity();
  std::size_t in_window = 0;

  Vector tmp(spec.d);
  for (std::size_t step = 1; step <= n; ++step) {
    auto [A, B] = sample_pair(spec, rng);
    double log1p_norm;
    if (!saturated) {
      tmp.noalias() = A * x;
      x = tmp + B;
      const double nrm = detail::safe_norm(x);
      log1p_norm = std::log1p(nrm);
      if (nrm > 0 && std::log(nrm) > kSatUp) {
        saturated = true;
        logmag = std::log(nrm);
        u = x / nrm;  // |x| < 1e308 here, plain division is fine
      }
    } else {
      tmp.noalias() = A * u;
      const double g = detail::safe_norm(tmp);
      if (g == 0.0) {
        x = B;
        saturated = false;
        log1p_norm = std::log1p(detail::safe_norm(x));
      } else {
        u = tmp / g;
        logmag += std::log(g);
        const double bn = detail::safe_norm(B);
        if (std::log1p(bn) >= logmag - 40.0) {
          // rescale both terms below 1 and add exactly
          const double c = std::max(logmag, std::log(bn));
          Vector z = std::exp(logmag - c) * u;
          z += std::exp(-c) * B;
          const double zn = detail::safe_norm(z);
          if (zn == 0.0) {
            x = Vector::Zero(spec.d);
            saturated = false;
          } else {
            logmag = c + std::log(zn);
            u = z / zn;
          }
        }
        if (saturated && logmag < kSatDown) {
          x = std::exp(logmag) * u;
          saturated = false;
        }
        log1p_norm = saturated ? logmag : std::log1p(detail::safe_norm(x));
      }
    }

    const bool returned = !saturated && detail::safe_norm(x) <= K;
    if (returned) {
      ++st.return_count;
      if (step > half) {
        ++st.late_return_count;
        st.returned_in_late_window = true;
      }
    }
    if (step % stride == 0) st.lognorm_samples.push_back(log1p_norm);
    window_min = std::min(window_min, log1p_norm);
    if (++in_window == window_width) {
      st.window_min_lognorm.push_back(window_min);
      window_min = std::numeric_limits<double>::infinity();
      in_window = 0;
    }
  }
  if (in_window > 0) st.window_min_lognorm.push_back(window_min);

  if (st.lognorm_samples.size() >= 2) {
    std::vector<double> ts(st.lognorm_samples.size());
    for (std::size_t i = 0; i < ts.size(); ++i)
      ts[i] = static_cast<double>((i + 1) * stride);
    st.lognorm_slope = least_squares(ts, st.lognorm_samples).slope;
  }
  return st;
}

// --- projective walk ---------------------------------------------------------

struct ProjectiveWalk {
  std::vector<double> S;  // S_n at every step (S[0] is S_1)
  ProjectivePoint final_direction;
  std::optional<std::size_t> absorbed_at;
};

// Accumulates the log-gain cocycle S_n = sum_k ln|A_k V_{k-1}| along the
// direction chain. Absorption (possible only for non-invertible families)
// ends the walk with the step recorded.
inline ProjectiveWalk run_projective_walk(const ModelSpec& spec,
                                          const ProjectivePoint& v0,
                                          std::size_t n, RngStream& rng) {
  validate(spec);
  if (v0.is_zero())
    throw std::invalid_argument("run_projective_walk: v0 must be nonzero");
  ProjectiveWalk out;
  out.S.reserve(n);
  ProjectivePoint p = v0;
  double S = 0.0;
  for (std::size_t step = 1; step <= n; ++step) {
    auto [A, B] = sample_pair(spec, rng);
    auto r = act(A, p);
    if (r.image.is_zero()) {
      out.absorbed_at = step;
      out.final_direction = r.image;
      return out;
    }
    S += r.log_gain;
    out.S.push_back(S);
    p = r.image;
  }
  out.final_direction = p;
  return out;
}

// --- ladder epochs ---------------------------------------------------------

struct LadderSample {
  std::size_t value = 0;  // first n with S_n <= ln(rho); cap when censored
  bool censored = false;
  double rho = 0.0;
  std::size_t cap = 0;
};

inline LadderSample ladder_time(const ModelSpec& spec,
                                const ProjectivePoint& v0, double rho,
                                std::size_t cap, RngStream& rng) {
  validate(spec);
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument("ladder_time: rho in (0,1)");
  if (cap < 1) throw std::invalid_argument("ladder_time: cap >= 1");
  if (v0.is_zero()) throw std::invalid_argument("ladder_time: v0 nonzero");
  const double threshold = std::log(rho);
  ProjectivePoint p = v0;
  double S = 0.0;
  for (std::size_t step = 1; step <= cap; ++step) {
    auto [A, B] = sample_pair(spec, rng);
    auto r = act(A, p);
    if (r.image.is_zero())  // gain -inf: the stopped product is below any rho
      return {step, false, rho, cap};
    S += r.log_gain;
    if (S <= threshold) return {step, false, rho, cap};
    p = r.image;
  }
  return {cap, true, rho, cap};
}

// --- reverse norm control ----------------------------------------------------

struct RncCheckpoint {
  std::size_t horizon = 0;
  double log_value = 0.0;
  bool stabilized = false;
};

struct RncSample {
  double log_value = 0.0;  // running sup of ln||A_{n,1}|| - ln|A_{n,1} v|
  std::size_t horizon = 0;
  bool stabilized = false;  // sup unchanged over the second half
  std::size_t argmax = 0;
  bool infinite = false;  // direction absorbed with nonzero product
  std::vector<RncCheckpoint> checkpoints;  // at requested nested horizons
};

// Maintains the full product as a LogScaledMatrix and the directional gain
// on the same stream; value is the truncated sup over n <= horizon. The sup
// of the true coefficient is over all n, so the truncation is reported via
// the horizon and the stabilization flag, never hidden.
inline RncSample rnc_coefficient(const ModelSpec& spec,
                                 const ProjectivePoint& v0,
                                 std::size_t horizon, RngStream& rng,
                                 const std::vector<std::size_t>& checkpoints = {}) {
  validate(spec);
  if (v0.is_zero()) throw std::invalid_argument("rnc_coefficient: v0 nonzero");
  if (horizon < 1) throw std::invalid_argument("rnc_coefficient: horizon >= 1");
  RncSample out;
  out.horizon = horizon;
  LogScaledMatrix P = logscaled_identity(spec.d);
  ProjectivePoint p = v0;
  double gain = 0.0;
  double sup = 0.0;  // C_1 >= 1 always (n = k term is bounded below by 1)
  std::size_t arg = 0;
  std::size_t ci = 0;
  for (std::size_t n = 1; n <= horizon; ++n) {
    auto [A, B] = sample_pair(spec, rng);
    left_multiply(P, A);  // P_n = A_n ... A_1
    auto r = act(A, p);
    if (r.image.is_zero()) {
      if (!P.is_zero()) {
        out.infinite = true;
        out.log_value = std::numeric_limits<double>::infinity();
        out.argmax = n;
        return out;
      }
      break;  // total absorption: 0/0 = 1 convention, sup frozen
    }
    gain += r.log_gain;
    p = r.image;
    const double val = P.log_scale - gain;
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

// --- block decomposition -----------------------------------------------------

struct BlockSample {
  std::size_t block_length = 0;
  bool censored = false;
  double log_norm_A_block = 0.0;    // ln||A_l ... A_1|| over the block
  double log1p_norm_B_block = 0.0;  // ln(1 + |B~|)
  double logplus_B_block = 0.0;     // ln+ |B~|
  double log_C_trunc = 0.0;  // sup_{n<=l} ln||A_{n,1}|| - ln|A_{n,1} v|
  double max_log_D = 0.0;    // max_i ln+ ||A_{l,i+1}|| / |A_{l,i+1} V_i|
  double max_logplus_B = 0.0;
};

// Each block draws a fresh invariant direction, runs to its own ladder time,
// and records the block transformation (A~, B~) = g_l o ... o g_1 together
// with the pathwise quantities entering the ladder-block norm bounds:
//   ln||A~|| <= ln(rho) + log_C_trunc                    (per block)
//   ln+|B~|  <= ln+ l + max_log_D + max_logplus_B        (per block)
// The second uses the suffix ratios D_i = ||A_{l,i+1}|| / |A_{l,i+1} V_i|,
// computed by one backward sweep; each D_i is dominated by the truncated
// RNC coefficient started at i+1, so the recorded bound is the sharp end of
// the censored-coefficient inequality.
inline std::vector<BlockSample> block_decomposition(const ModelSpec& spec,
                                                    double rho,
                                                    std::size_t n_blocks,
                                                    std::size_t cap_per_block,
                                                    RngStream& rng,
                                                    int burn_in = 200) {
  validate(spec);
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument("block_decomposition: rho in (0,1)");
  std::vector<BlockSample> out;
  out.reserve(n_blocks);
  const double threshold = std::log(rho);

  std::vector<Matrix> mats;
  std::vector<Vector> dirs;  // V_0, V_1, ..., unit representatives
  for (std::size_t b = 0; b < n_blocks; ++b) {
    BlockSample bs;
    ProjectivePoint v = sample_invariant_direction(spec, rng, burn_in);
    mats.clear();
    dirs.clear();
    dirs.push_back(v.rep());

    LogScaledMatrix P = logscaled_identity(spec.d);
    Vector rem = Vector::Zero(spec.d);  // B_{n,1} within the block
    double gain = 0.0;
    double sup = 0.0;
    double max_logplus_b = 0.0;
    ProjectivePoint p = v;
    bool done = false;

    for (std::size_t step = 1; step <= cap_per_block && !done; ++step) {
      auto [A, B] = sample_pair(spec, rng);
      left_multiply(P, A);
      Vector tmp = A * rem + B;
      rem.swap(tmp);
      max_logplus_b = std::max(max_logplus_b, log_plus(B.norm()));
      auto r = act(A, p);
      if (r.image.is_zero()) {
        bs.censored = true;  // absorbed before the ladder threshold
        break;
      }
      gain += r.log_gain;
      p = r.image;
      sup = std::max(sup, P.log_scale - gain);
      mats.push_back(A);
      dirs.push_back(p.rep());
      if (gain <= threshold) {
        bs.block_length = step;
        done = true;
      }
    }
    if (!done) {
      bs.censored = true;
      bs.block_length = cap_per_block;
      out.push_back(bs);
      continue;
    }

    const double rem_norm = detail::safe_norm(rem);
    if (!std::isfinite(rem_norm) || P.is_zero()) {
      bs.censored = true;
      out.push_back(bs);
      continue;
    }
    bs.log_norm_A_block = P.log_scale;
    bs.log1p_norm_B_block = std::log1p(rem_norm);
    bs.logplus_B_block = log_plus(rem_norm);
    bs.log_C_trunc = sup;
    bs.max_logplus_B = max_logplus_b;

    // backward sweep: suffix products A_l ... A_{i+1} applied to V_i
    const std::size_t l = bs.block_length;
    LogScaledMatrix sfx = logscaled_identity(spec.d);
    double max_log_d = 0.0;  // i = l term: identity, ratio 1
    for (std::size_t i = l; i-- > 0;) {
      sfx = logscaled_multiply(sfx, logscaled_from(mats[i]));
      auto ap = logscaled_apply(sfx, dirs[i]);
      if (ap.zero) {
        max_log_d = std::numeric_limits<double>::infinity();
        break;
      }
      max_log_d = std::max(max_log_d, -ap.log_gain);
    }
    bs.max_log_D = max_log_d;
    out.push_back(bs);
  }
  return out;
}

// --- coupled direction pairs --------------------------------------------------

struct PairWalk {
  std::vector<double> delta_series;    // delta at steps 1..n
  std::vector<double> hennion_series;  // filled while both stay in the cone
  std::optional<std::size_t> absorbed_at;
};

// Drives two directions with the same matrix stream and records their
// distance after every step.
inline PairWalk contraction_pair_walk(const ModelSpec& spec,
                                      const ProjectivePoint& u0,
                                      const ProjectivePoint& v0, std::size_t n,
                                      RngStream& rng) {
  validate(spec);
  if (u0.is_zero() || v0.is_zero())
    throw std::invalid_argument("contraction_pair_walk: nonzero starts");
  PairWalk out;
  out.delta_series.reserve(n);
  ProjectivePoint u = u0, v = v0;
  for (std::size_t step = 1; step <= n; ++step) {
    auto [A, B] = sample_pair(spec, rng);
    auto ru = act(A, u);
    auto rv = act(A, v);
    if (ru.image.is_zero() || rv.image.is_zero()) {
      out.absorbed_at = step;
      return out;
    }
    u = ru.image;
    v = rv.image;
    out.delta_series.push_back(delta(u, v));
    if ((u.rep().array() >= 0.0).all() && (v.rep().array() >= 0.0).all())
      out.hennion_series.push_back(
          hennion_distance(SimplexPoint(u.rep()), SimplexPoint(v.rep())));
  }
  return out;
}

}  // namespace affrec
