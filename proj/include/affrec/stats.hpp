#pragma once

// Small statistics toolkit: mergeable moment accumulators, least squares,
// a two-sample Kolmogorov-Smirnov statistic, and the zeta-type series used
// by the max-over-random-index moment bound.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace affrec {

// Streaming mean/variance with an exact associative merge, so batches can be
// reduced in any grouping (always merged in index order for determinism).
struct RunningStat {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  void merge(const RunningStat& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
    const double d = o.mean - mean;
    const double nt = na + nb;
    mean += d * nb / nt;
    m2 += o.m2 + d * d * na * nb / nt;
    n += o.n;
  }

  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double stddev() const { return std::sqrt(variance()); }
  double stderr_mean() const {
    return n > 1 ? stddev() / std::sqrt(static_cast<double>(n)) : 0.0;
  }
};

// Point estimate with Monte Carlo error and provenance.
struct EstimateReport {
  double point = 0.0;
  double std_err = 0.0;
  std::size_t n_samples = 0;
  double censored_fraction = 0.0;
  std::map<std::string, std::string> metadata;
};

inline nlohmann::ordered_json to_json(const EstimateReport& r) {
  nlohmann::ordered_json j;
  j["point"] = r.point;
  j["stderr"] = r.std_err;
  j["n_samples"] = r.n_samples;
  j["censored_fraction"] = r.censored_fraction;
  j["metadata"] = r.metadata;
  return j;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

inline LineFit least_squares(const std::vector<double>& x,
                             const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("least_squares: need >= 2 points");
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("least_squares: degenerate x");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.slope_stderr =
      n > 2 ? std::sqrt(ss_res / static_cast<double>(n - 2) / sxx) : 0.0;
  return f;
}

// Two-sample KS statistic; both inputs are sorted in place.
inline double ks_statistic(std::vector<double>& a, std::vector<double>& b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

// 5%-level two-sample KS threshold for equal sample sizes n.
inline double ks_threshold_5pct(std::size_t n) {
  return 1.36 * std::sqrt(2.0 / static_cast<double>(n));
}

// zeta(s) = sum_{i >= 1} i^{-s} for s > 1, via Euler-Maclaurin past a direct
// head sum; relative error well below 1e-9 for s >= 1.01.
inline double zeta_series(double s) {
  if (s <= 1.0) throw std::invalid_argument("zeta_series: diverges for s <= 1");
  const double M = 100000.0;
  double head = 0.0;
  for (double k = 1.0; k <= M; k += 1.0) head += std::pow(k, -s);
  const double Ms = std::pow(M, -s);
  double tail = M * Ms / (s - 1.0) - 0.5 * Ms + s * Ms / (12.0 * M);
  tail -= s * (s + 1.0) * (s + 2.0) * Ms / (720.0 * M * M * M);
  return head + tail;
}

inline double median_of(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median_of: empty");
  const std::size_t k = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + k, v.end());
  double hi = v[k];
  if (v.size() % 2 == 1) return hi;
  std::nth_element(v.begin(), v.begin() + k - 1, v.begin() + k);
  return 0.5 * (v[k - 1] + hi);
}

inline double log_plus(double x) { return x > 1.0 ? std::log(x) : 0.0; }

}  // namespace affrec
