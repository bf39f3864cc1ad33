#pragma once

// Named reference models. The invertible and nonnegative instances carry
// pre-calibrated centring shifts (computed once with calibrate_centring at
// tolerance 5e-4 and frozen here); the similarity and rank-one shifts are
// closed-form. Tests re-verify all of them.

#include "affrec/models.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace affrec {

// shift for the rank-one families below: -E ln|<w~, w>| for independent
// uniform directions on the circle equals ln 2
inline constexpr double kRankOneShiftD2 = 0.6931471805599453;

// frozen outputs of calibrate_centring on the default mixtures
inline constexpr double kProximalShift = -0.18569314134025044;
inline constexpr double kNonnegativeShift = -1.008249858368752;

inline std::vector<std::string> reference_model_names() {
  return {"similarity",      "similarity_d3", "similarity_drift",
          "rotation",        "rank_one",      "rank_one_skewed",
          "invertible_proximal", "nonnegative", "diagonal_cex",
          "permutation_cex"};
}

inline ModelSpec reference_model(const std::string& name) {
  ModelSpec m;
  if (name == "similarity") {
    m.family = Family::similarity;
    m.d = 2;
    m.mean_a = 0.0;
    m.sigma_a = 1.0;
    return m;
  }
  if (name == "similarity_d3") {
    m.family = Family::similarity;
    m.d = 3;
    m.mean_a = 0.0;
    m.sigma_a = 1.0;
    return m;
  }
  if (name == "similarity_drift") {
    m.family = Family::similarity;
    m.d = 3;
    m.mean_a = 0.3;
    m.sigma_a = 0.5;
    return m;
  }
  if (name == "rotation") {
    m.family = Family::similarity;
    m.d = 2;
    m.mean_a = 0.0;
    m.sigma_a = 0.0;
    return m;
  }
  if (name == "rank_one") {
    m.family = Family::rank_one;
    m.d = 2;
    m.mean_a = 0.0;
    m.sigma_a = 1.0;
    m.log_scale_shift = kRankOneShiftD2;
    return m;
  }
  if (name == "rank_one_skewed") {
    m.family = Family::rank_one;
    m.d = 2;
    m.mean_a = 0.0;
    m.sigma_a = 1.0;
    m.wtilde_kappa = 3.0;
    m.log_scale_shift = kRankOneShiftD2;
    return m;
  }
  if (name == "invertible_proximal") {
    m.family = Family::invertible_proximal;
    m.d = 2;
    m.log_scale_shift = kProximalShift;
    return m;
  }
  if (name == "nonnegative") {
    m.family = Family::nonnegative;
    m.d = 2;
    m.entry_mu = 0.0;
    m.entry_sigma = 1.0;
    m.log_scale_shift = kNonnegativeShift;
    return m;
  }
  if (name == "diagonal_cex") {
    m.family = Family::diagonal_counterexample;
    m.d = 2;
    m.s = 1.0;
    return m;
  }
  if (name == "permutation_cex") {
    m.family = Family::permutation_counterexample;
    m.d = 2;
    m.lambda = 2.0;
    return m;
  }
  throw std::invalid_argument("unknown reference model: " + name);
}

}  // namespace affrec
