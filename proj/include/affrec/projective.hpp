#pragma once

// Projective state space P(R^d) together with an absorbing zero state, the
// sine distance, the matrix action with its logarithmic gain, and the
// positive simplex with its projective-type contraction metric.

#include "affrec/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace affrec {

// A direction, stored as the unit representative whose first nonzero
// coordinate is positive, or the absorbing zero state. The sign convention
// makes equality of directions a plain vector comparison.
class ProjectivePoint {
 public:
  static ProjectivePoint zero_state(int d) {
    ProjectivePoint p;
    p.rep_ = Vector::Zero(d);
    p.zero_ = true;
    return p;
  }

  static ProjectivePoint from_unit(Vector u) {
    ProjectivePoint p;
    p.rep_ = std::move(u);
    p.zero_ = false;
    return p;
  }

  bool is_zero() const { return zero_; }
  int dim() const { return static_cast<int>(rep_.size()); }

  const Vector& rep() const {
    if (zero_) throw std::domain_error("ProjectivePoint: zero state has no representative");
    return rep_;
  }

  bool operator==(const ProjectivePoint& o) const {
    if (zero_ != o.zero_) return false;
    if (zero_) return rep_.size() == o.rep_.size();
    return rep_ == o.rep_;
  }
  bool operator!=(const ProjectivePoint& o) const { return !(*this == o); }

 private:
  Vector rep_;
  bool zero_ = true;
};

inline ProjectivePoint canonicalize(const Vector& v) {
  const double n = v.norm();
  if (n == 0.0) return ProjectivePoint::zero_state(static_cast<int>(v.size()));
  Vector u = v / n;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u[i] != 0.0) {
      if (u[i] < 0.0) u = -u;
      break;
    }
  }
  return ProjectivePoint::from_unit(std::move(u));
}

// delta(p, q) = |sin(angle)| in [0, 1]; rejects the zero state.
inline double delta(const ProjectivePoint& p, const ProjectivePoint& q) {
  if (p.is_zero() || q.is_zero())
    throw std::domain_error("delta: undefined at the zero state");
  const double c = p.rep().dot(q.rep());
  const double s2 = 1.0 - c * c;
  if (s2 <= 0.0) return 0.0;
  return std::min(1.0, std::sqrt(s2));
}

struct ActResult {
  ProjectivePoint image;
  double log_gain;  // ln |A x| for the unit representative; -inf on absorption
};

inline ActResult act(const Matrix& A, const ProjectivePoint& p) {
  if (p.is_zero())
    return {ProjectivePoint::zero_state(static_cast<int>(A.rows())), kNegInf};
  Vector w = A * p.rep();
  const double g = w.norm();
  if (g == 0.0)
    return {ProjectivePoint::zero_state(static_cast<int>(A.rows())), kNegInf};
  return {canonicalize(w), std::log(g)};
}

// A point of the simplex X = S^{d-1} \cap (R+)^d: nonnegative entries,
// euclidean norm one.
class SimplexPoint {
 public:
  explicit SimplexPoint(Vector v) {
    if ((v.array() < 0.0).any())
      throw std::invalid_argument("SimplexPoint: negative entry");
    const double n = v.norm();
    if (n == 0.0) throw std::invalid_argument("SimplexPoint: zero vector");
    rep_ = v / n;
  }

  static SimplexPoint from_projective(const ProjectivePoint& p) {
    return SimplexPoint(p.rep());
  }

  const Vector& rep() const { return rep_; }

 private:
  Vector rep_;
};

// Hennion's projective-type distance on the simplex,
//   d(u, v) = (1 - m(u,v) m(v,u)) / (1 + m(u,v) m(v,u)),
// with m(u, v) = min over coordinates i with v_i > 0 of u_i / v_i.
// Satisfies delta(u, v) <= |u - v| <= 2 d(u, v) and is strongly contracted
// by matrices with positive entries.
inline double hennion_distance(const SimplexPoint& u, const SimplexPoint& v) {
  const Vector& a = u.rep();
  const Vector& b = v.rep();
  double m_uv = std::numeric_limits<double>::infinity();
  double m_vu = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (b[i] > 0.0) m_uv = std::min(m_uv, a[i] / b[i]);
    if (a[i] > 0.0) m_vu = std::min(m_vu, b[i] / a[i]);
  }
  const double m = m_uv * m_vu;  // both finite: u and v have positive coordinates
  return (1.0 - m) / (1.0 + m);
}

}  // namespace affrec
