#include "affrec/projective.hpp"

#include "affrec/models.hpp"
#include "affrec/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"

#include <cmath>

using namespace affrec;

TEST_CASE("canonicalize: zero, sign, normalization") {
  Vector z = Vector::Zero(3);
  CHECK(canonicalize(z).is_zero());

  Vector v(2);
  v << -2.0, 0.0;
  auto p = canonicalize(v);
  REQUIRE(!p.is_zero());
  CHECK(p.rep()[0] == Catch::Approx(1.0));
  CHECK(p.rep()[1] == 0.0);

  v << 3.0, 4.0;
  p = canonicalize(v);
  CHECK(p.rep()[0] == Catch::Approx(0.6));
  CHECK(p.rep()[1] == Catch::Approx(0.8));
}

TEST_CASE("canonicalize absorbs the sign bit exactly") {
  RngStream rng(11);
  for (int rep = 0; rep < 1000; ++rep) {
    const int d = 1 + static_cast<int>(rng.uniform_index(8));
    Vector v(d);
    for (int i = 0; i < d; ++i) v[i] = rng.normal();
    auto p = canonicalize(v);
    auto q = canonicalize(Vector(-v));
    REQUIRE(p == q);  // bitwise equality of representatives
  }
}

TEST_CASE("delta: endpoints and the derived pi/4 value") {
  Vector e1 = Vector::Zero(2), e2 = Vector::Zero(2);
  e1[0] = 1.0;
  e2[1] = 1.0;
  auto p1 = canonicalize(e1), p2 = canonicalize(e2);
  CHECK(delta(p1, p1) == 0.0);
  CHECK(delta(p1, p2) == Catch::Approx(1.0));

  Vector diag(2);
  diag << 1.0, 1.0;
  // angle pi/4: sin = sqrt(2)/2; cross-checked against the 2x2 wedge
  const double d_inner = delta(canonicalize(diag), p1);
  CHECK(d_inner == Catch::Approx(0.70710678118654752).epsilon(1e-12));
  const Vector u = diag / diag.norm();
  const double wedge = std::abs(u[0] * e1[1] - u[1] * e1[0]);
  CHECK(d_inner == Catch::Approx(wedge).margin(1e-12));

  CHECK_THROWS_AS(delta(p1, ProjectivePoint::zero_state(2)), std::domain_error);
}

TEST_CASE("delta from the inner product matches the 2-d wedge formula") {
  RngStream rng(12);
  for (int rep = 0; rep < 5000; ++rep) {
    Vector a(2), b(2);
    for (int i = 0; i < 2; ++i) {
      a[i] = rng.normal();
      b[i] = rng.normal();
    }
    if (a.norm() == 0 || b.norm() == 0) continue;
    const double wedge =
        std::abs(a[0] * b[1] - a[1] * b[0]) / (a.norm() * b.norm());
    CHECK(delta(canonicalize(a), canonicalize(b)) ==
          Catch::Approx(wedge).margin(1e-10));
  }
}

TEST_CASE("delta is a metric on nonzero directions") {
  RngStream rng(13);
  const int dims[3] = {2, 3, 5};
  for (int rep = 0; rep < 10000; ++rep) {
    const int d = dims[rng.uniform_index(3)];
    auto p = canonicalize(sample_unit_sphere(d, rng));
    auto q = canonicalize(sample_unit_sphere(d, rng));
    auto s = canonicalize(sample_unit_sphere(d, rng));
    CHECK(delta(p, q) == delta(q, p));
    CHECK(delta(p, p) == 0.0);
    CHECK(delta(p, s) <= delta(p, q) + delta(q, s) + 1e-9);
    if (delta(p, q) <= 1e-14) CHECK(p.rep().isApprox(q.rep(), 1e-6));
  }
}

TEST_CASE("act: scalar matrices, kernels, and a direct-arithmetic value") {
  Vector v(2);
  v << 1.0, 1.0;
  auto p = canonicalize(v);

  auto r = act(5.0 * Matrix::Identity(2, 2), p);
  CHECK(r.image == p);
  CHECK(r.log_gain == Catch::Approx(std::log(5.0)));

  Matrix rank1(2, 2);
  rank1 << 1.0, -1.0, 1.0, -1.0;  // kernel spans (1,1)
  r = act(rank1, p);
  CHECK(r.image.is_zero());
  CHECK(r.log_gain == kNegInf);

  Matrix D = Matrix::Zero(2, 2);
  D(0, 0) = 2.0;
  D(1, 1) = 1.0;
  r = act(D, p);
  // |A (1,1)/sqrt(2)| = sqrt(5)/sqrt(2)
  CHECK(r.log_gain == Catch::Approx(0.45814536593707755).epsilon(1e-12));
  Vector want(2);
  want << 2.0, 1.0;
  CHECK(r.image == canonicalize(want));

  // absorption in, absorption out
  r = act(D, ProjectivePoint::zero_state(2));
  CHECK(r.image.is_zero());
}

TEST_CASE("act is sign invariant through canonicalization") {
  RngStream rng(14);
  for (int rep = 0; rep < 1000; ++rep) {
    const int d = 2 + static_cast<int>(rng.uniform_index(3));
    Matrix A(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) A(i, j) = rng.normal();
    Vector v = sample_unit_sphere(d, rng);
    auto r1 = act(A, canonicalize(v));
    auto r2 = act(A, canonicalize(Vector(-v)));
    REQUIRE(r1.image == r2.image);
    REQUIRE(r1.log_gain == r2.log_gain);
  }
}

TEST_CASE("gain cocycle: log_gain(AB, p) = log_gain(A, B p) + log_gain(B, p)") {
  RngStream rng(15);
  for (int rep = 0; rep < 5000; ++rep) {
    const int d = 2 + static_cast<int>(rng.uniform_index(4));
    Matrix A(d, d), B(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        A(i, j) = rng.normal();
        B(i, j) = rng.normal();
      }
    auto p = canonicalize(sample_unit_sphere(d, rng));
    auto rb = act(B, p);
    if (rb.image.is_zero()) continue;
    auto ra = act(A, rb.image);
    if (ra.image.is_zero()) continue;
    auto rab = act(Matrix(A * B), p);
    REQUIRE(!rab.image.is_zero());
    CHECK(rab.log_gain ==
          Catch::Approx(ra.log_gain + rb.log_gain).margin(1e-9));
    CHECK(rab.image == ra.image);
  }
}

TEST_CASE("hennion distance: diagonal, disjoint supports, direct evaluation") {
  Vector e1 = Vector::Zero(2), e2 = Vector::Zero(2);
  e1[0] = 1.0;
  e2[1] = 1.0;
  SimplexPoint u(e1), v(e2);
  CHECK(hennion_distance(u, u) == 0.0);
  CHECK(hennion_distance(u, v) == Catch::Approx(1.0));

  Vector a(2), b(2);
  a << 1.0, 1.0;
  b << 2.0, 1.0;
  SimplexPoint ua(a), vb(b);
  // m(u,v) and m(v,u) evaluated by hand on the normalized representatives
  const Vector ra = a / a.norm(), rb = b / b.norm();
  const double m_uv = std::min(ra[0] / rb[0], ra[1] / rb[1]);
  const double m_vu = std::min(rb[0] / ra[0], rb[1] / ra[1]);
  const double want = (1.0 - m_uv * m_vu) / (1.0 + m_uv * m_vu);
  CHECK(hennion_distance(ua, vb) == Catch::Approx(want).margin(1e-14));
  CHECK(hennion_distance(ua, vb) == hennion_distance(vb, ua));
  CHECK(2.0 * hennion_distance(ua, vb) >= (ra - rb).norm() - 1e-12);

  CHECK_THROWS_AS(SimplexPoint(Vector(-e1)), std::invalid_argument);
}

TEST_CASE("comparison chain delta <= |u - v| <= 2 hennion on the simplex") {
  RngStream rng(16);
  for (int rep = 0; rep < 10000; ++rep) {
    const int d = 2 + static_cast<int>(rng.uniform_index(4));
    Vector a(d), b(d);
    for (int i = 0; i < d; ++i) {
      a[i] = std::abs(rng.normal());
      b[i] = std::abs(rng.normal());
    }
    if (a.norm() == 0 || b.norm() == 0) continue;
    SimplexPoint u(a), v(b);
    const double dl = delta(canonicalize(a), canonicalize(b));
    const double dist = (u.rep() - v.rep()).norm();
    const double dh = hennion_distance(u, v);
    CHECK(dl <= dist + 1e-9);
    CHECK(dist <= 2.0 * dh + 1e-9);
  }
}

TEST_CASE("chordal comparison: delta <= min(|u-v|, |u+v|) <= sqrt(2) delta") {
  RngStream rng(17);
  for (int rep = 0; rep < 10000; ++rep) {
    const int d = 2 + static_cast<int>(rng.uniform_index(4));
    Vector u = sample_unit_sphere(d, rng);
    Vector v = sample_unit_sphere(d, rng);
    const double dl = delta(canonicalize(u), canonicalize(v));
    const double mn = std::min((u - v).norm(), (u + v).norm());
    CHECK(dl <= mn + 1e-9);
    CHECK(mn <= std::sqrt(2.0) * dl + 1e-9);
  }
}

TEST_CASE("gain-ratio bound ln+ (|Au|/|Av|) <= sqrt(2) n(A,v) delta(u,v)") {
  RngStream rng(18);
  const int dims[3] = {2, 3, 5};
  std::size_t checked = 0;
  for (int rep = 0; rep < 100000; ++rep) {
    const int d = dims[rng.uniform_index(3)];
    Matrix A(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) A(i, j) = rng.normal();
    auto u = canonicalize(sample_unit_sphere(d, rng));
    auto v = canonicalize(sample_unit_sphere(d, rng));
    auto ru = act(A, u), rv = act(A, v);
    if (ru.image.is_zero() || rv.image.is_zero()) continue;
    ++checked;
    const double lhs = std::max(0.0, ru.log_gain - rv.log_gain);
    const double n_av = operator_norm(A) / std::exp(rv.log_gain);
    REQUIRE(lhs <= std::sqrt(2.0) * n_av * delta(u, v) + 1e-9);
  }
  CHECK(checked > 99000);
}
