#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "symp/core_linalg.hpp"
#include "symp/spectral.hpp"
#include "test_util.hpp"

using namespace symp;
using testutil::diag;

namespace {
Mat jordan(double l, int m) {
  Mat j = l * Mat::Identity(m, m);
  for (int i = 0; i + 1 < m; ++i) j(i, i + 1) = 1;
  return j;
}
Mat jordan_pair(double l, int m) {
  const Mat j = jordan(l, m);
  Mat a = Mat::Zero(2 * m, 2 * m);
  a.topLeftCorner(m, m) = j;
  a.bottomRightCorner(m, m) = j.inverse().transpose();
  return a;
}
}  // namespace

TEST_CASE("eigen_quadruples examples") {
  auto q1 = eigen_quadruples(-Mat::Identity(4, 4));
  REQUIRE(q1.size() == 1);
  CHECK(q1[0].regime == Regime::MinusOne);
  CHECK(q1[0].alg_multiplicity == 4);

  auto q2 = eigen_quadruples(w_minus(2));
  REQUIRE(q2.size() == 2);
  int seen = 0;
  for (auto& q : q2) {
    if (q.regime == Regime::RealPositive) {
      CHECK(q.members.size() == 2);
      CHECK(std::abs(q.representative - 2.0) < 1e-12);
      ++seen;
    }
    if (q.regime == Regime::MinusOne) {
      CHECK(q.alg_multiplicity == 2);
      ++seen;
    }
  }
  CHECK(seen == 2);

  const double phi = 0.9;
  const Mat k = random_symplectic(2, 11);
  const Mat a = k * direct_sum(rotation(phi), rotation(-phi)) * k.inverse();
  auto q3 = eigen_quadruples(a);
  REQUIRE(q3.size() == 1);
  CHECK(q3[0].regime == Regime::UnitNonReal);
  CHECK(q3[0].members.size() == 2);
  CHECK(q3[0].alg_multiplicity * 2 == 4);
  CHECK(std::abs(q3[0].representative - std::polar(1.0, phi)) < 1e-7);
}

TEST_CASE("quadruple multiplicities sum to 2n and product is 1") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const int n = 1 + static_cast<int>(s % 3);
    const Mat a = random_symplectic(n, s, 2.0);
    auto qs = eigen_quadruples(a);
    int total = 0;
    cplx prod = 1;
    for (auto& q : qs) {
      total += q.alg_multiplicity * static_cast<int>(q.members.size());
      for (cplx z : q.members) prod *= std::pow(z, q.alg_multiplicity);
    }
    CHECK(total == 2 * n);
    CHECK(std::abs(prod - 1.0) < 1e-6);
  }
}

TEST_CASE("generalized_eigenspace examples") {
  CHECK(generalized_eigenspace(Mat::Identity(4, 4), 1.0).cols() == 4);
  Mat sh(2, 2);
  sh << 1, 1, 0, 1;
  CHECK(generalized_eigenspace(sh, 1.0).cols() == 2);
  CHECK(kernel_dimension(sh, 1.0, 1) == 1);
  CHECK(kernel_dimension(sh, 1.0, 2) == 2);
  const Mat a = jordan_pair(3.0, 2);
  CHECK(is_symplectic(a));
  const CMat e = generalized_eigenspace(a, 3.0);
  CHECK(e.cols() == 2);
  // the basis spans e1, e2
  CHECK(e.bottomRows(2).norm() < 1e-8);
  CHECK_THROWS_AS(generalized_eigenspace(a, 5.0), Error);
}

TEST_CASE("krein_form examples") {
  const double phi = 1.2;
  auto k1 = krein_form(rotation(phi), std::polar(1.0, phi));
  CHECK(k1.m_plus == 1);
  CHECK(k1.m_minus == 0);
  auto k2 = krein_form(rotation(-phi), std::polar(1.0, phi));
  CHECK(k2.m_plus == 0);
  CHECK(k2.m_minus == 1);
  auto k3 = krein_form(direct_sum(rotation(phi), rotation(phi)), std::polar(1.0, phi));
  CHECK(k3.m_plus == 2);
  CHECK(k3.m_minus == 0);
  CHECK((k3.q_matrix - k3.q_matrix.adjoint()).norm() < 1e-12);
  CHECK_THROWS_AS(krein_form(rotation(phi), cplx(1, 0)), Error);
}

TEST_CASE("Krein signs at conjugate eigenvalues are opposite") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const int n = 1 + static_cast<int>(s % 3);
    const Mat a = random_symplectic(n, s, 3.0);
    auto sa = analyze_spectrum(a, {}, false, true);
    for (auto& c : sa.clusters) {
      if (c.regime != Regime::UnitNonReal || c.center.imag() < 0) continue;
      auto kp = krein_form(a, c.center);
      auto km = krein_form(a, std::conj(c.center));
      CHECK(kp.m_plus - kp.m_minus == -(km.m_plus - km.m_minus));
    }
  }
}

TEST_CASE("first_kind_eigenvalues examples") {
  auto f1 = first_kind_eigenvalues(-Mat::Identity(2, 2));
  REQUIRE(f1.size() == 1);
  CHECK(std::abs(f1[0] + 1.0) < 1e-12);
  auto f2 = first_kind_eigenvalues(w_minus(2));
  REQUIRE(f2.size() == 2);
  std::sort(f2.begin(), f2.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  CHECK(std::abs(f2[0] + 1.0) < 1e-12);
  CHECK(std::abs(f2[1] - 0.5) < 1e-12);
  auto f3 = first_kind_eigenvalues(rotation(0.8));
  REQUIRE(f3.size() == 1);
  CHECK(std::abs(f3[0] - std::polar(1.0, 0.8)) < 1e-12);
}

TEST_CASE("rho anchors") {
  for (int n = 1; n <= 4; ++n) {
    CHECK(std::abs(rho(w_plus(n)) - (n % 2 == 0 ? 1.0 : -1.0)) < 1e-9);
    CHECK(std::abs(rho(w_minus(n)) - ((n - 1) % 2 == 0 ? 1.0 : -1.0)) < 1e-9);
  }
  CHECK(std::abs(rho(diag({2, 0.5})) - 1.0) < 1e-12);
  for (double phi : {0.3, 1.5, 2.9, -2.0})
    CHECK(std::abs(rho(rotation(phi)) - std::polar(1.0, phi)) < 1e-9);
}

TEST_CASE("rho properties on random instances") {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const int n = 1 + static_cast<int>(s % 3);
    // (1) equals det_C on U(n)
    const Mat o = testutil::random_unitary_real(n, s + 500);
    CHECK(std::abs(rho(o) - testutil::det_of_unitary_real(o)) < 1e-9);
    // (2) conjugation invariance
    const Mat a = random_symplectic(n, s, 1.5);
    const Mat k = random_symplectic(n, s + 1000);
    CHECK(std::abs(rho(k * a * symplectic_inverse(k)) - rho(a)) < 1e-8);
    // (4) multiplicative on direct sums
    const Mat b = random_symplectic(1 + static_cast<int>((s + 1) % 2), s + 2000, 1.5);
    CHECK(std::abs(rho(direct_sum(a, b)) - rho(a) * rho(b)) < 1e-9);
    // powers
    const cplx r = rho(a);
    Mat p = Mat::Identity(2 * n, 2 * n);
    const Mat ainv = symplectic_inverse(a);
    for (int N = -2; N <= 3; ++N) {
      Mat an = Mat::Identity(2 * n, 2 * n);
      for (int i = 0; i < std::abs(N); ++i) an = an * (N < 0 ? ainv : a);
      CHECK(std::abs(rho(an) - std::pow(r, N)) < 1e-8);
    }
  }
}

TEST_CASE("rho is +-1 without unit-circle eigenvalues") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const int n = 1 + static_cast<int>(s % 3);
    std::mt19937_64 rng(s);
    std::uniform_real_distribution<double> u(1.2, 3.0);
    Mat d = Mat::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
      const double l = u(rng) * ((rng() % 2) ? -1.0 : 1.0);
      d(i, i) = l;
      d(n + i, n + i) = 1.0 / l;
    }
    const Mat k = random_symplectic(n, s + 77);
    const cplx r = rho(k * d * symplectic_inverse(k));
    CHECK(std::abs(std::abs(r.real()) - 1.0) < 1e-8);
    CHECK(std::abs(r.imag()) < 1e-8);
  }
}
