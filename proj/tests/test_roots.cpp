#include <cmath>
#include <random>

#include "doctest.h"
#include "hplab/error.hpp"
#include "hplab/roots.hpp"

using namespace hplab;

namespace {

Polynomial from_doubles(std::initializer_list<std::complex<double>> c, mp::Prec prec) {
  std::vector<mp::Complex> v;
  for (auto x : c) v.emplace_back(x, prec);
  return Polynomial(std::move(v));
}

// Expands lead * prod (z - r) with double-precision inputs at `prec` bits.
Polynomial from_roots(const std::vector<std::complex<double>>& roots, mp::Prec prec) {
  std::vector<mp::Complex> c{mp::Complex(1L, prec)};
  for (auto r : roots) {
    std::vector<mp::Complex> next(c.size() + 1, mp::Complex(prec));
    const mp::Complex mr(r, prec);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= c[k] * mr;
    }
    c = std::move(next);
  }
  return Polynomial(std::move(c));
}

}  // namespace

TEST_CASE("z^2 - 1 has roots -1 and 1") {
  const auto rs = find_roots(from_doubles({-1.0, 0.0, 1.0}, 256), PrecisionContext{256, 2, 2});
  REQUIRE(rs.degree() == 2);
  CHECK(rs.certified);
  CHECK(std::abs(rs.roots[0].to_std() - std::complex<double>(-1.0)) < 1e-30);
  CHECK(std::abs(rs.roots[1].to_std() - std::complex<double>(1.0)) < 1e-30);
}

TEST_CASE("triple root loses accuracy like the cube root of the tolerance") {
  const long bits = 256;
  const auto rs = find_roots(from_doubles({-1.0, 3.0, -3.0, 1.0}, bits), PrecisionContext{bits, 2, 2});
  REQUIRE(rs.degree() == 3);
  for (const auto& r : rs.roots) {
    const double err = mp::abs(r - mp::Complex(1L, bits)).log2_abs();
    CHECK(err < -double(bits) / 6.0);
  }
}

TEST_CASE("degree 0 and zero polynomials are rejected") {
  CHECK_THROWS_AS(find_roots(from_doubles({2.0}, 128), PrecisionContext{128, 2, 2}), ValidationError);
  CHECK_THROWS_AS(find_roots(from_doubles({0.0, 0.0}, 128), PrecisionContext{128, 2, 2}), ValidationError);
}

TEST_CASE("property: reconstruction and conjugate symmetry for real polynomials") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 6; ++trial) {
    const int deg = 8 + 7 * trial;
    const long bits = 320;
    std::vector<mp::Complex> c;
    for (int i = 0; i <= deg; ++i) c.emplace_back(u(rng), bits);
    const Polynomial p(c);
    const auto rs = find_roots(p, PrecisionContext{bits, 2, 2});
    CAPTURE(deg);
    CHECK(rs.degree() == deg);
    CHECK(rs.certified);
    CHECK(reconstruction_error_log2(p, rs) < -double(bits) / 4.0);
    // every root has its conjugate in the set
    for (const auto& r : rs.roots) {
      double best = 1e300;
      for (const auto& s : rs.roots) best = std::min(best, std::abs(s.to_std() - std::conj(r.to_std())));
      CHECK(best < 1e-25);
    }
  }
}

TEST_CASE("clustered roots on a segment at high degree") {
  std::vector<std::complex<double>> roots;
  const int deg = 60;
  for (int k = 0; k < deg; ++k) roots.push_back(-1.46 + 0.2 * std::cos(M_PI * (k + 0.5) / deg));
  const long bits = 1024;
  const Polynomial p = from_roots(roots, bits);
  const auto rs = find_roots(p, PrecisionContext{bits, 2, 2});
  CHECK(rs.certified);
  std::sort(roots.begin(), roots.end(), [](auto a, auto b) { return a.real() < b.real(); });
  for (int k = 0; k < deg; ++k) CHECK(std::abs(rs.roots[k].to_std() - roots[k]) < 1e-14);
}

TEST_CASE("determinism: identical input gives identical ordering") {
  const auto p = from_doubles({{1.0, 2.0}, {-3.0, 0.5}, {0.25, 0.0}, {1.0, -1.0}, {2.0, 0.0}}, 200);
  const auto a = find_roots(p, PrecisionContext{200, 2, 2});
  const auto b = find_roots(p, PrecisionContext{200, 2, 2});
  REQUIRE(a.degree() == b.degree());
  for (int i = 0; i < a.degree(); ++i) {
    CHECK(a.roots[i].re == b.roots[i].re);
    CHECK(a.roots[i].im == b.roots[i].im);
  }
  for (int i = 1; i < a.degree(); ++i) CHECK(a.roots[i - 1].re <= a.roots[i].re);
}

TEST_CASE("counting measure weights and mass") {
  const auto rs = find_roots(from_doubles({-1.0, 0.0, 1.0}, 128), PrecisionContext{128, 2, 2});
  const auto m = counting_measure(rs, 2);
  REQUIRE(m.atoms.size() == 2);
  CHECK(m.atoms[0].weight == doctest::Approx(0.5));
  CHECK(m.total_mass() == doctest::Approx(1.0));
  const auto m3 = counting_measure(rs, 3);
  CHECK(m3.total_mass() == doctest::Approx(2.0 / 3.0));
  CHECK(counting_measure(RootSet{}, 4).empty());
  CHECK_THROWS_AS(DiscreteMeasure{}.normalized(), ValidationError);
}

TEST_CASE("inclusion disks contain the exact roots") {
  const std::vector<std::complex<double>> exact{{1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}};
  const auto p = from_roots(exact, 256);
  RootSet rs;
  rs.precision_bits = 256;
  for (double x : {1.0 + 1e-9, 2.0 - 3e-12, 3.0}) rs.roots.emplace_back(std::complex<double>(x, 0.0), 256);
  const auto rad = inclusion_radii_log2(p, rs);
  REQUIRE(rad.size() == 3);
  CHECK(std::exp2(rad[0]) >= 1e-9 * 0.999);
  CHECK(std::exp2(rad[0]) < 1e-8);
  CHECK(std::exp2(rad[1]) >= 3e-12 * 0.999);
  CHECK(std::isinf(rad[2]));
  CHECK(rad[2] < 0);
}
