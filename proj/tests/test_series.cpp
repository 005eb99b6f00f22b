#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "hplab/error.hpp"
#include "hplab/series.hpp"

using namespace hplab;
using cld = std::complex<long double>;

namespace {

PrecisionContext ctx256() { return PrecisionContext{256, 2, 2}; }

// Generalized binomial coefficient C(1/2, k).
long double binom_half(int k) {
  long double r = 1.0L;
  for (int i = 0; i < k; ++i) r *= (0.5L - i) / (i + 1);
  return r;
}

cld phi_ld(cld z) { return z + std::sqrt(z - 1.0L) * std::sqrt(z + 1.0L); }

cld reference_ff(cld z) {
  const cld t = 1.0L / phi_ld(z);
  return std::sqrt((-3.0L - t) / (-2.0L - t));
}

long double re(const mp::Complex& c) { return c.re.to_long_double(); }

}  // namespace

TEST_CASE("1/phi coefficients match the binomial series of z - sqrt(z^2-1)") {
  const auto s = series_phi_inverse(40, ctx256());
  CHECK(s.top_exponent() == -1);
  for (int k = 1; k <= 20; ++k) {
    // z - z sqrt(1 - z^-2) = -sum_{k>=1} C(1/2,k) (-1)^k z^(1-2k)
    const long double expected = -binom_half(k) * ((k % 2) ? -1.0L : 1.0L);
    CHECK(re(s.coeff(1 - 2 * k)) == doctest::Approx(double(expected)).epsilon(1e-15));
    if (2 * k <= 39) CHECK(s.coeff(-2 * k).is_zero());
  }
}

TEST_CASE("phi series starts 2z - 1/(2z)") {
  const auto s = series_phi(10, ctx256());
  CHECK(s.top_exponent() == 1);
  CHECK(re(s.coeff(1)) == doctest::Approx(2.0));
  CHECK(s.coeff(0).is_zero());
  CHECK(re(s.coeff(-1)) == doctest::Approx(-0.5));
}

TEST_CASE("reference function series: leading coefficients") {
  const auto f = series_ff(FunctionSpec::reference(), 30, ctx256());
  CHECK(f.top_exponent() == 0);
  CHECK(f.length() == 30);
  CHECK(f.is_real());
  CHECK(re(f.coeff(0)) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
  CHECK(re(f.coeff(-1)) == doctest::Approx(-std::sqrt(1.5) / 24.0).epsilon(1e-15));
}

TEST_CASE("reference function series sums to the pointwise value far out") {
  const auto f = series_ff(FunctionSpec::reference(), 60, ctx256());
  for (cld z : {cld(12.0L, 0.0L), cld(0.0L, 15.0L), cld(-9.0L, 7.0L)}) {
    const auto s = f.evaluate(mp::Complex(std::complex<double>(double(z.real()), double(z.imag())), 256)).to_std();
    const cld expected = reference_ff(z);
    CHECK(std::abs(cld(s.real(), s.imag()) - expected) < 1e-14L);
  }
}

TEST_CASE("expression w*w squares the series") {
  const auto ctx = ctx256();
  const auto w = series_ff(FunctionSpec::reference(), 20, ctx);
  const auto f = series_eval_expression(parse_expression("w*w"), w, 16, ctx);
  CHECK(re(f.coeff(0)) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(re(f.coeff(-1)) == doctest::Approx(-0.125).epsilon(1e-15));
}

TEST_CASE("w + 1/w with conjugate pairs") {
  FunctionSpec spec;
  spec.pairs = {ParamPair{parse_complex_literal("2+1.5i"), parse_complex_literal("2-1.5i")}};
  spec.expression = parse_expression("w+1/w");
  spec.validate();
  const auto sp = build_series(spec, 20, ctx256());
  CHECK(sp.f.length() == 20);
  const cld A(2.0L, 1.5L);
  const cld B(2.0L, -1.5L);
  const cld z(10.0L, 4.0L);
  const cld t = 1.0L / phi_ld(z);
  const cld w = std::sqrt((A - t) / (B - t));
  const auto s = sp.f.evaluate(mp::Complex(std::complex<double>(10.0, 4.0), 256)).to_std();
  CHECK(std::abs(cld(s.real(), s.imag()) - (w + 1.0L / w)) < 1e-12L);
}

TEST_CASE("property: sqrt(s)^2 == s") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<mp::Complex> c;
    c.emplace_back(std::complex<double>(1.0 + 0.5 * u(rng), 0.5 * u(rng)), 200);
    for (int i = 1; i < 15; ++i) c.emplace_back(std::complex<double>(u(rng), u(rng)), 200);
    const LaurentSeries s(0, c);
    const LaurentSeries r = sqrt(s);
    const LaurentSeries back = r * r;
    REQUIRE(back.length() == s.length());
    for (int e = 0; e > -15; --e) {
      const auto d = (back.coeff(e) - s.coeff(e)).to_std();
      CHECK(std::abs(d) < 1e-50);
    }
  }
}

TEST_CASE("property: (a*b)/b == a and truncation bookkeeping") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<mp::Complex> ca, cb;
    for (int i = 0; i < 12; ++i) ca.emplace_back(std::complex<double>(u(rng), u(rng)), 200);
    for (int i = 0; i < 9; ++i) cb.emplace_back(std::complex<double>(u(rng) + (i == 0 ? 3.0 : 0.0), u(rng)), 200);
    const LaurentSeries a(0, ca), b(-1, cb);
    const LaurentSeries p = a * b;
    CHECK(p.length() == 9);
    CHECK(p.top_exponent() == -1);
    const LaurentSeries q = p / b;
    for (int e = 0; e > -9; --e) CHECK(std::abs((q.coeff(e) - a.coeff(e)).to_std()) < 1e-50);
    CHECK_THROWS_AS(q.coeff(-9), NumericError);
    const LaurentSeries s = a + b;
    CHECK(s.error_exponent() == std::max(a.error_exponent(), b.error_exponent()));
  }
}

TEST_CASE("sums that cancel exactly strip their leading terms") {
  const auto ctx = ctx256();
  const auto w = series_ff(FunctionSpec::reference(), 20, ctx);
  const auto d = w - w;
  CHECK(d.is_zero());
  CHECK(d.error_exponent() == w.error_exponent());
  CHECK_THROWS_AS(w / d, DomainError);
}

TEST_CASE("expression that cancels its leading term") {
  const auto ctx = ctx256();
  const auto w = series_ff(FunctionSpec::reference(), 30, ctx);
  // w - sqrt(3/2) starts at z^-1.
  FunctionSpec spec = FunctionSpec::reference();
  spec.expression = parse_expression("(w*w-1.5)*z");
  const auto sp = build_series(spec, 20, ctx);
  CHECK(sp.f.top_exponent() == 0);
  CHECK(re(sp.f.coeff(0)) == doctest::Approx(-0.125).epsilon(1e-14));
}

TEST_CASE("zero and monomial constructors") {
  const auto z = LaurentSeries::zero(-5, 128);
  CHECK(z.is_zero());
  CHECK(z.error_exponent() == -5);
  CHECK(z.precision() == 128);
  const auto m = LaurentSeries::monomial(2, 4, 128);
  CHECK(m.top_exponent() == 2);
  CHECK(m.error_exponent() == -2);
  CHECK(series_length_for_index(10) == 38);
}
