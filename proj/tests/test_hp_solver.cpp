#include <cmath>

#include "doctest.h"
#include "hplab/error.hpp"
#include "hplab/hp_solver.hpp"

using namespace hplab;

namespace {

double re(const mp::Complex& c) { return c.re.to_double(); }

SeriesPair reference_series(int n, long bits) {
  return build_series(FunctionSpec::reference(), series_length_for_index(n), PrecisionContext{bits, 2, 2});
}

}  // namespace

TEST_CASE("type I at n = 0 is proportional to (3/2, -sqrt 6, 1)") {
  const auto sp = reference_series(0, 256);
  const auto sol = solve_type1(sp.f, sp.f2, 0, PrecisionContext{256, 2, 2});
  REQUIRE(sol.nullspace_dim == 1);
  const double q0 = re(sol.polys[0].coefficients()[0]);
  const double q1 = re(sol.polys[1].coefficients()[0]);
  const double q2 = re(sol.polys[2].coefficients()[0]);
  CHECK(q0 / q2 == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(q1 / q2 == doctest::Approx(-std::sqrt(6.0)).epsilon(1e-14));
  CHECK(std::abs(q1) == doctest::Approx(1.0));
  CHECK(q0 > 0);
  CHECK(sol.vanishing_order == 2);
  const auto rep = remainder_series(sol, sp.f, sp.f2);
  REQUIRE(rep.size() == 1);
  CHECK(rep[0].vanishing_order == 2);
  CHECK(re(rep[0].leading) / q2 == doctest::Approx(1.0 / 384.0).epsilon(1e-13));
}

TEST_CASE("type II at n = 0 gives (1, sqrt(3/2), 3/2)") {
  const auto sp = reference_series(0, 256);
  const auto sol = solve_type2(sp.f, sp.f2, 0, PrecisionContext{256, 2, 2});
  CHECK(re(sol.polys[0].coefficients()[0]) == doctest::Approx(1.0));
  CHECK(re(sol.polys[1].coefficients()[0]) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
  CHECK(re(sol.polys[2].coefficients()[0]) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("type I reference solutions are normal for small n") {
  for (int n = 1; n <= 10; ++n) {
    const long bits = PrecisionContext::default_bits_for_index(n);
    const auto sp = reference_series(n, bits);
    const auto sol = solve_type1(sp.f, sp.f2, n, PrecisionContext{bits, 2, 2});
    CAPTURE(n);
    CHECK(sol.nullspace_dim == 1);
    CHECK(sol.defects == std::array<int, 3>{0, 0, 0});
    CHECK(sol.vanishing_order == 2 * n + 2);
    CHECK_FALSE(sol.order_is_lower_bound);
  }
}

TEST_CASE("type II reference solutions satisfy both remainder orders") {
  for (int n = 1; n <= 10; ++n) {
    const long bits = PrecisionContext::default_bits_for_index(n);
    const auto sp = reference_series(n, bits);
    const auto sol = solve_type2(sp.f, sp.f2, n, PrecisionContext{bits, 2, 2});
    CAPTURE(n);
    CHECK(sol.remainder_orders[0] >= n + 1);
    CHECK(sol.remainder_orders[1] >= n + 1);
    CHECK(sol.polys[0].degree() == 2 * n);
  }
}

TEST_CASE("property: solution is invariant under scaling the series") {
  const int n = 4;
  const auto sp = reference_series(n, 256);
  const mp::Complex s(std::complex<double>(0.3, -1.7), 256);
  const auto f = sp.f.scaled(s);
  const auto f2 = sp.f2.scaled(s * s);
  const auto a = solve_type1(sp.f, sp.f2, n, PrecisionContext{256, 2, 2});
  const auto b = solve_type1(f, f2, n, PrecisionContext{256, 2, 2});
  // Q_j for scaled f is Q_j / s^j up to the common normalization.
  const mp::Complex ratio = b.polys[0].coefficients()[n] / a.polys[0].coefficients()[n];
  mp::Complex sj(1L, 256);
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i <= n; ++i) {
      const mp::Complex expected = a.polys[j].coefficients()[i] * ratio / sj;
      CHECK(std::abs((b.polys[j].coefficients()[i] - expected).to_std()) < 1e-60);
    }
    sj *= s;
  }
}

TEST_CASE("rational f has a degenerate nullspace and is reported") {
  FunctionSpec spec;
  spec.expression = parse_expression("(z+2)/(z-3)");
  const int n = 3;
  const auto sp = build_series(spec, series_length_for_index(n), PrecisionContext{256, 2, 2});
  const auto sol = solve_type1(sp.f, sp.f2, n, PrecisionContext{256, 2, 2});
  CHECK(sol.nullspace_dim > 1);
  CHECK(sol.order_is_lower_bound);
}

TEST_CASE("f with a pole at infinity is rejected") {
  FunctionSpec spec = FunctionSpec::reference();
  spec.expression = parse_expression("z*w");
  const auto sp = build_series(spec, 20, PrecisionContext{256, 2, 2});
  CHECK_THROWS_AS(solve_type1(sp.f, sp.f2, 2, PrecisionContext{256, 2, 2}), ValidationError);
}

TEST_CASE("short series are rejected") {
  const auto sp = reference_series(2, 256);
  CHECK_THROWS_AS(solve_type1(sp.f, sp.f2, 5, PrecisionContext{256, 2, 2}), ValidationError);
}
