#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hplab/branch.hpp"
#include "hplab/error.hpp"
#include "hplab/series.hpp"

using namespace hplab;
using cd = std::complex<double>;

namespace {

const PrecisionContext kCtx{256, 2, 2};

mp::Complex mpc(cd z) { return mp::Complex(z, 256); }

// Closed polyline starting at angle pi/2.
std::vector<cd> circle(cd c, double r, int k) {
  std::vector<cd> out;
  for (int i = 0; i < k; ++i) out.push_back(c + std::polar(r, 0.5 * std::numbers::pi + 2.0 * std::numbers::pi * i / k));
  out.push_back(out.front());
  return out;
}

FunctionSpec two_pairs() {
  FunctionSpec s;
  s.pairs = {{ComplexLiteral::real("-4"), ComplexLiteral::real("-2.5")},
             {ComplexLiteral::real("1.5"), ComplexLiteral::real("3")}};
  return s;
}

}  // namespace

TEST_CASE("inverse Zhukovskii at z = 2") {
  const auto zp = eval_inverse_zhukovskii(mpc(2.0), kCtx);
  CHECK(zp.phi.to_std().real() == doctest::Approx(2.0 + std::sqrt(3.0)).epsilon(1e-15));
  CHECK(zp.phi_inv.to_std().real() == doctest::Approx(2.0 - std::sqrt(3.0)).epsilon(1e-15));
  CHECK(zp.phi.is_real());
}

TEST_CASE("phi(z)/z tends to 2") {
  for (cd z : {cd(1e6, 0.0), cd(0.0, 1e6), cd(-7e5, 7e5)}) {
    const auto zp = eval_inverse_zhukovskii(mpc(z), kCtx);
    CHECK(std::abs(zp.phi.to_std() / (2.0 * z) - 1.0) < 1e-12);
  }
}

TEST_CASE("points on E are rejected") {
  CHECK_THROWS_AS(eval_inverse_zhukovskii(mpc(0.5), kCtx), DomainError);
  CHECK_THROWS_AS(eval_inverse_zhukovskii(mpc(-1.0), kCtx), DomainError);
  CHECK_NOTHROW(eval_inverse_zhukovskii(mpc(cd(0.5, 1e-20)), kCtx));
}

TEST_CASE("property: |phi| > 1 off E and phi + 1/phi = 2z") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const cd z(u(rng), u(rng));
    const auto zp = eval_inverse_zhukovskii(mpc(z), kCtx);
    CHECK(std::abs(zp.phi.to_std()) > 1.0);
    CHECK(std::abs(zp.phi.to_std() + zp.phi_inv.to_std() - 2.0 * z) < 1e-13);
  }
}

TEST_CASE("sheet 0 at infinity is sqrt(3/2)") {
  const BranchEvaluator ev(FunctionSpec::reference(), kCtx);
  CHECK(ev.eval_sheet(mpc(1e12), 0).to_std().real() == doctest::Approx(std::sqrt(1.5)).epsilon(1e-11));
}

TEST_CASE("product identity at z = 2 gives 22/13") {
  const BranchEvaluator ev(FunctionSpec::reference(), kCtx);
  const auto f0 = ev.eval_sheet(mpc(2.0), 0);
  const auto f1 = ev.eval_sheet(mpc(2.0), 1);
  const auto p = f0 * f1;
  CHECK((p * p).to_std().real() == doctest::Approx(22.0 / 13.0).epsilon(1e-15));
}

TEST_CASE("property: rational product identity off the cuts") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (const auto& spec : {FunctionSpec::reference(), two_pairs()}) {
    const BranchEvaluator ev(spec, kCtx);
    for (int i = 0; i < 50; ++i) {
      const cd z(u(rng), u(rng));
      const auto f0 = ev.eval_sheet(mpc(z), 0);
      const auto f1 = ev.eval_sheet(mpc(z), 1);
      const auto lhs = (f0 * f1) * (f0 * f1);
      mp::Complex rhs(1L, 256);
      for (const auto& pr : spec.pairs) {
        const auto A = pr.A.value(256), B = pr.B.value(256);
        const mp::Complex one(1L, 256);
        const auto zz = mpc(z);
        rhs *= (A * A - A * zz * 2L + one) / (B * B - B * zz * 2L + one);
      }
      CHECK(mp::abs(lhs - rhs).log2_abs() - mp::abs(rhs).log2_abs() < -128.0);
    }
  }
}

TEST_CASE("sheet-1 anchor is all plus") {
  CHECK(BranchEvaluator(FunctionSpec::reference(), kCtx).sheet1_anchor() == std::vector<int>{1});
  CHECK(BranchEvaluator(two_pairs(), kCtx).sheet1_anchor() == std::vector<int>{1, 1});
}

TEST_CASE("sheet 0 agrees with the summed series at |z| = 1000") {
  const auto spec = two_pairs();
  const BranchEvaluator ev(spec, kCtx);
  const auto s = series_ff(spec, 40, kCtx);
  for (cd z : {cd(1000.0, 0.0), cd(600.0, 800.0), cd(0.0, -1000.0)}) {
    const auto direct = ev.eval_sheet(mpc(z), 0).to_std();
    const auto summed = s.evaluate(mpc(z)).to_std();
    CHECK(std::abs(direct - summed) / std::abs(direct) < 1e-10);
  }
}

TEST_CASE("continuation: loop without branch points returns the start value") {
  const BranchEvaluator ev(FunctionSpec::reference(), kCtx);
  const auto path = circle(cd(3.0, 0.0), 0.5, 64);
  const auto start = ev.branch_value(mpc(path.front()), 1);
  const auto end = ev.continue_along_path(path, start);
  CHECK(end.signs == start.signs);
  CHECK(end.branch == ZhukovskiiBranch::Outer);
  CHECK(std::abs(end.value.to_std() - start.value.to_std()) < 1e-30);
}

TEST_CASE("continuation: small loop around a_1 on the outer branch negates the value") {
  const BranchEvaluator ev(FunctionSpec::reference(), kCtx);
  const cd a1 = -5.0 / 3.0;
  const auto path = circle(a1, 0.05, 64);
  const auto start = ev.branch_value(mpc(path.front()), 1);
  const auto end = ev.continue_along_path(path, start);
  CHECK(end.signs[0] == -start.signs[0]);
  CHECK(std::abs(end.value.to_std() + start.value.to_std()) < 1e-30);
}

TEST_CASE("continuation: loop around all of F_1 leaves f^2 and f unchanged") {
  const BranchEvaluator ev(two_pairs(), kCtx);
  // F_1 = [J(-4), J(-2.5)] = [-2.125, -1.45]
  const auto path = circle(cd(-1.7875, 0.0), 0.5, 128);
  const auto start = ev.branch_value(mpc(path.front()), 1);
  const auto end = ev.continue_along_path(path, start);
  const auto w0 = start.w.to_std(), w1 = end.w.to_std();
  CHECK(std::abs(w1 * w1 - w0 * w0) < 1e-30);
}

TEST_CASE("continuation: crossing E once from sheet 0 lands on sheet 1") {
  const BranchEvaluator ev(two_pairs(), kCtx);
  const auto start = ev.branch_value(mpc(cd(0.3, 1.0)), 0);
  const auto end = ev.continue_along_path({cd(0.3, 1.0), cd(0.2, -0.7)}, start);
  CHECK(end.branch == ZhukovskiiBranch::Outer);
  const auto direct = ev.eval_sheet(mpc(cd(0.2, -0.7)), 1).to_std();
  CHECK(std::abs(end.value.to_std() - direct) < 1e-30);
}

TEST_CASE("continuation refuses paths through a branch point") {
  const BranchEvaluator ev(FunctionSpec::reference(), kCtx);
  const auto start = ev.branch_value(mpc(cd(-5.0 / 3.0, 1.0)), 1);
  CHECK_THROWS_AS(ev.continue_along_path({cd(-5.0 / 3.0, 1.0), cd(-5.0 / 3.0, -1.0)}, start), DomainError);
}

TEST_CASE("sheet 2 needs a region and respects it") {
  const BranchEvaluator bare(FunctionSpec::reference(), kCtx);
  CHECK_THROWS_AS(bare.eval_sheet(mpc(cd(-1.5, 0.1)), 2), DomainError);
  // Stand-in Green potential: distance to the centre of F.
  Sheet2Region region{[](cd z) { return std::abs(z + 1.4583333333333333); }, 0.5};
  const BranchEvaluator ev(FunctionSpec::reference(), kCtx, region);
  const auto f1 = ev.eval_sheet(mpc(cd(-1.5, 0.1)), 1).to_std();
  const auto f2 = ev.eval_sheet(mpc(cd(-1.5, 0.1)), 2).to_std();
  CHECK(std::abs(f1 + f2) < 1e-30);
  CHECK_THROWS_AS(ev.eval_sheet(mpc(cd(2.0, 0.0)), 2), DomainError);
}

TEST_CASE("sheet 1 is undefined on F") {
  const BranchEvaluator ev(FunctionSpec::reference(), kCtx);
  CHECK_THROWS_AS(ev.eval_sheet(mpc(-1.5), 1), DomainError);
  CHECK_NOTHROW(ev.eval_sheet(mpc(-1.5), 0));
}

TEST_CASE("poles of f are reported") {
  FunctionSpec spec = FunctionSpec::reference();
  spec.expression = parse_expression("w/(z-3)");
  const BranchEvaluator ev(spec, kCtx);
  CHECK_THROWS_AS(ev.eval_sheet(mpc(3.0), 0), DomainError);
  CHECK_NOTHROW(ev.eval_sheet(mpc(cd(3.0, 0.1)), 0));
}

TEST_CASE("conjugate-pair spec: sheet 0 of w + 1/w is real on the real axis") {
  FunctionSpec spec;
  spec.pairs = {{parse_complex_literal("2+1.5i"), parse_complex_literal("2-1.5i")},
                {parse_complex_literal("-2+1.5i"), parse_complex_literal("-2-1.5i")}};
  spec.expression = parse_expression("w+1/w");
  const BranchEvaluator ev(spec, kCtx);
  CHECK(std::abs(ev.eval_sheet(mpc(3.0), 0).to_std().imag()) < 1e-30);
}
