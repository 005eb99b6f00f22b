#include "hplab/hp_solver.hpp"

#include <cmath>
#include <limits>

#include "hplab/error.hpp"
#include "hplab/linalg.hpp"

namespace hplab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_inputs(const LaurentSeries& f, const LaurentSeries& f2, int n, int lowest_needed) {
  if (n < 0) throw ValidationError("HP index n must be >= 0");
  if (f.is_zero()) throw ValidationError("f series is identically zero");
  if (f.top_exponent() > 0 || f2.top_exponent() > 0)
    throw ValidationError("f must be holomorphic at infinity (series top exponent <= 0)");
  if (f.lowest_known_exponent() > lowest_needed || f2.lowest_known_exponent() > lowest_needed)
    throw ValidationError("series truncated too early: need coefficients down to z^" +
                          std::to_string(lowest_needed));
}

// Coefficient of z^e in g_j, where g_0 = 1, g_1 = f, g_2 = f^2.
const mp::Complex& block_coeff(int j, int e, const LaurentSeries& one, const LaurentSeries& f,
                               const LaurentSeries& f2) {
  return j == 0 ? one.coeff(e) : (j == 1 ? f.coeff(e) : f2.coeff(e));
}

template <class Scalar>
Scalar convert(const mp::Complex& z, mp::Prec prec);
template <>
mp::Real convert<mp::Real>(const mp::Complex& z, mp::Prec prec) {
  return z.re.with_precision(prec);
}
template <>
mp::Complex convert<mp::Complex>(const mp::Complex& z, mp::Prec prec) {
  return z.with_precision(prec);
}

mp::Complex to_complex(const mp::Real& x) { return mp::Complex(x); }
mp::Complex to_complex(const mp::Complex& z) { return z; }

struct RawNullspace {
  std::vector<mp::Complex> vector;
  int rank = 0;
  int dim = 0;
  double min_pivot = 0.0;
};

template <class Scalar, class Fill>
RawNullspace solve_system(int rows, int cols, mp::Prec prec, Fill&& fill) {
  DenseMatrix<Scalar> a(rows, cols, prec);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) a(r, c) = convert<Scalar>(fill(r, c), prec);
  auto ns = nullspace_full_pivot(std::move(a), -double(prec) / 2.0);
  RawNullspace out;
  out.rank = ns.rank;
  out.dim = ns.nullspace_dim;
  out.min_pivot = ns.min_relative_pivot_log2;
  for (auto& v : ns.vector) out.vector.push_back(to_complex(v));
  return out;
}

template <class Fill>
RawNullspace solve_dispatch(bool real, int rows, int cols, mp::Prec prec, Fill&& fill) {
  return real ? solve_system<mp::Real>(rows, cols, prec, fill) : solve_system<mp::Complex>(rows, cols, prec, fill);
}

void normalize(std::vector<mp::Complex>& v) {
  if (v.empty()) return;
  const mp::Prec prec = v.front().precision();
  mp::Real max_abs(prec);
  for (const auto& x : v) {
    mp::Real a = mp::abs(x);
    if (a > max_abs) max_abs = a;
  }
  if (max_abs.is_zero()) throw NumericError("nullspace vector is zero");
  for (auto& x : v) x /= max_abs;
  const double cutoff = -double(prec) / 2.0;
  for (const auto& x : v) {
    if (x.log2_mag() > cutoff) {
      const mp::Complex phase = mp::conj(x) / mp::abs(x);
      if (!(phase.im.is_zero() && phase.re.sign() > 0))
        for (auto& y : v) y *= phase;
      break;
    }
  }
}

int defect(const Polynomial& p, int bound) { return p.is_zero() ? bound + 1 : bound - p.degree(); }

struct Coefficient {
  mp::Complex value;
  double log2_scale = kNegInf;
};

// Coefficient of z^e in sum_j P_j(z) g_j(z).
Coefficient combine(int e, const std::vector<const Polynomial*>& polys, const std::vector<const LaurentSeries*>& g,
                    mp::Prec prec) {
  Coefficient out{mp::Complex(prec), kNegInf};
  mp::Complex scratch(prec);
  for (std::size_t j = 0; j < polys.size(); ++j) {
    const auto& c = polys[j]->coefficients();
    const double norm = polys[j]->log2_max_coeff();
    for (int i = 0; i < static_cast<int>(c.size()); ++i) {
      const mp::Complex& gc = g[j]->coeff(e - i);
      if (gc.is_zero()) continue;
      out.log2_scale = std::max(out.log2_scale, norm + gc.log2_mag());
      if (!c[i].is_zero()) mp::add_mul(out.value, c[i], gc, scratch);
    }
  }
  return out;
}

RemainderReport observe(int top, int lowest, const std::vector<const Polynomial*>& polys,
                        const std::vector<const LaurentSeries*>& g, mp::Prec prec) {
  const double tol = -double(prec) / 2.0;
  RemainderReport rep;
  rep.leading = mp::Complex(prec);
  std::vector<mp::Complex> coeffs;
  bool found = false;
  for (int e = top; e >= lowest; --e) {
    Coefficient c = combine(e, polys, g, prec);
    const bool negligible = c.value.is_zero() || c.value.log2_mag() < c.log2_scale + tol;
    if (!found && negligible) {
      coeffs.emplace_back(prec);
      continue;
    }
    if (!found) {
      found = true;
      rep.vanishing_order = -e;
      rep.leading = c.value;
      rep.leading_error_log2 = c.log2_scale - double(prec) + std::log2(double(polys.size() * 64));
    }
    coeffs.push_back(std::move(c.value));
  }
  if (!found) {
    rep.vanishing_order = -(lowest - 1);
    rep.lower_bound = true;
  }
  rep.series = coeffs.empty() ? LaurentSeries::zero(lowest - 1, prec) : LaurentSeries(top, std::move(coeffs));
  return rep;
}

Polynomial as_polynomial(std::vector<mp::Complex> c) { return Polynomial(std::move(c)); }

}  // namespace

HPSolution solve_type1(const LaurentSeries& f, const LaurentSeries& f2, int n, const PrecisionContext& ctx) {
  ctx.validate();
  check_inputs(f, f2, n, -(3 * n + 1));
  const bool real = f.is_real() && f2.is_real();
  const int rows = 3 * n + 2;
  const int cols = 3 * n + 3;
  PrecisionContext work = ctx;
  for (int attempt = 0;; ++attempt) {
    const mp::Prec prec = work.precision_bits;
    const LaurentSeries one = LaurentSeries::constant(mp::Complex(1L, prec), 3 * n + 3);
    auto fill = [&](int r, int c) -> const mp::Complex& {
      const int e = n - r;
      return block_coeff(c / (n + 1), e - c % (n + 1), one, f, f2);
    };
    RawNullspace ns = solve_dispatch(real, rows, cols, prec, fill);
    normalize(ns.vector);

    HPSolution sol;
    sol.kind = HPKind::TypeI;
    sol.n = n;
    for (int j = 0; j < 3; ++j) {
      std::vector<mp::Complex> c(ns.vector.begin() + j * (n + 1), ns.vector.begin() + (j + 1) * (n + 1));
      sol.polys[j] = as_polynomial(std::move(c));
      sol.defects[j] = defect(sol.polys[j], n);
    }
    sol.rank = ns.rank;
    sol.nullspace_dim = ns.dim;
    sol.min_relative_pivot_log2 = ns.min_pivot;
    sol.precision_bits = prec;
    sol.retries = attempt;
    const auto rep = remainder_series(sol, f, f2);
    sol.vanishing_order = rep[0].vanishing_order;
    sol.remainder_orders = {rep[0].vanishing_order, rep[0].vanishing_order};
    sol.order_is_lower_bound = rep[0].lower_bound;
    if (sol.vanishing_order >= sol.required_order()) return sol;
    if (attempt >= ctx.max_retries)
      throw NumericError("type I residual certificate failed at n=" + std::to_string(n) + " after " +
                         std::to_string(attempt) + " precision escalations (observed order " +
                         std::to_string(sol.vanishing_order) + ")");
    work = work.escalated();
  }
}

HPSolution solve_type2(const LaurentSeries& f, const LaurentSeries& f2, int n, const PrecisionContext& ctx) {
  ctx.validate();
  check_inputs(f, f2, n, -3 * n);
  const bool real = f.is_real() && f2.is_real();
  const int rows = 2 * n;
  const int cols = 2 * n + 1;
  PrecisionContext work = ctx;
  for (int attempt = 0;; ++attempt) {
    const mp::Prec prec = work.precision_bits;
    auto fill = [&](int r, int c) -> const mp::Complex& {
      const LaurentSeries& g = r < n ? f : f2;
      const int e = -1 - (r < n ? r : r - n);
      return g.coeff(e - c);
    };
    RawNullspace ns = solve_dispatch(real, rows, cols, prec, fill);
    normalize(ns.vector);

    HPSolution sol;
    sol.kind = HPKind::TypeII;
    sol.n = n;
    sol.polys[0] = as_polynomial(ns.vector);
    const LaurentSeries* g[2] = {&f, &f2};
    for (int k = 0; k < 2; ++k) {
      std::vector<mp::Complex> c;
      for (int e = 0; e <= 2 * n; ++e) c.push_back(combine(e, {&sol.polys[0]}, {g[k]}, prec).value);
      sol.polys[k + 1] = as_polynomial(std::move(c));
    }
    for (int j = 0; j < 3; ++j) sol.defects[j] = defect(sol.polys[j], 2 * n);
    sol.rank = ns.rank;
    sol.nullspace_dim = ns.dim;
    sol.min_relative_pivot_log2 = ns.min_pivot;
    sol.precision_bits = prec;
    sol.retries = attempt;
    const auto rep = remainder_series(sol, f, f2);
    sol.remainder_orders = {rep[0].vanishing_order, rep[1].vanishing_order};
    sol.vanishing_order = std::min(rep[0].vanishing_order, rep[1].vanishing_order);
    sol.order_is_lower_bound = rep[0].lower_bound && rep[1].lower_bound;
    if (sol.vanishing_order >= sol.required_order()) return sol;
    if (attempt >= ctx.max_retries)
      throw NumericError("type II residual certificate failed at n=" + std::to_string(n) + " after " +
                         std::to_string(attempt) + " precision escalations");
    work = work.escalated();
  }
}

std::vector<RemainderReport> remainder_series(const HPSolution& sol, const LaurentSeries& f,
                                              const LaurentSeries& f2) {
  if (sol.kind == HPKind::TypeI) {
    if (sol.polys[0].is_zero() && sol.polys[1].is_zero() && sol.polys[2].is_zero())
      throw ValidationError("remainder of an all-zero polynomial tuple");
  } else if (sol.polys[0].is_zero()) {
    throw ValidationError("remainder of a zero type II denominator");
  }
  const mp::Prec prec = sol.polys[0].precision();
  if (sol.kind == HPKind::TypeI) {
    const int cap = sol.n;
    const LaurentSeries one = LaurentSeries::constant(mp::Complex(1L, prec), f.length() + cap + 8);
    const int top = cap + std::max(0, std::max(f.top_exponent(), f2.top_exponent()));
    const int lowest = cap + std::max(f.error_exponent(), f2.error_exponent()) + 1;
    return {observe(top, lowest, {&sol.polys[0], &sol.polys[1], &sol.polys[2]}, {&one, &f, &f2}, prec)};
  }
  const int cap = 2 * sol.n;
  std::vector<RemainderReport> out;
  for (const LaurentSeries* g : {&f, &f2}) {
    const int lowest = cap + g->error_exponent() + 1;
    out.push_back(observe(-1, lowest, {&sol.polys[0]}, {g}, prec));
  }
  return out;
}

}  // namespace hplab
