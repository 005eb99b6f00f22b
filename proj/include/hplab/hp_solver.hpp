#pragma once

#include <array>
#include <vector>

#include "hplab/polynomial.hpp"
#include "hplab/precision.hpp"
#include "hplab/series.hpp"

namespace hplab {

enum class HPKind { TypeI, TypeII };

/// Type I: (Q_{n,0}, Q_{n,1}, Q_{n,2}) with Q0 + Q1 f + Q2 f^2 = O(z^-(2n+2)).
/// Type II: (P_{2n}, P_{2n,1}, P_{2n,2}) with P f^k - P_{2n,k} = O(z^-(n+1)).
///
/// The polynomials are defined only up to a factor. The nullspace vector
/// (all coefficients for type I, those of P_{2n} for type II) is scaled to
/// unit max-norm and rotated so that its first non-negligible entry is real
/// and positive.
struct HPSolution {
  HPKind kind = HPKind::TypeI;
  int n = 0;
  std::array<Polynomial, 3> polys;
  /// n - deg (type I) or 2n - deg (type II); capacity + 1 for a zero polynomial.
  std::array<int, 3> defects{};
  /// Type I: observed order of R_n at infinity. Type II: the smaller of the two.
  int vanishing_order = 0;
  /// Type II: orders of R_{n,1}, R_{n,2}. Type I: both equal vanishing_order.
  std::array<int, 2> remainder_orders{};
  /// Every known remainder coefficient was negligible; the order is a lower bound.
  bool order_is_lower_bound = false;
  int rank = 0;
  int nullspace_dim = 0;
  /// log2 of the smallest pivot relative to the largest entry (conditioning indicator).
  double min_relative_pivot_log2 = 0.0;
  long precision_bits = 0;
  int retries = 0;

  int required_order() const { return kind == HPKind::TypeI ? 2 * n + 2 : n + 1; }
};

/// Observed remainder of an HP solution.
struct RemainderReport {
  LaurentSeries series;
  /// The remainder is exactly O(z^-vanishing_order) with a non-negligible coefficient there.
  int vanishing_order = 0;
  bool lower_bound = false;
  mp::Complex leading;
  /// log2 of the rounding error bar on `leading`.
  double leading_error_log2 = 0.0;
};

HPSolution solve_type1(const LaurentSeries& f, const LaurentSeries& f2, int n, const PrecisionContext& ctx);
HPSolution solve_type2(const LaurentSeries& f, const LaurentSeries& f2, int n, const PrecisionContext& ctx);

/// One report for type I (R_n), two for type II (R_{n,1}, R_{n,2}).
/// A coefficient of z^e counts as zero when it is below 2^(-bits/2) times
/// max_j (max|coeff of P_j|) * max_i |coeff of g_j at z^(e-i)|, i.e. the row
/// norm of the linear system times the solution norm; bits is the
/// solution's precision.
std::vector<RemainderReport> remainder_series(const HPSolution& sol, const LaurentSeries& f,
                                              const LaurentSeries& f2);

}  // namespace hplab
