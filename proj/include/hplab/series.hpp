#pragma once

#include <vector>

#include "hplab/expression.hpp"
#include "hplab/function_spec.hpp"
#include "hplab/mp.hpp"
#include "hplab/precision.hpp"

namespace hplab {

/// Truncated expansion at infinity:
///   S(z) = sum_{i < length} c_i z^(top - i) + O(z^(top - length)).
///
/// Truncation is tracked relative to the leading term, so products and
/// quotients keep min(length) coefficients and sums keep whatever the
/// coarser operand allows. A series identically zero to truncation has no
/// stored coefficients; its top exponent is then the error exponent.
class LaurentSeries {
 public:
  LaurentSeries() = default;
  /// Leading coefficients that are exactly zero are stripped.
  LaurentSeries(int top_exponent, std::vector<mp::Complex> coefficients);

  static LaurentSeries constant(const mp::Complex& c, int length);
  /// z^exponent known to `length` terms.
  static LaurentSeries monomial(int exponent, int length, mp::Prec prec);
  /// The series O(z^error_exponent).
  static LaurentSeries zero(int error_exponent, mp::Prec prec);

  int top_exponent() const { return top_; }
  int length() const { return static_cast<int>(c_.size()); }
  /// The remainder is O(z^error_exponent()).
  int error_exponent() const { return top_ - length(); }
  int lowest_known_exponent() const { return error_exponent() + 1; }
  bool is_zero() const { return c_.empty(); }
  mp::Prec precision() const;
  bool is_real() const;

  const std::vector<mp::Complex>& coefficients() const { return c_; }
  /// Coefficient of z^exponent; zero above the top, throws below the known range.
  const mp::Complex& coeff(int exponent) const;

  /// Keep only the first `length` coefficients.
  LaurentSeries truncated(int length) const;
  LaurentSeries with_precision(mp::Prec prec) const;
  LaurentSeries scaled(const mp::Complex& s) const;
  /// Sum of the terms at z (only sensible for |z| well outside the singularities).
  mp::Complex evaluate(const mp::Complex& z) const;

  friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b);
  friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b);
  friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);
  /// Throws DomainError when b is identically zero to truncation.
  friend LaurentSeries operator/(const LaurentSeries& a, const LaurentSeries& b);
  LaurentSeries operator-() const;

 private:
  void normalize();

  int top_ = 0;
  std::vector<mp::Complex> c_;
  mp::Complex zero_;
};

/// Square root by coefficient recursion, leading coefficient taken with the
/// principal branch. Requires a nonzero leading coefficient and even top exponent.
LaurentSeries sqrt(const LaurentSeries& s);

/// 1/φ(z) = z - (z^2 - 1)^{1/2}: `length` coefficients from z^-1 down to z^-length.
LaurentSeries series_phi_inverse(int length, const PrecisionContext& ctx);
/// φ(z) = 2z - 1/φ(z), top exponent 1.
LaurentSeries series_phi(int length, const PrecisionContext& ctx);
/// 𝔣 at infinity: `length` coefficients from z^0 down, constant term the
/// principal value of prod sqrt(A_j/B_j).
LaurentSeries series_ff(const FunctionSpec& spec, int length, const PrecisionContext& ctx);
/// r(z, w(z)) truncated to `length` coefficients from its top exponent.
LaurentSeries series_eval_expression(const ExpressionAST& ast, const LaurentSeries& w_series, int length,
                                     const PrecisionContext& ctx);

/// Coefficient budget for an index-n run: 3n + 8.
inline int series_length_for_index(int n) { return 3 * n + 8; }

/// f and f^2 at infinity for an index-n run.
struct SeriesPair {
  LaurentSeries f;
  LaurentSeries f2;
};
SeriesPair build_series(const FunctionSpec& spec, int length, const PrecisionContext& ctx);

}  // namespace hplab
