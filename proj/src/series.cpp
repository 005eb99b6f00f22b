#include "hplab/series.hpp"

#include <algorithm>
#include <limits>

#include "hplab/error.hpp"

namespace hplab {

namespace {

// A leading coefficient of a sum is treated as cancelled when it is this many
// bits below the operands it came from.
constexpr long kCancellationSlack = 8;

bool cancelled(const mp::Complex& sum, const mp::Complex& a, const mp::Complex& b) {
  if (sum.is_zero()) return true;
  const double scale = std::max(a.log2_mag(), b.log2_mag());
  return sum.log2_mag() < scale - double(sum.precision() - kCancellationSlack);
}

LaurentSeries add_impl(const LaurentSeries& a, const LaurentSeries& b, bool subtract) {
  const mp::Prec prec = std::max(a.precision(), b.precision());
  const int top = std::max(a.top_exponent(), b.top_exponent());
  const int err = std::max(a.error_exponent(), b.error_exponent());
  const int len = std::max(0, top - err);
  std::vector<mp::Complex> c;
  c.reserve(len);
  bool leading = true;
  for (int i = 0; i < len; ++i) {
    const int e = top - i;
    const mp::Complex& ca = a.coeff(e);
    const mp::Complex& cb = b.coeff(e);
    mp::Complex s = subtract ? ca - cb : ca + cb;
    if (leading && cancelled(s, ca, cb)) s = mp::Complex(prec);
    if (!s.is_zero()) leading = false;
    c.push_back(std::move(s));
  }
  if (c.empty()) return LaurentSeries::zero(err, prec);
  return LaurentSeries(top, std::move(c));
}

struct SeriesPolicy {
  mp::Prec prec;
  int length;
  LaurentSeries lit(const ComplexLiteral& c) const { return LaurentSeries::constant(c.value(prec), length); }
  LaurentSeries add(const LaurentSeries& a, const LaurentSeries& b) const { return a + b; }
  LaurentSeries sub(const LaurentSeries& a, const LaurentSeries& b) const { return a - b; }
  LaurentSeries mul(const LaurentSeries& a, const LaurentSeries& b) const { return a * b; }
  LaurentSeries div(const LaurentSeries& a, const LaurentSeries& b) const { return a / b; }
};

}  // namespace

LaurentSeries::LaurentSeries(int top_exponent, std::vector<mp::Complex> coefficients)
    : top_(top_exponent), c_(std::move(coefficients)) {
  normalize();
}

void LaurentSeries::normalize() {
  if (!c_.empty()) zero_ = mp::Complex(c_.front().precision());
  std::size_t k = 0;
  while (k < c_.size() && c_[k].is_zero()) ++k;
  if (k > 0) {
    c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(k));
    top_ -= static_cast<int>(k);
  }
}

LaurentSeries LaurentSeries::constant(const mp::Complex& c, int length) {
  std::vector<mp::Complex> v(static_cast<std::size_t>(length), mp::Complex(c.precision()));
  if (length > 0) v[0] = c;
  return LaurentSeries(0, std::move(v));
}

LaurentSeries LaurentSeries::monomial(int exponent, int length, mp::Prec prec) {
  if (length <= 0) return zero(exponent, prec);
  std::vector<mp::Complex> v(static_cast<std::size_t>(length), mp::Complex(prec));
  v[0] = mp::Complex(1L, prec);
  return LaurentSeries(exponent, std::move(v));
}

LaurentSeries LaurentSeries::zero(int error_exponent, mp::Prec prec) {
  LaurentSeries r(error_exponent, {});
  r.zero_ = mp::Complex(prec);
  return r;
}

mp::Prec LaurentSeries::precision() const { return c_.empty() ? zero_.precision() : c_.front().precision(); }

bool LaurentSeries::is_real() const {
  return std::all_of(c_.begin(), c_.end(), [](const mp::Complex& z) { return z.is_real(); });
}

const mp::Complex& LaurentSeries::coeff(int exponent) const {
  if (exponent > top_) return zero_;
  if (exponent <= error_exponent())
    throw NumericError("series coefficient of z^" + std::to_string(exponent) +
                       " is beyond the truncation order");
  return c_[static_cast<std::size_t>(top_ - exponent)];
}

LaurentSeries LaurentSeries::truncated(int length) const {
  if (length >= this->length()) return *this;
  std::vector<mp::Complex> v(c_.begin(), c_.begin() + std::max(0, length));
  if (v.empty()) return zero(top_ - std::max(0, length), precision());
  return LaurentSeries(top_, std::move(v));
}

LaurentSeries LaurentSeries::with_precision(mp::Prec prec) const {
  std::vector<mp::Complex> v;
  v.reserve(c_.size());
  for (const auto& c : c_) v.push_back(c.with_precision(prec));
  if (v.empty()) return zero(top_, prec);
  return LaurentSeries(top_, std::move(v));
}

LaurentSeries LaurentSeries::scaled(const mp::Complex& s) const {
  std::vector<mp::Complex> v;
  v.reserve(c_.size());
  for (const auto& c : c_) v.push_back(c * s);
  return LaurentSeries(top_, std::move(v));
}

mp::Complex LaurentSeries::evaluate(const mp::Complex& z) const {
  // Horner in 1/z, then multiply by z^top.
  const mp::Prec prec = std::max(precision(), z.precision());
  mp::Complex u = mp::Complex(1L, prec) / z;
  mp::Complex acc(prec);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc *= u;
    acc += *it;
  }
  return acc * mp::pow(z, top_);
}

LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) { return add_impl(a, b, false); }
LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return add_impl(a, b, true); }

LaurentSeries LaurentSeries::operator-() const {
  std::vector<mp::Complex> v;
  v.reserve(c_.size());
  for (const auto& c : c_) v.push_back(-c);
  LaurentSeries r(top_, std::move(v));
  if (r.is_zero()) return zero(top_ - length(), precision());
  return r;
}

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
  const int top = a.top_exponent() + b.top_exponent();
  const int len = std::min(a.length(), b.length());
  const mp::Prec prec = std::max(a.precision(), b.precision());
  if (len == 0) {
    // Zero times anything: keep the coarser error exponent.
    const int err = std::max(a.error_exponent() + b.top_exponent(), b.error_exponent() + a.top_exponent());
    return LaurentSeries::zero(err, prec);
  }
  std::vector<mp::Complex> c(static_cast<std::size_t>(len), mp::Complex(prec));
  mp::Complex scratch(prec);
  const auto& ca = a.coefficients();
  const auto& cb = b.coefficients();
  for (int k = 0; k < len; ++k)
    for (int i = 0; i <= k; ++i) mp::add_mul(c[k], ca[i], cb[k - i], scratch);
  return LaurentSeries(top, std::move(c));
}

LaurentSeries operator/(const LaurentSeries& a, const LaurentSeries& b) {
  if (b.is_zero()) throw DomainError("division by a series identically zero to truncation order");
  const int top = a.top_exponent() - b.top_exponent();
  const int len = std::min(a.length(), b.length());
  const mp::Prec prec = std::max(a.precision(), b.precision());
  if (len == 0) return LaurentSeries::zero(a.error_exponent() - b.top_exponent(), prec);
  const auto& ca = a.coefficients();
  const auto& cb = b.coefficients();
  std::vector<mp::Complex> q;
  q.reserve(len);
  mp::Complex scratch(prec);
  for (int k = 0; k < len; ++k) {
    mp::Complex acc = ca[k].with_precision(prec);
    for (int i = 1; i <= k; ++i) mp::sub_mul(acc, cb[i], q[k - i], scratch);
    acc /= cb[0];
    q.push_back(std::move(acc));
  }
  return LaurentSeries(top, std::move(q));
}

LaurentSeries sqrt(const LaurentSeries& s) {
  if (s.is_zero()) throw NumericError("square root of a series with vanishing leading coefficient");
  if (s.top_exponent() % 2 != 0) throw NumericError("square root of a series with odd top exponent");
  const int len = s.length();
  const mp::Prec prec = s.precision();
  const auto& c = s.coefficients();
  std::vector<mp::Complex> r;
  r.reserve(len);
  r.push_back(mp::sqrt(c[0]));
  const mp::Complex two_r0 = r[0] * 2L;
  mp::Complex scratch(prec);
  for (int k = 1; k < len; ++k) {
    mp::Complex acc = c[k];
    for (int i = 1; i < k; ++i) mp::sub_mul(acc, r[i], r[k - i], scratch);
    acc /= two_r0;
    r.push_back(std::move(acc));
  }
  return LaurentSeries(s.top_exponent() / 2, std::move(r));
}

LaurentSeries series_phi_inverse(int length, const PrecisionContext& ctx) {
  if (length < 1) throw ValidationError("series order must be >= 1");
  const mp::Prec prec = ctx.precision_bits;
  // 1/φ = sum_k C_k / 2^(2k+1) z^-(2k+1), C_k the Catalan numbers:
  // a_{k+1} = a_k (2k+1) / (2(k+2)).
  std::vector<mp::Complex> c(static_cast<std::size_t>(length), mp::Complex(prec));
  mp::Real a(0.5, prec);
  for (int k = 0; 2 * k < length; ++k) {
    c[2 * k].re = a;
    a *= long(2 * k + 1);
    a /= long(2 * (k + 2));
  }
  return LaurentSeries(-1, std::move(c));
}

LaurentSeries series_phi(int length, const PrecisionContext& ctx) {
  const mp::Prec prec = ctx.precision_bits;
  LaurentSeries two_z(1, [&] {
    std::vector<mp::Complex> v(static_cast<std::size_t>(length), mp::Complex(prec));
    v[0] = mp::Complex(2L, prec);
    return v;
  }());
  return (two_z - series_phi_inverse(std::max(1, length - 1), ctx)).truncated(length);
}

LaurentSeries series_ff(const FunctionSpec& spec, int length, const PrecisionContext& ctx) {
  if (length < 1) throw ValidationError("series order must be >= 1");
  ctx.validate();
  const mp::Prec prec = ctx.precision_bits;
  if (spec.pairs.empty()) return LaurentSeries::constant(mp::Complex(1L, prec), length);
  const LaurentSeries t = series_phi_inverse(length + 1, ctx);
  LaurentSeries product;
  bool first = true;
  for (const auto& pair : spec.pairs) {
    LaurentSeries num = LaurentSeries::constant(pair.A.value(prec), length + 2) - t;
    LaurentSeries den = LaurentSeries::constant(pair.B.value(prec), length + 2) - t;
    LaurentSeries factor = sqrt(num / den);
    product = first ? factor : product * factor;
    first = false;
  }
  if (product.length() < length || product.top_exponent() != 0)
    throw NumericError("internal consistency failure while expanding the product root");
  return product.truncated(length);
}

LaurentSeries series_eval_expression(const ExpressionAST& ast, const LaurentSeries& w_series, int length,
                                     const PrecisionContext& ctx) {
  if (ast.empty()) throw ValidationError("empty expression");
  const mp::Prec prec = ctx.precision_bits;
  const int work = w_series.length();
  if (work < length) throw ValidationError("w series is shorter than the requested order");
  SeriesPolicy policy{prec, work};
  const LaurentSeries z = LaurentSeries::monomial(1, work, prec);
  LaurentSeries r = evaluate(ast.root(), z, w_series, policy);
  if (r.is_zero()) return r;
  if (r.length() < length)
    throw NumericError("cancellation consumed the truncation budget (" + std::to_string(r.length()) + " of " +
                       std::to_string(length) + " coefficients left); supply a longer w series");
  return r.truncated(length);
}

SeriesPair build_series(const FunctionSpec& spec, int length, const PrecisionContext& ctx) {
  // Margin so cancellation in r(z, w) cannot starve the requested order.
  constexpr int kMargin = 8;
  const LaurentSeries w = series_ff(spec, length + kMargin, ctx);
  LaurentSeries f = series_eval_expression(spec.expression, w, length, ctx);
  if (f.is_zero()) throw ValidationError("expression is identically zero");
  LaurentSeries f2 = (f * f).truncated(length);
  return {std::move(f), std::move(f2)};
}

}  // namespace hplab
