#include "hplab/mp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "hplab/error.hpp"

namespace hplab::mp {

namespace {

Prec max_prec(const Real& a, const Real& b) { return std::max(a.precision(), b.precision()); }

}  // namespace

Real Real::from_string(std::string_view text, Prec prec) {
  Real r(prec);
  std::string buf(text);
  if (mpfr_set_str(r.v_, buf.c_str(), 10, MPFR_RNDN) != 0)
    throw ValidationError("not a decimal number: '" + buf + "'");
  return r;
}

std::string Real::to_string(int digits) const {
  std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits - 1, v_);
  return buf.data();
}

double Real::log2_abs() const {
  if (mpfr_zero_p(v_)) return -std::numeric_limits<double>::infinity();
  if (!mpfr_number_p(v_)) return std::numeric_limits<double>::infinity();
  long e = 0;
  double m = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
  return std::log2(std::fabs(m)) + double(e);
}

Real& Real::operator+=(const Real& o) {
  if (o.precision() > precision()) set_precision(o.precision());
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator-=(const Real& o) {
  if (o.precision() > precision()) set_precision(o.precision());
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(const Real& o) {
  if (o.precision() > precision()) set_precision(o.precision());
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(const Real& o) {
  if (o.precision() > precision()) set_precision(o.precision());
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real operator+(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
Real operator-(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
Real operator*(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
Real operator/(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real abs(const Real& x) {
  Real r(x.precision());
  mpfr_abs(r.get(), x.get(), MPFR_RNDN);
  return r;
}
Real sqrt(const Real& x) {
  Real r(x.precision());
  mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
  return r;
}
Real log(const Real& x) {
  Real r(x.precision());
  mpfr_log(r.get(), x.get(), MPFR_RNDN);
  return r;
}
Real exp(const Real& x) {
  Real r(x.precision());
  mpfr_exp(r.get(), x.get(), MPFR_RNDN);
  return r;
}
Real atan2(const Real& y, const Real& x) {
  Real r(max_prec(x, y));
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}
Real hypot(const Real& x, const Real& y) {
  Real r(max_prec(x, y));
  mpfr_hypot(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}
Real ldexp(const Real& x, long e) {
  Real r(x.precision());
  mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
  return r;
}
Real pi(Prec prec) {
  Real r(prec);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

double Complex::log2_mag() const { return std::max(re.log2_abs(), im.log2_abs()); }

Complex& Complex::operator*=(const Complex& o) {
  const Prec p = std::max(precision(), o.precision());
  Real r(p), i(p);
  mpfr_fmms(r.get(), re.get(), o.re.get(), im.get(), o.im.get(), MPFR_RNDN);
  mpfr_fmma(i.get(), re.get(), o.im.get(), im.get(), o.re.get(), MPFR_RNDN);
  re = std::move(r);
  im = std::move(i);
  return *this;
}

Complex& Complex::operator/=(const Complex& o) {
  if (o.im.is_zero()) {
    re /= o.re;
    im /= o.re;
    return *this;
  }
  const Prec p = std::max(precision(), o.precision());
  Real den(p), r(p), i(p);
  mpfr_fmma(den.get(), o.re.get(), o.re.get(), o.im.get(), o.im.get(), MPFR_RNDN);
  mpfr_fmma(r.get(), re.get(), o.re.get(), im.get(), o.im.get(), MPFR_RNDN);
  mpfr_fmms(i.get(), im.get(), o.re.get(), re.get(), o.im.get(), MPFR_RNDN);
  mpfr_div(r.get(), r.get(), den.get(), MPFR_RNDN);
  mpfr_div(i.get(), i.get(), den.get(), MPFR_RNDN);
  re = std::move(r);
  im = std::move(i);
  return *this;
}

Complex conj(const Complex& z) { return {z.re, -z.im}; }
Real abs(const Complex& z) { return hypot(z.re, z.im); }
Real norm(const Complex& z) {
  Real r(z.precision());
  mpfr_fmma(r.get(), z.re.get(), z.re.get(), z.im.get(), z.im.get(), MPFR_RNDN);
  return r;
}
Real arg(const Complex& z) { return atan2(z.im, z.re); }

Complex sqrt(const Complex& z) {
  const Prec p = z.precision();
  if (z.is_zero()) return Complex(p);
  Real r = abs(z);
  if (z.re.sign() >= 0) {
    Real s = sqrt(ldexp(r + z.re, -1));
    Real t = z.im / ldexp(s, 1);
    return {std::move(s), std::move(t)};
  }
  Real t = sqrt(ldexp(r - z.re, -1));
  Real s = abs(z.im) / ldexp(t, 1);
  if (mpfr_signbit(z.im.get())) t = -t;
  return {std::move(s), std::move(t)};
}

Complex log(const Complex& z) { return {log(abs(z)), arg(z)}; }

Complex exp(const Complex& z) {
  const Prec p = z.precision();
  Real m = exp(z.re);
  Real c(p), s(p);
  mpfr_sin_cos(s.get(), c.get(), z.im.get(), MPFR_RNDN);
  return {m * c, m * s};
}

Complex pow(const Complex& z, long k) {
  if (k < 0) return Complex(1L, z.precision()) / pow(z, -k);
  Complex result(1L, z.precision());
  Complex base = z;
  while (k > 0) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k > 0) base *= base;
  }
  return result;
}

void sub_mul(Real& acc, const Real& a, const Real& b, Real& scratch) {
  mpfr_mul(scratch.get(), a.get(), b.get(), MPFR_RNDN);
  mpfr_sub(acc.get(), acc.get(), scratch.get(), MPFR_RNDN);
}

void sub_mul(Complex& acc, const Complex& a, const Complex& b, Complex& scratch) {
  if (a.im.is_zero() && b.im.is_zero()) {
    mpfr_mul(scratch.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_sub(acc.re.get(), acc.re.get(), scratch.re.get(), MPFR_RNDN);
    return;
  }
  mpfr_fmms(scratch.re.get(), a.re.get(), b.re.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_fmma(scratch.im.get(), a.re.get(), b.im.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  mpfr_sub(acc.re.get(), acc.re.get(), scratch.re.get(), MPFR_RNDN);
  mpfr_sub(acc.im.get(), acc.im.get(), scratch.im.get(), MPFR_RNDN);
}

void add_mul(Complex& acc, const Complex& a, const Complex& b, Complex& scratch) {
  mpfr_fmms(scratch.re.get(), a.re.get(), b.re.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_fmma(scratch.im.get(), a.re.get(), b.im.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  mpfr_add(acc.re.get(), acc.re.get(), scratch.re.get(), MPFR_RNDN);
  mpfr_add(acc.im.get(), acc.im.get(), scratch.im.get(), MPFR_RNDN);
}

}  // namespace hplab::mp
