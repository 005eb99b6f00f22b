#pragma once

// Thin RAII layer over MPFR. Every value carries its own precision; binary
// operations round to the larger precision of the operands. There is no
// global default precision.

#include <mpfr.h>

#include <complex>
#include <string>
#include <string_view>
#include <utility>

namespace hplab::mp {

using Prec = mpfr_prec_t;

class Real {
 public:
  explicit Real(Prec prec = 64) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  Real(double x, Prec prec) {
    mpfr_init2(v_, prec);
    mpfr_set_d(v_, x, MPFR_RNDN);
  }
  Real(long x, Prec prec) {
    mpfr_init2(v_, prec);
    mpfr_set_si(v_, x, MPFR_RNDN);
  }
  Real(int x, Prec prec) : Real(static_cast<long>(x), prec) {}
  /// Correctly rounded conversion of a decimal string.
  static Real from_string(std::string_view text, Prec prec);

  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    *v_ = *o.v_;
    o.v_->_mpfr_d = nullptr;
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      if (v_->_mpfr_d == nullptr)
        mpfr_init2(v_, mpfr_get_prec(o.v_));
      else if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_))
        mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    std::swap(*v_, *o.v_);
    return *this;
  }
  ~Real() {
    if (v_->_mpfr_d != nullptr) mpfr_clear(v_);
  }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  Prec precision() const { return mpfr_get_prec(v_); }
  /// Rounds the stored value to a new precision.
  void set_precision(Prec prec) { mpfr_prec_round(v_, prec, MPFR_RNDN); }
  Real with_precision(Prec prec) const {
    Real r(prec);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  /// Scientific notation with `digits` significant digits.
  std::string to_string(int digits = 20) const;

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  /// log2|x|; -infinity for zero. Safe for values outside double range.
  double log2_abs() const;

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);
  Real& operator*=(long k) {
    mpfr_mul_si(v_, v_, k, MPFR_RNDN);
    return *this;
  }
  Real& operator/=(long k) {
    mpfr_div_si(v_, v_, k, MPFR_RNDN);
    return *this;
  }
  Real operator-() const {
    Real r(*this);
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
  }

 private:
  mpfr_t v_;
};

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
inline Real operator*(Real a, long k) { return a *= k; }
inline Real operator/(Real a, long k) { return a /= k; }

inline bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
inline bool operator>(const Real& a, const Real& b) { return b < a; }
inline bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }
inline bool operator>=(const Real& a, const Real& b) { return b <= a; }
inline bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }
inline bool operator!=(const Real& a, const Real& b) { return !(a == b); }

Real abs(const Real& x);
Real sqrt(const Real& x);
Real log(const Real& x);
Real exp(const Real& x);
Real atan2(const Real& y, const Real& x);
Real hypot(const Real& x, const Real& y);
/// x * 2^e
Real ldexp(const Real& x, long e);
Real pi(Prec prec);

/// Complex number as a pair of MPFR reals of equal precision.
struct Complex {
  Real re;
  Real im;

  explicit Complex(Prec prec = 64) : re(prec), im(prec) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  explicit Complex(Real r) : re(std::move(r)), im(re.precision()) {}
  Complex(std::complex<double> z, Prec prec) : re(z.real(), prec), im(z.imag(), prec) {}
  Complex(double x, Prec prec) : re(x, prec), im(prec) {}
  Complex(long x, Prec prec) : re(x, prec), im(prec) {}
  Complex(int x, Prec prec) : re(static_cast<long>(x), prec), im(prec) {}

  Prec precision() const { return re.precision(); }
  void set_precision(Prec prec) {
    re.set_precision(prec);
    im.set_precision(prec);
  }
  Complex with_precision(Prec prec) const { return {re.with_precision(prec), im.with_precision(prec)}; }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_real() const { return im.is_zero(); }
  std::complex<double> to_std() const { return {re.to_double(), im.to_double()}; }
  /// log2 of max(|re|, |im|): a cheap magnitude estimate within half a bit of log2|z|.
  double log2_mag() const;

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);
  Complex& operator*=(const Real& o) {
    re *= o;
    im *= o;
    return *this;
  }
  Complex& operator/=(const Real& o) {
    re /= o;
    im /= o;
    return *this;
  }
  Complex& operator*=(long k) {
    re *= k;
    im *= k;
    return *this;
  }
  Complex& operator/=(long k) {
    re /= k;
    im /= k;
    return *this;
  }
  Complex operator-() const { return {-re, -im}; }
};

inline Complex operator+(Complex a, const Complex& b) { return a += b; }
inline Complex operator-(Complex a, const Complex& b) { return a -= b; }
inline Complex operator*(Complex a, const Complex& b) { return a *= b; }
inline Complex operator/(Complex a, const Complex& b) { return a /= b; }
inline Complex operator*(Complex a, const Real& b) { return a *= b; }
inline Complex operator/(Complex a, const Real& b) { return a /= b; }
inline Complex operator*(Complex a, long k) { return a *= k; }
inline Complex operator/(Complex a, long k) { return a /= k; }

Complex conj(const Complex& z);
Real abs(const Complex& z);
Real norm(const Complex& z);
Real arg(const Complex& z);
/// Principal square root (branch cut on the negative real axis, continuous
/// from above like std::sqrt).
Complex sqrt(const Complex& z);
Complex log(const Complex& z);
Complex exp(const Complex& z);
Complex pow(const Complex& z, long k);

/// acc -= a * b, reusing caller-provided scratch to avoid allocation.
void sub_mul(Real& acc, const Real& a, const Real& b, Real& scratch);
void sub_mul(Complex& acc, const Complex& a, const Complex& b, Complex& scratch);
/// acc += a * b
void add_mul(Complex& acc, const Complex& a, const Complex& b, Complex& scratch);

inline double log2_magnitude(const Real& x) { return x.log2_abs(); }
inline double log2_magnitude(const Complex& z) { return z.log2_mag(); }

}  // namespace hplab::mp
