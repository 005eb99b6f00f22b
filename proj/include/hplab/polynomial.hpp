#pragma once

#include <complex>
#include <vector>

#include "hplab/mp.hpp"

namespace hplab {

/// Multiprecision polynomial, coefficients in ascending degree.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<mp::Complex> coefficients);

  const std::vector<mp::Complex>& coefficients() const { return c_; }
  /// Index of the last coefficient above 2^(-prec/2) * max|coeff|; -1 for zero.
  int degree() const { return degree_; }
  bool is_zero() const { return degree_ < 0; }
  mp::Prec precision() const { return c_.empty() ? 64 : c_.front().precision(); }
  /// Highest stored index (the nominal degree bound).
  int capacity() const { return static_cast<int>(c_.size()) - 1; }

  mp::Complex operator()(const mp::Complex& z) const;
  /// p(z) and p'(z) in one Horner pass.
  void eval_with_derivative(const mp::Complex& z, mp::Complex& p, mp::Complex& dp) const;
  /// Coefficients 0..degree().
  Polynomial trimmed() const;
  std::vector<std::complex<double>> to_std() const;
  /// log2 max|coeff|
  double log2_max_coeff() const;

 private:
  std::vector<mp::Complex> c_;
  int degree_ = -1;
};

}  // namespace hplab
