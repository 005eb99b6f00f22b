#include "hplab/polynomial.hpp"

#include <cmath>
#include <limits>

namespace hplab {

Polynomial::Polynomial(std::vector<mp::Complex> coefficients) : c_(std::move(coefficients)) {
  const double top = log2_max_coeff();
  if (!std::isfinite(top)) return;
  const double cutoff = top - double(precision()) / 2.0;
  for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i) {
    if (c_[i].log2_mag() > cutoff) {
      degree_ = i;
      break;
    }
  }
}

double Polynomial::log2_max_coeff() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& c : c_) m = std::max(m, c.log2_mag());
  return m;
}

mp::Complex Polynomial::operator()(const mp::Complex& z) const {
  const mp::Prec prec = std::max(precision(), z.precision());
  mp::Complex acc(prec);
  for (int i = capacity(); i >= 0; --i) {
    acc *= z;
    acc += c_[i];
  }
  return acc;
}

void Polynomial::eval_with_derivative(const mp::Complex& z, mp::Complex& p, mp::Complex& dp) const {
  const mp::Prec prec = std::max(precision(), z.precision());
  p = mp::Complex(prec);
  dp = mp::Complex(prec);
  mp::Complex scratch(prec);
  for (int i = capacity(); i >= 0; --i) {
    dp *= z;
    dp += p;
    p *= z;
    p += c_[i];
  }
}

Polynomial Polynomial::trimmed() const {
  if (degree_ < 0) return Polynomial();
  return Polynomial(std::vector<mp::Complex>(c_.begin(), c_.begin() + degree_ + 1));
}

std::vector<std::complex<double>> Polynomial::to_std() const {
  std::vector<std::complex<double>> out;
  out.reserve(c_.size());
  for (const auto& c : c_) out.push_back(c.to_std());
  return out;
}

}  // namespace hplab
