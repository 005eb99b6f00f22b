#pragma once

#include <algorithm>
#include <cmath>

#include "hplab/error.hpp"

namespace hplab {

/// Working precision and tolerance policy for multiprecision stages.
struct PrecisionContext {
  long precision_bits = 256;
  int retry_factor = 2;
  int max_retries = 2;

  PrecisionContext() = default;
  explicit PrecisionContext(long bits, int retry = 2, int retries = 2)
      : precision_bits(bits), retry_factor(retry), max_retries(retries) {
    validate();
  }

  void validate() const {
    if (precision_bits < 64) throw ValidationError("precision_bits must be >= 64");
    if (retry_factor < 2) throw ValidationError("retry_factor must be >= 2");
    if (max_retries < 0) throw ValidationError("max_retries must be >= 0");
  }

  /// log2 of the tolerance 2^(-bits/divisor).
  double log2_tolerance(double divisor) const { return -double(precision_bits) / divisor; }

  /// 2^(-bits/divisor) as a double; underflows to 0 for huge precisions,
  /// so comparisons at high precision should go through log2_tolerance.
  double tolerance(double divisor) const { return std::exp2(log2_tolerance(divisor)); }

  PrecisionContext escalated() const {
    PrecisionContext next = *this;
    next.precision_bits *= retry_factor;
    return next;
  }

  /// Default start precision for an index-n run.
  static long default_bits_for_index(int n) { return std::max<long>(256, 32L * n); }
};

}  // namespace hplab
