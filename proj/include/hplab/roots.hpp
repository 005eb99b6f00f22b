#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "hplab/polynomial.hpp"
#include "hplab/precision.hpp"

namespace hplab {

/// All roots of a polynomial with per-root residual certificates.
struct RootSet {
  /// Sorted by (re, im).
  std::vector<mp::Complex> roots;
  /// log2 of |p(r)| / (max|coeff| * max(1,|r|)^deg); -inf for an exact zero.
  std::vector<double> residual_log2;
  /// Every residual below 2^(-precision_bits/4).
  bool certified = false;
  /// Every root met the update tolerance or the rounding level before the sweep budget ran out.
  bool converged = false;
  long precision_bits = 0;
  int sweeps = 0;

  int degree() const { return static_cast<int>(roots.size()); }
  double max_residual_log2() const;
  std::vector<std::complex<double>> to_std() const;
};

struct Atom {
  std::complex<double> z;
  double weight = 0.0;
};

/// Weighted point masses.
struct DiscreteMeasure {
  std::vector<Atom> atoms;

  double total_mass() const;
  bool empty() const { return atoms.empty(); }
  /// Scaled to unit mass; throws ValidationError when the mass is zero.
  DiscreteMeasure normalized() const;
  DiscreteMeasure restricted(const std::function<bool(std::complex<double>)>& keep) const;
};

/// Ehrlich-Aberth iteration. Precision rises in a ladder up to
/// ctx.precision_bits; the final stage stops once every update is below
/// 2^(-bits/3) relative to max(1, |root|).
RootSet find_roots(const Polynomial& p, const PrecisionContext& ctx);

/// Atoms at the roots with weight 1/normalizer each.
DiscreteMeasure counting_measure(const RootSet& rs, int normalizer);

/// log2 of max_k |c_k - (lead * prod (z - r_i))_k| / max_k |c_k|.
double reconstruction_error_log2(const Polynomial& p, const RootSet& rs);

/// log2 of deg * |p(r)/p'(r)| per root: the disk of that radius about r holds a root of p.
std::vector<double> inclusion_radii_log2(const Polynomial& p, const RootSet& rs);

}  // namespace hplab
