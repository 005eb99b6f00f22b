#pragma once

#include <vector>

#include "hplab/mp.hpp"

namespace hplab {

/// Dense row-major multiprecision matrix.
template <class Scalar>
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Scalar> data;

  DenseMatrix(int r, int c, mp::Prec prec) : rows(r), cols(c), data(std::size_t(r) * c, Scalar(prec)) {}
  Scalar& operator()(int i, int j) { return data[std::size_t(i) * cols + j]; }
  const Scalar& operator()(int i, int j) const { return data[std::size_t(i) * cols + j]; }
};

template <class Scalar>
struct NullspaceResult {
  int rank = 0;
  int nullspace_dim = 0;
  /// A nullspace vector: first free column set to 1, the other free columns 0.
  std::vector<Scalar> vector;
  /// log2 of the smallest accepted pivot relative to the largest entry.
  double min_relative_pivot_log2 = 0.0;
};

/// Full-pivot Gaussian elimination. A pivot whose magnitude falls below
/// 2^rank_tol_log2 times the largest (row-equilibrated) entry ends the
/// elimination and fixes the numerical rank.
template <class Scalar>
NullspaceResult<Scalar> nullspace_full_pivot(DenseMatrix<Scalar> a, double rank_tol_log2);

extern template NullspaceResult<mp::Real> nullspace_full_pivot(DenseMatrix<mp::Real>, double);
extern template NullspaceResult<mp::Complex> nullspace_full_pivot(DenseMatrix<mp::Complex>, double);

}  // namespace hplab
