#include "hplab/linalg.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace hplab {

namespace {

void scale_pow2(mp::Real& x, long e) { mpfr_mul_2si(x.get(), x.get(), e, MPFR_RNDN); }
void scale_pow2(mp::Complex& z, long e) {
  scale_pow2(z.re, e);
  scale_pow2(z.im, e);
}

mp::Real divide(const mp::Real& a, const mp::Real& b) { return a / b; }
mp::Complex divide(const mp::Complex& a, const mp::Complex& b) { return a / b; }

bool is_zero(const mp::Real& x) { return x.is_zero(); }
bool is_zero(const mp::Complex& z) { return z.is_zero(); }

}  // namespace

template <class Scalar>
NullspaceResult<Scalar> nullspace_full_pivot(DenseMatrix<Scalar> a, double rank_tol_log2) {
  const int rows = a.rows;
  const int cols = a.cols;
  const mp::Prec prec = a.data.empty() ? 64 : a.data.front().precision();

  // Exact power-of-two row equilibration.
  double global_max = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < rows; ++i) {
    double row_max = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < cols; ++j) row_max = std::max(row_max, mp::log2_magnitude(a(i, j)));
    if (std::isfinite(row_max)) {
      const long shift = -static_cast<long>(std::floor(row_max));
      for (int j = 0; j < cols; ++j) scale_pow2(a(i, j), shift);
      global_max = std::max(global_max, row_max + double(shift));
    }
  }

  std::vector<int> perm(cols);
  std::iota(perm.begin(), perm.end(), 0);
  NullspaceResult<Scalar> result;
  const double threshold = global_max + rank_tol_log2;
  int rank = 0;
  Scalar scratch(prec);
  const int steps = std::min(rows, cols);
  for (int k = 0; k < steps; ++k) {
    int pi = -1, pj = -1;
    double best = -std::numeric_limits<double>::infinity();
    for (int i = k; i < rows; ++i)
      for (int j = k; j < cols; ++j) {
        const double m = mp::log2_magnitude(a(i, j));
        if (m > best) {
          best = m;
          pi = i;
          pj = j;
        }
      }
    if (pi < 0 || !(best > threshold)) break;
    if (pi != k)
      for (int j = 0; j < cols; ++j) std::swap(a(k, j), a(pi, j));
    if (pj != k) {
      for (int i = 0; i < rows; ++i) std::swap(a(i, k), a(i, pj));
      std::swap(perm[k], perm[pj]);
    }
    result.min_relative_pivot_log2 = std::min(result.min_relative_pivot_log2, best - global_max);
    for (int i = k + 1; i < rows; ++i) {
      if (is_zero(a(i, k))) continue;
      const Scalar l = divide(a(i, k), a(k, k));
      for (int j = k + 1; j < cols; ++j) mp::sub_mul(a(i, j), l, a(k, j), scratch);
      a(i, k) = Scalar(prec);
    }
    ++rank;
  }

  result.rank = rank;
  result.nullspace_dim = cols - rank;
  result.vector.assign(cols, Scalar(prec));
  if (result.nullspace_dim == 0) return result;

  // Back substitution in permuted coordinates with the first free column = 1.
  std::vector<Scalar> x(cols, Scalar(prec));
  x[rank] = Scalar(1L, prec);
  for (int k = rank - 1; k >= 0; --k) {
    Scalar acc(prec);
    for (int j = k + 1; j <= rank; ++j) mp::sub_mul(acc, a(k, j), x[j], scratch);
    x[k] = divide(acc, a(k, k));
  }
  for (int j = 0; j < cols; ++j) result.vector[perm[j]] = std::move(x[j]);
  return result;
}

template NullspaceResult<mp::Real> nullspace_full_pivot(DenseMatrix<mp::Real>, double);
template NullspaceResult<mp::Complex> nullspace_full_pivot(DenseMatrix<mp::Complex>, double);

}  // namespace hplab
