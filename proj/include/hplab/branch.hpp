#pragma once

// Values of f = r(z, 𝔣) on the three sheets z^(0), z^(1), z^(2).
//
// With t the Zhukovskii variable (t = 1/φ(z) inside the unit disk, t = φ(z)
// outside) and S(t) = prod_j principal_sqrt((A_j - t)/(B_j - t)):
//   sheet 0: 𝔣 = S(1/φ(z))
//   sheet 1: 𝔣 = σ S(φ(z)), σ the cached sign anchor
//   sheet 2: 𝔣 = -σ S(φ(z)), only near F
// The principal root of (A_j - t)/(B_j - t) is cut exactly along the
// segment [A_j, B_j] of the t-plane, whose image under J is F_j.

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "hplab/function_spec.hpp"
#include "hplab/mp.hpp"
#include "hplab/precision.hpp"

namespace hplab {

enum class ZhukovskiiBranch { Inner, Outer };

struct ZhukovskiiPair {
  mp::Complex phi;
  mp::Complex phi_inv;
};

/// φ(z) = z + sqrt(z-1) sqrt(z+1), |φ| > 1 off E. Throws DomainError on E.
ZhukovskiiPair eval_inverse_zhukovskii(const mp::Complex& z, const PrecisionContext& ctx);

struct BranchValue {
  /// f at the point.
  mp::Complex value;
  /// 𝔣 at the point.
  mp::Complex w;
  ZhukovskiiBranch branch = ZhukovskiiBranch::Inner;
  /// One ±1 per factor: 𝔣 = prod sign_j * principal_sqrt(q_j(t)).
  std::vector<int> signs;
};

/// Where sheet 2 may be evaluated: {z : green(z) <= log_limit}, with green
/// the Green potential G_F^{λ_E} and log_limit = log(0.95 R_geom).
struct Sheet2Region {
  std::function<double(std::complex<double>)> green;
  double log_limit = 0.0;
};

class BranchEvaluator {
 public:
  /// Computes the sheet-1 sign anchor by continuing the sheet-0 value from 2i
  /// to -2i across E at 0.
  BranchEvaluator(FunctionSpec spec, PrecisionContext ctx, std::optional<Sheet2Region> region = std::nullopt,
                  double clearance_factor = 1e-4);

  /// f(z^(sheet)). Throws DomainError on cuts, at poles of f and outside the sheet-2 region.
  mp::Complex eval_sheet(const mp::Complex& z, int sheet) const;
  BranchValue branch_value(const mp::Complex& z, int sheet) const;

  /// Continues `start` (valid at path.front()) along the polyline. Steps are
  /// refined until each factor's phase moves by less than π/2.
  BranchValue continue_along_path(const std::vector<std::complex<double>>& path, const BranchValue& start) const;

  const std::vector<int>& sheet1_anchor() const { return anchor_; }
  const std::vector<std::complex<double>>& branch_points() const { return sigma_; }
  double clearance() const { return clearance_; }
  const FunctionSpec& spec() const { return spec_; }
  const PrecisionContext& context() const { return ctx_; }
  bool has_sheet2_region() const { return region_.has_value(); }

  /// r(z, w) with poles reported as DomainError.
  mp::Complex apply_expression(const mp::Complex& z, const mp::Complex& w) const;

 private:
  BranchValue value_at(const mp::Complex& z, const mp::Complex& t, ZhukovskiiBranch branch,
                       std::vector<int> signs) const;
  void check_clearance(std::complex<double> a, std::complex<double> b) const;

  FunctionSpec spec_;
  PrecisionContext ctx_;
  std::optional<Sheet2Region> region_;
  std::vector<mp::Complex> A_, B_;
  std::vector<std::complex<double>> Ad_, Bd_;
  std::vector<std::complex<double>> sigma_;
  double clearance_ = 0.0;
  std::vector<int> anchor_;
};

/// Convenience wrapper for sheets 0 and 1 (sheet 2 needs a region).
mp::Complex eval_sheet(const FunctionSpec& spec, const mp::Complex& z, int sheet, const PrecisionContext& ctx);

}  // namespace hplab
