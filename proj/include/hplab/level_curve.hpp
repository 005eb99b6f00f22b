#pragma once

// Level curves Γ_ρ = {G_F^{λ_E} = log ρ} around the segments of F.
//
// Each component is traced along rays of the elliptic coordinates of its
// segment, z = mid + half * J(r e^{iθ}), r > 1, which start on the segment
// where G vanishes.

#include <mutex>
#include <optional>
#include <vector>

#include "hplab/branch.hpp"
#include "hplab/potential.hpp"

namespace hplab {

struct LevelCurve {
  double rho = 1.0;
  /// One closed polyline per segment of F (last vertex not repeated).
  std::vector<std::vector<cplx>> components;
  /// max |G - log ρ| over all vertices.
  double max_defect = 0.0;
};

class LevelCurveTracer {
 public:
  /// Required distance from E.
  static constexpr double kClearance = 1e-3;

  LevelCurveTracer(EquilibriumResult eq, CondenserGeometry geom);

  /// The point of Γ_ρ on the ray θ of segment j, or nullopt when the ray
  /// comes within the clearance of E or meets another segment first.
  std::optional<cplx> ray_point(std::size_t j, double theta, double rho) const;

  /// Adaptive polylines. Throws DomainError unless 1 < ρ < R_geom.
  LevelCurve trace(double rho) const;
  /// `count` points of Γ_ρ, split evenly between components, equally spaced in θ
  /// and never on the real axis.
  std::vector<cplx> sample(double rho, int count) const;

  /// Largest ρ for which Γ_ρ has disjoint components, none enclosing another
  /// and all at least kClearance from E. Computed on first use.
  double r_geom() const;
  /// Sheet-2 evaluation allowed where G_F^{λ_E} < log(0.95 R_geom).
  Sheet2Region sheet2_region() const;

  const EquilibriumResult& equilibrium() const { return eq_; }
  const CondenserGeometry& geometry() const { return geom_; }

 private:
  std::optional<LevelCurve> try_trace(double rho, bool refine) const;

  EquilibriumResult eq_;
  CondenserGeometry geom_;
  mutable std::once_flag once_;
  mutable double r_geom_ = 0.0;
};

/// Symmetric Hausdorff distance between a polyline vertex set and a segment.
double hausdorff_to_segment(const std::vector<cplx>& pts, const Segment& s);

}  // namespace hplab
