#pragma once

// Potential theory of the condenser (E, F) in double precision.
//
// Measures on segments are stored as Chebyshev densities
//   dμ(x) = (1/π) Σ_k α_k T_k(t) / sqrt(1 - t^2) dt,   x = mid + half * t,
// whose logarithmic potentials are known in closed form:
//   T_0:  log(1/half) + log 2 - log|φ(t)|
//   T_k:  Re(φ(t)^-k) / k
// with φ(t) = t + sqrt(t^2 - 1); on the segment these are log(1/half) + log 2
// and T_k(t)/k.

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hplab/function_spec.hpp"
#include "hplab/roots.hpp"

namespace hplab {

using cplx = std::complex<double>;

struct Segment {
  double lo = -1.0;
  double hi = 1.0;

  double mid() const { return 0.5 * (lo + hi); }
  double half() const { return 0.5 * (hi - lo); }
  double distance(cplx z) const;
};

struct CondenserGeometry {
  Segment E{-1.0, 1.0};
  std::vector<Segment> F;
  std::vector<ParamPair> source_params;

  std::size_t m() const { return F.size(); }
  double distance_to_E(cplx z) const { return E.distance(z); }
  double distance_to_F(cplx z) const;
};

/// F_j = [J(A_j), J(B_j)]. Real regime only.
CondenserGeometry derive_geometry(const FunctionSpec& spec);

/// Sum of Chebyshev densities on a set of disjoint segments.
struct ChebyshevMeasure {
  std::vector<Segment> segments;
  std::vector<Eigen::VectorXd> coeffs;

  double mass() const;
  /// p(t) = Σ α_k T_k(t) on segment s.
  double weight_polynomial(std::size_t s, double t) const;
  /// Density with respect to dx at x in segment s.
  double density(std::size_t s, double x) const;
  /// V^μ(z), exact.
  double potential(cplx z) const;
  /// μ((-∞, x]) for real x.
  double cdf(double x) const;
  /// Gauss-Chebyshev atoms, `per_segment` on each segment, weights p(t_i)/K.
  DiscreteMeasure atoms(int per_segment) const;
  /// min of p(t) over a fine grid on every segment.
  double min_weight_polynomial() const;
};

/// Potentials of T_0 .. T_{n-1} on `seg` at z.
Eigen::VectorXd basis_potentials(const Segment& seg, int n, cplx z);

/// g_E(z, ζ); ζ = nullopt means ∞. Throws DomainError on E.
double green_E(cplx z, std::optional<cplx> zeta);

/// Green function of the complement of F. Closed form for one segment,
/// single-layer collocation (one LU factorization, cached per ζ) otherwise.
class GreenF {
 public:
  /// `collocation` forces the collocation route for one segment as well.
  explicit GreenF(const CondenserGeometry& geom, int nodes = 64, bool collocation = false);

  /// g_F(z, ζ); ζ = nullopt means ∞. Throws DomainError for z or ζ on F.
  double operator()(cplx z, std::optional<cplx> zeta) const;
  /// w_F with V^{ω_F} = w_F on F, so g_F(z,∞) = log|z| + w_F + o(1).
  double robin_constant() const;
  const CondenserGeometry& geometry() const { return geom_; }

 private:
  struct Layer {
    ChebyshevMeasure nu;
    double constant = 0.0;
  };
  const Layer& layer(std::optional<cplx> zeta) const;

  CondenserGeometry geom_;
  int nodes_;
  bool closed_form_;
  std::vector<double> x_;
  Eigen::MatrixXd a_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<double, double>, std::unique_ptr<Layer>> cache_;
  mutable std::unique_ptr<Layer> infinity_;
};

struct EquilibriumResult {
  ChebyshevMeasure lambda_E;
  /// The balayage of λ_E onto F, solved jointly.
  ChebyshevMeasure lambda_F;
  double w_E = 0.0;
  /// V^{λ_F} = V^{λ_E} + c on F.
  double c = 0.0;
  /// sup |3V^{λ_E} + G_F^{λ_E} - w_E| on a check grid of E (not the nodes).
  double residual = 0.0;
  /// sup |V^{λ_F} - V^{λ_E} - c| on a check grid of F.
  double balayage_residual = 0.0;
  bool negative_density = false;
  int nodes = 0;

  double V_E(cplx z) const { return lambda_E.potential(z); }
  double V_F(cplx z) const { return lambda_F.potential(z); }
  /// G_F^{λ_E}(z) = V^{λ_E} - V^{λ_F} + c.
  double G_F(cplx z) const;
};

/// Solves 3V^{λ_E} + G_F^{λ_E} = w_E on E together with λ_F.
/// Throws ValidationError for nodes < 16.
EquilibriumResult solve_equilibrium(const CondenserGeometry& geom, int nodes);

struct BalayageResult {
  ChebyshevMeasure measure;
  double constant = 0.0;
  /// sup |V^{out} - V^{in} - constant| on a check grid of F.
  double residual = 0.0;
};

/// Balayage onto F from the complement: V^{out} = V^{in} + const on F, same mass.
/// Throws ValidationError when an atom lies on F.
BalayageResult balayage_onto_F(const DiscreteMeasure& mu, const CondenserGeometry& geom, int nodes);
BalayageResult balayage_onto_F(const ChebyshevMeasure& mu, const CondenserGeometry& geom, int nodes);

enum class PotentialKind { Log, GreenF, GreenE };

/// Quadrature sum of the kernel against the atoms. GreenF needs `gf`.
double potential_of_measure(const DiscreteMeasure& mu, cplx z, PotentialKind kind, const GreenF* gf = nullptr);

/// u(z^(0)) = 2V - w_E, u(z^(1)) = -G - V, u(z^(2)) = G - V.
double u_sheet(cplx z, int sheet, const EquilibriumResult& eq);

}  // namespace hplab
