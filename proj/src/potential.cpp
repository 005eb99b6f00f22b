#include "hplab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hplab/error.hpp"

namespace hplab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kOnCut = 1e-14;

cplx phi_unit(cplx t) { return t + std::sqrt(t - 1.0) * std::sqrt(t + 1.0); }

bool on_unit_segment(cplx t) { return std::abs(t.imag()) <= kOnCut && std::abs(t.real()) <= 1.0 + kOnCut; }

double chebyshev_node(int i, int n) { return std::cos((2.0 * i + 1.0) * kPi / (2.0 * n)); }

/// Check grid avoiding the collocation nodes, endpoints included.
std::vector<double> check_grid(int count) {
  std::vector<double> t{1.0};
  for (int j = 0; j < count; ++j) t.push_back(std::cos(kPi * (j + 0.5) / count));
  t.push_back(-1.0);
  return t;
}

double mapped(const Segment& s, double t) { return s.mid() + s.half() * t; }

/// Disk-exterior Green function composed with φ.
double green_unit(cplx t, std::optional<cplx> tau) {
  const cplx w = phi_unit(t);
  if (!tau) return std::log(std::abs(w));
  const cplx om = phi_unit(*tau);
  const double den = std::abs(w - om);
  if (den == 0.0) throw DomainError("green function evaluated at its pole");
  return std::log(std::abs(1.0 - w * std::conj(om)) / den);
}

std::vector<double> collocation_points(const std::vector<Segment>& segs, int n) {
  std::vector<double> x;
  for (const auto& s : segs)
    for (int i = 0; i < n; ++i) x.push_back(mapped(s, chebyshev_node(i, n)));
  return x;
}

/// Rows V^β(x_i) - c for the measure β on F, plus the mass row.
Eigen::MatrixXd layer_matrix(const std::vector<Segment>& F, const std::vector<double>& x, int n) {
  const int m = static_cast<int>(F.size());
  const int size = m * n + 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size, size);
  for (int i = 0; i < m * n; ++i) {
    for (int j = 0; j < m; ++j) a.block(i, j * n, 1, n) = basis_potentials(F[j], n, x[i]).transpose();
    a(i, m * n) = -1.0;
  }
  for (int j = 0; j < m; ++j) a(m * n, j * n) = 1.0;
  return a;
}

ChebyshevMeasure unpack(const std::vector<Segment>& segs, const Eigen::VectorXd& sol, int n, int offset = 0) {
  ChebyshevMeasure mu;
  mu.segments = segs;
  for (std::size_t j = 0; j < segs.size(); ++j) mu.coeffs.push_back(sol.segment(offset + j * n, n));
  return mu;
}

void require_finite(const Eigen::VectorXd& v, const char* what) {
  if (!v.allFinite()) throw NumericError(std::string(what) + ": collocation system is singular");
}

template <class VIn>
BalayageResult sweep(const VIn& v_in, double mass, const CondenserGeometry& geom, int n) {
  if (geom.F.empty()) throw ValidationError("balayage onto F needs at least one segment");
  if (n < 16) throw ValidationError("balayage needs at least 16 nodes per segment");
  const auto x = collocation_points(geom.F, n);
  const Eigen::MatrixXd a = layer_matrix(geom.F, x, n);
  const int mn = static_cast<int>(x.size());
  Eigen::VectorXd rhs(mn + 1);
  for (int i = 0; i < mn; ++i) rhs(i) = v_in(x[i]);
  rhs(mn) = mass;
  const Eigen::VectorXd sol = a.fullPivLu().solve(rhs);
  require_finite(sol, "balayage");
  BalayageResult out;
  out.measure = unpack(geom.F, sol, n);
  out.constant = sol(mn);
  for (const auto& s : geom.F)
    for (double t : check_grid(499)) {
      const double xx = mapped(s, t);
      out.residual = std::max(out.residual, std::abs(out.measure.potential(xx) - v_in(xx) - out.constant));
    }
  return out;
}

}  // namespace

double Segment::distance(cplx z) const {
  const double x = std::clamp(z.real(), lo, hi);
  return std::abs(z - cplx(x, 0.0));
}

double CondenserGeometry::distance_to_F(cplx z) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& s : F) d = std::min(d, s.distance(z));
  return d;
}

CondenserGeometry derive_geometry(const FunctionSpec& spec) {
  if (spec.validate() != Regime::Real)
    throw ValidationError("the condenser geometry is defined only for real parameters");
  CondenserGeometry g;
  for (const auto& p : spec.pairs) {
    const double a = joukowski(p.A.to_std()).real();
    const double b = joukowski(p.B.to_std()).real();
    g.F.push_back({a, b});
  }
  std::sort(g.F.begin(), g.F.end(), [](const Segment& l, const Segment& r) { return l.lo < r.lo; });
  for (std::size_t j = 0; j < g.F.size(); ++j) {
    if (!(g.F[j].lo < g.F[j].hi)) throw ValidationError("degenerate segment in F");
    if (g.F[j].hi > -1.0 && g.F[j].lo < 1.0) throw ValidationError("F meets E");
    if (j + 1 < g.F.size() && !(g.F[j].hi < g.F[j + 1].lo)) throw ValidationError("segments of F overlap");
  }
  g.source_params = spec.pairs;
  return g;
}

Eigen::VectorXd basis_potentials(const Segment& seg, int n, cplx z) {
  Eigen::VectorXd v(n);
  const cplx t = (z - seg.mid()) / seg.half();
  const double base = std::log(2.0 / seg.half());
  if (on_unit_segment(t)) {
    const double th = std::acos(std::clamp(t.real(), -1.0, 1.0));
    v(0) = base;
    for (int k = 1; k < n; ++k) v(k) = std::cos(k * th) / k;
    return v;
  }
  const cplx w = phi_unit(t);
  const cplx u = 1.0 / w;
  v(0) = base - std::log(std::abs(w));
  cplx uk = 1.0;
  for (int k = 1; k < n; ++k) {
    uk *= u;
    v(k) = uk.real() / k;
  }
  return v;
}

double ChebyshevMeasure::mass() const {
  double s = 0.0;
  for (const auto& c : coeffs) s += c(0);
  return s;
}

double ChebyshevMeasure::weight_polynomial(std::size_t s, double t) const {
  const double th = std::acos(std::clamp(t, -1.0, 1.0));
  double p = 0.0;
  for (int k = 0; k < coeffs[s].size(); ++k) p += coeffs[s](k) * std::cos(k * th);
  return p;
}

double ChebyshevMeasure::density(std::size_t s, double x) const {
  const Segment& seg = segments[s];
  const double t = (x - seg.mid()) / seg.half();
  if (std::abs(t) >= 1.0) return std::abs(t) == 1.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return weight_polynomial(s, t) / (kPi * seg.half() * std::sqrt(1.0 - t * t));
}

double ChebyshevMeasure::potential(cplx z) const {
  double v = 0.0;
  for (std::size_t s = 0; s < segments.size(); ++s)
    v += coeffs[s].dot(basis_potentials(segments[s], static_cast<int>(coeffs[s].size()), z));
  return v;
}

double ChebyshevMeasure::cdf(double x) const {
  double total = 0.0;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const Segment& seg = segments[s];
    if (x < seg.lo) continue;
    if (x >= seg.hi) {
      total += coeffs[s](0);
      continue;
    }
    const double th = std::acos(std::clamp((x - seg.mid()) / seg.half(), -1.0, 1.0));
    double part = coeffs[s](0) * (kPi - th);
    for (int k = 1; k < coeffs[s].size(); ++k) part -= coeffs[s](k) * std::sin(k * th) / k;
    total += part / kPi;
  }
  return total;
}

DiscreteMeasure ChebyshevMeasure::atoms(int per_segment) const {
  DiscreteMeasure mu;
  for (std::size_t s = 0; s < segments.size(); ++s)
    for (int i = per_segment - 1; i >= 0; --i) {
      const double t = chebyshev_node(i, per_segment);
      mu.atoms.push_back({cplx(mapped(segments[s], t), 0.0), weight_polynomial(s, t) / per_segment});
    }
  return mu;
}

double ChebyshevMeasure::min_weight_polynomial() const {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < segments.size(); ++s)
    for (double t : check_grid(999)) lo = std::min(lo, weight_polynomial(s, t));
  return lo;
}

double green_E(cplx z, std::optional<cplx> zeta) {
  if (on_unit_segment(z)) throw DomainError("g_E evaluated on E");
  if (zeta && on_unit_segment(*zeta)) throw DomainError("g_E pole on E");
  return green_unit(z, zeta);
}

GreenF::GreenF(const CondenserGeometry& geom, int nodes, bool collocation)
    : geom_(geom), nodes_(nodes), closed_form_(geom.F.size() == 1 && !collocation) {
  if (geom_.F.empty()) throw ValidationError("g_F needs at least one segment");
  if (!closed_form_) {
    if (nodes_ < 16) throw ValidationError("g_F collocation needs at least 16 nodes per segment");
    x_ = collocation_points(geom_.F, nodes_);
    a_ = layer_matrix(geom_.F, x_, nodes_);
    lu_.compute(a_);
  }
}

const GreenF::Layer& GreenF::layer(std::optional<cplx> zeta) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::unique_ptr<Layer>* slot = nullptr;
  if (!zeta) {
    slot = &infinity_;
  } else {
    slot = &cache_[{zeta->real(), zeta->imag()}];
  }
  if (*slot) return **slot;
  const int mn = static_cast<int>(x_.size());
  Eigen::VectorXd rhs(mn + 1);
  for (int i = 0; i < mn; ++i) rhs(i) = zeta ? -std::log(std::abs(x_[i] - *zeta)) : 0.0;
  rhs(mn) = 1.0;
  const Eigen::VectorXd sol = lu_.solve(rhs);
  require_finite(sol, "g_F");
  if ((a_ * sol - rhs).lpNorm<Eigen::Infinity>() > 1e-8 * std::max(1.0, rhs.lpNorm<Eigen::Infinity>()))
    throw NumericError("g_F collocation did not converge");
  auto layer = std::make_unique<Layer>();
  layer->nu = unpack(geom_.F, sol, nodes_);
  layer->constant = sol(mn);
  *slot = std::move(layer);
  return **slot;
}

double GreenF::operator()(cplx z, std::optional<cplx> zeta) const {
  for (const auto& s : geom_.F) {
    if (on_unit_segment((z - s.mid()) / s.half())) throw DomainError("g_F evaluated on F");
    if (zeta && on_unit_segment((*zeta - s.mid()) / s.half())) throw DomainError("g_F pole on F");
  }
  if (closed_form_) {
    const Segment& s = geom_.F[0];
    std::optional<cplx> tau;
    if (zeta) tau = (*zeta - s.mid()) / s.half();
    return green_unit((z - s.mid()) / s.half(), tau);
  }
  const Layer& l = layer(zeta);
  if (!zeta) return l.constant - l.nu.potential(z);
  const double d = std::abs(z - *zeta);
  if (d == 0.0) throw DomainError("green function evaluated at its pole");
  return -std::log(d) - l.nu.potential(z) + l.constant;
}

double GreenF::robin_constant() const {
  if (closed_form_) return std::log(2.0 / geom_.F[0].half());
  return layer(std::nullopt).constant;
}

double EquilibriumResult::G_F(cplx z) const {
  if (lambda_F.segments.empty()) return 0.0;
  return V_E(z) - V_F(z) + c;
}

EquilibriumResult solve_equilibrium(const CondenserGeometry& geom, int n) {
  if (n < 16) throw ValidationError("equilibrium solver needs at least 16 nodes");
  const int m = static_cast<int>(geom.F.size());
  const bool joint = m > 0;
  const int nc = n * (m + 1);
  const int ic = nc;                     // c
  const int iw = joint ? nc + 1 : nc;    // w_E
  const int size = iw + 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size, size);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);

  int row = 0;
  for (int i = 0; i < n; ++i, ++row) {
    const double x = mapped(geom.E, chebyshev_node(i, n));
    a.block(row, 0, 1, n) = (joint ? 4.0 : 3.0) * basis_potentials(geom.E, n, x).transpose();
    for (int j = 0; j < m; ++j) a.block(row, (j + 1) * n, 1, n) = -basis_potentials(geom.F[j], n, x).transpose();
    if (joint) a(row, ic) = 1.0;
    a(row, iw) = -1.0;
  }
  for (int s = 0; s < m; ++s)
    for (int i = 0; i < n; ++i, ++row) {
      const double x = mapped(geom.F[s], chebyshev_node(i, n));
      a.block(row, 0, 1, n) = -basis_potentials(geom.E, n, x).transpose();
      for (int j = 0; j < m; ++j) a.block(row, (j + 1) * n, 1, n) = basis_potentials(geom.F[j], n, x).transpose();
      a(row, ic) = -1.0;
    }
  a(row, 0) = 1.0;
  rhs(row++) = 1.0;
  if (joint) {
    for (int j = 0; j < m; ++j) a(row, (j + 1) * n) = 1.0;
    rhs(row++) = 1.0;
  }

  const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) throw NumericError("equilibrium collocation system is singular");
  const Eigen::VectorXd sol = lu.solve(rhs);
  require_finite(sol, "equilibrium");

  EquilibriumResult eq;
  eq.nodes = n;
  eq.lambda_E = unpack({geom.E}, sol, n);
  if (joint) {
    eq.lambda_F = unpack(geom.F, sol, n, n);
    eq.c = sol(ic);
  }
  eq.w_E = sol(iw);
  for (double t : check_grid(997)) {
    const double x = mapped(geom.E, t);
    eq.residual = std::max(eq.residual, std::abs(3.0 * eq.V_E(x) + eq.G_F(x) - eq.w_E));
  }
  for (const auto& s : geom.F)
    for (double t : check_grid(997)) {
      const double x = mapped(s, t);
      eq.balayage_residual = std::max(eq.balayage_residual, std::abs(eq.V_F(x) - eq.V_E(x) - eq.c));
    }
  const double tol = -1e-8;
  eq.negative_density = eq.lambda_E.min_weight_polynomial() < tol || (joint && eq.lambda_F.min_weight_polynomial() < tol);
  return eq;
}

BalayageResult balayage_onto_F(const DiscreteMeasure& mu, const CondenserGeometry& geom, int n) {
  if (mu.empty()) throw ValidationError("balayage of an empty measure");
  for (const auto& a : mu.atoms)
    if (geom.distance_to_F(a.z) <= kOnCut * std::max(1.0, std::abs(a.z)))
      throw ValidationError("measure support intersects F");
  auto v = [&](double x) {
    double s = 0.0;
    for (const auto& a : mu.atoms) s -= a.weight * std::log(std::abs(x - a.z));
    return s;
  };
  return sweep(v, mu.total_mass(), geom, n);
}

BalayageResult balayage_onto_F(const ChebyshevMeasure& mu, const CondenserGeometry& geom, int n) {
  return sweep([&](double x) { return mu.potential(x); }, mu.mass(), geom, n);
}

double potential_of_measure(const DiscreteMeasure& mu, cplx z, PotentialKind kind, const GreenF* gf) {
  if (mu.empty()) throw ValidationError("potential of an empty measure");
  double s = 0.0;
  switch (kind) {
    case PotentialKind::Log:
      for (const auto& a : mu.atoms) {
        const double d = std::abs(z - a.z);
        if (d <= kOnCut * std::max(1.0, std::abs(z))) throw DomainError("logarithmic potential at an atom");
        s -= a.weight * std::log(d);
      }
      return s;
    case PotentialKind::GreenE:
      for (const auto& a : mu.atoms) s += a.weight * green_E(z, a.z);
      return s;
    case PotentialKind::GreenF:
      if (!gf) throw ValidationError("green_F potential needs a GreenF evaluator");
      for (const auto& a : mu.atoms) s += a.weight * (*gf)(z, a.z);
      return s;
  }
  return s;
}

double u_sheet(cplx z, int sheet, const EquilibriumResult& eq) {
  if (eq.lambda_E.segments.empty()) throw ValidationError("empty equilibrium result");
  const Segment& E = eq.lambda_E.segments[0];
  if (E.distance(z) <= kOnCut) throw DomainError("u evaluated on E");
  const double v = eq.V_E(z);
  if (sheet == 0) return 2.0 * v - eq.w_E;
  for (const auto& s : eq.lambda_F.segments)
    if (s.distance(z) <= kOnCut) throw DomainError("u evaluated on F");
  const double g = eq.G_F(z);
  if (sheet == 1) return -g - v;
  if (sheet == 2) return g - v;
  throw ValidationError("sheet must be 0, 1 or 2");
}

}  // namespace hplab
