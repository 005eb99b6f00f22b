#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hplab/branch.hpp"
#include "hplab/error.hpp"
#include "hplab/harness.hpp"

namespace hplab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// log2(2^a + 2^b)
double log2_sum(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log2(1.0 + std::exp2(lo - hi));
}

double cdf_discrepancy(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  std::vector<std::pair<double, double>> jumps;
  for (const auto& at : a.atoms) jumps.emplace_back(at.z.real(), at.weight);
  for (const auto& at : b.atoms) jumps.emplace_back(at.z.real(), -at.weight);
  std::sort(jumps.begin(), jumps.end());
  double diff = 0.0, best = 0.0;
  for (std::size_t i = 0; i < jumps.size();) {
    const double x = jumps[i].first;
    for (; i < jumps.size() && jumps[i].first == x; ++i) diff += jumps[i].second;
    best = std::max(best, std::abs(diff));
  }
  return best;
}

double potential_discrepancy(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  cplx centre = 0.0;
  std::size_t count = 0;
  for (const auto* m : {&a, &b})
    for (const auto& at : m->atoms) centre += at.z, ++count;
  centre /= double(count);
  double radius = 0.0;
  for (const auto* m : {&a, &b})
    for (const auto& at : m->atoms) radius = std::max(radius, std::abs(at.z - centre));
  radius = 1.5 * radius + 0.5;
  double best = 0.0;
  constexpr int kPoints = 256;
  for (int k = 0; k < kPoints; ++k) {
    const cplx z = centre + std::polar(radius, 2.0 * std::numbers::pi * (k + 0.5) / kPoints);
    const double d =
        potential_of_measure(a, z, PotentialKind::Log) - potential_of_measure(b, z, PotentialKind::Log);
    best = std::max(best, std::abs(d));
  }
  return best;
}

}  // namespace

double discrepancy(const DiscreteMeasure& mu, const DiscreteMeasure& nu, DiscrepancyMode mode) {
  if (mu.empty() || nu.empty()) throw ValidationError("discrepancy of an empty measure");
  const auto a = mu.normalized(), b = nu.normalized();
  return mode == DiscrepancyMode::Cdf ? cdf_discrepancy(a, b) : potential_discrepancy(a, b);
}

DiscrepancyRecord zero_discrepancy(const std::string& label, const RootSet& rs, int normalizer,
                                   const CondenserGeometry& geom, const DiscreteMeasure& lambda_F) {
  DiscrepancyRecord d;
  d.label = label;
  d.total = rs.degree();
  if (d.total == 0) {
    d.value = 1.0;
    d.excluded_fraction = 1.0;
    return d;
  }
  const auto kept = counting_measure(rs, normalizer).restricted([&](cplx z) { return geom.distance_to_F(z) < 0.2; });
  d.kept = static_cast<int>(kept.atoms.size());
  d.excluded_fraction = 1.0 - double(d.kept) / d.total;
  d.value = kept.empty() ? 1.0 : discrepancy(kept, lambda_F);
  return d;
}

RateReport rate_check(const HPSolution& sol, const LabContext& lab, double rho, const std::vector<cplx>& z) {
  RateReport rep;
  rep.rho = rho;
  if (z.empty()) {
    rep.admissible = false;
    rep.note = "no sample points";
    return rep;
  }
  const mp::Prec prec = sol.precision_bits;
  const BranchEvaluator be(lab.spec, PrecisionContext(prec));
  const double tiny = -double(prec) / 2.0;
  std::vector<double> log2_q2;
  for (cplx p : z) {
    const mp::Complex zz(p, prec);
    const auto f0 = be.eval_sheet(zz, 0);
    const auto f1 = be.eval_sheet(zz, 1);
    const double scale = std::max({0.0, f0.log2_mag(), f1.log2_mag()});
    if (f0.log2_mag() < scale + tiny || (f0 - f1).log2_mag() < scale + tiny) {
      rep.admissible = false;
      rep.note = "f vanishes or f(z^(0)) = f(z^(1)) on the curve";
      rep.samples.clear();
      return rep;
    }
    const auto q1 = sol.polys[1](zz);
    const auto q2 = sol.polys[2](zz);
    RateSample s;
    s.z = p;
    s.predicted = std::exp(-2.0 * lab.eq.G_F(p));
    s.log2_abs_q2 = q2.is_zero() ? kNegInf : q2.log2_mag();
    s.log2_q2_normalized = s.log2_abs_q2 + sol.n * lab.eq.V_F(p) / std::numbers::ln2;
    if (q2.is_zero()) {
      s.measured = std::numeric_limits<double>::infinity();
    } else {
      const auto v = q1 / q2 + f0 + f1;
      s.measured = v.is_zero() ? 0.0 : std::exp2(v.log2_mag() / sol.n);
    }
    s.rel_dev = std::abs(s.measured - s.predicted) / s.predicted;
    log2_q2.push_back(s.log2_q2_normalized);
    rep.samples.push_back(s);
  }
  const double cut = median(log2_q2) - std::log2(1e6);
  std::vector<double> devs;
  int skipped = 0;
  for (auto& s : rep.samples) {
    s.skipped = !(s.log2_q2_normalized >= cut) || !std::isfinite(s.measured);
    if (s.skipped)
      ++skipped;
    else
      devs.push_back(s.rel_dev);
  }
  rep.skip_rate = double(skipped) / rep.samples.size();
  rep.median_rel_dev = devs.empty() ? std::numeric_limits<double>::infinity() : median(devs);
  return rep;
}

SheetReport sheet_remainder_diagnostics(const HPSolution& sol, const LabContext& lab, double rho,
                                        const std::vector<cplx>& z) {
  SheetReport rep;
  rep.rho = rho;
  rep.max_identity_log2 = kNegInf;
  if (z.empty()) {
    rep.admissible = false;
    return rep;
  }
  const mp::Prec prec = sol.precision_bits;
  const BranchEvaluator be(lab.spec, PrecisionContext(prec), lab.region);
  int ordered = 0;
  for (cplx p : z) {
    SheetSample s;
    s.z = p;
    try {
      const mp::Complex zz(p, prec);
      std::array<mp::Complex, 3> f{be.eval_sheet(zz, 0), be.eval_sheet(zz, 1), be.eval_sheet(zz, 2)};
      const auto q0 = sol.polys[0](zz), q1 = sol.polys[1](zz), q2 = sol.polys[2](zz);
      double scale = q0.log2_mag();
      std::array<mp::Complex, 3> R{mp::Complex(prec), mp::Complex(prec), mp::Complex(prec)};
      for (int j = 0; j < 3; ++j) {
        const auto t1 = q1 * f[j];
        const auto t2 = q2 * f[j] * f[j];
        scale = std::max({scale, t1.log2_mag(), t2.log2_mag()});
        R[j] = q0 + t1 + t2;
        s.log2_abs_R[j] = R[j].is_zero() ? kNegInf : R[j].log2_mag();
      }
      const auto d = R[1] - R[2] - (f[1] - f[2]) * (q1 + q2 * (f[1] + f[2]));
      s.identity_log2 = d.is_zero() ? kNegInf : d.log2_mag() - scale;
      s.ordered = s.log2_abs_R[0] < s.log2_abs_R[1] && s.log2_abs_R[1] < s.log2_abs_R[2];
      if (s.ordered) ++ordered;
      rep.max_identity_log2 = std::max(rep.max_identity_log2, s.identity_log2);
    } catch (const Error& e) {
      s.error = e.what();
      s.identity_log2 = std::numeric_limits<double>::quiet_NaN();
      ++rep.failures;
    }
    rep.samples.push_back(s);
  }
  rep.ordered_fraction = double(ordered) / rep.samples.size();
  return rep;
}

Type2Report type2_check(const HPSolution& sol2, const RootSet& zeros, const LabContext& lab,
                                    const std::vector<cplx>& z) {
  Type2Report rep;
  rep.discrepancy = zeros.degree() == 0 ? 1.0 : discrepancy(counting_measure(zeros, 2 * sol2.n), lab.lambda_E);
  const mp::Prec prec = sol2.precision_bits;
  const BranchEvaluator be(lab.spec, PrecisionContext(prec));
  for (cplx p : z) {
    const mp::Complex zz(p, prec);
    const auto f0 = be.eval_sheet(zz, 0);
    const auto P = sol2.polys[0](zz);
    RatioSample s;
    s.z = p;
    const auto e1 = sol2.polys[1](zz) / P - f0;
    const auto e2 = sol2.polys[2](zz) / P - f0 * f0;
    s.err1_log2 = e1.is_zero() ? kNegInf : e1.log2_mag();
    s.err2_log2 = e2.is_zero() ? kNegInf : e2.log2_mag();
    rep.ratios.push_back(s);
  }
  return rep;
}

SymmetryReport zero_symmetry(const Polynomial& p, const RootSet& rs, long precision_bits) {
  SymmetryReport rep;
  rep.max_excess_log2 = kNegInf;
  const int d = rs.degree();
  if (d == 0) {
    rep.symmetric = true;
    return rep;
  }
  const auto radii = inclusion_radii_log2(p, rs);
  int far = 0;
  const Segment E{-1.0, 1.0};
  for (int i = 0; i < d; ++i) {
    const auto c = mp::conj(rs.roots[i]);
    double best = std::numeric_limits<double>::infinity();
    int arg = i;
    for (int j = 0; j < d; ++j) {
      const auto diff = c - rs.roots[j];
      const double l = diff.is_zero() ? kNegInf : diff.log2_mag();
      if (l < best) best = l, arg = j;
    }
    const double mag = std::max(0.0, rs.roots[i].log2_mag());
    const double tol = log2_sum(log2_sum(radii[i], radii[arg]), mag - double(precision_bits) / 2.0);
    rep.max_excess_log2 = std::max(rep.max_excess_log2, best == kNegInf ? kNegInf : best - tol);
    if (E.distance(rs.roots[i].to_std()) > 0.05) ++far;
  }
  rep.symmetric = rep.max_excess_log2 <= 0.0;
  rep.far_from_E_fraction = double(far) / d;
  return rep;
}

}  // namespace hplab
