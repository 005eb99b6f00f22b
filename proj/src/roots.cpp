#include "hplab/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hplab/error.hpp"

namespace hplab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// out = a * b; out must not alias a or b.
void mul_into(mp::Complex& out, const mp::Complex& a, const mp::Complex& b) {
  mpfr_fmms(out.re.get(), a.re.get(), b.re.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_fmma(out.im.get(), a.re.get(), b.im.get(), a.im.get(), b.re.get(), MPFR_RNDN);
}

struct Workspace {
  explicit Workspace(mp::Prec p) : p(p), dp(p), t(p), d(p), s(p), nrm(p), x(p), y(p) {}
  mp::Complex p, dp, t, d, s;
  mp::Real nrm, x, y;
};

// p(z), p'(z) by Horner.
void horner(const std::vector<mp::Complex>& c, const mp::Complex& z, Workspace& w) {
  mpfr_set_zero(w.p.re.get(), 1);
  mpfr_set_zero(w.p.im.get(), 1);
  mpfr_set_zero(w.dp.re.get(), 1);
  mpfr_set_zero(w.dp.im.get(), 1);
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
    mul_into(w.t, w.dp, z);
    mpfr_add(w.dp.re.get(), w.t.re.get(), w.p.re.get(), MPFR_RNDN);
    mpfr_add(w.dp.im.get(), w.t.im.get(), w.p.im.get(), MPFR_RNDN);
    mul_into(w.t, w.p, z);
    mpfr_add(w.p.re.get(), w.t.re.get(), c[i].re.get(), MPFR_RNDN);
    mpfr_add(w.p.im.get(), w.t.im.get(), c[i].im.get(), MPFR_RNDN);
  }
}

// acc += 1 / d
void add_reciprocal(mp::Complex& acc, const mp::Complex& d, Workspace& w) {
  mpfr_sqr(w.nrm.get(), d.re.get(), MPFR_RNDN);
  mpfr_fma(w.nrm.get(), d.im.get(), d.im.get(), w.nrm.get(), MPFR_RNDN);
  mpfr_div(w.x.get(), d.re.get(), w.nrm.get(), MPFR_RNDN);
  mpfr_div(w.y.get(), d.im.get(), w.nrm.get(), MPFR_RNDN);
  mpfr_add(acc.re.get(), acc.re.get(), w.x.get(), MPFR_RNDN);
  mpfr_sub(acc.im.get(), acc.im.get(), w.y.get(), MPFR_RNDN);
}

double log2_max1(const mp::Complex& z) { return std::max(0.0, z.log2_mag() + 0.5); }

// log2 of sum |c_k| |z|^k given log2|c_k|; the rounding-error scale of Horner.
double log2_abs_sum(const std::vector<double>& log2c, double log2z) {
  const int deg = static_cast<int>(log2c.size()) - 1;
  double top = kNegInf;
  for (int k = 0; k <= deg; ++k) top = std::max(top, log2c[k] + k * log2z);
  if (!std::isfinite(top)) return kNegInf;
  double s = 0.0;
  for (int k = 0; k <= deg; ++k) s += std::exp2(log2c[k] + k * log2z - top);
  return top + std::log2(s);
}

enum class StageResult { Converged, NoiseLimited, Budget };

// One Aberth stage at a fixed precision. A root is frozen once its update
// falls below 2^tol_log2 (relative to max(1,|z|)) or once |p| is at the
// rounding level of the evaluation, where further sweeps only stir noise.
StageResult aberth_stage(const std::vector<mp::Complex>& coeffs, std::vector<mp::Complex>& z, mp::Prec prec,
                         double tol_log2, int budget, int& sweeps) {
  const int n = static_cast<int>(z.size());
  std::vector<mp::Complex> c;
  std::vector<double> log2c;
  c.reserve(coeffs.size());
  for (const auto& x : coeffs) {
    c.push_back(x.with_precision(prec));
    log2c.push_back(x.log2_mag() + 0.5);
  }
  for (auto& r : z) r.set_precision(prec);
  const double noise_slack = std::log2(8.0 * (n + 1));
  std::vector<char> frozen(n, 0);
  bool noise_hit = false;
  Workspace w(prec);
  mp::Complex num(prec), den(prec), delta(prec);
  for (int it = 0; it < budget; ++it) {
    ++sweeps;
    bool all_done = true;
    for (int i = 0; i < n; ++i) {
      if (frozen[i]) continue;
      horner(c, z[i], w);
      const double log2p = w.p.log2_mag();
      if (w.p.is_zero() || log2p < log2_abs_sum(log2c, z[i].log2_mag()) - double(prec) + noise_slack) {
        frozen[i] = 1;
        noise_hit = true;
        continue;
      }
      all_done = false;
      if (w.dp.is_zero()) {
        // Nudge off a critical point.
        const mp::Real eps = mp::ldexp(mp::Real(1L, prec), -static_cast<long>(prec / 4));
        z[i].re += eps;
        z[i].im += eps;
        continue;
      }
      mp::Complex ratio = w.p / w.dp;
      mpfr_set_zero(w.s.re.get(), 1);
      mpfr_set_zero(w.s.im.get(), 1);
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        mpfr_sub(w.d.re.get(), z[i].re.get(), z[j].re.get(), MPFR_RNDN);
        mpfr_sub(w.d.im.get(), z[i].im.get(), z[j].im.get(), MPFR_RNDN);
        if (w.d.is_zero()) continue;
        add_reciprocal(w.s, w.d, w);
      }
      // delta = ratio / (1 - ratio * s)
      mul_into(num, ratio, w.s);
      mpfr_ui_sub(den.re.get(), 1, num.re.get(), MPFR_RNDN);
      mpfr_neg(den.im.get(), num.im.get(), MPFR_RNDN);
      if (den.is_zero())
        delta = ratio;
      else
        delta = ratio / den;
      z[i] -= delta;
      if (delta.log2_mag() - log2_max1(z[i]) < tol_log2) frozen[i] = 1;
    }
    if (all_done) return noise_hit ? StageResult::NoiseLimited : StageResult::Converged;
  }
  return StageResult::Budget;
}

double residual_log2_of(const std::vector<mp::Complex>& c, const mp::Complex& r, double log2_max_coeff) {
  Workspace w(c.front().precision());
  horner(c, r, w);
  if (w.p.is_zero()) return kNegInf;
  const int deg = static_cast<int>(c.size()) - 1;
  const double log2_r = std::max(0.0, mp::abs(r).log2_abs());
  return mp::abs(w.p).log2_abs() - log2_max_coeff - deg * log2_r;
}

}  // namespace

double RootSet::max_residual_log2() const {
  double m = kNegInf;
  for (double r : residual_log2) m = std::max(m, r);
  return m;
}

std::vector<std::complex<double>> RootSet::to_std() const {
  std::vector<std::complex<double>> out;
  out.reserve(roots.size());
  for (const auto& r : roots) out.push_back(r.to_std());
  return out;
}

double DiscreteMeasure::total_mass() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.weight;
  return s;
}

DiscreteMeasure DiscreteMeasure::normalized() const {
  const double m = total_mass();
  if (!(m > 0.0)) throw ValidationError("cannot normalize a measure of zero mass");
  DiscreteMeasure out = *this;
  for (auto& a : out.atoms) a.weight /= m;
  return out;
}

DiscreteMeasure DiscreteMeasure::restricted(const std::function<bool(std::complex<double>)>& keep) const {
  DiscreteMeasure out;
  for (const auto& a : atoms)
    if (keep(a.z)) out.atoms.push_back(a);
  return out;
}

RootSet find_roots(const Polynomial& p, const PrecisionContext& ctx) {
  ctx.validate();
  if (p.is_zero()) throw ValidationError("zero polynomial has no well-defined roots");
  if (p.degree() < 1) throw ValidationError("polynomial of degree 0 has no roots");
  const mp::Prec bits = ctx.precision_bits;
  const int deg = p.degree();
  std::vector<mp::Complex> c;
  for (int i = 0; i <= deg; ++i) c.push_back(p.coefficients()[i].with_precision(bits));

  // Fujiwara bound: 2 max(|c_{d-k}/c_d|^(1/k), |c_0/(2 c_d)|^(1/d)).
  const double lead = c[deg].log2_mag();
  double bound_log2 = kNegInf;
  for (int k = 1; k <= deg; ++k) {
    const double ck = c[deg - k].log2_mag() - (k == deg ? 1.0 : 0.0);
    if (std::isfinite(ck)) bound_log2 = std::max(bound_log2, (ck - lead) / k);
  }
  const double bound = std::isfinite(bound_log2) ? 2.0 * std::exp2(bound_log2) : 1.0;

  std::vector<mp::Complex> z;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  const double radii[3] = {0.5, 1.0, 2.0};
  for (int i = 0; i < deg; ++i) {
    const double r = radii[i % 3] * bound;
    const double a = golden * i + 0.4;
    z.emplace_back(std::complex<double>(r * std::cos(a), r * std::sin(a)), 128);
  }

  RootSet rs;
  rs.precision_bits = bits;
  // Precision ladder: cheap sweeps bring the roots to the accuracy the
  // conditioning allows at each level, the next level refines them.
  std::vector<mp::Prec> ladder;
  for (mp::Prec q = std::min<mp::Prec>(bits, 128); q < bits; q *= 2) ladder.push_back(q);
  ladder.push_back(bits);
  const int budget = 100 + 10 * deg;
  for (std::size_t s = 0; s < ladder.size(); ++s) {
    const StageResult r = aberth_stage(c, z, ladder[s], -double(ladder[s]) / 3.0, budget, rs.sweeps);
    if (s + 1 == ladder.size()) rs.converged = r != StageResult::Budget;
  }

  std::sort(z.begin(), z.end(), [](const mp::Complex& a, const mp::Complex& b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
  });
  const double maxc = p.log2_max_coeff();
  const double cert = -double(bits) / 4.0;
  rs.certified = true;
  for (const auto& r : z) {
    const double res = residual_log2_of(c, r, maxc);
    rs.residual_log2.push_back(res);
    if (!(res < cert)) rs.certified = false;
  }
  rs.roots = std::move(z);
  return rs;
}

DiscreteMeasure counting_measure(const RootSet& rs, int normalizer) {
  if (normalizer < 1) throw ValidationError("normalizer must be >= 1");
  DiscreteMeasure m;
  for (const auto& r : rs.roots) m.atoms.push_back({r.to_std(), 1.0 / normalizer});
  return m;
}

double reconstruction_error_log2(const Polynomial& p, const RootSet& rs) {
  const int deg = rs.degree();
  if (deg == 0) throw ValidationError("empty root set");
  const mp::Prec prec = rs.precision_bits;
  std::vector<mp::Complex> q{p.coefficients()[deg].with_precision(prec)};
  mp::Complex scratch(prec);
  for (const auto& r : rs.roots) {
    std::vector<mp::Complex> next(q.size() + 1, mp::Complex(prec));
    for (std::size_t k = 0; k < q.size(); ++k) {
      next[k + 1] += q[k];
      mp::sub_mul(next[k], q[k], r, scratch);
    }
    q = std::move(next);
  }
  double err = kNegInf;
  for (int k = 0; k <= deg; ++k) {
    const mp::Complex d = q[k] - p.coefficients()[k];
    if (!d.is_zero()) err = std::max(err, mp::abs(d).log2_abs());
  }
  for (int k = deg + 1; k < static_cast<int>(p.coefficients().size()); ++k)
    err = std::max(err, mp::abs(p.coefficients()[k]).log2_abs());
  return err - p.log2_max_coeff();
}

std::vector<double> inclusion_radii_log2(const Polynomial& p, const RootSet& rs) {
  const Polynomial q = p.trimmed();
  const double d = std::log2(double(rs.degree()));
  std::vector<double> out;
  out.reserve(rs.roots.size());
  for (const auto& r : rs.roots) {
    mp::Complex v(rs.precision_bits), dv(rs.precision_bits);
    q.eval_with_derivative(r, v, dv);
    if (v.is_zero()) {
      out.push_back(kNegInf);
    } else if (dv.is_zero()) {
      out.push_back(std::numeric_limits<double>::infinity());
    } else {
      out.push_back(d + v.log2_mag() - dv.log2_mag());
    }
  }
  return out;
}

}  // namespace hplab
