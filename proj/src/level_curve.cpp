#include "hplab/level_curve.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "hplab/error.hpp"

namespace hplab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kBaseRays = 128;
constexpr int kMaxVertices = 2048;
constexpr double kMaxLogR = 12.0;

cplx elliptic(const Segment& s, double logr, double theta) {
  return s.mid() + s.half() * joukowski(std::polar(std::exp(logr), theta));
}

bool chord_crosses_E(cplx a, cplx b) {
  if ((a.imag() > 0.0) == (b.imag() > 0.0) && a.imag() != 0.0 && b.imag() != 0.0) return false;
  const double den = a.imag() - b.imag();
  const double x = den == 0.0 ? a.real() : a.real() + (b.real() - a.real()) * a.imag() / den;
  return x >= -1.0 && x <= 1.0;
}

bool inside(const std::vector<cplx>& poly, cplx p) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const cplx a = poly[i], b = poly[j];
    if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
      const double x = a.real() + (p.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
      if (p.real() < x) in = !in;
    }
  }
  return in;
}

double diameter_bound(const std::vector<cplx>& pts) {
  double lo_x = pts[0].real(), hi_x = lo_x, lo_y = pts[0].imag(), hi_y = lo_y;
  for (const auto& p : pts) {
    lo_x = std::min(lo_x, p.real());
    hi_x = std::max(hi_x, p.real());
    lo_y = std::min(lo_y, p.imag());
    hi_y = std::max(hi_y, p.imag());
  }
  return std::hypot(hi_x - lo_x, hi_y - lo_y);
}

}  // namespace

LevelCurveTracer::LevelCurveTracer(EquilibriumResult eq, CondenserGeometry geom)
    : eq_(std::move(eq)), geom_(std::move(geom)) {
  if (geom_.F.empty()) throw ValidationError("level curves need at least one segment in F");
}

std::optional<cplx> LevelCurveTracer::ray_point(std::size_t j, double theta, double rho) const {
  const Segment& s = geom_.F.at(j);
  const double level = std::log(rho);
  auto blocked = [&](cplx prev, cplx z) {
    if (geom_.E.distance(z) < kClearance || chord_crosses_E(prev, z)) return true;
    for (std::size_t i = 0; i < geom_.F.size(); ++i)
      if (i != j && geom_.F[i].distance(z) < kClearance) return true;
    return false;
  };
  double lo = 0.0;
  cplx prev = elliptic(s, 0.0, theta);
  for (double t = 1e-7; t < kMaxLogR;) {
    const double reach = 0.5 * std::max(geom_.E.distance(prev), kClearance);
    cplx z = elliptic(s, t, theta);
    while (std::abs(z - prev) > reach && t - lo > 1e-12) {
      t = 0.5 * (lo + t);
      z = elliptic(s, t, theta);
    }
    if (blocked(prev, z)) return std::nullopt;
    if (eq_.G_F(z) >= level) {
      double hi = t;
      for (int it = 0; it < 80 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (eq_.G_F(elliptic(s, mid, theta)) < level ? lo : hi) = mid;
      }
      return elliptic(s, 0.5 * (lo + hi), theta);
    }
    lo = t;
    prev = z;
    t *= 1.25;
  }
  return std::nullopt;
}

std::optional<LevelCurve> LevelCurveTracer::try_trace(double rho, bool refine) const {
  LevelCurve out;
  out.rho = rho;
  const double level = std::log(rho);
  for (std::size_t j = 0; j < geom_.F.size(); ++j) {
    std::vector<double> th;
    std::vector<cplx> pts;
    for (int i = 0; i < kBaseRays; ++i) {
      th.push_back(kTwoPi * i / kBaseRays);
      const auto p = ray_point(j, th.back(), rho);
      if (!p) return std::nullopt;
      pts.push_back(*p);
    }
    if (refine) {
      const double h = diameter_bound(pts) / 256.0;
      for (bool again = true; again && static_cast<int>(pts.size()) < kMaxVertices;) {
        again = false;
        std::vector<double> th2;
        std::vector<cplx> pts2;
        for (std::size_t i = 0; i < pts.size(); ++i) {
          th2.push_back(th[i]);
          pts2.push_back(pts[i]);
          const std::size_t k = (i + 1) % pts.size();
          if (std::abs(pts[k] - pts[i]) > h && static_cast<int>(pts2.size() + pts.size() - i) < kMaxVertices) {
            const double tm = 0.5 * (th[i] + (k == 0 ? kTwoPi : th[k]));
            const auto p = ray_point(j, tm, rho);
            if (!p) return std::nullopt;
            th2.push_back(tm);
            pts2.push_back(*p);
            again = true;
          }
        }
        th.swap(th2);
        pts.swap(pts2);
      }
    }
    for (const auto& p : pts) {
      if (geom_.E.distance(p) < kClearance) return std::nullopt;
      out.max_defect = std::max(out.max_defect, std::abs(eq_.G_F(p) - level));
    }
    out.components.push_back(std::move(pts));
  }
  for (std::size_t a = 0; a < out.components.size(); ++a)
    for (std::size_t b = 0; b < out.components.size(); ++b) {
      if (a == b) continue;
      for (const auto& p : out.components[a])
        if (inside(out.components[b], p)) return std::nullopt;
      if (inside(out.components[a], geom_.F[b].mid())) return std::nullopt;
    }
  for (const auto& comp : out.components)
    if (inside(comp, 0.0)) return std::nullopt;
  return out;
}

double LevelCurveTracer::r_geom() const {
  std::call_once(once_, [this] {
    double lo = 0.0, hi = 0.125;
    while (hi < kMaxLogR && try_trace(std::exp(hi), false)) {
      lo = hi;
      hi *= 2.0;
    }
    if (hi >= kMaxLogR) {
      r_geom_ = std::exp(lo);
      return;
    }
    while (hi - lo > 1e-6 * std::max(1.0, hi)) {
      const double mid = 0.5 * (lo + hi);
      (try_trace(std::exp(mid), false) ? lo : hi) = mid;
    }
    r_geom_ = std::exp(lo);
  });
  return r_geom_;
}

LevelCurve LevelCurveTracer::trace(double rho) const {
  if (!(rho > 1.0) || !(rho < r_geom())) throw DomainError("rho outside (1, R_geom)");
  auto c = try_trace(rho, true);
  if (!c) throw DomainError("level curve components merge or reach E");
  return *c;
}

std::vector<cplx> LevelCurveTracer::sample(double rho, int count) const {
  if (!(rho > 1.0) || !(rho < r_geom())) throw DomainError("rho outside (1, R_geom)");
  if (count < 1) throw ValidationError("sample count must be positive");
  const int m = static_cast<int>(geom_.F.size());
  std::vector<cplx> out;
  for (int j = 0; j < m; ++j) {
    const int k = count / m + (j < count % m ? 1 : 0);
    for (int i = 0; i < k; ++i) {
      const auto p = ray_point(j, kTwoPi * (i + 0.5) / k, rho);
      if (!p) throw DomainError("level curve ray blocked");
      out.push_back(*p);
    }
  }
  return out;
}

Sheet2Region LevelCurveTracer::sheet2_region() const {
  auto eq = std::make_shared<EquilibriumResult>(eq_);
  return {[eq](cplx z) { return eq->G_F(z); }, std::log(0.95 * r_geom())};
}

double hausdorff_to_segment(const std::vector<cplx>& pts, const Segment& s) {
  double d = 0.0;
  for (const auto& p : pts) d = std::max(d, s.distance(p));
  for (int i = 0; i <= 200; ++i) {
    const cplx x(s.lo + (s.hi - s.lo) * i / 200.0, 0.0);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const cplx a = pts[k], b = pts[(k + 1) % pts.size()];
      const cplx ab = b - a;
      const double n2 = std::norm(ab);
      const double t = n2 == 0.0 ? 0.0 : std::clamp(std::real((x - a) * std::conj(ab)) / n2, 0.0, 1.0);
      best = std::min(best, std::abs(x - (a + t * ab)));
    }
    d = std::max(d, best);
  }
  return d;
}

}  // namespace hplab
