#include "hplab/branch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hplab/error.hpp"

namespace hplab {

namespace {

using cd = std::complex<double>;

std::string fmt(cd z) {
  std::ostringstream os;
  os.precision(12);
  os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
  return os.str();
}

double dist_to_segment(cd p, cd a, cd b) {
  const cd ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double s = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + s * ab));
}

struct ComplexPolicy {
  mp::Prec prec;
  mp::Complex lit(const ComplexLiteral& c) const { return c.value(prec); }
  mp::Complex add(const mp::Complex& a, const mp::Complex& b) const { return a + b; }
  mp::Complex sub(const mp::Complex& a, const mp::Complex& b) const { return a - b; }
  mp::Complex mul(const mp::Complex& a, const mp::Complex& b) const { return a * b; }
  mp::Complex div(const mp::Complex& a, const mp::Complex& b) const {
    if (b.is_zero() || b.log2_mag() < -double(prec) / 2.0) throw DomainError("pole");
    return a / b;
  }
};

}  // namespace

ZhukovskiiPair eval_inverse_zhukovskii(const mp::Complex& z, const PrecisionContext& ctx) {
  const mp::Prec prec = ctx.precision_bits;
  const mp::Complex zz = z.with_precision(prec);
  const double tol = -double(prec) / 2.0;
  if ((zz.im.is_zero() || zz.im.log2_abs() < tol) && mp::abs(zz.re) <= mp::Real(1L, prec))
    throw DomainError("z = " + fmt(z.to_std()) + " lies on the cut E = [-1, 1]");
  const mp::Complex one(1L, prec);
  mp::Complex phi = zz + mp::sqrt(zz - one) * mp::sqrt(zz + one);
  mp::Complex inv = one / phi;
  return {std::move(phi), std::move(inv)};
}

BranchEvaluator::BranchEvaluator(FunctionSpec spec, PrecisionContext ctx, std::optional<Sheet2Region> region,
                                 double clearance_factor)
    : spec_(std::move(spec)), ctx_(ctx), region_(std::move(region)) {
  spec_.validate();
  ctx_.validate();
  const mp::Prec prec = ctx_.precision_bits;
  sigma_ = {cd(-1.0), cd(1.0)};
  for (const auto& p : spec_.pairs) {
    A_.push_back(p.A.value(prec));
    B_.push_back(p.B.value(prec));
    Ad_.push_back(p.A.to_std());
    Bd_.push_back(p.B.to_std());
    if (!p.is_real() && std::abs(Ad_.back().real()) <= 1.0)
      throw ValidationError("conjugate pair with |Re A| <= 1: the cut [A, B] meets the unit disk");
    sigma_.push_back(joukowski(Ad_.back()));
    sigma_.push_back(joukowski(Bd_.back()));
  }
  double diam = 0.0;
  for (auto a : sigma_)
    for (auto b : sigma_) diam = std::max(diam, std::abs(a - b));
  clearance_ = clearance_factor * diam;

  BranchValue start = branch_value(mp::Complex(cd(0.0, 2.0), prec), 0);
  anchor_.assign(spec_.m(), 1);
  BranchValue end = continue_along_path({cd(0.0, 2.0), cd(0.0, -2.0)}, start);
  if (end.branch != ZhukovskiiBranch::Outer)
    throw NumericError("sign anchor continuation did not reach the outer branch");
  anchor_ = end.signs;
}

mp::Complex BranchEvaluator::apply_expression(const mp::Complex& z, const mp::Complex& w) const {
  ComplexPolicy policy{static_cast<mp::Prec>(ctx_.precision_bits)};
  try {
    return evaluate(spec_.expression.root(), z, w, policy);
  } catch (const DomainError&) {
    throw DomainError("f has a pole at z = " + fmt(z.to_std()));
  }
}

BranchValue BranchEvaluator::value_at(const mp::Complex& z, const mp::Complex& t, ZhukovskiiBranch branch,
                                      std::vector<int> signs) const {
  const mp::Prec prec = ctx_.precision_bits;
  mp::Complex w(1L, prec);
  for (std::size_t j = 0; j < A_.size(); ++j) {
    mp::Complex root = mp::sqrt((A_[j] - t) / (B_[j] - t));
    if (signs[j] < 0) root = -root;
    w *= root;
  }
  BranchValue bv{apply_expression(z, w), w, branch, std::move(signs)};
  return bv;
}

BranchValue BranchEvaluator::branch_value(const mp::Complex& z, int sheet) const {
  if (sheet < 0 || sheet > 2) throw ValidationError("sheet index must be 0, 1 or 2");
  const auto zp = eval_inverse_zhukovskii(z, ctx_);
  if (sheet == 0) return value_at(z, zp.phi_inv, ZhukovskiiBranch::Inner, std::vector<int>(spec_.m(), 1));

  const cd td = zp.phi.to_std();
  for (std::size_t j = 0; j < Ad_.size(); ++j) {
    const double scale = std::max(std::abs(Ad_[j]), std::abs(Bd_[j]));
    if (dist_to_segment(td, Ad_[j], Bd_[j]) <= 1e-14 * scale)
      throw DomainError("z = " + fmt(z.to_std()) + " lies on the cut F_" + std::to_string(j + 1));
  }
  std::vector<int> signs = anchor_;
  if (sheet == 2) {
    if (!region_) throw DomainError("sheet 2 needs the level-curve region of G_F^{λ_E}");
    const double g = region_->green(z.to_std());
    if (!(g <= region_->log_limit))
      throw DomainError("z = " + fmt(z.to_std()) + " is outside the sheet-2 region (G_F = " + std::to_string(g) +
                        " > " + std::to_string(region_->log_limit) + ")");
    if (!signs.empty()) signs[0] = -signs[0];
  }
  return value_at(z, zp.phi, ZhukovskiiBranch::Outer, std::move(signs));
}

mp::Complex BranchEvaluator::eval_sheet(const mp::Complex& z, int sheet) const {
  return branch_value(z, sheet).value;
}

void BranchEvaluator::check_clearance(cd a, cd b) const {
  for (auto s : sigma_)
    if (dist_to_segment(s, a, b) < clearance_)
      throw DomainError("path segment " + fmt(a) + " -> " + fmt(b) + " passes within " + std::to_string(clearance_) +
                        " of the branch point " + fmt(s));
}

BranchValue BranchEvaluator::continue_along_path(const std::vector<cd>& path, const BranchValue& start) const {
  if (path.empty()) throw ValidationError("empty path");
  if (start.signs.size() != spec_.m()) throw ValidationError("start value has the wrong number of signs");
  const std::size_t m = spec_.m();

  cd t = path.front() + std::sqrt(path.front() - 1.0) * std::sqrt(path.front() + 1.0);
  if (start.branch == ZhukovskiiBranch::Inner) t = 1.0 / t;
  std::vector<cd> q(m), s(m);
  for (std::size_t j = 0; j < m; ++j) {
    q[j] = (Ad_[j] - t) / (Bd_[j] - t);
    s[j] = double(start.signs[j]) * std::sqrt(q[j]);
  }

  constexpr int kMaxDepth = 40;
  constexpr double kMaxPhase = std::numbers::pi / 2.0;
  // Advances (t, q, s) from za to zb, bisecting the step when ambiguous.
  std::function<void(cd, cd, int)> step = [&](cd za, cd zb, int depth) {
    const cd root = std::sqrt(zb - 1.0) * std::sqrt(zb + 1.0);
    const cd r1 = zb + root, r2 = zb - root;
    const cd tn = std::abs(r1 - t) <= std::abs(r2 - t) ? r1 : r2;
    bool refine = std::abs(tn - t) > 0.25 * std::abs(r1 - r2) || std::abs(tn - t) > 0.2 * std::abs(t);
    std::vector<cd> qn(m);
    for (std::size_t j = 0; j < m && !refine; ++j) {
      qn[j] = (Ad_[j] - tn) / (Bd_[j] - tn);
      if (std::abs(std::arg(qn[j] / q[j])) >= kMaxPhase) refine = true;
    }
    if (refine) {
      if (depth >= kMaxDepth) throw NumericError("continuation step refinement exceeded its budget near " + fmt(zb));
      const cd mid = 0.5 * (za + zb);
      step(za, mid, depth + 1);
      step(mid, zb, depth + 1);
      return;
    }
    t = tn;
    for (std::size_t j = 0; j < m; ++j) {
      const cd p = std::sqrt(qn[j]);
      s[j] = std::abs(p - s[j]) <= std::abs(p + s[j]) ? p : -p;
      q[j] = qn[j];
    }
  };
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    check_clearance(path[k], path[k + 1]);
    step(path[k], path[k + 1], 0);
  }

  const mp::Prec prec = ctx_.precision_bits;
  const mp::Complex z(path.back(), prec);
  const auto zp = eval_inverse_zhukovskii(z, ctx_);
  const bool outer = std::abs(zp.phi.to_std() - t) <= std::abs(zp.phi_inv.to_std() - t);
  std::vector<int> signs(m);
  const mp::Complex& tm = outer ? zp.phi : zp.phi_inv;
  const cd tf = tm.to_std();
  for (std::size_t j = 0; j < m; ++j) {
    const cd principal = std::sqrt((Ad_[j] - tf) / (Bd_[j] - tf));
    signs[j] = std::abs(principal - s[j]) <= std::abs(principal + s[j]) ? 1 : -1;
  }
  return value_at(z, tm, outer ? ZhukovskiiBranch::Outer : ZhukovskiiBranch::Inner, std::move(signs));
}

mp::Complex eval_sheet(const FunctionSpec& spec, const mp::Complex& z, int sheet, const PrecisionContext& ctx) {
  return BranchEvaluator(spec, ctx).eval_sheet(z, sheet);
}

}  // namespace hplab
