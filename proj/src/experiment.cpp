#include <algorithm>
#include <atomic>
#include <limits>
#include <optional>
#include <thread>

#include "hplab/branch.hpp"
#include "hplab/error.hpp"
#include "hplab/harness.hpp"
#include "hplab/level_curve.hpp"
#include "hplab/series.hpp"

namespace hplab {

namespace {

struct RhoSamples {
  double rho = 0.0;
  std::vector<cplx> points;
  std::string note;
};

HPRecord summarize(const HPSolution& s) {
  HPRecord h;
  h.kind = s.kind == HPKind::TypeI ? "type1" : "type2";
  h.n = s.n;
  h.precision_bits = s.precision_bits;
  h.retries = s.retries;
  h.rank = s.rank;
  h.nullspace_dim = s.nullspace_dim;
  h.min_pivot_log2 = s.min_relative_pivot_log2;
  h.vanishing_order = s.vanishing_order;
  h.remainder_orders = s.remainder_orders;
  h.required_order = s.required_order();
  h.order_lower_bound = s.order_is_lower_bound;
  h.defects = s.defects;
  for (int j = 0; j < 3; ++j) h.degrees[j] = s.polys[j].degree();
  return h;
}

RootRecord root_record(const std::string& label, const Polynomial& p, const RootSet& rs) {
  RootRecord r;
  r.label = label;
  r.degree = rs.degree();
  r.certified = rs.certified;
  r.converged = rs.converged;
  r.precision_bits = rs.precision_bits;
  r.sweeps = rs.sweeps;
  r.max_residual_log2 = rs.max_residual_log2();
  r.reconstruction_log2 = rs.degree() > 0 ? reconstruction_error_log2(p, rs) : -std::numeric_limits<double>::infinity();
  r.roots = rs.to_std();
  r.residual_log2 = rs.residual_log2;
  r.inclusion_log2 = rs.degree() > 0 ? inclusion_radii_log2(p, rs) : std::vector<double>{};
  return r;
}

RootSet roots_of(const Polynomial& p, long bits) {
  if (p.degree() < 1) {
    RootSet rs;
    rs.certified = rs.converged = true;
    rs.precision_bits = bits;
    return rs;
  }
  return find_roots(p, PrecisionContext(bits));
}

void record_error(NRecord& r, const std::string& stage, const std::exception& e) {
  if (r.status == "ok") {
    r.status = "error";
    if (dynamic_cast<const NumericError*>(&e))
      r.error_kind = "numeric";
    else if (dynamic_cast<const DomainError*>(&e))
      r.error_kind = "domain";
    else if (dynamic_cast<const ValidationError*>(&e))
      r.error_kind = "validation";
    else
      r.error_kind = "internal";
    r.error = stage + ": " + e.what();
  }
}

NRecord run_index(const ExperimentConfig& cfg, int n, const LabContext* lab, const std::vector<RhoSamples>& rhos) {
  NRecord r;
  r.n = n;
  std::optional<SeriesPair> series;
  try {
    series = build_series(cfg.spec, series_length_for_index(n), cfg.context_for(n));
  } catch (const std::exception& e) {
    record_error(r, "series", e);
    return r;
  }

  try {
    const HPSolution sol = solve_type1(series->f, series->f2, n, cfg.context_for(n));
    r.type1 = summarize(sol);
    std::array<RootSet, 3> rs;
    for (int j = 0; j < 3; ++j) {
      rs[j] = roots_of(sol.polys[j], sol.precision_bits);
      r.roots.push_back(root_record("Q" + std::to_string(j), sol.polys[j], rs[j]));
    }
    if (lab) {
      for (int j = 0; j < 3; ++j)
        r.discrepancies.push_back(zero_discrepancy("Q" + std::to_string(j), rs[j], n, lab->geom, lab->lambda_F));
      for (const auto& rho : rhos) {
        if (!rho.note.empty()) {
          RateReport rate;
          rate.rho = rho.rho;
          rate.admissible = false;
          rate.note = rho.note;
          r.rate.push_back(rate);
          SheetReport sh;
          sh.rho = rho.rho;
          sh.admissible = false;
          r.sheets.push_back(sh);
          continue;
        }
        r.rate.push_back(rate_check(sol, *lab, rho.rho, rho.points));
        r.sheets.push_back(sheet_remainder_diagnostics(sol, *lab, rho.rho, rho.points));
      }
    } else {
      r.symmetry = zero_symmetry(sol.polys[2], rs[2], sol.precision_bits);
    }
  } catch (const std::exception& e) {
    record_error(r, "type1", e);
  }

  if (!cfg.type2) return r;
  try {
    const HPSolution sol = solve_type2(series->f, series->f2, n, cfg.context_for(n));
    r.has_type2 = true;
    r.type2 = summarize(sol);
    const RootSet rs = roots_of(sol.polys[0], sol.precision_bits);
    r.roots.push_back(root_record("P", sol.polys[0], rs));
    if (lab) {
      r.type2_report = type2_check(sol, rs, *lab, cfg.test_points);
    } else {
      r.type2_report.discrepancy = std::numeric_limits<double>::quiet_NaN();
    }
  } catch (const std::exception& e) {
    record_error(r, "type2", e);
  }
  return r;
}

}  // namespace

RunRecord run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  RunRecord rec;
  rec.config = cfg.to_text();
  rec.mode = to_string(cfg.mode);

  std::optional<LabContext> lab;
  std::vector<RhoSamples> rhos;
  if (cfg.mode == Mode::VerifyReal) {
    LabContext L;
    L.spec = cfg.spec;
    L.geom = derive_geometry(cfg.spec);
    L.eq = solve_equilibrium(L.geom, cfg.equilibrium_nodes);
    const LevelCurveTracer tracer(L.eq, L.geom);
    L.r_geom = tracer.r_geom();
    L.region = tracer.sheet2_region();
    L.lambda_E = L.eq.lambda_E.atoms(cfg.measure_atoms);
    L.lambda_F = L.eq.lambda_F.atoms(std::max<int>(1, cfg.measure_atoms / static_cast<int>(L.geom.m())));

    auto& g = rec.global;
    g.has_equilibrium = true;
    g.nodes = cfg.equilibrium_nodes;
    g.w_E = L.eq.w_E;
    g.c = L.eq.c;
    g.residual = L.eq.residual;
    g.residual_half_nodes = solve_equilibrium(L.geom, cfg.equilibrium_nodes / 2 >= 16 ? cfg.equilibrium_nodes / 2 : 16).residual;
    g.balayage_residual = L.eq.balayage_residual;
    g.negative_density = L.eq.negative_density;
    g.r_geom = L.r_geom;
    for (const auto& s : L.geom.F) g.F.push_back({s.lo, s.hi});
    g.lambda_E.assign(L.eq.lambda_E.coeffs[0].data(), L.eq.lambda_E.coeffs[0].data() + L.eq.lambda_E.coeffs[0].size());
    for (const auto& c : L.eq.lambda_F.coeffs) g.lambda_F.emplace_back(c.data(), c.data() + c.size());
    g.measure_atoms = cfg.measure_atoms;

    for (double rho : cfg.rho_samples) {
      RhoSamples s;
      s.rho = rho;
      if (rho >= L.r_geom) {
        s.note = "rho is not below R_geom";
      } else {
        g.curves.push_back(tracer.trace(rho));
        s.points = tracer.sample(rho, cfg.rate_points);
      }
      rhos.push_back(std::move(s));
    }
    lab = std::move(L);
  } else {
    const BranchEvaluator be(cfg.spec, PrecisionContext(256));
    rec.global.branch_points = be.branch_points();
  }

  rec.runs.resize(cfg.n_grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < cfg.n_grid.size();)
      rec.runs[i] = run_index(cfg, cfg.n_grid[i], lab ? &*lab : nullptr, rhos);
  };
  const std::size_t threads =
      std::min<std::size_t>(cfg.n_grid.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rec;
}

}  // namespace hplab
