#include <cstdio>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "hplab/error.hpp"
#include "hplab/harness.hpp"
#include "hplab/series.hpp"

using namespace hplab;
using json = nlohmann::ordered_json;

namespace {

struct Options {
  std::string config;
  std::optional<int> n;
  std::optional<long> bits;
  std::string out;
  std::string mode;
  std::string record;
};

ExperimentConfig make_config(const Options& o, std::optional<Mode> implied, bool sweep = false) {
  ExperimentConfig cfg;
  if (!o.config.empty()) {
    cfg = load_config(o.config);
  } else if (implied == Mode::ExploreComplex || parse_mode(o.mode.empty() ? "verify-real" : o.mode) == Mode::ExploreComplex) {
    cfg = ExperimentConfig::explore();
  }
  if (!o.mode.empty()) cfg.mode = parse_mode(o.mode);
  else if (implied) cfg.mode = *implied;
  if (o.n && sweep) cfg.n_grid = {*o.n};
  if (o.bits) cfg.precision_bits = *o.bits;
  if (!o.out.empty()) cfg.output_dir = o.out;
  cfg.validate();
  return cfg;
}

int single_n(const Options& o, const ExperimentConfig& cfg) {
  if (o.n) {
    if (*o.n < 0) throw ValidationError("--n must be >= 0");
    return *o.n;
  }
  return cfg.n_grid.front();
}

json series_json(const LaurentSeries& s, int count) {
  json a = json::array();
  for (int e = s.top_exponent(), k = 0; k < count && e >= s.lowest_known_exponent(); --e, ++k)
    a.push_back({{"exponent", e}, {"re", s.coeff(e).re.to_string(30)}, {"im", s.coeff(e).im.to_string(30)}});
  return a;
}

json poly_json(const Polynomial& p) {
  json a = json::array();
  for (const auto& c : p.coefficients()) a.push_back(json::array({c.re.to_string(30), c.im.to_string(30)}));
  return a;
}

int cmd_series(const Options& o) {
  const auto cfg = make_config(o, std::nullopt);
  const int n = single_n(o, cfg);
  const auto s = build_series(cfg.spec, series_length_for_index(n), cfg.context_for(n));
  json j{{"n", n}, {"length", series_length_for_index(n)}, {"f", series_json(s.f, series_length_for_index(n))},
         {"f2", series_json(s.f2, series_length_for_index(n))}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_hp(const Options& o, bool type1) {
  const auto cfg = make_config(o, std::nullopt);
  const int n = single_n(o, cfg);
  const auto s = build_series(cfg.spec, series_length_for_index(n), cfg.context_for(n));
  const auto sol = type1 ? solve_type1(s.f, s.f2, n, cfg.context_for(n)) : solve_type2(s.f, s.f2, n, cfg.context_for(n));
  json j{{"kind", type1 ? "type1" : "type2"},
         {"n", n},
         {"precision_bits", sol.precision_bits},
         {"retries", sol.retries},
         {"rank", sol.rank},
         {"nullspace_dim", sol.nullspace_dim},
         {"vanishing_order", sol.vanishing_order},
         {"remainder_orders", sol.remainder_orders},
         {"required_order", sol.required_order()},
         {"defects", sol.defects}};
  j["polys"] = json::array();
  for (const auto& p : sol.polys) j["polys"].push_back(poly_json(p));
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_zeros(const Options& o) {
  const auto cfg = make_config(o, std::nullopt);
  const int n = single_n(o, cfg);
  const auto s = build_series(cfg.spec, series_length_for_index(n), cfg.context_for(n));
  const auto sol = solve_type1(s.f, s.f2, n, cfg.context_for(n));
  const std::filesystem::path dir = cfg.output_dir;
  std::filesystem::create_directories(dir);
  std::FILE* out = std::fopen((dir / ("zeros_" + std::to_string(n) + ".csv")).c_str(), "w");
  if (!out) throw ValidationError("cannot write to " + dir.string());
  std::fprintf(out, "poly,re,im,residual_log2\n");
  bool ok = true;
  for (int j = 0; j < 3; ++j) {
    if (sol.polys[j].degree() < 1) continue;
    const auto rs = find_roots(sol.polys[j], PrecisionContext(sol.precision_bits));
    ok = ok && rs.certified;
    const auto z = rs.to_std();
    for (std::size_t i = 0; i < z.size(); ++i)
      std::fprintf(out, "Q%d,%.17g,%.17g,%.17g\n", j, z[i].real(), z[i].imag(), rs.residual_log2[i]);
    std::printf("Q%d: degree %d, certified %s, max residual 2^%.1f\n", j, rs.degree(), rs.certified ? "yes" : "no",
                rs.max_residual_log2());
  }
  std::fclose(out);
  return ok ? 0 : 2;
}

int cmd_equilibrium(const Options& o) {
  const auto cfg = make_config(o, Mode::VerifyReal);
  const auto geom = derive_geometry(cfg.spec);
  const auto eq = solve_equilibrium(geom, cfg.equilibrium_nodes);
  const LevelCurveTracer tracer(eq, geom);
  json F = json::array();
  for (const auto& s : geom.F) F.push_back({s.lo, s.hi});
  json j{{"nodes", eq.nodes},
         {"F", F},
         {"w_E", eq.w_E},
         {"c", eq.c},
         {"residual", eq.residual},
         {"balayage_residual", eq.balayage_residual},
         {"negative_density", eq.negative_density},
         {"r_geom", tracer.r_geom()}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_run(const Options& o, Mode mode) {
  const auto cfg = make_config(o, mode, true);
  const auto rec = run_experiment(cfg);
  emit_outputs(rec, cfg.output_dir);
  int code = 0;
  for (const auto& r : rec.runs) {
    std::printf("n=%d %s%s%s\n", r.n, r.status.c_str(), r.error.empty() ? "" : ": ", r.error.c_str());
    if (r.status != "ok") code = std::max(code, r.error_kind == "numeric" ? 2 : 1);
  }
  std::printf("outputs in %s\n", cfg.output_dir.c_str());
  return code;
}

int cmd_emit(const Options& o) {
  const auto rec = load_record(o.record);
  const std::filesystem::path dir = o.out.empty() ? std::filesystem::path(o.record).parent_path() : std::filesystem::path(o.out);
  emit_outputs(rec, dir.empty() ? "." : dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hermite-Pade numerical lab"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "key = value config file")->check(CLI::ExistingFile);
  app.add_option("--n", o.n, "single index n (overrides n_grid)");
  app.add_option("--precision-bits", o.bits, "working precision in bits");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--mode", o.mode, "verify-real | explore-complex");
  app.fallthrough();

  auto* series = app.add_subcommand("series", "Laurent coefficients of f and f^2 at infinity");
  auto* hp1 = app.add_subcommand("hp1", "type I Hermite-Pade polynomials");
  auto* hp2 = app.add_subcommand("hp2", "type II Hermite-Pade polynomials");
  auto* zeros = app.add_subcommand("zeros", "zeros of the type I polynomials");
  auto* equilibrium = app.add_subcommand("equilibrium", "equilibrium measure and balayage");
  auto* verify = app.add_subcommand("verify", "n-sweep against the predicted asymptotics");
  auto* explore = app.add_subcommand("explore", "n-sweep for conjugate parameter pairs");
  auto* emit = app.add_subcommand("emit", "rewrite the output files from results.json");
  emit->add_option("record", o.record, "results.json")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*series) return cmd_series(o);
    if (*hp1) return cmd_hp(o, true);
    if (*hp2) return cmd_hp(o, false);
    if (*zeros) return cmd_zeros(o);
    if (*equilibrium) return cmd_equilibrium(o);
    if (*verify) return cmd_run(o, Mode::VerifyReal);
    if (*explore) return cmd_run(o, Mode::ExploreComplex);
    if (*emit) return cmd_emit(o);
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
