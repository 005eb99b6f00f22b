#include <cmath>
#include <fstream>
#include <limits>

#include "hplab/error.hpp"
#include "hplab/harness.hpp"

namespace hplab {

using json = nlohmann::ordered_json;

namespace {

// Non-finite doubles are stored as the strings "inf", "-inf", "nan".
json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double num(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ValidationError("malformed number in run record: " + j.dump());
}

json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::vector<double> nums(const json& j) {
  std::vector<double> v;
  for (const auto& x : j) v.push_back(num(x));
  return v;
}

json cnum(cplx z) { return json::array({num(z.real()), num(z.imag())}); }
cplx cnum(const json& j) { return {num(j.at(0)), num(j.at(1))}; }

json cnums(const std::vector<cplx>& v) {
  json a = json::array();
  for (cplx z : v) a.push_back(cnum(z));
  return a;
}

std::vector<cplx> cnums(const json& j) {
  std::vector<cplx> v;
  for (const auto& x : j) v.push_back(cnum(x));
  return v;
}

json hp(const HPRecord& h) {
  return {{"kind", h.kind},
          {"n", h.n},
          {"precision_bits", h.precision_bits},
          {"retries", h.retries},
          {"rank", h.rank},
          {"nullspace_dim", h.nullspace_dim},
          {"min_pivot_log2", num(h.min_pivot_log2)},
          {"vanishing_order", h.vanishing_order},
          {"remainder_orders", h.remainder_orders},
          {"required_order", h.required_order},
          {"order_lower_bound", h.order_lower_bound},
          {"defects", h.defects},
          {"degrees", h.degrees}};
}

HPRecord hp(const json& j) {
  HPRecord h;
  h.kind = j.at("kind").get<std::string>();
  h.n = j.at("n").get<int>();
  h.precision_bits = j.at("precision_bits").get<long>();
  h.retries = j.at("retries").get<int>();
  h.rank = j.at("rank").get<int>();
  h.nullspace_dim = j.at("nullspace_dim").get<int>();
  h.min_pivot_log2 = num(j.at("min_pivot_log2"));
  h.vanishing_order = j.at("vanishing_order").get<int>();
  h.remainder_orders = j.at("remainder_orders").get<std::array<int, 2>>();
  h.required_order = j.at("required_order").get<int>();
  h.order_lower_bound = j.at("order_lower_bound").get<bool>();
  h.defects = j.at("defects").get<std::array<int, 3>>();
  h.degrees = j.at("degrees").get<std::array<int, 3>>();
  return h;
}

json roots(const RootRecord& r) {
  return {{"label", r.label},
          {"degree", r.degree},
          {"certified", r.certified},
          {"converged", r.converged},
          {"precision_bits", r.precision_bits},
          {"sweeps", r.sweeps},
          {"max_residual_log2", num(r.max_residual_log2)},
          {"reconstruction_log2", num(r.reconstruction_log2)},
          {"roots", cnums(r.roots)},
          {"residual_log2", nums(r.residual_log2)},
          {"inclusion_log2", nums(r.inclusion_log2)}};
}

RootRecord roots(const json& j) {
  RootRecord r;
  r.label = j.at("label").get<std::string>();
  r.degree = j.at("degree").get<int>();
  r.certified = j.at("certified").get<bool>();
  r.converged = j.at("converged").get<bool>();
  r.precision_bits = j.at("precision_bits").get<long>();
  r.sweeps = j.at("sweeps").get<int>();
  r.max_residual_log2 = num(j.at("max_residual_log2"));
  r.reconstruction_log2 = num(j.at("reconstruction_log2"));
  r.roots = cnums(j.at("roots"));
  r.residual_log2 = nums(j.at("residual_log2"));
  r.inclusion_log2 = nums(j.at("inclusion_log2"));
  return r;
}

json disc(const DiscrepancyRecord& d) {
  return {{"label", d.label},
          {"value", num(d.value)},
          {"excluded_fraction", num(d.excluded_fraction)},
          {"kept", d.kept},
          {"total", d.total}};
}

DiscrepancyRecord disc(const json& j) {
  return {j.at("label").get<std::string>(), num(j.at("value")), num(j.at("excluded_fraction")),
          j.at("kept").get<int>(), j.at("total").get<int>()};
}

json rate(const RateReport& r) {
  json s = json::array();
  for (const auto& x : r.samples)
    s.push_back({{"z", cnum(x.z)},
                 {"predicted", num(x.predicted)},
                 {"measured", num(x.measured)},
                 {"rel_dev", num(x.rel_dev)},
                 {"log2_abs_q2", num(x.log2_abs_q2)},
                 {"log2_q2_normalized", num(x.log2_q2_normalized)},
                 {"skipped", x.skipped}});
  return {{"rho", num(r.rho)},
          {"admissible", r.admissible},
          {"note", r.note},
          {"median_rel_dev", num(r.median_rel_dev)},
          {"skip_rate", num(r.skip_rate)},
          {"samples", s}};
}

RateReport rate(const json& j) {
  RateReport r;
  r.rho = num(j.at("rho"));
  r.admissible = j.at("admissible").get<bool>();
  r.note = j.at("note").get<std::string>();
  r.median_rel_dev = num(j.at("median_rel_dev"));
  r.skip_rate = num(j.at("skip_rate"));
  for (const auto& x : j.at("samples"))
    r.samples.push_back({cnum(x.at("z")), num(x.at("predicted")), num(x.at("measured")), num(x.at("rel_dev")),
                         num(x.at("log2_abs_q2")), num(x.at("log2_q2_normalized")), x.at("skipped").get<bool>()});
  return r;
}

json sheets(const SheetReport& r) {
  json s = json::array();
  for (const auto& x : r.samples)
    s.push_back({{"z", cnum(x.z)},
                 {"log2_abs_R", nums(std::vector<double>(x.log2_abs_R.begin(), x.log2_abs_R.end()))},
                 {"identity_log2", num(x.identity_log2)},
                 {"ordered", x.ordered},
                 {"error", x.error}});
  return {{"rho", num(r.rho)},
          {"admissible", r.admissible},
          {"ordered_fraction", num(r.ordered_fraction)},
          {"max_identity_log2", num(r.max_identity_log2)},
          {"failures", r.failures},
          {"samples", s}};
}

SheetReport sheets(const json& j) {
  SheetReport r;
  r.rho = num(j.at("rho"));
  r.admissible = j.at("admissible").get<bool>();
  r.ordered_fraction = num(j.at("ordered_fraction"));
  r.max_identity_log2 = num(j.at("max_identity_log2"));
  r.failures = j.at("failures").get<int>();
  for (const auto& x : j.at("samples")) {
    SheetSample s;
    s.z = cnum(x.at("z"));
    const auto R = nums(x.at("log2_abs_R"));
    for (std::size_t k = 0; k < 3 && k < R.size(); ++k) s.log2_abs_R[k] = R[k];
    s.identity_log2 = num(x.at("identity_log2"));
    s.ordered = x.at("ordered").get<bool>();
    s.error = x.at("error").get<std::string>();
    r.samples.push_back(s);
  }
  return r;
}

json nrecord(const NRecord& r) {
  json j{{"n", r.n}, {"status", r.status}, {"error_kind", r.error_kind}, {"error", r.error}};
  j["type1"] = hp(r.type1);
  j["roots"] = json::array();
  for (const auto& x : r.roots) j["roots"].push_back(roots(x));
  j["discrepancies"] = json::array();
  for (const auto& x : r.discrepancies) j["discrepancies"].push_back(disc(x));
  j["rate"] = json::array();
  for (const auto& x : r.rate) j["rate"].push_back(rate(x));
  j["sheets"] = json::array();
  for (const auto& x : r.sheets) j["sheets"].push_back(sheets(x));
  j["symmetry"] = {{"max_excess_log2", num(r.symmetry.max_excess_log2)},
                   {"symmetric", r.symmetry.symmetric},
                   {"far_from_E_fraction", num(r.symmetry.far_from_E_fraction)}};
  j["has_type2"] = r.has_type2;
  if (r.has_type2) {
    j["type2"] = hp(r.type2);
    json ratios = json::array();
    for (const auto& s : r.type2_report.ratios)
      ratios.push_back({{"z", cnum(s.z)}, {"err1_log2", num(s.err1_log2)}, {"err2_log2", num(s.err2_log2)}});
    j["type2_report"] = {{"discrepancy", num(r.type2_report.discrepancy)}, {"ratios", ratios}};
  }
  return j;
}

NRecord nrecord(const json& j) {
  NRecord r;
  r.n = j.at("n").get<int>();
  r.status = j.at("status").get<std::string>();
  r.error_kind = j.at("error_kind").get<std::string>();
  r.error = j.at("error").get<std::string>();
  r.type1 = hp(j.at("type1"));
  for (const auto& x : j.at("roots")) r.roots.push_back(roots(x));
  for (const auto& x : j.at("discrepancies")) r.discrepancies.push_back(disc(x));
  for (const auto& x : j.at("rate")) r.rate.push_back(rate(x));
  for (const auto& x : j.at("sheets")) r.sheets.push_back(sheets(x));
  const auto& s = j.at("symmetry");
  r.symmetry = {num(s.at("max_excess_log2")), s.at("symmetric").get<bool>(), num(s.at("far_from_E_fraction"))};
  r.has_type2 = j.at("has_type2").get<bool>();
  if (r.has_type2) {
    r.type2 = hp(j.at("type2"));
    const auto& c = j.at("type2_report");
    r.type2_report.discrepancy = num(c.at("discrepancy"));
    for (const auto& x : c.at("ratios"))
      r.type2_report.ratios.push_back({cnum(x.at("z")), num(x.at("err1_log2")), num(x.at("err2_log2"))});
  }
  return r;
}

json global(const GlobalRecord& g) {
  json j{{"has_equilibrium", g.has_equilibrium}};
  if (g.has_equilibrium) {
    json F = json::array();
    for (const auto& s : g.F) F.push_back(nums(std::vector<double>{s[0], s[1]}));
    json lf = json::array();
    for (const auto& c : g.lambda_F) lf.push_back(nums(c));
    json curves = json::array();
    for (const auto& c : g.curves) {
      json comps = json::array();
      for (const auto& comp : c.components) comps.push_back(cnums(comp));
      curves.push_back({{"rho", num(c.rho)}, {"max_defect", num(c.max_defect)}, {"components", comps}});
    }
    j.update({{"nodes", g.nodes},
              {"w_E", num(g.w_E)},
              {"c", num(g.c)},
              {"residual", num(g.residual)},
              {"residual_half_nodes", num(g.residual_half_nodes)},
              {"balayage_residual", num(g.balayage_residual)},
              {"negative_density", g.negative_density},
              {"r_geom", num(g.r_geom)},
              {"F", F},
              {"lambda_E", nums(g.lambda_E)},
              {"lambda_F", lf},
              {"measure_atoms", g.measure_atoms},
              {"level_curves", curves}});
  }
  j["branch_points"] = cnums(g.branch_points);
  return j;
}

GlobalRecord global(const json& j) {
  GlobalRecord g;
  g.has_equilibrium = j.at("has_equilibrium").get<bool>();
  if (g.has_equilibrium) {
    g.nodes = j.at("nodes").get<int>();
    g.w_E = num(j.at("w_E"));
    g.c = num(j.at("c"));
    g.residual = num(j.at("residual"));
    g.residual_half_nodes = num(j.at("residual_half_nodes"));
    g.balayage_residual = num(j.at("balayage_residual"));
    g.negative_density = j.at("negative_density").get<bool>();
    g.r_geom = num(j.at("r_geom"));
    for (const auto& s : j.at("F")) g.F.push_back({num(s.at(0)), num(s.at(1))});
    g.lambda_E = nums(j.at("lambda_E"));
    for (const auto& c : j.at("lambda_F")) g.lambda_F.push_back(nums(c));
    g.measure_atoms = j.at("measure_atoms").get<int>();
    for (const auto& c : j.at("level_curves")) {
      LevelCurve lc;
      lc.rho = num(c.at("rho"));
      lc.max_defect = num(c.at("max_defect"));
      for (const auto& comp : c.at("components")) lc.components.push_back(cnums(comp));
      g.curves.push_back(std::move(lc));
    }
  }
  g.branch_points = cnums(j.at("branch_points"));
  return g;
}

}  // namespace

const NRecord* RunRecord::find(int n) const {
  for (const auto& r : runs)
    if (r.n == n) return &r;
  return nullptr;
}

const RootRecord* RunRecord::roots_of(const NRecord& r, std::string_view label) {
  for (const auto& x : r.roots)
    if (x.label == label) return &x;
  return nullptr;
}

void to_json(json& j, const RunRecord& r) {
  j = json{{"schema", r.schema}, {"mode", r.mode}, {"config", r.config}};
  j["global"] = global(r.global);
  j["runs"] = json::array();
  for (const auto& x : r.runs) j["runs"].push_back(nrecord(x));
}

void from_json(const json& j, RunRecord& r) {
  try {
    r.schema = j.at("schema").get<std::string>();
    if (r.schema != "hplab.run/1") throw ValidationError("unsupported run record schema '" + r.schema + "'");
    r.mode = j.at("mode").get<std::string>();
    r.config = j.at("config").get<std::string>();
    r.global = global(j.at("global"));
    r.runs.clear();
    for (const auto& x : j.at("runs")) r.runs.push_back(nrecord(x));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed run record: ") + e.what());
  }
}

RunRecord load_record(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot read " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError(file.string() + ": " + e.what());
  }
  RunRecord r;
  from_json(j, r);
  return r;
}

}  // namespace hplab
