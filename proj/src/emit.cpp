#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hplab/error.hpp"
#include "hplab/harness.hpp"

namespace hplab {

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string f3(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + p.string());
  out << text;
  if (!out) throw ValidationError("write failed for " + p.string());
}

ChebyshevMeasure rebuild(const std::vector<Segment>& segs, const std::vector<std::vector<double>>& coeffs) {
  ChebyshevMeasure m;
  m.segments = segs;
  for (const auto& c : coeffs) m.coeffs.push_back(Eigen::Map<const Eigen::VectorXd>(c.data(), c.size()));
  return m;
}

std::string zeros_csv(const NRecord& r) {
  std::string s = "poly,re,im,residual_log2\n";
  for (const auto& rr : r.roots)
    for (std::size_t i = 0; i < rr.roots.size(); ++i)
      s += rr.label + "," + g17(rr.roots[i].real()) + "," + g17(rr.roots[i].imag()) + "," +
           g17(rr.residual_log2[i]) + "\n";
  return s;
}

std::string measures_csv(const RunRecord& rec) {
  std::string s = "label,location_re,location_im,weight\n";
  const auto& g = rec.global;
  auto put = [&](const std::string& label, const DiscreteMeasure& mu) {
    for (const auto& a : mu.atoms) s += label + "," + g17(a.z.real()) + "," + g17(a.z.imag()) + "," + g17(a.weight) + "\n";
  };
  if (g.has_equilibrium) {
    std::vector<Segment> F;
    for (const auto& f : g.F) F.push_back({f[0], f[1]});
    put("lambda_E", rebuild({Segment{-1.0, 1.0}}, {g.lambda_E}).atoms(g.measure_atoms));
    put("lambda_F", rebuild(F, g.lambda_F).atoms(std::max<int>(1, g.measure_atoms / static_cast<int>(F.size()))));
  }
  for (const auto& r : rec.runs) {
    for (const auto& rr : r.roots) {
      if (rr.label != "Q2" && rr.label != "P") continue;
      const double w = 1.0 / (rr.label == "P" ? 2 * r.n : r.n);
      DiscreteMeasure mu;
      for (cplx z : rr.roots) mu.atoms.push_back({z, w});
      put("chi_" + rr.label + "_n" + std::to_string(r.n), mu);
    }
  }
  return s;
}

std::string curves_csv(const RunRecord& rec) {
  std::string s = "rho,component,re,im\n";
  for (const auto& c : rec.global.curves)
    for (std::size_t k = 0; k < c.components.size(); ++k)
      for (cplx z : c.components[k]) s += g17(c.rho) + "," + std::to_string(k) + "," + g17(z.real()) + "," + g17(z.imag()) + "\n";
  return s;
}

std::string scatter_svg(const RunRecord& rec, const NRecord& r) {
  const auto& g = rec.global;
  const RootRecord* q2 = RunRecord::roots_of(r, "Q2");
  const RootRecord* p = RunRecord::roots_of(r, "P");
  double x0 = -1.0, x1 = 1.0, y0 = -0.25, y1 = 0.25;
  auto grow = [&](cplx z) {
    x0 = std::min(x0, z.real()), x1 = std::max(x1, z.real());
    y0 = std::min(y0, z.imag()), y1 = std::max(y1, z.imag());
  };
  for (const auto& f : g.F) grow(f[0]), grow(f[1]);
  for (cplx b : g.branch_points) grow(b);
  for (const auto* rr : {q2, p})
    if (rr)
      for (cplx z : rr->roots) grow(z);
  const double pad = 0.08 * std::max(x1 - x0, y1 - y0);
  x0 -= pad, x1 += pad, y0 -= pad, y1 += pad;
  // Keep the real axis in the middle so conjugate pairs mirror exactly.
  const double ym = std::max(std::abs(y0), std::abs(y1));
  y0 = -ym, y1 = ym;
  const double width = 800.0;
  const double scale = width / (x1 - x0);
  const double height = scale * (y1 - y0);
  auto X = [&](double x) { return f3((x - x0) * scale); };
  auto Y = [&](double y) { return f3((y1 - y) * scale); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f3(width) << "\" height=\"" << f3(height)
     << "\" viewBox=\"0 0 " << f3(width) << " " << f3(height) << "\">\n";
  os << "<title>zeros at n = " << r.n << " (" << rec.mode << ")</title>\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"0\" y1=\"" << Y(0.0) << "\" x2=\"" << f3(width) << "\" y2=\"" << Y(0.0)
     << "\" stroke=\"#ccc\" stroke-width=\"0.5\"/>\n";
  os << "<line class=\"E\" x1=\"" << X(-1.0) << "\" y1=\"" << Y(0.0) << "\" x2=\"" << X(1.0) << "\" y2=\"" << Y(0.0)
     << "\" stroke=\"black\" stroke-width=\"3\"/>\n";
  for (const auto& f : g.F)
    os << "<line class=\"F\" x1=\"" << X(f[0]) << "\" y1=\"" << Y(0.0) << "\" x2=\"" << X(f[1]) << "\" y2=\"" << Y(0.0)
       << "\" stroke=\"blue\" stroke-width=\"3\"/>\n";
  for (cplx b : g.branch_points)
    os << "<path class=\"branch\" d=\"M" << X(b.real()) << " " << Y(b.imag()) << " m-5 -5 l10 10 m0 -10 l-10 10\""
       << " stroke=\"blue\" stroke-width=\"1.5\"/>\n";
  if (p)
    for (cplx z : p->roots)
      os << "<circle class=\"P\" cx=\"" << X(z.real()) << "\" cy=\"" << Y(z.imag()) << "\" r=\"2\" fill=\"black\"/>\n";
  if (q2)
    for (cplx z : q2->roots)
      os << "<circle class=\"Q2\" cx=\"" << X(z.real()) << "\" cy=\"" << Y(z.imag()) << "\" r=\"2.5\" fill=\"red\"/>\n";
  os << "<text x=\"10\" y=\"20\" font-family=\"monospace\" font-size=\"12\">n = " << r.n
     << "  red: Q2 zeros  black: P zeros  blue: F</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace

void emit_outputs(const RunRecord& record, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create " + dir.string() + ": " + ec.message());
  nlohmann::ordered_json j;
  to_json(j, record);
  write_file(dir / "results.json", j.dump(2) + "\n");
  write_file(dir / "measures.csv", measures_csv(record));
  if (record.global.has_equilibrium) write_file(dir / "level_curves.csv", curves_csv(record));
  for (const auto& r : record.runs) {
    const std::string n = std::to_string(r.n);
    write_file(dir / ("zeros_" + n + ".csv"), zeros_csv(r));
    write_file(dir / ("scatter_" + n + ".svg"), scatter_svg(record, r));
  }
}

}  // namespace hplab
