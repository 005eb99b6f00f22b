#include <cstdio>
#include <fstream>
#include <sstream>

#include "hplab/error.hpp"
#include "hplab/harness.hpp"

namespace hplab {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt(cplx z) {
  if (z.imag() == 0.0) return fmt(z.real());
  return fmt(z.real()) + (z.imag() < 0 ? "" : "+") + fmt(z.imag()) + "i";
}

template <class T, class F>
std::string join(const std::vector<T>& v, F&& f) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + f(v[i]);
  return s;
}

long to_long(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ValidationError("line " + std::to_string(line) + ": expected an integer, got '" + v + "'");
  }
}

double to_double(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ValidationError("line " + std::to_string(line) + ": expected a number, got '" + v + "'");
  }
}

bool to_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError("line " + std::to_string(line) + ": expected true or false, got '" + v + "'");
}

}  // namespace

std::string to_string(Mode m) { return m == Mode::VerifyReal ? "verify-real" : "explore-complex"; }

Mode parse_mode(std::string_view text) {
  if (text == "verify-real") return Mode::VerifyReal;
  if (text == "explore-complex") return Mode::ExploreComplex;
  throw ValidationError("unknown mode '" + std::string(text) + "' (verify-real or explore-complex)");
}

void ExperimentConfig::validate() const {
  const Regime regime = spec.validate();
  if (mode == Mode::VerifyReal && regime != Regime::Real)
    throw ValidationError("verify-real mode needs real parameters A_j < B_j");
  if (mode == Mode::ExploreComplex && regime != Regime::ConjugatePairs)
    throw ValidationError("explore-complex mode needs conjugate parameter pairs");
  if (mode == Mode::VerifyReal && spec.m() == 0) throw ValidationError("verify-real mode needs at least one pair");
  if (n_grid.empty()) throw ValidationError("n_grid is empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) throw ValidationError("n_grid entries must be positive");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw ValidationError("n_grid must be strictly increasing");
  }
  for (double r : rho_samples)
    if (!(r > 1.0)) throw ValidationError("rho_samples must exceed 1");
  if (precision_bits != 0 && precision_bits < 64) throw ValidationError("precision_bits must be 0 or at least 64");
  PrecisionContext(256, retry_factor, max_retries).validate();
  if (equilibrium_nodes < 16) throw ValidationError("equilibrium_nodes must be at least 16");
  if (measure_atoms < 100) throw ValidationError("measure_atoms must be at least 100");
  if (rate_points < 1) throw ValidationError("rate_points must be positive");
  if (output_dir.empty()) throw ValidationError("output_dir is empty");
}

PrecisionContext ExperimentConfig::context_for(int n) const {
  return PrecisionContext(precision_bits > 0 ? precision_bits : PrecisionContext::default_bits_for_index(n),
                          retry_factor, max_retries);
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream os;
  os << "mode = " << to_string(mode) << "\n";
  for (const auto& p : spec.pairs) {
    auto lit = [](const ComplexLiteral& c) {
      if (c.is_real()) return c.re;
      return c.re + (c.im[0] == '-' ? "" : "+") + c.im + "i";
    };
    os << "pair = " << lit(p.A) << ", " << lit(p.B) << "\n";
  }
  os << "expression = " << spec.expression.to_string() << "\n";
  os << "n_grid = " << join(n_grid, [](int n) { return std::to_string(n); }) << "\n";
  os << "rho_samples = " << join(rho_samples, [](double r) { return fmt(r); }) << "\n";
  os << "test_points = " << join(test_points, [](cplx z) { return fmt(z); }) << "\n";
  os << "precision_bits = " << precision_bits << "\n";
  os << "retry_factor = " << retry_factor << "\n";
  os << "max_retries = " << max_retries << "\n";
  os << "equilibrium_nodes = " << equilibrium_nodes << "\n";
  os << "measure_atoms = " << measure_atoms << "\n";
  os << "rate_points = " << rate_points << "\n";
  os << "type2 = " << (type2 ? "true" : "false") << "\n";
  os << "output_dir = " << output_dir << "\n";
  return os.str();
}

ExperimentConfig ExperimentConfig::reference() { return ExperimentConfig{}; }

ExperimentConfig ExperimentConfig::explore() {
  ExperimentConfig c;
  c.mode = Mode::ExploreComplex;
  c.spec.pairs = {{parse_complex_literal("2+1.5i"), parse_complex_literal("2-1.5i")},
                  {parse_complex_literal("-1.5+2i"), parse_complex_literal("-1.5-2i")}};
  c.spec.expression = parse_expression("w+1/w");
  c.n_grid = {20, 40, 80};
  c.rho_samples.clear();
  c.output_dir = "hplab_explore";
  return c;
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  bool pairs_seen = false;
  int line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const int ln = line_no;
    auto list = [&] {
      auto parts = split(value, ',');
      if (parts.size() == 1 && parts[0].empty()) parts.clear();
      return parts;
    };
    try {
      if (key == "mode") {
        cfg.mode = parse_mode(value);
      } else if (key == "pair") {
        const auto ab = list();
        if (ab.size() != 2) throw ValidationError("pair needs two values 'A, B'");
        if (!pairs_seen) cfg.spec.pairs.clear();
        pairs_seen = true;
        cfg.spec.pairs.push_back({parse_complex_literal(ab[0]), parse_complex_literal(ab[1])});
      } else if (key == "expression") {
        cfg.spec.expression = parse_expression(value);
      } else if (key == "n_grid") {
        cfg.n_grid.clear();
        for (const auto& s : list()) cfg.n_grid.push_back(static_cast<int>(to_long(s, ln)));
      } else if (key == "rho_samples") {
        cfg.rho_samples.clear();
        for (const auto& s : list()) cfg.rho_samples.push_back(to_double(s, ln));
      } else if (key == "test_points") {
        cfg.test_points.clear();
        for (const auto& s : list()) cfg.test_points.push_back(parse_complex_literal(s).to_std());
      } else if (key == "precision_bits") {
        cfg.precision_bits = to_long(value, ln);
      } else if (key == "retry_factor") {
        cfg.retry_factor = static_cast<int>(to_long(value, ln));
      } else if (key == "max_retries") {
        cfg.max_retries = static_cast<int>(to_long(value, ln));
      } else if (key == "equilibrium_nodes") {
        cfg.equilibrium_nodes = static_cast<int>(to_long(value, ln));
      } else if (key == "measure_atoms") {
        cfg.measure_atoms = static_cast<int>(to_long(value, ln));
      } else if (key == "rate_points") {
        cfg.rate_points = static_cast<int>(to_long(value, ln));
      } else if (key == "type2") {
        cfg.type2 = to_bool(value, ln);
      } else if (key == "output_dir") {
        cfg.output_dir = value;
      } else {
        throw ValidationError("unknown key '" + key + "'");
      }
    } catch (const ParseError& e) {
      throw ValidationError("line " + std::to_string(ln) + ": " + e.what());
    } catch (const ValidationError& e) {
      const std::string what = e.what();
      if (what.rfind("line ", 0) == 0) throw;
      throw ValidationError("line " + std::to_string(ln) + ": " + what);
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace hplab
