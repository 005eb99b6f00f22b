#pragma once

// Experiment orchestration: n-sweeps, comparisons with the predicted
// asymptotics, and the run record.

#include <array>
#include <complex>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hplab/function_spec.hpp"
#include "hplab/hp_solver.hpp"
#include "hplab/level_curve.hpp"
#include "hplab/potential.hpp"
#include "hplab/roots.hpp"

namespace hplab {

enum class Mode { VerifyReal, ExploreComplex };

std::string to_string(Mode m);
Mode parse_mode(std::string_view text);

/// Config file: one `key = value` per line, `#` starts a comment.
///
///   mode              verify-real | explore-complex
///   pair              A, B            (repeat once per pair; "a+bi" allowed)
///   expression        rational expression in z and w (default w)
///   n_grid            comma separated indices
///   rho_samples       comma separated reals > 1
///   test_points       comma separated complex numbers
///   precision_bits    0 selects max(256, 32 n) per index
///   retry_factor, max_retries
///   equilibrium_nodes Chebyshev nodes per segment
///   measure_atoms     atoms used to discretize λ_E and λ_F
///   rate_points       points sampled on each level curve
///   type2             true | false
///   output_dir
struct ExperimentConfig {
  Mode mode = Mode::VerifyReal;
  FunctionSpec spec = FunctionSpec::reference();
  std::vector<int> n_grid{10, 20, 40, 80, 120};
  std::vector<double> rho_samples{1.3};
  std::vector<cplx> test_points{{3.0, 0.0}, {0.0, 2.0}, {-0.5, 1.5}};
  long precision_bits = 0;
  int retry_factor = 2;
  int max_retries = 2;
  int equilibrium_nodes = 64;
  int measure_atoms = 4000;
  int rate_points = 20;
  bool type2 = true;
  std::string output_dir = "hplab_out";

  /// Throws ValidationError.
  void validate() const;
  PrecisionContext context_for(int n) const;
  /// Round-trips through parse_config.
  std::string to_text() const;

  static ExperimentConfig reference();
  /// m = 2 with conjugate pairs, f = w + 1/w (real on the real axis).
  static ExperimentConfig explore();
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

// ---- run record -----------------------------------------------------------

struct HPRecord {
  std::string kind;
  int n = 0;
  long precision_bits = 0;
  int retries = 0;
  int rank = 0;
  int nullspace_dim = 0;
  double min_pivot_log2 = 0.0;
  int vanishing_order = 0;
  std::array<int, 2> remainder_orders{};
  int required_order = 0;
  bool order_lower_bound = false;
  std::array<int, 3> defects{};
  std::array<int, 3> degrees{};
};

struct RootRecord {
  std::string label;
  int degree = 0;
  bool certified = false;
  bool converged = false;
  long precision_bits = 0;
  int sweeps = 0;
  double max_residual_log2 = 0.0;
  double reconstruction_log2 = 0.0;
  std::vector<cplx> roots;
  std::vector<double> residual_log2;
  std::vector<double> inclusion_log2;
};

struct DiscrepancyRecord {
  std::string label;
  double value = 0.0;
  double excluded_fraction = 0.0;
  int kept = 0;
  int total = 0;
};

struct RateSample {
  cplx z;
  double predicted = 0.0;
  double measured = 0.0;
  double rel_dev = 0.0;
  double log2_abs_q2 = 0.0;
  /// log2|Q2(z)| + n V^{λ_F}(z) / log 2, which stays level along Γ_ρ away from zeros of Q2.
  double log2_q2_normalized = 0.0;
  bool skipped = false;
};

struct RateReport {
  double rho = 0.0;
  bool admissible = true;
  std::string note;
  std::vector<RateSample> samples;
  double median_rel_dev = 0.0;
  double skip_rate = 0.0;
};

struct SheetSample {
  cplx z;
  std::array<double, 3> log2_abs_R{};
  /// log2 of the difference identity residual relative to the largest term.
  double identity_log2 = 0.0;
  bool ordered = false;
  std::string error;
};

struct SheetReport {
  double rho = 0.0;
  bool admissible = true;
  std::vector<SheetSample> samples;
  double ordered_fraction = 0.0;
  double max_identity_log2 = 0.0;
  int failures = 0;
};

struct RatioSample {
  cplx z;
  double err1_log2 = 0.0;
  double err2_log2 = 0.0;
};

/// Type II zeros against λ_E and the ratio errors P_{2n,k}/P_{2n} - f^k.
struct Type2Report {
  double discrepancy = 0.0;
  std::vector<RatioSample> ratios;
};

struct SymmetryReport {
  /// Largest distance from conj(r) to the nearest root, minus the inclusion radii (log2, <= 0 means inside).
  double max_excess_log2 = 0.0;
  bool symmetric = false;
  double far_from_E_fraction = 0.0;
};

struct NRecord {
  int n = 0;
  std::string status = "ok";
  std::string error_kind;
  std::string error;
  HPRecord type1;
  std::vector<RootRecord> roots;
  std::vector<DiscrepancyRecord> discrepancies;
  std::vector<RateReport> rate;
  std::vector<SheetReport> sheets;
  SymmetryReport symmetry;
  bool has_type2 = false;
  HPRecord type2;
  Type2Report type2_report;
};

struct GlobalRecord {
  bool has_equilibrium = false;
  int nodes = 0;
  double w_E = 0.0;
  double c = 0.0;
  double residual = 0.0;
  double residual_half_nodes = 0.0;
  double balayage_residual = 0.0;
  bool negative_density = false;
  double r_geom = 0.0;
  std::vector<std::array<double, 2>> F;
  std::vector<double> lambda_E;
  std::vector<std::vector<double>> lambda_F;
  int measure_atoms = 0;
  /// Γ_ρ for each admissible sampled ρ.
  std::vector<LevelCurve> curves;
  std::vector<cplx> branch_points;
};

struct RunRecord {
  std::string schema = "hplab.run/1";
  std::string config;
  std::string mode;
  GlobalRecord global;
  std::vector<NRecord> runs;

  const NRecord* find(int n) const;
  /// The first root record with this label, or nullptr.
  static const RootRecord* roots_of(const NRecord& r, std::string_view label);
};

void to_json(nlohmann::ordered_json& j, const RunRecord& r);
void from_json(const nlohmann::ordered_json& j, RunRecord& r);
RunRecord load_record(const std::filesystem::path& file);

// ---- checks ---------------------------------------------------------------

enum class DiscrepancyMode { Cdf, Potential };

/// CDF mode: sup over atom locations of the difference of the distribution
/// functions of the real parts, both normalized. Potential mode: sup of
/// |V^μ - V^ν| on a circle enclosing both supports. Throws on empty input.
double discrepancy(const DiscreteMeasure& mu, const DiscreteMeasure& nu, DiscrepancyMode mode = DiscrepancyMode::Cdf);

/// (1/normalizer) χ(Q) restricted to the 0.2-neighbourhood of F against λ_F.
DiscrepancyRecord zero_discrepancy(const std::string& label, const RootSet& rs, int normalizer,
                                   const CondenserGeometry& geom, const DiscreteMeasure& lambda_F);

struct LabContext;

/// |Q1/Q2 + f(z^(0)) + f(z^(1))|^(1/n) against exp(-2 G_F^{λ_E}(z)). A point is
/// skipped when its normalized |Q2| falls 10^6 below the median over the curve.
RateReport rate_check(const HPSolution& sol, const LabContext& lab, double rho, const std::vector<cplx>& z);
/// R_n on the three sheets, the difference identity, and the ordering of |R_n|.
SheetReport sheet_remainder_diagnostics(const HPSolution& sol, const LabContext& lab, double rho,
                                        const std::vector<cplx>& z);
Type2Report type2_check(const HPSolution& sol2, const RootSet& zeros, const LabContext& lab,
                                    const std::vector<cplx>& z);
SymmetryReport zero_symmetry(const Polynomial& p, const RootSet& rs, long precision_bits);

// ---- orchestration --------------------------------------------------------

/// Shared, read-only objects of a verify run.
struct LabContext {
  FunctionSpec spec;
  CondenserGeometry geom;
  EquilibriumResult eq;
  DiscreteMeasure lambda_E;
  DiscreteMeasure lambda_F;
  double r_geom = 0.0;
  Sheet2Region region;
};

/// Deterministic given the config. Per-n failures are recorded and the sweep
/// continues; configuration errors throw ValidationError.
RunRecord run_experiment(const ExperimentConfig& cfg);

/// results.json, zeros_<n>.csv, measures.csv, level_curves.csv, scatter_<n>.svg. Byte-identical
/// for identical records.
void emit_outputs(const RunRecord& record, const std::filesystem::path& dir);

}  // namespace hplab
