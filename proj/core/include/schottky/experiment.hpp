#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "schottky/nonbacktracking.hpp"
#include "schottky/thermo.hpp"
#include "schottky/transfer.hpp"

namespace schottky {

/// Thrown when a config or precondition fails validation; the CLI maps
/// this to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

struct ExperimentConfig {
  SchottkyData schottky;
  Rectangle rectangle{0.1, 0.9, -0.5, 0.5};
  int grid_nx = 64, grid_ny = 64;
  int degree_cap = 16;
  std::vector<int> n_values{4, 8, 16, 32};
  int trials = 200;
  std::uint64_t seed = 1;
  double beta = 0.35;         // ell = max(1, floor(beta log n))
  double net_spacing = 0.02;  // epsilon-net spacing over the rectangle
  int dim_depth = 12;
  double dim_tol = 1e-4;
  double margin = 0.02;       // required clearance of re_lo beyond delta/2

  int ell_for(int n) const;

  /// Parses the JSON config; "schottky" may be a path to a disc-system
  /// file (resolved relative to the config) or an inline object.
  static ExperimentConfig load(const std::string& path);
  static ExperimentConfig from_json_text(const std::string& text,
                                         const std::string& base_dir = ".");
};

std::string resonance_report_to_json(const ResonanceReport& report);
std::string resonance_grid_to_csv(const ResonanceReport& report);

struct BaseResonanceResult {
  ResonanceReport report;
  DimensionResult dimension;
  std::optional<double> rightmost_real;
  double crosscheck_gap = 0.0;  // |rightmost real zero - delta|
};

/// Trivial-representation scan over the config rectangle plus the
/// pressure-dimension cross-check.
BaseResonanceResult run_base_resonances(const ExperimentConfig& config, int threads = 1);

struct CoverTrialRow {
  int n = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  bool tangle_free = false;     // event A at ell = ell_for(n)
  double min_abs_det = 0.0;
  bool new_zero_found = false;
  std::string error;            // empty when the trial completed
};

struct CoverExperimentResult {
  std::vector<CoverTrialRow> rows;
  std::vector<int> n_values;
  std::vector<double> frequency;    // new-zero frequency per n
  std::vector<int> completed;       // trials that produced a verdict
  double delta = 0.0;
  Rectangle net_rectangle;
  int net_nx = 0, net_ny = 0;
};

/// Random-cover determinant sweep: per (n, trial) samples a cover, scans
/// det(1 - L_{s,rho0}) over the epsilon-net of the rectangle, and records
/// the minimum modulus plus winding-detected zeros. Refuses to run when
/// the rectangle is not clear of base-surface zeros or sits too close to
/// delta/2.
CoverExperimentResult run_cover_experiment(const ExperimentConfig& config, int threads = 1);

/// Per-trial drop-in used by tests to force specific permutation tuples.
CoverTrialRow run_cover_trial(const OperatorAssembler& assembler, const CoverSample& sample,
                              const Rectangle& rect, double net_spacing, int ell);

struct TangleMcRow {
  int n = 0;
  int ell = 1;
  int trials = 0;
  int tangled_count = 0;
  double frequency = 0.0;
  double bound_ratio = 0.0;  // frequency * n / (ell^3 (2d-1)^{4 ell})
};

struct TangleMcResult {
  std::vector<TangleMcRow> rows;
  double fitted_constant = 0.0;  // max of the per-n ratios
};

TangleMcResult run_tangle_mc(const ExperimentConfig& config, int threads = 1);

struct IdentityCheckRow {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string note;
};

struct IdentitySuiteResult {
  std::vector<IdentityCheckRow> rows;
  bool all_pass = true;
};

struct IdentitySuiteHooks {
  bool corrupt_generator = false;  // test hook: damages one generator entry
};

/// Fixed-seed battery of the exact operator identities (conjugation, path
/// decomposition, high-trace, dual-route traces, adjoint kernel,
/// reproducing property, validation). Deterministic; the CLI exits 3 when
/// any row fails.
IdentitySuiteResult run_identity_suite(const ExperimentConfig& config,
                                       const IdentitySuiteHooks& hooks = {}, int threads = 1);

std::string identity_suite_to_json(const IdentitySuiteResult& result);

}  // namespace schottky
