#include "schottky/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "schottky/rng.hpp"

namespace schottky {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int ExperimentConfig::ell_for(int n) const {
  return std::max(1, static_cast<int>(std::floor(beta * std::log(std::max(n, 1)))));
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text,
                                                  const std::string& base_dir) {
  nlohmann::json j = nlohmann::json::parse(text);
  ExperimentConfig config;
  if (j.contains("schottky")) {
    if (j["schottky"].is_string()) {
      std::filesystem::path p = j["schottky"].get<std::string>();
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      config.schottky = SchottkyData::from_json(read_file(p.string()));
    } else {
      config.schottky = SchottkyData::from_json(j["schottky"].dump());
    }
  } else {
    config.schottky = reference_schottky();
  }
  if (j.contains("rectangle")) {
    auto r = j["rectangle"];
    if (r.size() != 4) throw ValidationError("rectangle needs 4 reals");
    config.rectangle = {r[0].get<double>(), r[1].get<double>(), r[2].get<double>(),
                        r[3].get<double>()};
  }
  if (j.contains("grid")) {
    config.grid_nx = j["grid"][0].get<int>();
    config.grid_ny = j["grid"][1].get<int>();
  }
  if (j.contains("degree_cap")) config.degree_cap = j["degree_cap"].get<int>();
  if (j.contains("n_values")) config.n_values = j["n_values"].get<std::vector<int>>();
  if (j.contains("trials")) config.trials = j["trials"].get<int>();
  if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("beta")) config.beta = j["beta"].get<double>();
  if (j.contains("net_spacing")) config.net_spacing = j["net_spacing"].get<double>();
  if (j.contains("dim_depth")) config.dim_depth = j["dim_depth"].get<int>();
  if (j.contains("dim_tol")) config.dim_tol = j["dim_tol"].get<double>();
  if (j.contains("margin")) config.margin = j["margin"].get<double>();
  if (config.rectangle.re_hi <= config.rectangle.re_lo ||
      config.rectangle.im_hi <= config.rectangle.im_lo)
    throw ValidationError("rectangle is empty");
  if (config.trials < 1 || config.net_spacing <= 0.0 || config.degree_cap < 0)
    throw ValidationError("config values out of range");
  return config;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::filesystem::path p(path);
  return from_json_text(read_file(path), p.parent_path().string());
}

std::string resonance_report_to_json(const ResonanceReport& report) {
  nlohmann::json j;
  j["rectangle"] = {report.rectangle.re_lo, report.rectangle.re_hi, report.rectangle.im_lo,
                    report.rectangle.im_hi};
  j["grid_shape"] = {report.nx + 1, report.ny + 1};
  j["degree_cap"] = report.degree_cap;
  j["zeros"] = nlohmann::json::array();
  for (const auto& z : report.zeros)
    j["zeros"].push_back(
        {{"re", z.location.real()}, {"im", z.location.imag()}, {"winding", z.winding}});
  return j.dump(2);
}

std::string resonance_grid_to_csv(const ResonanceReport& report) {
  std::ostringstream out;
  out << "re_s,im_s,re_det,im_det\n";
  out.precision(17);
  const double hx = (report.rectangle.re_hi - report.rectangle.re_lo) / report.nx;
  const double hy = (report.rectangle.im_hi - report.rectangle.im_lo) / report.ny;
  for (int iy = 0; iy <= report.ny; ++iy)
    for (int ix = 0; ix <= report.nx; ++ix) {
      Complex v = report.grid_value(ix, iy);
      out << report.rectangle.re_lo + ix * hx << ',' << report.rectangle.im_lo + iy * hy << ','
          << v.real() << ',' << v.imag() << '\n';
    }
  return out.str();
}

BaseResonanceResult run_base_resonances(const ExperimentConfig& config, int threads) {
  ValidationReport validation = validate_schottky(config.schottky, 1e-10);
  if (!validation.ok())
    throw ValidationError("schottky data invalid: " + validation.violations[0]);
  OperatorAssembler assembler(
      config.schottky, BasisSpec{config.degree_cap, std::max(128, 4 * (config.degree_cap + 1))});
  Representation triv = Representation::trivial(config.schottky.alphabet_size());
  BaseResonanceResult result;
  result.report = resonance_scan(assembler, config.rectangle, config.grid_nx, config.grid_ny,
                                 triv, {}, threads);
  result.dimension =
      hausdorff_dimension(config.schottky, config.dim_depth, config.dim_tol, threads);
  result.rightmost_real = rightmost_real_zero(assembler, triv, 0.05, 0.95, 128, 1e-12);
  result.crosscheck_gap = result.rightmost_real
                              ? std::abs(*result.rightmost_real - result.dimension.delta)
                              : std::numeric_limits<double>::infinity();
  return result;
}

namespace {

/// det(1 - L(s)) memoized with the reflection det(conj s) = conj(det s):
/// real disc systems and real permutation twists make the assembled
/// matrix conjugate-symmetric in s, so nets centered on the real axis
/// only pay for their upper half.
class SymmetricDetEvaluator {
 public:
  SymmetricDetEvaluator(const OperatorAssembler& assembler, const Representation& rep)
      : assembler_(assembler), rep_(rep) {}

  Complex operator()(Complex s) {
    bool flip = s.imag() < 0.0;
    Complex key = flip ? std::conj(s) : s;
    Complex value;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = memo_.find({key.real(), key.imag()});
      if (it != memo_.end()) {
        value = it->second;
      } else {
        value = fredholm_det(assembler_, key, rep_);
        memo_.emplace(std::make_pair(key.real(), key.imag()), value);
      }
    }
    return flip ? std::conj(value) : value;
  }

 private:
  const OperatorAssembler& assembler_;
  const Representation& rep_;
  std::map<std::pair<double, double>, Complex> memo_;
  std::mutex mutex_;
};

double rect_distance(Complex z, const Rectangle& r) {
  double dx = std::max({r.re_lo - z.real(), 0.0, z.real() - r.re_hi});
  double dy = std::max({r.im_lo - z.imag(), 0.0, z.imag() - r.im_hi});
  return std::hypot(dx, dy);
}

}  // namespace

CoverTrialRow run_cover_trial(const OperatorAssembler& assembler, const CoverSample& sample,
                              const Rectangle& rect, double net_spacing, int ell) {
  CoverTrialRow row;
  row.n = sample.n;
  row.seed = sample.seed;
  row.tangle_free = is_tangle_free(build_colored_graph(sample), ell).tangle_free;
  if (sample.n < 2) {
    // rho0 is zero-dimensional; det(1 - L) is identically 1.
    row.min_abs_det = 1.0;
    return row;
  }
  PermutationMatrices perms = permutation_matrices(sample);
  SymmetricDetEvaluator det(assembler, perms.rho0);
  int nx = std::max(1, static_cast<int>(std::ceil((rect.re_hi - rect.re_lo) / net_spacing)));
  int ny = std::max(1, static_cast<int>(std::ceil((rect.im_hi - rect.im_lo) / net_spacing)));
  WindingScanResult scan =
      winding_scan([&det](Complex s) { return det(s); }, rect, nx, ny, {}, /*threads=*/1);
  row.min_abs_det = scan.min_abs;
  row.new_zero_found = !scan.zeros.empty();
  return row;
}

CoverExperimentResult run_cover_experiment(const ExperimentConfig& config, int threads) {
  ValidationReport validation = validate_schottky(config.schottky, 1e-10);
  if (!validation.ok())
    throw ValidationError("schottky data invalid: " + validation.violations[0]);

  DimensionResult dim =
      hausdorff_dimension(config.schottky, config.dim_depth, config.dim_tol, threads);
  const Rectangle& rect = config.rectangle;
  if (rect.re_lo <= dim.delta / 2.0 + config.margin)
    throw ValidationError("cover experiment requires re_lo > delta/2 + margin (delta = " +
                          std::to_string(dim.delta) + ")");

  OperatorAssembler assembler(
      config.schottky, BasisSpec{config.degree_cap, std::max(128, 4 * (config.degree_cap + 1))});
  Representation triv = Representation::trivial(config.schottky.alphabet_size());

  // Pre-scan: any base-surface zero inside or within 0.02 of the
  // rectangle would confound new-zero detection; refuse to run.
  constexpr double kExclusionRadius = 0.02;
  Rectangle pre{std::max(rect.re_lo - kExclusionRadius, 0.02), rect.re_hi + kExclusionRadius,
                rect.im_lo - kExclusionRadius, rect.im_hi + kExclusionRadius};
  ResonanceReport base = resonance_scan(assembler, pre, 32, 32, triv, {}, threads);
  for (const auto& z : base.zeros)
    if (rect_distance(z.location, rect) <= kExclusionRadius)
      throw ValidationError("base-surface zero at Re(s) = " +
                            std::to_string(z.location.real()) +
                            " lies inside/near the rectangle; refusing cover run");

  CoverExperimentResult result;
  result.delta = dim.delta;
  result.n_values = config.n_values;
  result.net_rectangle = rect;
  result.net_nx = std::max(1, static_cast<int>(std::ceil((rect.re_hi - rect.re_lo) /
                                                         config.net_spacing)));
  result.net_ny = std::max(1, static_cast<int>(std::ceil((rect.im_hi - rect.im_lo) /
                                                         config.net_spacing)));
  result.rows.resize(config.n_values.size() * config.trials);
  parallel_for_indexed(result.rows.size(), threads, [&](std::size_t slot) {
    int n = config.n_values[slot / config.trials];
    int trial = static_cast<int>(slot % config.trials);
    std::uint64_t seed =
        mix_keys(config.seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial));
    CoverTrialRow row;
    try {
      CoverSample sample = sample_symmetric(n, config.schottky.d, seed);
      row = run_cover_trial(assembler, sample, rect, config.net_spacing, config.ell_for(n));
    } catch (const std::exception& e) {
      row.n = n;
      row.seed = seed;
      row.error = e.what();
    }
    row.trial = trial;
    result.rows[slot] = row;
  });

  result.frequency.assign(config.n_values.size(), 0.0);
  result.completed.assign(config.n_values.size(), 0);
  for (std::size_t slot = 0; slot < result.rows.size(); ++slot) {
    const auto& row = result.rows[slot];
    std::size_t bucket = slot / config.trials;
    if (!row.error.empty()) continue;
    ++result.completed[bucket];
    if (row.new_zero_found) result.frequency[bucket] += 1.0;
  }
  for (std::size_t k = 0; k < result.frequency.size(); ++k)
    if (result.completed[k] > 0) result.frequency[k] /= result.completed[k];
  return result;
}

TangleMcResult run_tangle_mc(const ExperimentConfig& config, int threads) {
  const int d = config.schottky.d;
  for (int n : config.n_values) {
    int ell = config.ell_for(n);
    if (ell > static_cast<int>(std::floor(std::sqrt(static_cast<double>(n)))))
      throw ValidationError("tangle-mc requires ell <= sqrt(n); got ell=" + std::to_string(ell) +
                            " at n=" + std::to_string(n));
  }
  TangleMcResult result;
  result.rows.resize(config.n_values.size());
  parallel_for_indexed(result.rows.size(), threads, [&](std::size_t slot) {
    int n = config.n_values[slot];
    TangleMcRow row;
    row.n = n;
    row.ell = config.ell_for(n);
    row.trials = config.trials;
    for (int trial = 0; trial < config.trials; ++trial) {
      std::uint64_t seed =
          mix_keys(config.seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial));
      CoverSample sample = sample_symmetric(n, d, seed);
      if (!is_tangle_free(build_colored_graph(sample), row.ell).tangle_free) ++row.tangled_count;
    }
    row.frequency = static_cast<double>(row.tangled_count) / config.trials;
    double denom = std::pow(row.ell, 3) * std::pow(2.0 * d - 1.0, 4.0 * row.ell);
    row.bound_ratio = row.frequency * n / denom;
    result.rows[slot] = row;
  });
  for (const auto& row : result.rows)
    result.fitted_constant = std::max(result.fitted_constant, row.bound_ratio);
  return result;
}

namespace {

std::optional<std::uint64_t> find_tangle_free_seed(int n, int d, int ell, std::uint64_t start,
                                                   int budget) {
  for (int k = 0; k < budget; ++k) {
    std::uint64_t seed = mix_keys(start, static_cast<std::uint64_t>(k));
    CoverSample sample = sample_symmetric(n, d, seed);
    if (is_tangle_free(build_colored_graph(sample), ell).tangle_free) return seed;
  }
  return std::nullopt;
}

}  // namespace

IdentitySuiteResult run_identity_suite(const ExperimentConfig& config,
                                       const IdentitySuiteHooks& hooks, int threads) {
  (void)threads;
  IdentitySuiteResult result;
  auto add = [&result](const std::string& name, double residual, double threshold,
                       const std::string& note = "") {
    bool pass = std::isfinite(residual) && residual <= threshold;
    result.rows.push_back({name, residual, threshold, pass, note});
    result.all_pass = result.all_pass && pass;
  };
  auto guarded = [&](const std::string& name, auto&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      result.rows.push_back({name, std::numeric_limits<double>::infinity(), 0.0, false, e.what()});
      result.all_pass = false;
    }
  };

  SchottkyData data = config.schottky;
  if (hooks.corrupt_generator && data.generators.size() > 1) data.generators[1].b += 1e-3;
  const int d = data.d;

  ValidationReport validation = validate_schottky(data, 1e-10);
  add("validate-schottky",
      validation.ok() ? std::max(validation.max_boundary_error, validation.max_determinant_error)
                      : std::numeric_limits<double>::infinity(),
      1e-10, validation.ok() ? "" : validation.violations[0]);

  OperatorAssembler asm16(data, BasisSpec{16, 128});

  guarded("conjugation-n4", [&] {
    CoverSample sample = sample_symmetric(4, d, 7);
    add("conjugation-n4", conjugation_residual(asm16, sample, Complex(0.7, 0.0)), 1e-10);
  });
  guarded("conjugation-n1", [&] {
    add("conjugation-n1", conjugation_residual(asm16, identity_cover(1, d), Complex(0.7, 0.0)),
        1e-14);
  });

  guarded("norm-transfer", [&] {
    CoverSample sample = sample_symmetric(6, d, 11);
    PermutationMatrices perms = permutation_matrices(sample);
    double worst = 0.0;
    for (Complex s : {Complex(0.7, 0.0), Complex(0.6, 0.4)}) {
      MatrixXcd b0 = restrict_to_k0(asm16, assemble_B(asm16, sample, s).matrix, sample.n);
      MatrixXcd acc = MatrixXcd::Identity(b0.rows(), b0.cols());
      for (int ell = 1; ell <= 3; ++ell) {
        acc = acc * b0;
        double via_b = spectral_norm(acc);
        double via_l = operator_power_norm(asm16, s, perms.rho0, ell);
        worst = std::max(worst, std::abs(via_b - via_l) / std::max(via_l, 1e-300));
      }
    }
    add("norm-transfer", worst, 1e-8);
  });

  guarded("decomposition-l1", [&] {
    auto seed = find_tangle_free_seed(6, d, 1, 3, 200);
    if (!seed) throw std::runtime_error("no 1-tangle-free sample found at n=6");
    CoverSample sample = sample_symmetric(6, d, *seed);
    DecompositionCheck check = decomposition_residual(asm16, sample, Complex(0.7, 0.0), 1);
    add("decomposition-l1", check.residual, 1e-12);
  });
  guarded("decomposition-tf", [&] {
    int best_ell = 0;
    std::uint64_t best_seed = 0;
    for (int ell = 3; ell >= 1 && best_ell == 0; --ell) {
      auto seed = find_tangle_free_seed(8, d, ell, 17, 200);
      if (seed) {
        best_ell = ell;
        best_seed = *seed;
      }
    }
    if (best_ell == 0) throw std::runtime_error("no tangle-free sample found at n=8");
    CoverSample sample = sample_symmetric(8, d, best_seed);
    DecompositionCheck check =
        decomposition_residual(asm16, sample, Complex(0.7, 0.0), best_ell);
    add("decomposition-tf", check.residual, 1e-8, "ell=" + std::to_string(best_ell));
  });

  guarded("high-trace", [&] {
    CoverSample sample = sample_symmetric(3, d, 23);
    double worst_rel = 0.0, worst_imag = 0.0, worst_bound = 0.0;
    for (int ell : {1, 2}) {
      HighTraceResult ht = high_trace_crosscheck(asm16, sample, Complex(0.7, 0.0), ell);
      worst_rel = std::max(worst_rel, ht.rel_err);
      worst_imag = std::max(worst_imag, std::abs(ht.path_sum.imag()) /
                                            std::max(std::abs(ht.path_sum), 1.0));
      worst_bound =
          std::max(worst_bound, ht.bbar_norm * ht.bbar_norm - ht.direct);  // <= 0 expected
    }
    add("high-trace-relerr", worst_rel, 1e-8);
    add("high-trace-imag", worst_imag, 1e-10);
    add("high-trace-norm-bound", worst_bound, 1e-10);
  });

  guarded("trace-dual-route", [&] {
    Word wi{{0, 1}}, wj{{2, 1}};
    Complex s(0.6, 0.0);
    Complex via_matrix = trace_product(asm16, {wi}, {wj}, s);
    QuadratureResult quad =
        trace_via_kernel(asm16.pair_kernel_diagonal(wi, wj, s), asm16.pair_kernel_domain(wi, wj),
                         32, 128);
    double rel = std::abs(via_matrix - quad.value) / std::max(std::abs(quad.value), 1e-300);
    add("trace-dual-route", rel, 1e-6, quad.converged ? "" : "quadrature not converged");
  });

  guarded("adjoint-kernel", [&] {
    OperatorAssembler asm12(data, BasisSpec{12, 96});
    double worst = 0.0;
    for (Complex s : {Complex(0.6, 0.0), Complex(0.8, 0.5)}) {
      for (const Word& w : {Word{{0}}, Word{{0, 1}}}) {
        MatrixXcd direct = asm12.word_matrix_direct(w, s).adjoint();
        MatrixXcd via_kernel = asm12.word_adjoint_from_kernel(w, s, 48, 192);
        worst = std::max(worst, spectral_norm(direct - via_kernel));
      }
    }
    add("adjoint-kernel", worst, 1e-8);
  });

  guarded("reproducing", [&] {
    SplitMix64 rng(mix_keys(config.seed, 0x5EED));
    double worst = 0.0;
    for (const Disc& disc : data.discs) {
      for (int sample_i = 0; sample_i < 5; ++sample_i) {
        std::vector<Complex> coeffs(11);
        for (auto& c : coeffs) c = Complex(rng.next_unit() - 0.5, rng.next_unit() - 0.5);
        auto poly = [&](Complex z) {
          Complex acc = 0.0, pw = 1.0;
          for (const Complex& c : coeffs) {
            acc += c * pw;
            pw *= (z - Complex(disc.center, 0.0)) / disc.radius;
          }
          return acc;
        };
        for (int point = 0; point < 4; ++point) {
          double rho = 0.8 * disc.radius * rng.next_unit();
          double theta = 2.0 * std::numbers::pi * rng.next_unit();
          Complex z(disc.center + rho * std::cos(theta), rho * std::sin(theta));
          Complex reproduced = integrate_over_disc(
              [&](Complex w) { return bergman_kernel_eval(disc, z, w) * poly(w); }, disc, 24,
              256);
          worst = std::max(worst, std::abs(reproduced - poly(z)));
        }
      }
    }
    add("reproducing", worst, 1e-8);
  });

  return result;
}

std::string identity_suite_to_json(const IdentitySuiteResult& result) {
  nlohmann::json j;
  j["all_pass"] = result.all_pass;
  j["checks"] = nlohmann::json::array();
  for (const auto& row : result.rows) {
    nlohmann::json r = {{"name", row.name},
                        {"residual", row.residual},
                        {"threshold", row.threshold},
                        {"pass", row.pass}};
    if (!row.note.empty()) r["note"] = row.note;
    j["checks"].push_back(r);
  }
  return j.dump(2);
}

}  // namespace schottky
