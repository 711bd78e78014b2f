#pragma once

#include <cstdint>
#include <optional>

#include "schottky/operators.hpp"
#include "schottky/paths.hpp"

namespace schottky {

/// Half-edge indexed operator on the Bergman space tensored with l^2([n]).
/// Flat index (disc, degree, sheet): the half-edge (x, i) owns the block
/// with disc = conj(i), sheet = x.
BlockOperator assemble_B(const OperatorAssembler& assembler, const CoverSample& sample,
                         Complex s);

/// Block-diagonal sum b(s) = sum_i A_i(s) (x) S_i in the same layout.
BlockOperator assemble_b_plain(const OperatorAssembler& assembler, const CoverSample& sample,
                               Complex s);

/// The permutation unitary relating b(s) and B(s).
MatrixXcd conjugation_unitary(const OperatorAssembler& assembler, const CoverSample& sample);

/// Spectral norm of Q^{-1} b(s) Q - B(s); vanishes in exact arithmetic.
double conjugation_residual(const OperatorAssembler& assembler, const CoverSample& sample,
                            Complex s);

/// Isometry onto the mean-zero sheets: columns span K_0. Conjugating by
/// it restricts an operator to K_0 in an orthonormal basis.
MatrixXcd k0_isometry(const OperatorAssembler& assembler, int n);
MatrixXcd restrict_to_k0(const OperatorAssembler& assembler, const MatrixXcd& op, int n);

struct PathOperatorSet {
  BlockOperator bbar;               // tangle-free paths, centered weights
  std::vector<BlockOperator> rk;    // remainders, k = 1..ell
  long paths_enumerated = 0;
  long blocks_assembled = 0;
};

struct PathOperatorOptions {
  long path_cap = kPathCap;
  long block_cap = kBlockCap;
};

/// Assembles the tangle-free path operator and its remainders in one
/// enumeration pass. Paths are grouped by (color word, endpoints), so each
/// distinct word block is formed once and scaled by the accumulated
/// scalar weight.
PathOperatorSet assemble_path_operators(const OperatorAssembler& assembler,
                                        const CoverSample& sample, Complex s, int ell,
                                        const PathOperatorOptions& opts = {});

/// Sum over all non-backtracking paths of the word operator times
/// weight_fn(path); the generic machinery behind the identity checks.
/// weight_fn returning 0 skips the path.
MatrixXcd assemble_weighted_path_sum(
    const OperatorAssembler& assembler, int n, Complex s, int ell,
    const std::function<double(const std::vector<HalfEdge>&)>& weight_fn,
    long path_cap = kPathCap);

struct DecompositionCheck {
  bool precondition_ok = false;  // the cover graph is ell-tangle-free
  std::optional<int> tangled_witness;
  double residual = 0.0;
  int probes = 0;
  bool probed_full_basis = true;
};

/// Residual of B^ell F = Bbar F - (1/n) sum_k R_k F over an orthonormal
/// probe set of K_0 (the full basis up to dimension 2000, 64 seeded random
/// unit vectors beyond). Skips the assertion on tangled samples.
DecompositionCheck decomposition_residual(const OperatorAssembler& assembler,
                                          const CoverSample& sample, Complex s, int ell,
                                          const PathOperatorOptions& opts = {});

struct HighTraceResult {
  double direct = 0.0;       // tr(Bbar Bbar^*)
  Complex path_sum{0.0, 0.0};
  double rel_err = 0.0;
  double bbar_norm = 0.0;
};

/// m = 1 instance of the high-trace expansion: the trace of Bbar Bbar^*
/// against the sum over matched path pairs of the block traces
/// tr[A_w1 A_w2^*] times centered weights.
HighTraceResult high_trace_crosscheck(const OperatorAssembler& assembler,
                                      const CoverSample& sample, Complex s, int ell,
                                      const PathOperatorOptions& opts = {});

struct NormTrendRow {
  int n = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  int ell = 1;
  bool tangle_free = false;
  double norm_bbar = 0.0;
  double norm_rk_max = 0.0;
  double norm_b_pow = 0.0;  // ||B^ell restricted to K_0||
  bool skipped = false;     // resource cap hit
};

struct NormTrendOptions {
  std::optional<int> fixed_ell;  // overrides the beta rule when set
  double beta = 0.35;            // ell = max(1, floor(beta log n))
  PathOperatorOptions caps;
};

std::vector<NormTrendRow> norm_trend_experiment(const OperatorAssembler& assembler,
                                                const std::vector<int>& n_values, Complex s,
                                                int trials, std::uint64_t seed,
                                                const NormTrendOptions& opts, int threads = 1);

}  // namespace schottky
