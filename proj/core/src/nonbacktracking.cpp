#include "schottky/nonbacktracking.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "schottky/rng.hpp"

namespace schottky {

namespace {

int flat_index(int basis, int n, int disc, int degree, int sheet) {
  return (disc * basis + degree) * n + sheet;
}

std::uint64_t pack_word(const std::vector<HalfEdge>& path, int two_d) {
  std::uint64_t id = 0;
  for (const auto& he : path) id = id * two_d + he.i;
  return id;
}

}  // namespace

BlockOperator assemble_B(const OperatorAssembler& assembler, const CoverSample& sample,
                         Complex s) {
  const auto& data = assembler.data();
  const int two_d = data.alphabet_size();
  const int basis = assembler.spec().basis_size();
  const int n = sample.n;
  BlockOperator op;
  op.num_discs = two_d;
  op.basis_size = basis;
  op.sheet_count = n;
  op.matrix = MatrixXcd::Zero(assembler.scalar_dim() * n, assembler.scalar_dim() * n);
  for (int b = 0; b < two_d; ++b) {
    const int j = data.conj(b);  // the elementary operator with source disc b
    MatrixXcd a = assembler.letter_matrix(j, s);
    for (int adisc = 0; adisc < two_d; ++adisc) {
      if (adisc == j) continue;
      const auto& sig = sample.sigma[data.conj(adisc)];
      for (int p = 0; p < basis; ++p) {
        int row_scalar = assembler.block_start(adisc) + p;
        for (int q = 0; q < basis; ++q) {
          Complex w = a(row_scalar, assembler.block_start(b) + q);
          if (w == Complex(0.0, 0.0)) continue;
          for (int x = 0; x < n; ++x)
            op.matrix(flat_index(basis, n, adisc, p, x), flat_index(basis, n, b, q, sig[x])) = w;
        }
      }
    }
  }
  return op;
}

BlockOperator assemble_b_plain(const OperatorAssembler& assembler, const CoverSample& sample,
                               Complex s) {
  const auto& data = assembler.data();
  const int two_d = data.alphabet_size();
  const int basis = assembler.spec().basis_size();
  const int n = sample.n;
  BlockOperator op;
  op.num_discs = two_d;
  op.basis_size = basis;
  op.sheet_count = n;
  op.matrix = MatrixXcd::Zero(assembler.scalar_dim() * n, assembler.scalar_dim() * n);
  for (int i = 0; i < two_d; ++i) {
    MatrixXcd a = assembler.letter_matrix(i, s);
    const int source = data.conj(i);
    for (int adisc = 0; adisc < two_d; ++adisc) {
      if (adisc == i) continue;
      for (int p = 0; p < basis; ++p) {
        int row_scalar = assembler.block_start(adisc) + p;
        for (int q = 0; q < basis; ++q) {
          Complex w = a(row_scalar, assembler.block_start(source) + q);
          if (w == Complex(0.0, 0.0)) continue;
          for (int x = 0; x < n; ++x)
            op.matrix(flat_index(basis, n, adisc, p, x),
                      flat_index(basis, n, source, q, sample.sigma[i][x])) += w;
        }
      }
    }
  }
  return op;
}

MatrixXcd conjugation_unitary(const OperatorAssembler& assembler, const CoverSample& sample) {
  const auto& data = assembler.data();
  const int two_d = data.alphabet_size();
  const int basis = assembler.spec().basis_size();
  const int n = sample.n;
  MatrixXcd q = MatrixXcd::Zero(assembler.scalar_dim() * n, assembler.scalar_dim() * n);
  for (int a = 0; a < two_d; ++a) {
    // Block for disc a belongs to half-edges with letter conj(a); the
    // sheet factor sends e_y to e_{sigma_conj(a)(y)}.
    const auto& sig = sample.sigma[data.conj(a)];
    for (int p = 0; p < basis; ++p)
      for (int y = 0; y < n; ++y)
        q(flat_index(basis, n, a, p, sig[y]), flat_index(basis, n, a, p, y)) = 1.0;
  }
  return q;
}

double conjugation_residual(const OperatorAssembler& assembler, const CoverSample& sample,
                            Complex s) {
  MatrixXcd q = conjugation_unitary(assembler, sample);
  MatrixXcd b = assemble_b_plain(assembler, sample, s).matrix;
  MatrixXcd bb = assemble_B(assembler, sample, s).matrix;
  return spectral_norm(q.transpose() * b * q - bb);
}

MatrixXcd k0_isometry(const OperatorAssembler& assembler, int n) {
  const int sd = assembler.scalar_dim();
  Eigen::MatrixXd v = contrast_basis(n);
  MatrixXcd w = MatrixXcd::Zero(sd * n, sd * (n - 1));
  for (int block = 0; block < sd; ++block)
    w.block(block * n, block * (n - 1), n, n - 1) = v.transpose().cast<Complex>();
  return w;
}

MatrixXcd restrict_to_k0(const OperatorAssembler& assembler, const MatrixXcd& op, int n) {
  MatrixXcd w = k0_isometry(assembler, n);
  return w.adjoint() * op * w;
}

namespace {

/// Accumulated scalar weights for one (color word, endpoints) group.
struct GroupWeights {
  double bbar = 0.0;
  double rk[8] = {0.0};
};

struct PathAccumulator {
  std::unordered_map<std::uint64_t, GroupWeights> groups;
  long paths = 0;
};

/// One enumeration pass classifying every path and accumulating the
/// centered/mixed weights per group.
PathAccumulator accumulate_paths(const CoverSample& sample, int ell,
                                 const PathOperatorOptions& opts, int two_d) {
  const int n = sample.n;
  const int d = sample.d;
  const double shift = 1.0 / n;
  PathAccumulator acc;
  if (ell > 8) throw std::invalid_argument("path operators support ell <= 8");
  std::vector<double> pref(ell + 1);
  std::vector<bool> follows(ell);
  std::vector<bool> suffix_follows(ell + 1);
  for_each_nb_path(n, d, ell, opts.path_cap, [&](const std::vector<HalfEdge>& path) {
    ++acc.paths;
    pref[0] = 1.0;
    for (int t = 0; t < ell; ++t) {
      follows[t] = sample.sigma[path[t].i][path[t].x] == path[t + 1].x;
      pref[t + 1] = pref[t] * ((follows[t] ? 1.0 : 0.0) - shift);
    }
    suffix_follows[ell] = true;
    for (int t = ell - 1; t >= 0; --t) suffix_follows[t] = follows[t] && suffix_follows[t + 1];

    bool full_tf = segment_tangle_free(path, d, 0, ell);
    std::uint64_t key = (pack_word(path, two_d) * n + path.front().x) * n + path.back().x;
    GroupWeights* group = nullptr;
    auto touch = [&]() -> GroupWeights& {
      if (!group) group = &acc.groups[key];
      return *group;
    };
    if (full_tf && pref[ell] != 0.0) touch().bbar += pref[ell];
    for (int k = 1; k <= ell; ++k) {
      if (full_tf) break;  // F_k \ F is empty for tangle-free paths
      if (!suffix_follows[k]) continue;
      if (pref[k - 1] == 0.0) continue;
      if (!segment_tangle_free(path, d, 0, k - 1)) continue;
      if (!segment_tangle_free(path, d, k, ell)) continue;
      touch().rk[k - 1] += pref[k - 1];
    }
  });
  return acc;
}

/// Word-product blocks shared by the path operators: for the color word
/// c_0..c_ell the operator part is A_{c_1} ... A_{c_ell} restricted to
/// (target disc conj(c_0), source disc conj(c_ell)).
class WordBlockCache {
 public:
  WordBlockCache(const OperatorAssembler& assembler, Complex s, long block_cap)
      : assembler_(assembler), block_cap_(block_cap) {
    const int two_d = assembler.data().alphabet_size();
    letters_.reserve(two_d);
    for (int i = 0; i < two_d; ++i) letters_.push_back(assembler.letter_matrix(i, s));
  }

  /// Block of the product over colors[1..]; rows at disc conj(colors[0]).
  MatrixXcd block(const std::vector<int>& colors) {
    auto it = cache_.find(colors);
    if (it == cache_.end()) {
      if (static_cast<long>(cache_.size()) >= block_cap_)
        throw CapExceededError("aggregated word-block count exceeds cap " +
                               std::to_string(block_cap_));
      MatrixXcd prod = letters_[colors[1]];
      for (std::size_t t = 2; t < colors.size(); ++t) prod = prod * letters_[colors[t]];
      it = cache_.emplace(colors, std::move(prod)).first;
    }
    const auto& data = assembler_.data();
    const int basis = assembler_.spec().basis_size();
    return it->second.block(assembler_.block_start(data.conj(colors.front())),
                            assembler_.block_start(data.conj(colors.back())), basis, basis);
  }

 private:
  const OperatorAssembler& assembler_;
  long block_cap_;
  std::vector<MatrixXcd> letters_;
  std::map<std::vector<int>, MatrixXcd> cache_;
};

std::vector<int> unpack_word(std::uint64_t id, int two_d, int count) {
  std::vector<int> colors(count);
  for (int t = count - 1; t >= 0; --t) {
    colors[t] = static_cast<int>(id % two_d);
    id /= two_d;
  }
  return colors;
}

}  // namespace

PathOperatorSet assemble_path_operators(const OperatorAssembler& assembler,
                                        const CoverSample& sample, Complex s, int ell,
                                        const PathOperatorOptions& opts) {
  const auto& data = assembler.data();
  const int two_d = data.alphabet_size();
  const int basis = assembler.spec().basis_size();
  const int n = sample.n;
  const int dim = assembler.scalar_dim() * n;

  PathAccumulator acc = accumulate_paths(sample, ell, opts, two_d);
  WordBlockCache blocks(assembler, s, opts.block_cap);

  PathOperatorSet set;
  set.paths_enumerated = acc.paths;
  auto make_op = [&]() {
    BlockOperator op;
    op.num_discs = two_d;
    op.basis_size = basis;
    op.sheet_count = n;
    op.matrix = MatrixXcd::Zero(dim, dim);
    return op;
  };
  set.bbar = make_op();
  for (int k = 0; k < ell; ++k) set.rk.push_back(make_op());

  // Deterministic assembly order: sorted group keys.
  std::vector<std::uint64_t> keys;
  keys.reserve(acc.groups.size());
  for (const auto& [key, _] : acc.groups) keys.push_back(key);
  std::sort(keys.begin(), keys.end());

  for (std::uint64_t key : keys) {
    const GroupWeights& g = acc.groups[key];
    int xl = static_cast<int>(key % n);
    int x0 = static_cast<int>((key / n) % n);
    std::vector<int> colors = unpack_word(key / (static_cast<std::uint64_t>(n) * n), two_d, ell + 1);
    MatrixXcd blk = blocks.block(colors);
    int row0 = flat_index(basis, n, data.conj(colors.front()), 0, x0);
    int col0 = flat_index(basis, n, data.conj(colors.back()), 0, xl);
    auto scatter = [&](MatrixXcd& target, double weight) {
      if (weight == 0.0) return;
      for (int p = 0; p < basis; ++p)
        for (int q = 0; q < basis; ++q) target(row0 + p * n, col0 + q * n) += weight * blk(p, q);
    };
    scatter(set.bbar.matrix, g.bbar);
    for (int k = 0; k < ell; ++k) scatter(set.rk[k].matrix, g.rk[k]);
  }
  set.blocks_assembled = static_cast<long>(acc.groups.size());
  return set;
}

MatrixXcd assemble_weighted_path_sum(
    const OperatorAssembler& assembler, int n, Complex s, int ell,
    const std::function<double(const std::vector<HalfEdge>&)>& weight_fn, long path_cap) {
  const auto& data = assembler.data();
  const int two_d = data.alphabet_size();
  const int basis = assembler.spec().basis_size();
  const int dim = assembler.scalar_dim() * n;
  WordBlockCache blocks(assembler, s, kBlockCap);
  MatrixXcd out = MatrixXcd::Zero(dim, dim);
  std::vector<int> colors(ell + 1);
  for_each_nb_path(n, data.d, ell, path_cap, [&](const std::vector<HalfEdge>& path) {
    double w = weight_fn(path);
    if (w == 0.0) return;
    for (int t = 0; t <= ell; ++t) colors[t] = path[t].i;
    MatrixXcd blk = blocks.block(colors);
    int row0 = flat_index(basis, n, data.conj(colors.front()), 0, path.front().x);
    int col0 = flat_index(basis, n, data.conj(colors.back()), 0, path.back().x);
    for (int p = 0; p < basis; ++p)
      for (int q = 0; q < basis; ++q) out(row0 + p * n, col0 + q * n) += w * blk(p, q);
  });
  return out;
}

DecompositionCheck decomposition_residual(const OperatorAssembler& assembler,
                                          const CoverSample& sample, Complex s, int ell,
                                          const PathOperatorOptions& opts) {
  DecompositionCheck check;
  TangleReport tangle = is_tangle_free(build_colored_graph(sample), ell);
  check.precondition_ok = tangle.tangle_free;
  if (!tangle.tangle_free) {
    check.tangled_witness = tangle.witness_vertex;
    return check;
  }
  const int n = sample.n;
  MatrixXcd b = assemble_B(assembler, sample, s).matrix;
  MatrixXcd b_pow = b;
  for (int k = 1; k < ell; ++k) b_pow = b_pow * b;
  PathOperatorSet ops = assemble_path_operators(assembler, sample, s, ell, opts);
  MatrixXcd rhs = ops.bbar.matrix;
  for (int k = 0; k < ell; ++k) rhs -= (1.0 / n) * ops.rk[k].matrix;
  MatrixXcd defect = b_pow - rhs;

  const int k0_dim = assembler.scalar_dim() * (n - 1);
  if (k0_dim <= 2000) {
    MatrixXcd probes = defect * k0_isometry(assembler, n);
    check.residual = probes.colwise().norm().maxCoeff();
    check.probes = k0_dim;
    check.probed_full_basis = true;
  } else {
    MatrixXcd w = k0_isometry(assembler, n);
    SplitMix64 rng(mix_keys(sample.seed, 0xBEEF));
    double worst = 0.0;
    for (int probe = 0; probe < 64; ++probe) {
      Eigen::VectorXcd v(k0_dim);
      for (int k = 0; k < k0_dim; ++k)
        v(k) = Complex(rng.next_unit() - 0.5, rng.next_unit() - 0.5);
      v.normalize();
      worst = std::max(worst, (defect * (w * v)).norm());
    }
    check.residual = worst;
    check.probes = 64;
    check.probed_full_basis = false;
  }
  return check;
}

HighTraceResult high_trace_crosscheck(const OperatorAssembler& assembler,
                                      const CoverSample& sample, Complex s, int ell,
                                      const PathOperatorOptions& opts) {
  const auto& data = assembler.data();
  const int two_d = data.alphabet_size();
  const int n = sample.n;

  PathAccumulator acc = accumulate_paths(sample, ell, opts, two_d);
  WordBlockCache blocks(assembler, s, opts.block_cap);

  // Direct side: assemble Bbar and take tr(Bbar Bbar^*) = ||Bbar||_F^2.
  PathOperatorSet ops = assemble_path_operators(assembler, sample, s, ell, opts);
  HighTraceResult result;
  result.direct = ops.bbar.matrix.squaredNorm();
  result.bbar_norm = spectral_norm(ops.bbar.matrix);

  // Path side: bucket groups by endpoints, pair words sharing both the
  // first and the last half-edge, and contract the word blocks.
  std::map<std::pair<int, int>, std::vector<std::pair<std::uint64_t, double>>> buckets;
  for (const auto& [key, g] : acc.groups) {
    if (g.bbar == 0.0) continue;
    int xl = static_cast<int>(key % n);
    int x0 = static_cast<int>((key / n) % n);
    buckets[{x0, xl}].push_back({key / (static_cast<std::uint64_t>(n) * n), g.bbar});
  }
  std::map<std::pair<std::uint64_t, std::uint64_t>, Complex> pair_trace;
  auto block_trace = [&](std::uint64_t id1, std::uint64_t id2) {
    auto it = pair_trace.find({id1, id2});
    if (it != pair_trace.end()) return it->second;
    std::vector<int> c1 = unpack_word(id1, two_d, ell + 1);
    std::vector<int> c2 = unpack_word(id2, two_d, ell + 1);
    Complex value = (blocks.block(c1).array() * blocks.block(c2).array().conjugate()).sum();
    pair_trace.emplace(std::make_pair(id1, id2), value);
    return value;
  };
  Complex path_sum = 0.0;
  for (const auto& [endpoints, words] : buckets) {
    for (const auto& [id1, w1] : words)
      for (const auto& [id2, w2] : words) {
        std::vector<int> c1 = unpack_word(id1, two_d, ell + 1);
        std::vector<int> c2 = unpack_word(id2, two_d, ell + 1);
        if (c1.front() != c2.front() || c1.back() != c2.back()) continue;
        path_sum += w1 * w2 * block_trace(id1, id2);
      }
  }
  result.path_sum = path_sum;
  double scale = std::max(std::abs(result.direct), 1e-300);
  result.rel_err = std::abs(path_sum - Complex(result.direct, 0.0)) / scale;
  return result;
}

std::vector<NormTrendRow> norm_trend_experiment(const OperatorAssembler& assembler,
                                                const std::vector<int>& n_values, Complex s,
                                                int trials, std::uint64_t seed,
                                                const NormTrendOptions& opts, int threads) {
  std::vector<NormTrendRow> rows(n_values.size() * trials);
  parallel_for_indexed(rows.size(), threads, [&](std::size_t slot) {
    int n = n_values[slot / trials];
    int trial = static_cast<int>(slot % trials);
    NormTrendRow row;
    row.n = n;
    row.trial = trial;
    row.seed = mix_keys(seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial));
    row.ell = opts.fixed_ell ? *opts.fixed_ell
                             : std::max(1, static_cast<int>(std::floor(opts.beta * std::log(n))));
    CoverSample sample = sample_symmetric(n, assembler.data().d, row.seed);
    row.tangle_free = is_tangle_free(build_colored_graph(sample), row.ell).tangle_free;
    try {
      PathOperatorSet ops = assemble_path_operators(assembler, sample, s, row.ell, opts.caps);
      row.norm_bbar = spectral_norm(ops.bbar.matrix);
      for (const auto& rk : ops.rk)
        row.norm_rk_max = std::max(row.norm_rk_max, spectral_norm(rk.matrix));
      MatrixXcd b0 = restrict_to_k0(assembler, assemble_B(assembler, sample, s).matrix, n);
      MatrixXcd acc = b0;
      for (int k = 1; k < row.ell; ++k) acc = acc * b0;
      row.norm_b_pow = spectral_norm(acc);
    } catch (const CapExceededError&) {
      row.skipped = true;
    }
    rows[slot] = row;
  });
  return rows;
}

}  // namespace schottky
