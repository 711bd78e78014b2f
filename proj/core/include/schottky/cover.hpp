#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "schottky/representation.hpp"

namespace schottky {

/// Symmetric permutation tuple defining a degree-n cover: sigma[i + d] is
/// the inverse of sigma[i]. Permutations are 0-based maps on {0..n-1}.
struct CoverSample {
  int n = 1;
  int d = 2;
  std::vector<std::vector<int>> sigma;  // 2d permutations
  std::uint64_t seed = 0;

  int conj(int letter) const { return (letter + d) % (2 * d); }
  /// Max deviation from the inverse pairing / bijectivity (0 when valid).
  bool valid() const;
};

/// Draws sigma_1..sigma_d independently and uniformly (Fisher-Yates on a
/// counter-based stream keyed by (seed, generator)), then extends by
/// inverses. Deterministic in the seed, independent of thread count.
CoverSample sample_symmetric(int n, int d, std::uint64_t seed);

/// All-identity permutations; the disconnected n-fold copy of the base.
CoverSample identity_cover(int n, int d);

struct PermutationMatrices {
  std::vector<Eigen::MatrixXd> s;       // 0-1 matrices, S[i](x, sigma_i(x)) = 1
  std::vector<Eigen::MatrixXd> s_bar;   // S - (1/n) ones
  Representation rho0;                  // (n-1)-dimensional block orthogonal to constants
};

/// Orthonormal basis of the mean-zero subspace used to realize rho0:
/// v_k = (k e_{k+1} - sum_{j<=k} e_j)/sqrt(k(k+1)), rows of the returned
/// (n-1) x n matrix.
Eigen::MatrixXd contrast_basis(int n);

PermutationMatrices permutation_matrices(const CoverSample& sample);

/// Colored edge [x, color, y] stored in canonical orientation: the stored
/// color is always the smaller of the pair (color, conj(color)), which
/// picks the lexicographically minimal representative of the equivalence
/// (x, i, y) ~ (y, conj(i), x).
struct ColoredEdge {
  int x = 0;
  int color = 0;  // in [0, d)
  int y = 0;
  auto operator<=>(const ColoredEdge&) const = default;
};

struct ColoredGraph {
  int n = 0;
  int d = 0;
  std::vector<ColoredEdge> edges;  // sorted, duplicate-free
};

/// Graph of the cover: one edge [x, i, sigma_i(x)] per vertex and color.
ColoredGraph build_colored_graph(const CoverSample& sample);

struct TangleReport {
  bool tangle_free = true;
  /// First vertex whose radius-ell ball carries two independent cycles.
  std::optional<int> witness_vertex;
  int witness_excess = 0;  // cycles found in the witness ball
};

/// A ball of radius ell at x holds every edge lying on a path of length
/// <= ell from x (equivalently: edges whose nearer endpoint is within
/// distance ell-1). Tangle-free means every such ball has cyclomatic
/// number (edges - vertices + components) at most 1.
TangleReport is_tangle_free(const ColoredGraph& graph, int ell);

}  // namespace schottky
