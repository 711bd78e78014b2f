#include "schottky/cover.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "schottky/rng.hpp"
#include "schottky/schottky_data.hpp"

namespace schottky {

bool CoverSample::valid() const {
  if (static_cast<int>(sigma.size()) != 2 * d) return false;
  for (int i = 0; i < d; ++i) {
    const auto& fwd = sigma[i];
    const auto& back = sigma[conj(i)];
    if (static_cast<int>(fwd.size()) != n || static_cast<int>(back.size()) != n) return false;
    std::vector<bool> seen(n, false);
    for (int x = 0; x < n; ++x) {
      int y = fwd[x];
      if (y < 0 || y >= n || seen[y]) return false;
      seen[y] = true;
      if (back[y] != x) return false;
    }
  }
  return true;
}

CoverSample sample_symmetric(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 2) throw std::invalid_argument("need n >= 1 and d >= 2");
  CoverSample sample;
  sample.n = n;
  sample.d = d;
  sample.seed = seed;
  sample.sigma.assign(2 * d, std::vector<int>(n));
  for (int i = 0; i < d; ++i) {
    auto& perm = sample.sigma[i];
    for (int x = 0; x < n; ++x) perm[x] = x;
    SplitMix64 rng(mix_keys(seed, static_cast<std::uint64_t>(i) + 1));
    for (int x = n - 1; x > 0; --x)
      std::swap(perm[x], perm[rng.next_below(static_cast<std::uint64_t>(x) + 1)]);
    auto& inv = sample.sigma[i + d];
    for (int x = 0; x < n; ++x) inv[perm[x]] = x;
  }
  return sample;
}

CoverSample identity_cover(int n, int d) {
  CoverSample sample;
  sample.n = n;
  sample.d = d;
  sample.sigma.assign(2 * d, std::vector<int>(n));
  for (auto& perm : sample.sigma)
    for (int x = 0; x < n; ++x) perm[x] = x;
  return sample;
}

Eigen::MatrixXd contrast_basis(int n) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n - 1, n);
  for (int k = 1; k < n; ++k) {
    double scale = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int j = 0; j < k; ++j) v(k - 1, j) = -scale;
    v(k - 1, k) = k * scale;
  }
  return v;
}

PermutationMatrices permutation_matrices(const CoverSample& sample) {
  const int n = sample.n;
  const int two_d = 2 * sample.d;
  PermutationMatrices out;
  out.s.reserve(two_d);
  out.s_bar.reserve(two_d);
  for (int i = 0; i < two_d; ++i) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
    for (int x = 0; x < n; ++x) s(x, sample.sigma[i][x]) = 1.0;
    out.s_bar.push_back(s.array() - 1.0 / n);
    out.s.push_back(std::move(s));
  }
  out.rho0.dimension = std::max(n - 1, 0);
  if (n > 1) {
    // Sheets carry the composition action f -> f(sigma(.)), whose matrix
    // on indicators is S itself; S_i S_j then realizes the product letter
    // by letter, and V S_i V^T is its mean-zero block.
    Eigen::MatrixXd v = contrast_basis(n);
    for (int i = 0; i < two_d; ++i)
      out.rho0.images.push_back((v * out.s[i] * v.transpose()).cast<Complex>());
  } else {
    out.rho0.images.assign(two_d, MatrixXcd::Zero(0, 0));
  }
  return out;
}

ColoredGraph build_colored_graph(const CoverSample& sample) {
  ColoredGraph graph;
  graph.n = sample.n;
  graph.d = sample.d;
  for (int i = 0; i < sample.d; ++i)
    for (int x = 0; x < sample.n; ++x) graph.edges.push_back({x, i, sample.sigma[i][x]});
  std::sort(graph.edges.begin(), graph.edges.end());
  graph.edges.erase(std::unique(graph.edges.begin(), graph.edges.end()), graph.edges.end());
  return graph;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

TangleReport is_tangle_free(const ColoredGraph& graph, int ell) {
  if (ell < 1) throw std::invalid_argument("ball radius must be >= 1");
  const int n = graph.n;
  // Vertex adjacency of the underlying multigraph (colors ignored).
  std::vector<std::vector<int>> adjacency(n);
  for (const auto& e : graph.edges) {
    adjacency[e.x].push_back(e.y);
    if (e.y != e.x) adjacency[e.y].push_back(e.x);
  }
  TangleReport report;
  std::vector<int> dist(n);
  for (int x = 0; x < n; ++x) {
    std::fill(dist.begin(), dist.end(), -1);
    std::queue<int> queue;
    dist[x] = 0;
    queue.push(x);
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop();
      if (dist[u] >= ell) continue;
      for (int v : adjacency[u])
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push(v);
        }
    }
    // Ball edges: nearer endpoint within distance ell-1.
    int edges = 0;
    UnionFind uf(n);
    std::vector<bool> in_ball(n, false);
    int vertices = 0;
    auto add_vertex = [&](int v) {
      if (!in_ball[v]) {
        in_ball[v] = true;
        ++vertices;
      }
    };
    add_vertex(x);
    for (const auto& e : graph.edges) {
      int near = -1;
      if (dist[e.x] >= 0 && dist[e.x] <= ell - 1) near = dist[e.x];
      if (dist[e.y] >= 0 && dist[e.y] <= ell - 1)
        near = near < 0 ? dist[e.y] : std::min(near, dist[e.y]);
      if (near < 0) continue;
      ++edges;
      add_vertex(e.x);
      add_vertex(e.y);
      uf.unite(e.x, e.y);
    }
    int components = 0;
    for (int v = 0; v < n; ++v)
      if (in_ball[v] && uf.find(v) == v) ++components;
    int excess = edges - vertices + components;
    if (excess > 1) {
      report.tangle_free = false;
      report.witness_vertex = x;
      report.witness_excess = excess;
      return report;
    }
  }
  return report;
}

}  // namespace schottky
