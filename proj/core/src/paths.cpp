#include "schottky/paths.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace schottky {

namespace {

struct CanonicalEdge {
  int x, color, y;
  bool operator==(const CanonicalEdge&) const = default;
  bool operator<(const CanonicalEdge& o) const {
    return std::tie(color, x, y) < std::tie(o.color, o.x, o.y);
  }
};

CanonicalEdge canonical(int x, int i, int y, int d) {
  if (i < d) return {x, i, y};
  return {y, i - d, x};
}

}  // namespace

GraphStats path_graph_stats(const std::vector<HalfEdge>& half_edges, int d, int from, int to) {
  GraphStats stats;
  if (to <= from) {  // a single half-edge traces no edge
    stats.v = to == from ? 1 : 0;
    stats.rank = stats.e - stats.v + (stats.v > 0 ? 1 : 0);
    return stats;
  }
  std::vector<CanonicalEdge> edges;
  edges.reserve(to - from);
  for (int t = from; t < to; ++t)
    edges.push_back(canonical(half_edges[t].x, half_edges[t].i, half_edges[t + 1].x, d));
  std::sort(edges.begin(), edges.end());

  // Multiplicity-one count over occurrences, then dedupe.
  int e1 = 0;
  for (std::size_t k = 0; k < edges.size();) {
    std::size_t j = k;
    while (j < edges.size() && edges[j] == edges[k]) ++j;
    if (j - k == 1) ++e1;
    k = j;
  }
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<int> vertices;
  for (int t = from; t <= to; ++t) vertices.push_back(half_edges[t].x);
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());

  // Tiny union-find over the distinct vertices.
  std::vector<int> parent(vertices.size());
  for (std::size_t k = 0; k < parent.size(); ++k) parent[k] = static_cast<int>(k);
  auto local = [&](int v) {
    return static_cast<int>(std::lower_bound(vertices.begin(), vertices.end(), v) -
                            vertices.begin());
  };
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& e : edges) {
    int a = find(local(e.x)), b = find(local(e.y));
    if (a != b) parent[a] = b;
  }
  int components = 0;
  for (std::size_t k = 0; k < parent.size(); ++k)
    if (find(static_cast<int>(k)) == static_cast<int>(k)) ++components;

  stats.v = static_cast<int>(vertices.size());
  stats.e = static_cast<int>(edges.size());
  stats.e1 = e1;
  stats.rank = stats.e - stats.v + components;
  return stats;
}

GraphStats path_graph_stats(const std::vector<HalfEdge>& half_edges, int d) {
  return path_graph_stats(half_edges, d, 0, static_cast<int>(half_edges.size()) - 1);
}

bool segment_tangle_free(const std::vector<HalfEdge>& half_edges, int d, int from, int to) {
  return path_graph_stats(half_edges, d, from, to).rank <= 1;
}

long nb_path_count(int n, int d, int ell) {
  long count = static_cast<long>(n) * 2 * d;
  for (int t = 0; t < ell; ++t) {
    count *= static_cast<long>(2 * d - 1) * n;
    if (count < 0) return std::numeric_limits<long>::max();  // overflow guard
  }
  return count;
}

void for_each_nb_path(int n, int d, int ell, long cap,
                      const std::function<void(const std::vector<HalfEdge>&)>& fn) {
  long count = nb_path_count(n, d, ell);
  if (count > cap)
    throw CapExceededError("path enumeration at n=" + std::to_string(n) +
                           ", ell=" + std::to_string(ell) + " needs " + std::to_string(count) +
                           " paths, cap " + std::to_string(cap));
  const int two_d = 2 * d;
  std::vector<HalfEdge> path(ell + 1);
  auto dfs = [&](auto&& self, int t) -> void {
    if (t == ell + 1) {
      fn(path);
      return;
    }
    for (int i = 0; i < two_d; ++i) {
      if (t > 0 && i == (path[t - 1].i + d) % two_d) continue;  // backtracking
      for (int x = 0; x < n; ++x) {
        path[t] = {x, i};
        self(self, t + 1);
      }
    }
  };
  dfs(dfs, 0);
}

}  // namespace schottky
