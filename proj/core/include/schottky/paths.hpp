#pragma once

#include <functional>
#include <vector>

#include "schottky/cover.hpp"
#include "schottky/util.hpp"

namespace schottky {

/// Half-edge (vertex, letter): the unit every non-backtracking path is
/// built from. Paths do not have to follow any particular cover; the
/// permutation weights decide which ones contribute.
struct HalfEdge {
  int x = 0;
  int i = 0;
  bool operator==(const HalfEdge&) const = default;
};

/// Image graph data of a path: distinct colored edges e, vertices v,
/// multiplicity-one edges e1, and cyclomatic rank (e - v + components).
struct GraphStats {
  int v = 0;
  int e = 0;
  int e1 = 0;
  int rank = 0;
};

/// Stats of the colored graph traced by half_edges[from..to] (inclusive);
/// the path contributes the edges between consecutive half-edges.
GraphStats path_graph_stats(const std::vector<HalfEdge>& half_edges, int d, int from, int to);
GraphStats path_graph_stats(const std::vector<HalfEdge>& half_edges, int d);

/// A path is tangle-free when its graph has at most one cycle.
bool segment_tangle_free(const std::vector<HalfEdge>& half_edges, int d, int from, int to);

long nb_path_count(int n, int d, int ell);

/// Enumerates every non-backtracking path of ell+1 half-edges over
/// [n] x [2d], lexicographically, invoking fn on each. Throws
/// CapExceededError before enumerating when the count exceeds cap.
void for_each_nb_path(int n, int d, int ell, long cap,
                      const std::function<void(const std::vector<HalfEdge>&)>& fn);

inline constexpr long kPathCap = 10'000'000;
inline constexpr long kBlockCap = 10'000;

}  // namespace schottky
