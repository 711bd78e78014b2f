#pragma once

#include <utility>
#include <vector>

#include "schottky/schottky_data.hpp"

namespace schottky {

/// Finite-depth pressure estimate: value = (1/N) log sum over all
/// admissible length-N words of (interval length)^r.
struct PressureEstimate {
  double r = 0.0;
  int depth = 0;
  double value = 0.0;
  double raw_sum = 0.0;
};

struct DimensionResult {
  double delta = 0.0;
  int depth = 0;
  std::pair<double, double> bracket{0.0, 0.0};
  double residual = 0.0;
};

/// Words enumerated per pressure evaluation are capped here; deeper
/// requests fail loudly instead of thrashing.
inline constexpr long kWordCap = 10'000'000;

/// log interval lengths of all length-N words, lexicographic order.
/// The depth-N sum is the only expensive part of the pressure machinery,
/// so callers that scan many exponents share this table.
std::vector<double> log_interval_length_table(const SchottkyData& data, int depth,
                                              int threads = 1);

PressureEstimate pressure_estimate(const SchottkyData& data, double r, int depth,
                                   int threads = 1);

/// Same estimate evaluated against a precomputed length table.
PressureEstimate pressure_estimate(const std::vector<double>& log_lengths, double r, int depth);

/// Bisection root of r -> pressure_estimate(r, depth) on [0, 1]. The
/// estimate is strictly decreasing there, so the bracket is safe; throws
/// std::domain_error when the endpoint signs do not straddle zero.
DimensionResult hausdorff_dimension(const SchottkyData& data, int depth, double tol,
                                    int threads = 1);

}  // namespace schottky
