#include "schottky/thermo.hpp"

#include <cmath>
#include <stdexcept>

#include "schottky/util.hpp"
#include "schottky/word.hpp"

namespace schottky {

namespace {

long word_count(int d, int depth) {
  long count = 2 * d;
  for (int k = 1; k < depth; ++k) {
    count *= 2 * d - 1;
    if (count > kWordCap) return count;
  }
  return count;
}

// Appends log interval lengths of all depth-N words starting with
// `first`, lexicographic order. The running product m covers the prefix
// excluding the final letter; its determinant is tracked additively from
// the per-letter determinants (the product entries grow like the top
// singular value squared, so a*d - b*c computed from them is pure noise
// beyond length ~10).
void collect_from_root(const SchottkyData& data, int depth, int first,
                       std::vector<double>& out) {
  const int two_d = data.alphabet_size();
  std::vector<double> letter_log_det(two_d);
  for (int l = 0; l < two_d; ++l) letter_log_det[l] = std::log(data.generators[l].det());
  auto log_upsilon = [&](const Mobius& m, double log_det, int last) {
    const Disc& disc = data.discs[last];
    double ta = std::abs(m.c * disc.left() + m.d);
    double tb = std::abs(m.c * disc.right() + m.d);
    return std::log(2.0 * disc.radius) + log_det - std::log(ta) - std::log(tb);
  };
  auto dfs = [&](auto&& self, const Mobius& prefix, double log_det, int letter,
                 int remaining) -> void {
    if (remaining == 1) {
      out.push_back(log_upsilon(prefix, log_det, letter));
      return;
    }
    Mobius next = prefix * data.generators[letter];
    double next_log_det = log_det + letter_log_det[letter];
    for (int l = 0; l < two_d; ++l) {
      if (l == data.conj(letter)) continue;
      self(self, next, next_log_det, l, remaining - 1);
    }
  };
  dfs(dfs, Mobius::identity(), 0.0, first, depth);
}

}  // namespace

std::vector<double> log_interval_length_table(const SchottkyData& data, int depth,
                                              int threads) {
  if (depth < 1) throw std::invalid_argument("pressure depth must be >= 1");
  long count = word_count(data.d, depth);
  if (count > kWordCap)
    throw CapExceededError("word count " + std::to_string(count) + " exceeds cap " +
                           std::to_string(kWordCap));
  const int two_d = data.alphabet_size();
  std::vector<std::vector<double>> parts(two_d);
  parallel_for_indexed(two_d, threads, [&](std::size_t first) {
    parts[first].reserve(count / two_d + 1);
    collect_from_root(data, depth, static_cast<int>(first), parts[first]);
  });
  std::vector<double> out;
  out.reserve(count);
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

PressureEstimate pressure_estimate(const std::vector<double>& log_lengths, double r,
                                   int depth) {
  std::vector<double> scaled(log_lengths.size());
  for (std::size_t k = 0; k < log_lengths.size(); ++k) scaled[k] = r * log_lengths[k];
  double lse = log_sum_exp(scaled);
  PressureEstimate est;
  est.r = r;
  est.depth = depth;
  est.value = lse / depth;
  est.raw_sum = std::exp(lse);
  return est;
}

PressureEstimate pressure_estimate(const SchottkyData& data, double r, int depth,
                                   int threads) {
  if (r < 0.0) throw std::invalid_argument("pressure exponent must be >= 0");
  return pressure_estimate(log_interval_length_table(data, depth, threads), r, depth);
}

DimensionResult hausdorff_dimension(const SchottkyData& data, int depth, double tol,
                                    int threads) {
  if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
  auto table = log_interval_length_table(data, depth, threads);
  auto value_at = [&](double r) { return pressure_estimate(table, r, depth).value; };
  double lo = 0.0, hi = 1.0;
  double p_lo = value_at(lo), p_hi = value_at(hi);
  if (!(p_lo > 0.0) || !(p_hi < 0.0))
    throw std::domain_error("pressure estimate does not change sign on [0,1]");
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    double p_mid = value_at(mid);
    (p_mid > 0.0 ? lo : hi) = mid;
  }
  DimensionResult result;
  result.delta = 0.5 * (lo + hi);
  result.depth = depth;
  result.bracket = {lo, hi};
  result.residual = std::abs(value_at(result.delta));
  return result;
}

}  // namespace schottky
