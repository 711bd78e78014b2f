#pragma once

#include <vector>

#include "schottky/schottky_data.hpp"

namespace schottky {

/// Admissible symbol sequence over the letters 0..2d-1: consecutive
/// letters never pair to an inverse (letters[j+1] != conj(letters[j])).
/// The empty word indexes the identity.
struct Word {
  std::vector<int> letters;

  int length() const { return static_cast<int>(letters.size()); }
  bool empty() const { return letters.empty(); }

  bool is_admissible(int d) const;
  /// Drops the last letter.
  Word parent() const;
  /// Drops the first letter.
  Word tail() const;
  /// Reversed word with every letter conjugated; indexes the inverse element.
  Word mirror(int d) const;
  /// True when this word may be followed by `next` (concatenation stays
  /// admissible).
  bool can_concat(const Word& next, int d) const;
  Word concat(const Word& next) const;

  bool operator==(const Word&) const = default;
};

/// All admissible words of length n, lexicographic in the letters.
/// 2d*(2d-1)^(n-1) words for n >= 1, the empty word alone for n = 0.
std::vector<Word> enumerate_words(int d, int n);

/// Product of generators along the word; identity for the empty word.
/// Throws std::invalid_argument for inadmissible words.
Mobius word_matrix(const SchottkyData& data, const Word& w);

/// Length of the image interval gamma_{w'}(I_last): the quantity every
/// distortion and pressure estimate is built from. Requires a nonempty
/// admissible word.
double interval_length(const SchottkyData& data, const Word& w);

/// log of interval_length, computed in a cancellation-free form.
double log_interval_length(const SchottkyData& data, const Word& w);

/// Birkhoff sum of the expansion cocycle along w evaluated at z, using the
/// principal branch of the logarithm at every step:
///   sum_t -Log gamma'_{w_t}( gamma_{w_{t+1}..w_n} z ).
/// exp(-s * tau_word(w, z)) is then the weight attached to the composition
/// with gamma_w. Throws std::domain_error when an intermediate image
/// escapes the closed disc union (checked with relative slack 1e-12, so
/// boundary points pass).
Complex tau_word(const SchottkyData& data, const Word& w, Complex z);

}  // namespace schottky
