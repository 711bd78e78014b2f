#pragma once

#include <vector>

#include "schottky/linalg.hpp"

namespace schottky {

/// Finite-dimensional unitary representation of the free group, given by
/// its images on the 2d letters with image(conj(i)) = image(i)^{-1}.
struct Representation {
  int dimension = 1;
  std::vector<MatrixXcd> images;  // one per letter

  static Representation trivial(int two_d);

  /// Max deviation from unitarity and from the inverse pairing.
  double unitarity_defect() const;
  double pairing_defect(int d) const;
};

}  // namespace schottky
