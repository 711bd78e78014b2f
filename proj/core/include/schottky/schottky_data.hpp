#pragma once

#include <complex>
#include <string>
#include <vector>

namespace schottky {

using Complex = std::complex<double>;

/// Open disc in C with real center; its trace on the real axis is the
/// interval (center - radius, center + radius).
struct Disc {
  double center = 0.0;
  double radius = 1.0;

  double left() const { return center - radius; }
  double right() const { return center + radius; }
  /// Point on the boundary circle at angle theta.
  Complex boundary_point(double theta) const;
  /// Membership in the closed disc, with a relative slack in the radius.
  bool contains_closed(Complex z, double rel_slack = 0.0) const;
};

/// Real 2x2 matrix acting by Mobius transformation on the extended plane.
struct Mobius {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  double det() const { return a * d - b * c; }
  Complex apply(Complex z) const { return (a * z + b) / (c * z + d); }
  double apply(double x) const { return (a * x + b) / (c * x + d); }
  /// Derivative (a z + b)/(c z + d))' = det / (c z + d)^2.
  Complex deriv(Complex z) const {
    Complex t = c * z + d;
    return det() / (t * t);
  }
  Mobius inverse() const { return {d, -b, -c, a}; }  // unit determinant assumed
  Mobius operator*(const Mobius& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  static Mobius identity() { return {}; }
  /// Flips the overall sign so the lower-left entry is <= 0.
  Mobius sign_normalized() const;
};

/// Disc system with paired generators: generator i maps the exterior of
/// disc conj(i) onto the closure of disc i, and generator conj(i) is its
/// inverse. Letters are 0-based; the partner of i is (i + d) mod 2d.
struct SchottkyData {
  int d = 0;
  std::vector<Disc> discs;        // size 2d
  std::vector<Mobius> generators; // size 2d, unit determinant

  int alphabet_size() const { return 2 * d; }
  int conj(int letter) const { return (letter + d) % (2 * d); }

  std::string to_json() const;
  static SchottkyData from_json(const std::string& text);
};

/// Builds the standard generator for a pair of real-centered discs and
/// normalizes it to unit determinant.
Mobius pairing_mobius(const Disc& image, const Disc& source);

/// Constructs a SchottkyData from disc data alone via the pairing formula.
/// Throws std::invalid_argument when radii are non-positive or the disc
/// closures are not pairwise disjoint.
SchottkyData build_symmetric_schottky(const std::vector<double>& centers,
                                      const std::vector<double>& radii);

/// d=2, centers (-6,-2,6,2), radii 1: the configuration used as the
/// default by the CLI and throughout the tests.
SchottkyData reference_schottky();

struct ValidationReport {
  std::vector<std::string> violations;
  double max_boundary_error = 0.0;
  double max_determinant_error = 0.0;
  bool ok() const { return violations.empty(); }
};

/// Checks every structural invariant of the disc/generator system within
/// tol: positive radii, separated closures, unit determinants, inverse
/// pairing, and the boundary mapping property (by sampled circle points).
/// Reports; never throws.
ValidationReport validate_schottky(const SchottkyData& data, double tol);

/// Minimum required gap between disc closures. Guards the uniform
/// contraction that the quadrature and word-sum estimates rely on.
inline constexpr double kMinDiscSeparation = 1e-9;

}  // namespace schottky
