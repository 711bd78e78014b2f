#pragma once

#include <functional>
#include <vector>

#include "schottky/schottky_data.hpp"

namespace schottky {

/// Per-disc polynomial truncation. Basis size is degree_cap + 1 per disc;
/// coefficients are extracted from quadrature_points boundary samples.
struct BasisSpec {
  int degree_cap = 16;
  int quadrature_points = 128;

  int basis_size() const { return degree_cap + 1; }
  /// quadrature_points >= 4 * (degree_cap + 1)
  bool valid() const { return degree_cap >= 0 && quadrature_points >= 4 * basis_size(); }
};

/// Orthonormal basis of the weighted monomials on a disc:
///   phi_p(z) = sqrt((p+1)/pi) * r^-(p+1) * (z - c)^p.
Complex disc_basis_value(const Disc& disc, int p, Complex z);

/// Reproducing kernel of the disc, r^2 / (pi [r^2 - (conj(w)-c)(z-c)]^2).
/// Throws std::domain_error if the bracket vanishes (cannot happen for
/// z, w strictly inside).
Complex bergman_kernel_eval(const Disc& disc, Complex z, Complex w);

struct ProjectionResult {
  std::vector<Complex> coefficients;  // in the orthonormal basis, degree 0..cap
  bool aliasing_warning = false;      // top quarter carries > 1e-10 relative mass
};

/// Coefficients of a holomorphic function in the orthonormal basis from
/// uniformly spaced boundary samples (discrete Fourier transform of the
/// Taylor expansion about the center). samples[k] = f(c + r e^{2 pi i k/M}).
ProjectionResult basis_project(const Disc& disc, const std::vector<Complex>& samples,
                               int degree_cap);

/// Gauss-Legendre nodes/weights on [-1, 1] (Golub-Welsch).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Integral over one disc of a scalar field given in Cartesian form,
/// radial Gauss-Legendre x uniform angular grid.
Complex integrate_over_disc(const std::function<Complex(Complex)>& f, const Disc& disc,
                            int radial, int angular);

struct QuadratureResult {
  Complex value{0.0, 0.0};
  bool converged = false;
  double rel_change = 0.0;  // |value - coarse| / |value|
};

/// Integrates a kernel diagonal over a set of discs and flags
/// non-convergence when doubling the orders moves the result by more than
/// 1e-6 relative.
QuadratureResult trace_via_kernel(const std::function<Complex(Complex)>& diagonal,
                                  const std::vector<Disc>& discs, int radial, int angular);

}  // namespace schottky
