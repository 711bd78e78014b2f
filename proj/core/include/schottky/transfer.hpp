#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "schottky/operators.hpp"
#include "schottky/representation.hpp"

namespace schottky {

/// Twisted transfer operator L_{s,rho} = sum_i A_i(s) (x) rho(gamma_i) in
/// (disc, degree, sheet) block form. For the trivial representation this
/// is exactly the sum of the elementary operators.
BlockOperator assemble_transfer(const OperatorAssembler& assembler, Complex s,
                                const Representation& rep);

Complex fredholm_det(const OperatorAssembler& assembler, Complex s, const Representation& rep);
/// log det(1 - L) for magnitude-safe scans.
Complex fredholm_logdet(const OperatorAssembler& assembler, Complex s,
                        const Representation& rep);

/// Spectral norm of the ell-th power of the assembled operator.
double operator_power_norm(const OperatorAssembler& assembler, Complex s,
                           const Representation& rep, int ell);

struct Rectangle {
  double re_lo = 0.0, re_hi = 0.0, im_lo = 0.0, im_hi = 0.0;
  bool contains(Complex s) const {
    return s.real() >= re_lo && s.real() <= re_hi && s.imag() >= im_lo && s.imag() <= im_hi;
  }
};

struct LocatedZero {
  Complex location;
  int winding = 0;  // multiplicity from the cell contour
};

struct ResonanceReport {
  Rectangle rectangle;
  int nx = 0, ny = 0;          // cells per axis; grid stores (nx+1) x (ny+1) corner values
  std::vector<Complex> grid;   // row-major, index = iy * (nx+1) + ix
  std::vector<LocatedZero> zeros;
  int degree_cap = 0;

  Complex grid_value(int ix, int iy) const { return grid[iy * (nx + 1) + ix]; }
};

struct ScanOptions {
  double contour_floor = 1e-12;   // |det| below this on a contour forces a grid perturbation
  double newton_step = 1e-6;      // central-difference step for the refinement derivative
  double newton_tol = 1e-10;
  int newton_max_iter = 50;
  int max_edge_depth = 12;        // adaptive argument-tracking subdivision limit
};

/// Argument-principle sweep of det(1 - L(s)) over a rectangle: evaluates
/// the grid, accumulates the contour argument around every cell (edges
/// subdivided while a step turns by more than pi/2), and Newton-refines
/// each cell with nonzero winding. Throws std::runtime_error if even the
/// perturbed grid runs through a zero.
ResonanceReport resonance_scan(const OperatorAssembler& assembler, const Rectangle& rect,
                               int nx, int ny, const Representation& rep,
                               const ScanOptions& opts = {}, int threads = 1);

/// Generic variant for any holomorphic map; the transfer-operator scan is
/// this applied to s -> det(1 - L(s)).
struct WindingScanResult {
  std::vector<Complex> grid;
  std::vector<LocatedZero> zeros;
  double min_abs = 0.0;  // over all contour evaluations
};
WindingScanResult winding_scan(const std::function<Complex(Complex)>& f, const Rectangle& rect,
                               int nx, int ny, const ScanOptions& opts = {}, int threads = 1);

/// Rightmost zero of the (real-valued) determinant on a real interval,
/// located by sign change plus bisection. Returns nullopt when the
/// determinant does not change sign on the sampled grid.
std::optional<double> rightmost_real_zero(const OperatorAssembler& assembler,
                                          const Representation& rep, double re_lo,
                                          double re_hi, int samples, double tol);

}  // namespace schottky
