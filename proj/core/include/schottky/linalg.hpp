#pragma once

#include <Eigen/Dense>
#include <complex>

namespace schottky {

using MatrixXcd = Eigen::MatrixXcd;

/// det(I - M) through a pivoted LU with log accumulation, so magnitudes
/// far from 1 neither overflow nor lose the winding-relevant phase.
struct DetResult {
  std::complex<double> value{0.0, 0.0};
  std::complex<double> log_value{0.0, 0.0};  // log|det| + i arg, arg accumulated mod 2 pi
};
DetResult det_one_minus(MatrixXcd m);

/// Top singular value. Exact (BDC SVD) up to moderate dimensions, power
/// iteration on M*M beyond; the switch point keeps identity-suite checks
/// at full accuracy while large norm-trend instances stay affordable.
double spectral_norm(const MatrixXcd& m);

/// Eigenvalue of maximal modulus.
std::complex<double> leading_eigenvalue(const MatrixXcd& m);

}  // namespace schottky
