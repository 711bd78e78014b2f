#include "schottky/linalg.hpp"

#include <cmath>

namespace schottky {

DetResult det_one_minus(MatrixXcd m) {
  const auto n = m.rows();
  m = -m;
  m.diagonal().array() += 1.0;
  Eigen::PartialPivLU<MatrixXcd> lu(m);
  std::complex<double> log_det = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) log_det += std::log(lu.matrixLU()(k, k));
  int parity = lu.permutationP().determinant();  // +1 or -1
  DetResult result;
  if (parity < 0) log_det += std::complex<double>(0.0, std::numbers::pi);
  result.log_value = log_det;
  result.value = std::exp(log_det);
  return result;
}

double spectral_norm(const MatrixXcd& m) {
  if (m.rows() == 0) return 0.0;
  if (m.rows() <= 1200) {
    Eigen::BDCSVD<MatrixXcd> svd(m);
    return svd.singularValues()(0);
  }
  // Power iteration on M* M with a fixed, slightly uneven start vector.
  Eigen::VectorXcd v(m.cols());
  for (Eigen::Index k = 0; k < m.cols(); ++k)
    v(k) = std::complex<double>(1.0 + 0.125 * static_cast<double>(k % 7), 0.25);
  v.normalize();
  double sigma = 0.0;
  for (int iter = 0; iter < 10000; ++iter) {
    Eigen::VectorXcd w = m * v;
    double next = w.norm();
    v = m.adjoint() * w;
    double nv = v.norm();
    if (nv == 0.0) return 0.0;
    v /= nv;
    if (std::abs(next - sigma) <= 1e-13 * std::max(next, 1e-300)) return next;
    sigma = next;
  }
  return sigma;
}

std::complex<double> leading_eigenvalue(const MatrixXcd& m) {
  Eigen::ComplexEigenSolver<MatrixXcd> es(m, /*computeEigenvectors=*/false);
  std::complex<double> best = 0.0;
  for (Eigen::Index k = 0; k < m.rows(); ++k)
    if (std::abs(es.eigenvalues()(k)) > std::abs(best)) best = es.eigenvalues()(k);
  return best;
}

}  // namespace schottky
