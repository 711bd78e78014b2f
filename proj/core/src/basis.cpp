#include "schottky/basis.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace schottky {

Complex disc_basis_value(const Disc& disc, int p, Complex z) {
  double scale = std::sqrt((p + 1) / std::numbers::pi) * std::pow(disc.radius, -(p + 1));
  return scale * std::pow(z - Complex(disc.center, 0.0), p);
}

Complex bergman_kernel_eval(const Disc& disc, Complex z, Complex w) {
  double r2 = disc.radius * disc.radius;
  Complex bracket = r2 - std::conj(w - Complex(disc.center, 0.0)) * (z - Complex(disc.center, 0.0));
  if (std::abs(bracket) == 0.0) throw std::domain_error("bergman kernel pole");
  return r2 / (std::numbers::pi * bracket * bracket);
}

ProjectionResult basis_project(const Disc& disc, const std::vector<Complex>& samples,
                               int degree_cap) {
  const int m = static_cast<int>(samples.size());
  if (m < 4 * (degree_cap + 1))
    throw std::invalid_argument("too few boundary samples for the requested degree");
  ProjectionResult result;
  result.coefficients.resize(degree_cap + 1);
  // a_p = b_p r^{p+1} sqrt(pi/(p+1)) with b_p the Taylor coefficient about
  // the center; the r^p from the samples and r^{p+1} from the basis
  // normalization collapse to a single factor r.
  for (int p = 0; p <= degree_cap; ++p) {
    Complex acc = 0.0;
    for (int k = 0; k < m; ++k) {
      double theta = -2.0 * std::numbers::pi * p * k / m;
      acc += samples[k] * Complex(std::cos(theta), std::sin(theta));
    }
    result.coefficients[p] =
        acc * (disc.radius / m) * std::sqrt(std::numbers::pi / (p + 1));
  }
  double total = 0.0, top = 0.0;
  int top_start = degree_cap + 1 - (degree_cap + 1) / 4;
  for (int p = 0; p <= degree_cap; ++p) {
    double mass = std::norm(result.coefficients[p]);
    total += mass;
    if (p >= top_start) top += mass;
  }
  result.aliasing_warning = total > 0.0 && top / total > 1e-10;
  return result;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  if (n == 1) {
    nodes[0] = 0.0;
    weights[0] = 2.0;
    return;
  }
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  for (int k = 0; k < n; ++k) {
    nodes[k] = es.eigenvalues()(k);
    double v = es.eigenvectors()(0, k);
    weights[k] = 2.0 * v * v;
  }
}

Complex integrate_over_disc(const std::function<Complex(Complex)>& f, const Disc& disc,
                            int radial, int angular) {
  std::vector<double> nodes, weights;
  gauss_legendre(radial, nodes, weights);
  Complex acc = 0.0;
  for (int i = 0; i < radial; ++i) {
    double rho = 0.5 * disc.radius * (nodes[i] + 1.0);
    double wr = 0.5 * disc.radius * weights[i];
    Complex ring = 0.0;
    for (int k = 0; k < angular; ++k) {
      double theta = 2.0 * std::numbers::pi * k / angular;
      ring += f(Complex(disc.center + rho * std::cos(theta), rho * std::sin(theta)));
    }
    acc += wr * rho * ring * (2.0 * std::numbers::pi / angular);
  }
  return acc;
}

QuadratureResult trace_via_kernel(const std::function<Complex(Complex)>& diagonal,
                                  const std::vector<Disc>& discs, int radial, int angular) {
  auto evaluate = [&](int nr, int na) {
    Complex acc = 0.0;
    for (const Disc& disc : discs) acc += integrate_over_disc(diagonal, disc, nr, na);
    return acc;
  };
  Complex coarse = evaluate(radial, angular);
  Complex fine = evaluate(2 * radial, 2 * angular);
  QuadratureResult result;
  result.value = fine;
  double scale = std::abs(fine);
  result.rel_change = scale > 0.0 ? std::abs(fine - coarse) / scale : std::abs(fine - coarse);
  result.converged = result.rel_change <= 1e-6;
  return result;
}

}  // namespace schottky
