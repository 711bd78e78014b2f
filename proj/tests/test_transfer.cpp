#include <doctest.h>

#include <cmath>

#include "schottky/cover.hpp"
#include "schottky/thermo.hpp"
#include "schottky/transfer.hpp"

using namespace schottky;

namespace {

struct Fixture {
  SchottkyData data = reference_schottky();
  OperatorAssembler assembler{data, BasisSpec{16, 128}};
  Representation triv = Representation::trivial(4);
};

}  // namespace

TEST_CASE("trivial twist reduces to the sum of elementary operators") {
  Fixture f;
  Complex s(0.55, 0.15);
  MatrixXcd expected = MatrixXcd::Zero(f.assembler.scalar_dim(), f.assembler.scalar_dim());
  for (int i = 0; i < 4; ++i) expected += f.assembler.letter_matrix(i, s);
  BlockOperator l = assemble_transfer(f.assembler, s, f.triv);
  CHECK(l.sheet_count == 1);
  CHECK((l.matrix - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("twisted dimension and the direct-sum determinant factorization") {
  Fixture f;
  CoverSample sample = sample_symmetric(4, 2, 99);
  PermutationMatrices perms = permutation_matrices(sample);
  Representation rho_n{4, {}};
  for (const auto& s_mat : perms.s) rho_n.images.push_back(s_mat.cast<Complex>());

  Complex s(0.5, 0.2);
  BlockOperator full = assemble_transfer(f.assembler, s, rho_n);
  CHECK(full.matrix.rows() == 4 * 17 * 4);

  Complex det_full = fredholm_det(f.assembler, s, rho_n);
  Complex det_triv = fredholm_det(f.assembler, s, f.triv);
  Complex det_new = fredholm_det(f.assembler, s, perms.rho0);
  CHECK(std::abs(det_full - det_triv * det_new) <= 1e-6 * std::abs(det_full));
}

TEST_CASE("leading eigenvalue is real and positive for real s") {
  Fixture f;
  for (double r : {0.3, 0.5}) {
    Complex lead = leading_eigenvalue(assemble_transfer(f.assembler, Complex(r, 0.0), f.triv).matrix);
    CHECK(lead.real() > 0.0);
    CHECK(std::abs(lead.imag()) < 1e-10 * lead.real());
  }
}

TEST_CASE("classical eigenvalue-pressure identity via the bias-free depth ratio") {
  // log of the leading eigenvalue equals the pressure; the depth-ratio
  // log(Z_{N+1}/Z_N) estimates the pressure without the 1/N Gibbs bias
  // that the plain (1/N) log Z_N estimator carries.
  Fixture f;
  auto t12 = log_interval_length_table(f.data, 12, 2);
  auto t13 = log_interval_length_table(f.data, 13, 2);
  for (double r : {0.3, 0.5, 0.8}) {
    double log_lead = std::log(std::abs(
        leading_eigenvalue(assemble_transfer(f.assembler, Complex(r, 0.0), f.triv).matrix)));
    double ratio_pressure =
        pressure_estimate(t13, r, 1).value - pressure_estimate(t12, r, 1).value;
    CHECK(std::abs(log_lead - ratio_pressure) < 1e-4);
    // The pinned fixed-depth estimator approaches the same value like 1/N.
    double plain_8 = pressure_estimate(f.data, r, 8).value;
    double plain_12 = pressure_estimate(t12, r, 12).value;
    CHECK(std::abs(plain_12 - log_lead) < std::abs(plain_8 - log_lead));
  }
}

TEST_CASE("determinant far right is one, tiny at the dimension, truncation-stable") {
  Fixture f;
  CHECK(std::abs(fredholm_det(f.assembler, Complex(30.0, 0.0), f.triv) - Complex(1.0, 0.0)) <
        1e-6);

  // the bias-free ratio estimator locates the dimension; det vanishes there
  auto t12 = log_interval_length_table(f.data, 12, 2);
  auto t13 = log_interval_length_table(f.data, 13, 2);
  double lo = 0.1, hi = 0.9;
  for (int it = 0; it < 50; ++it) {
    double mid = 0.5 * (lo + hi);
    double p = pressure_estimate(t13, mid, 1).value - pressure_estimate(t12, mid, 1).value;
    (p > 0.0 ? lo : hi) = mid;
  }
  CHECK(std::abs(fredholm_det(f.assembler, Complex(0.5 * (lo + hi), 0.0), f.triv)) < 1e-3);

  OperatorAssembler a20(f.data, BasisSpec{20, 128});
  Complex s(0.6, 0.4);
  CHECK(std::abs(fredholm_det(f.assembler, s, f.triv) - fredholm_det(a20, s, f.triv)) < 1e-8);
}

TEST_CASE("resonance scan finds exactly the rightmost real zero near the dimension") {
  Fixture f;
  auto zero = rightmost_real_zero(f.assembler, f.triv, 0.05, 0.95, 128, 1e-12);
  REQUIRE(zero.has_value());
  double delta = *zero;
  ResonanceReport report = resonance_scan(
      f.assembler, {delta - 0.05, delta + 0.05, -0.05, 0.05}, 10, 10, f.triv, {}, 2);
  REQUIRE(report.zeros.size() == 1);
  CHECK(report.zeros[0].winding >= 1);
  CHECK(std::abs(report.zeros[0].location.real() - delta) < 1e-8);
  CHECK(std::abs(report.zeros[0].location.imag()) < 1e-8);
  CHECK(report.grid.size() == 11u * 11u);
}

TEST_CASE("rectangles right of the dimension are zero-free") {
  Fixture f;
  ResonanceReport report =
      resonance_scan(f.assembler, {0.45, 0.9, -1.0, 1.0}, 12, 12, f.triv, {}, 2);
  CHECK(report.zeros.empty());
}

TEST_CASE("identity permutations at n = 2 twist like the trivial representation") {
  Fixture f;
  PermutationMatrices perms = permutation_matrices(identity_cover(2, 2));
  REQUIRE(perms.rho0.dimension == 1);
  for (const auto& u : perms.rho0.images) CHECK(std::abs(u(0, 0) - Complex(1.0, 0.0)) < 1e-14);
  Complex s(0.4, 0.1);
  CHECK(std::abs(fredholm_det(f.assembler, s, perms.rho0) -
                 fredholm_det(f.assembler, s, f.triv)) < 1e-12);
}

TEST_CASE("operator power norms: base case and submultiplicativity") {
  Fixture f;
  Complex s(0.6, 0.1);
  double n1 = operator_power_norm(f.assembler, s, f.triv, 1);
  CHECK(n1 == doctest::Approx(spectral_norm(assemble_transfer(f.assembler, s, f.triv).matrix))
                  .epsilon(1e-12));
  double n2 = operator_power_norm(f.assembler, s, f.triv, 2);
  double n4 = operator_power_norm(f.assembler, s, f.triv, 4);
  CHECK(n4 <= n2 * n2 + 1e-10);
}

TEST_CASE("norm variation is Lipschitz in s with finite per-power constants") {
  Fixture f;
  Complex s0(0.7, 0.0);
  Complex ds(1e-3, 0.0);
  MatrixXcd l0 = assemble_transfer(f.assembler, s0, f.triv).matrix;
  MatrixXcd l1 = assemble_transfer(f.assembler, s0 + ds, f.triv).matrix;
  MatrixXcd p0 = l0, p1 = l1;
  for (int ell = 1; ell <= 3; ++ell) {
    if (ell > 1) {
      p0 = p0 * l0;
      p1 = p1 * l1;
    }
    double ratio = spectral_norm(p1 - p0) / std::abs(ds);
    CHECK(std::isfinite(ratio));
    CHECK(ratio > 0.0);
    CHECK(ratio < 100.0);
  }
}

TEST_CASE("determinant grid satisfies Cauchy-Riemann away from zeros") {
  Fixture f;
  const double h = 1e-3;
  for (Complex s : {Complex(0.5, 0.1), Complex(0.6, 0.3), Complex(0.8, -0.2)}) {
    Complex fx = (fredholm_det(f.assembler, s + h, f.triv) -
                  fredholm_det(f.assembler, s - h, f.triv)) /
                 (2.0 * h);
    Complex fy = (fredholm_det(f.assembler, s + Complex(0.0, h), f.triv) -
                  fredholm_det(f.assembler, s - Complex(0.0, h), f.triv)) /
                 (2.0 * h);
    double residual = std::abs(fx + Complex(0.0, 1.0) * fy);
    CHECK(residual / (std::abs(fx) + std::abs(fy) + 1e-30) < 1e-4);
  }
}

TEST_CASE("winding scan survives a zero sitting on the initial contour") {
  // f(z) = z has its zero exactly on a grid corner; the perturbation
  // retry must report it from the shifted contour.
  WindingScanResult scan = winding_scan([](Complex z) { return z; },
                                        {-0.5, 0.5, -0.5, 0.5}, 2, 2, {}, 1);
  REQUIRE(scan.zeros.size() == 1);
  CHECK(std::abs(scan.zeros[0].location) < 1e-10);
}

TEST_CASE("winding scan counts multiplicity") {
  WindingScanResult scan = winding_scan([](Complex z) { return (z - 0.1) * (z - 0.1); },
                                        {-0.4, 0.6, -0.5, 0.5}, 4, 4, {}, 1);
  REQUIRE(scan.zeros.size() == 1);
  CHECK(scan.zeros[0].winding == 2);
}
