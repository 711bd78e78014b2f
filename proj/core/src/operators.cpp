#include "schottky/operators.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace schottky {

OperatorAssembler::OperatorAssembler(SchottkyData data, BasisSpec spec)
    : data_(std::move(data)), spec_(spec) {
  if (!spec_.valid())
    throw std::invalid_argument("basis spec: need quadrature_points >= 4 * basis size");
  const int m = spec_.quadrature_points;
  const int basis = spec_.basis_size();
  dft_.resize(basis, m);
  for (int p = 0; p < basis; ++p) {
    double scale = std::sqrt(std::numbers::pi / (p + 1)) / m;
    for (int k = 0; k < m; ++k) {
      double theta = -2.0 * std::numbers::pi * p * k / m;
      dft_(p, k) = scale * Complex(std::cos(theta), std::sin(theta));
    }
  }
  const int two_d = data_.alphabet_size();
  letters_.resize(two_d);
  for (int i = 0; i < two_d; ++i) {
    letters_[i].resize(two_d);
    Word mirror{{data_.conj(i)}};
    for (int j = 0; j < two_d; ++j) {
      if (j == i) continue;
      letters_[i][j] = map_boundary(mirror, j, data_.conj(i));
    }
  }
}

OperatorAssembler::MappedBoundary OperatorAssembler::map_boundary(const Word& mirror_word,
                                                                  int target_disc,
                                                                  int source_disc) const {
  const int m = spec_.quadrature_points;
  const int basis = spec_.basis_size();
  const Disc& target = data_.discs[target_disc];
  const Disc& source = data_.discs[source_disc];
  Mobius g = word_matrix(data_, mirror_word);
  MappedBoundary mb;
  mb.tau.resize(m);
  mb.phi.resize(m, basis);
  for (int k = 0; k < m; ++k) {
    double theta = 2.0 * std::numbers::pi * k / m;
    Complex x = target.boundary_point(theta);
    mb.tau[k] = tau_word(data_, mirror_word, x);
    Complex u = g.apply(x);
    for (int q = 0; q < basis; ++q) mb.phi(k, q) = disc_basis_value(source, q, u);
  }
  return mb;
}

MatrixXcd OperatorAssembler::assemble_block(const MappedBoundary& mb, Complex s,
                                            int target_disc) const {
  const int m = spec_.quadrature_points;
  MatrixXcd weighted = mb.phi;
  for (int k = 0; k < m; ++k) weighted.row(k) *= std::exp(-s * mb.tau[k]);
  return data_.discs[target_disc].radius * (dft_ * weighted);
}

MatrixXcd OperatorAssembler::letter_matrix(int letter, Complex s) const {
  const int basis = spec_.basis_size();
  MatrixXcd out = MatrixXcd::Zero(scalar_dim(), scalar_dim());
  const int source = data_.conj(letter);
  for (int j = 0; j < data_.alphabet_size(); ++j) {
    if (j == letter) continue;
    out.block(block_start(j), block_start(source), basis, basis) =
        assemble_block(letters_[letter][j], s, j);
  }
  return out;
}

MatrixXcd OperatorAssembler::word_matrix_direct(const Word& w, Complex s) const {
  if (w.empty()) return MatrixXcd::Identity(scalar_dim(), scalar_dim());
  if (!w.is_admissible(data_.d)) throw std::invalid_argument("inadmissible word");
  const int basis = spec_.basis_size();
  const int first = w.letters.front();
  const int source = data_.conj(w.letters.back());
  const std::vector<MappedBoundary>* cached = nullptr;
  {
    std::lock_guard<std::mutex> lock(word_cache_mutex_);
    auto it = word_cache_.find(w.letters);
    if (it == word_cache_.end()) {
      std::vector<MappedBoundary> per_target(data_.alphabet_size());
      Word mirror = w.mirror(data_.d);
      for (int j = 0; j < data_.alphabet_size(); ++j) {
        if (j == first) continue;
        per_target[j] = map_boundary(mirror, j, source);
      }
      it = word_cache_.emplace(w.letters, std::move(per_target)).first;
    }
    cached = &it->second;
  }
  MatrixXcd out = MatrixXcd::Zero(scalar_dim(), scalar_dim());
  for (int j = 0; j < data_.alphabet_size(); ++j) {
    if (j == first) continue;
    out.block(block_start(j), block_start(source), basis, basis) =
        assemble_block((*cached)[j], s, j);
  }
  return out;
}

MatrixXcd OperatorAssembler::word_matrix_product(const Word& w, Complex s) const {
  if (w.empty()) return MatrixXcd::Identity(scalar_dim(), scalar_dim());
  if (!w.is_admissible(data_.d)) throw std::invalid_argument("inadmissible word");
  MatrixXcd out = letter_matrix(w.letters.front(), s);
  for (std::size_t k = 1; k < w.letters.size(); ++k) out = out * letter_matrix(w.letters[k], s);
  return out;
}

MatrixXcd OperatorAssembler::word_adjoint_from_kernel(const Word& w, Complex s, int radial,
                                                      int angular) const {
  if (w.empty()) throw std::invalid_argument("adjoint kernel needs a nonempty word");
  const int basis = spec_.basis_size();
  const int first = w.letters.front();
  const int row_disc = data_.conj(w.letters.back());  // adjoint range
  const Disc& row = data_.discs[row_disc];
  Word mirror = w.mirror(data_.d);
  Mobius g = word_matrix(data_, mirror);
  MatrixXcd out = MatrixXcd::Zero(scalar_dim(), scalar_dim());

  std::vector<double> nodes, weights;
  gauss_legendre(radial, nodes, weights);
  Eigen::VectorXcd down(basis), across(basis);
  for (int j = 0; j < data_.alphabet_size(); ++j) {
    if (j == first) continue;  // indicator 1{z not in D_first}
    const Disc& col = data_.discs[j];
    MatrixXcd block = MatrixXcd::Zero(basis, basis);
    for (int i = 0; i < radial; ++i) {
      double rho = 0.5 * col.radius * (nodes[i] + 1.0);
      double wr = 0.5 * col.radius * weights[i] * rho * (2.0 * std::numbers::pi / angular);
      for (int k = 0; k < angular; ++k) {
        double theta = 2.0 * std::numbers::pi * k / angular;
        Complex z(col.center + rho * std::cos(theta), rho * std::sin(theta));
        Complex weight = std::exp(-s * tau_word(data_, mirror, z));
        Complex u = g.apply(z);
        for (int p = 0; p < basis; ++p) down(p) = std::conj(weight * disc_basis_value(row, p, u));
        for (int q = 0; q < basis; ++q) across(q) = disc_basis_value(col, q, z);
        block.noalias() += wr * (down * across.transpose());
      }
    }
    out.block(block_start(row_disc), block_start(j), basis, basis) = block;
  }
  return out;
}

std::function<Complex(Complex)> OperatorAssembler::pair_kernel_diagonal(const Word& wi,
                                                                        const Word& wj,
                                                                        Complex s) const {
  if (wi.empty() || wj.empty()) throw std::invalid_argument("pair kernel needs nonempty words");
  Word mi = wi.mirror(data_.d);
  Word mj = wj.mirror(data_.d);
  Mobius gi = word_matrix(data_, mi);
  Mobius gj = word_matrix(data_, mj);
  int disc_i = data_.conj(wi.letters.back());
  int disc_j = data_.conj(wj.letters.back());
  SchottkyData data = data_;
  return [=](Complex z) -> Complex {
    if (disc_i != disc_j) return 0.0;
    Complex u = gi.apply(z);
    Complex v = gj.apply(z);
    Complex weight = std::exp(-s * tau_word(data, mi, z)) *
                     std::conj(std::exp(-s * tau_word(data, mj, z)));
    return weight * bergman_kernel_eval(data.discs[disc_i], u, v);
  };
}

std::vector<Disc> OperatorAssembler::pair_kernel_domain(const Word& wi, const Word& wj) const {
  std::vector<Disc> discs;
  for (int j = 0; j < data_.alphabet_size(); ++j)
    if (j != wi.letters.front() && j != wj.letters.front()) discs.push_back(data_.discs[j]);
  return discs;
}

BlockOperator assemble_A(const OperatorAssembler& assembler, int letter, Complex s) {
  BlockOperator op;
  op.matrix = assembler.letter_matrix(letter, s);
  op.num_discs = assembler.data().alphabet_size();
  op.basis_size = assembler.spec().basis_size();
  op.sheet_count = 1;
  return op;
}

std::string matrix_to_csv(const MatrixXcd& m) {
  std::ostringstream out;
  out.precision(17);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << m(r, c).real() << ',' << m(r, c).imag();
    }
    out << '\n';
  }
  return out.str();
}

Complex trace_product(const OperatorAssembler& assembler, const std::vector<Word>& wi,
                      const std::vector<Word>& wj, Complex s) {
  if (wi.size() != wj.size() || wi.empty())
    throw std::invalid_argument("trace product needs matched nonempty word lists");
  MatrixXcd acc = MatrixXcd::Identity(assembler.scalar_dim(), assembler.scalar_dim());
  for (std::size_t k = 0; k < wi.size(); ++k) {
    acc = acc * assembler.word_matrix_product(wi[k], s);
    acc = acc * assembler.word_matrix_product(wj[k], s).adjoint();
  }
  return acc.trace();
}

}  // namespace schottky
