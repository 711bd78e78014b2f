#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "schottky/basis.hpp"
#include "schottky/linalg.hpp"
#include "schottky/word.hpp"

namespace schottky {

/// Complex matrix indexed by (disc, basis degree, sheet) blocks. Scalar
/// operators carry sheet_count 1; twisted ones carry the representation
/// dimension or the cover degree.
struct BlockOperator {
  MatrixXcd matrix;
  int num_discs = 0;
  int basis_size = 0;
  int sheet_count = 1;

  int dim() const { return num_discs * basis_size * sheet_count; }
  int index(int disc, int degree, int sheet) const {
    return (disc * basis_size + degree) * sheet_count + sheet;
  }
  Complex trace() const { return matrix.trace(); }
};

/// Galerkin assembly of the elementary composition operators on the disc
/// union. Boundary geometry (mapped samples, cocycle sums, source basis
/// values) is cached per (letter, target disc) at construction; the only
/// per-s work is attaching the exp(-s tau) weights and one small matrix
/// product per block. Safe to share across threads.
class OperatorAssembler {
 public:
  OperatorAssembler(SchottkyData data, BasisSpec spec);

  const SchottkyData& data() const { return data_; }
  const BasisSpec& spec() const { return spec_; }
  int scalar_dim() const { return data_.alphabet_size() * spec_.basis_size(); }
  int block_start(int disc) const { return disc * spec_.basis_size(); }

  /// Matrix of A_letter(s) on the scalar Bergman space: source block is
  /// the partner disc of `letter`, target blocks are every disc except
  /// `letter` itself.
  MatrixXcd letter_matrix(int letter, Complex s) const;

  /// Direct Galerkin assembly of the composite operator along a word
  /// (weight = exp(-s Birkhoff sum), composition with the mirror map).
  MatrixXcd word_matrix_direct(const Word& w, Complex s) const;

  /// Product of the single-letter matrices along the word. Agrees with
  /// word_matrix_direct up to truncation error.
  MatrixXcd word_matrix_product(const Word& w, Complex s) const;

  /// Adjoint of the word operator assembled from its integral kernel by
  /// two-dimensional quadrature; the independent route against
  /// word_matrix_direct(...).adjoint().
  MatrixXcd word_adjoint_from_kernel(const Word& w, Complex s, int radial, int angular) const;

  /// Diagonal z -> K(z, z) of the product A_wi(s) A_wj(s)^* together with
  /// the discs the indicator structure allows; feed to trace_via_kernel.
  std::function<Complex(Complex)> pair_kernel_diagonal(const Word& wi, const Word& wj,
                                                       Complex s) const;
  std::vector<Disc> pair_kernel_domain(const Word& wi, const Word& wj) const;

 private:
  struct MappedBoundary {
    std::vector<Complex> tau;  // Birkhoff sums at the boundary samples
    MatrixXcd phi;             // M x (P+1) source-basis values at mapped samples
  };
  MappedBoundary map_boundary(const Word& mirror_word, int target_disc, int source_disc) const;
  MatrixXcd assemble_block(const MappedBoundary& mb, Complex s, int target_disc) const;

  SchottkyData data_;
  BasisSpec spec_;
  MatrixXcd dft_;                                      // (P+1) x M extraction matrix
  std::vector<std::vector<MappedBoundary>> letters_;   // [letter][target disc]
  mutable std::map<std::vector<int>, std::vector<MappedBoundary>> word_cache_;
  mutable std::mutex word_cache_mutex_;
};

/// Spec-facing wrapper returning the block-indexed form.
BlockOperator assemble_A(const OperatorAssembler& assembler, int letter, Complex s);

/// tr(A_{i_1} A_{j_1}^* ... A_{i_m} A_{j_m}^*) through assembled matrices.
Complex trace_product(const OperatorAssembler& assembler, const std::vector<Word>& wi,
                      const std::vector<Word>& wj, Complex s);

/// Debug dump: row-major "re,im" pairs, one matrix row per line.
std::string matrix_to_csv(const MatrixXcd& m);

}  // namespace schottky
