#pragma once

#include <iosfwd>
#include <span>
#include <tuple>
#include <vector>

#include "packfem/exec.hpp"
#include "packfem/mesh.hpp"

namespace packfem {

/// Square compressed-sparse-row matrix with sorted column indices.
struct CsrMatrix {
  Index n{0};
  std::vector<Index> rowptr{0};
  std::vector<Index> colind;
  std::vector<Real> vals;

  Index nnz() const { return static_cast<Index>(colind.size()); }
  /// Position of (row, col) in vals, or -1.
  Index find(Index row, Index col) const;
  Real at(Index row, Index col) const;
  void set_zero();
  bool pattern_symmetric() const;
  /// Throws ConsistencyError when the structural invariants do not hold.
  void validate() const;
};

/// Node-to-node adjacency of the mesh, diagonal always present, values zero.
CsrMatrix build_pattern(const Mesh& mesh);

/// Builds a CSR matrix from (row, col, value) triplets; duplicates are summed.
CsrMatrix from_triplets(Index n, std::span<const std::tuple<Index, Index, Real>> triplets);

/// Row-major dense copy (tests and small oracles).
std::vector<Real> to_dense(const CsrMatrix& a);

/// y = A x. Within a row, terms are added in ascending column order.
void spmv(const CsrMatrix& a, std::span<const Real> x, std::span<Real> y, Exec exec = Exec::Serial);
std::vector<Real> spmv(const CsrMatrix& a, std::span<const Real> x, Exec exec = Exec::Serial);
/// y = A^T x without forming the transpose.
void spmv_transpose(const CsrMatrix& a, std::span<const Real> x, std::span<Real> y);

CsrMatrix transpose(const CsrMatrix& a);
/// C = A * B (sorted pattern, exact zeros kept out only when structurally absent).
CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b);
/// C = A + B over the union pattern.
CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b);
/// A <- diag(s) A.
void scale_rows(CsrMatrix& a, std::span<const Real> s);

/// d_i = A_ii. Throws SingularPreconditionerError on a missing or zero diagonal.
std::vector<Real> jacobi_diagonal(const CsrMatrix& a);

/// Symmetric elimination of prescribed values: b -= A(:,D) g, rows and columns
/// of D replaced by identity, b_D = g.
void apply_dirichlet(CsrMatrix& a, std::span<Real> rhs, std::span<const Index> nodes, std::span<const Real> values);

/// Pins one unknown to zero (identity row and column, zero right-hand side).
void pin_node(CsrMatrix& a, std::span<Real> rhs, Index node);

/// Coordinate text dump: one "i j value" line per stored entry, 1-based.
void write_coordinate(std::ostream& out, const CsrMatrix& a);

}  // namespace packfem
