#pragma once

#include <optional>
#include <vector>

#include "twistedcx/matrix.hpp"

namespace tcx {

// Reduced row echelon form. Pivots are taken at the lexicographically
// smallest (row, col) nonzero entry of the active submatrix, which makes
// every downstream solution deterministic.
struct Rref {
  std::vector<Matrix::SparseRow> rows;  // nonzero pivot rows, leading entry 1
  std::vector<std::size_t> pivot_cols;  // pivot column of rows[k]
  std::size_t cols = 0;
  Field field;

  std::size_t rank() const { return pivot_cols.size(); }
  std::vector<std::size_t> free_cols() const;
};

Rref rref(const Matrix& m);

std::size_t rank(const Matrix& m);

// Some x with A x = b, or nothing when the system is inconsistent. Free
// variables are set to zero.
std::optional<Vector> solve_linear(const Matrix& a, const Vector& b);

// Solves A X = B column by column with one elimination.
std::optional<Matrix> solve_linear(const Matrix& a, const Matrix& b);

// Basis of ker A as the columns of the returned matrix (cols(A) x nullity).
// Column k has a 1 at the k-th free column and zeros at the other free columns.
Matrix nullspace(const Matrix& a);

// Coordinates of a vector lying in the column span of a nullspace basis
// produced by nullspace(): simply its entries at the free columns.
Vector nullspace_coordinates(const Rref& r, const Vector& v);

}  // namespace tcx
