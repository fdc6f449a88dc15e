#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "twistedcx/scalar.hpp"

namespace tcx {

using Vector = std::vector<Scalar>;

class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Exact matrix over a Field. Storage is dense below 32x32 and row-sparse
// otherwise; the two layouts are semantically identical.
class Matrix {
public:
  static constexpr std::size_t kDenseLimit = 32;
  using SparseRow = std::vector<std::pair<std::size_t, Scalar>>;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, Field f);
  static Matrix identity(std::size_t n, Field f);
  static Matrix from_rows(const std::vector<std::vector<Scalar>>& rows, Field f,
                          std::size_t cols_if_empty = 0);
  static Matrix column(const Vector& v, Field f);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Field field() const { return field_; }
  bool is_dense() const { return dense_storage_; }

  Scalar at(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, const Scalar& v);
  void add_to(std::size_t r, std::size_t c, const Scalar& v);

  // Visits the nonzero entries of a row in increasing column order.
  void for_row(std::size_t r, const std::function<void(std::size_t, const Scalar&)>& fn) const;
  void for_each_nonzero(const std::function<void(std::size_t, std::size_t, const Scalar&)>& fn) const;
  SparseRow row_entries(std::size_t r) const;
  std::size_t nonzeros() const;

  bool is_zero() const;
  bool is_identity() const;
  Matrix transpose() const;
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& m);
  void add_block(std::size_t r0, std::size_t c0, const Matrix& m, const Scalar& coeff = Scalar(1));
  Vector apply(const Vector& v) const;
  Vector row_vector(std::size_t r) const;
  Vector column_vector(std::size_t c) const;

  Matrix operator-() const;
  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(const Scalar& s);
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const Scalar& s) { return a *= s; }
  friend Matrix operator*(const Scalar& s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix& a, const Matrix& b);

  std::vector<std::vector<std::string>> to_strings() const;

private:
  void require_index(std::size_t r, std::size_t c) const;

  std::size_t rows_ = 0, cols_ = 0;
  Field field_;
  bool dense_storage_ = true;
  std::vector<Scalar> dense_;
  std::vector<SparseRow> sparse_;
};

Matrix hstack(const std::vector<Matrix>& blocks, std::size_t rows, Field f);
Matrix vstack(const std::vector<Matrix>& blocks, std::size_t cols, Field f);
Matrix block_diag(const std::vector<Matrix>& blocks, Field f);

}  // namespace tcx
