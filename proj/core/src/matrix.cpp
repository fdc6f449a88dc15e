#include "twistedcx/matrix.hpp"

#include <algorithm>

namespace tcx {

Matrix::Matrix(std::size_t rows, std::size_t cols, Field f)
    : rows_(rows), cols_(cols), field_(f),
      dense_storage_(rows < kDenseLimit && cols < kDenseLimit) {
  if (dense_storage_)
    dense_.assign(rows * cols, Scalar(0, f));
  else
    sparse_.assign(rows, {});
}

Matrix Matrix::identity(std::size_t n, Field f) {
  Matrix m(n, n, f);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, Scalar(1, f));
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<Scalar>>& rows, Field f,
                         std::size_t cols_if_empty) {
  std::size_t cols = rows.empty() ? cols_if_empty : rows.front().size();
  Matrix m(rows.size(), cols, f);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DimensionError("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rows[r][c]);
  }
  return m;
}

Matrix Matrix::column(const Vector& v, Field f) {
  Matrix m(v.size(), 1, f);
  for (std::size_t r = 0; r < v.size(); ++r) m.set(r, 0, v[r]);
  return m;
}

void Matrix::require_index(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) throw DimensionError("matrix index out of range");
}

Scalar Matrix::at(std::size_t r, std::size_t c) const {
  require_index(r, c);
  if (dense_storage_) return dense_[r * cols_ + c];
  const auto& row = sparse_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const auto& e, std::size_t k) { return e.first < k; });
  if (it != row.end() && it->first == c) return it->second;
  return Scalar(0, field_);
}

void Matrix::set(std::size_t r, std::size_t c, const Scalar& v) {
  require_index(r, c);
  Scalar x = v * Scalar(1, field_);
  if (dense_storage_) {
    dense_[r * cols_ + c] = x;
    return;
  }
  auto& row = sparse_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const auto& e, std::size_t k) { return e.first < k; });
  if (it != row.end() && it->first == c) {
    if (x.is_zero())
      row.erase(it);
    else
      it->second = x;
  } else if (!x.is_zero()) {
    row.insert(it, {c, x});
  }
}

void Matrix::add_to(std::size_t r, std::size_t c, const Scalar& v) {
  if (v.is_zero()) return;
  if (dense_storage_) {
    require_index(r, c);
    dense_[r * cols_ + c] += v;
    return;
  }
  set(r, c, at(r, c) + v);
}

void Matrix::for_row(std::size_t r, const std::function<void(std::size_t, const Scalar&)>& fn) const {
  if (dense_storage_) {
    for (std::size_t c = 0; c < cols_; ++c) {
      const Scalar& v = dense_[r * cols_ + c];
      if (!v.is_zero()) fn(c, v);
    }
  } else {
    for (const auto& [c, v] : sparse_[r]) fn(c, v);
  }
}

void Matrix::for_each_nonzero(
    const std::function<void(std::size_t, std::size_t, const Scalar&)>& fn) const {
  for (std::size_t r = 0; r < rows_; ++r)
    for_row(r, [&](std::size_t c, const Scalar& v) { fn(r, c, v); });
}

Matrix::SparseRow Matrix::row_entries(std::size_t r) const {
  if (!dense_storage_) return sparse_[r];
  SparseRow out;
  for_row(r, [&](std::size_t c, const Scalar& v) { out.emplace_back(c, v); });
  return out;
}

std::size_t Matrix::nonzeros() const {
  std::size_t n = 0;
  for_each_nonzero([&](std::size_t, std::size_t, const Scalar&) { ++n; });
  return n;
}

bool Matrix::is_zero() const {
  if (dense_storage_)
    return std::all_of(dense_.begin(), dense_.end(), [](const Scalar& s) { return s.is_zero(); });
  return std::all_of(sparse_.begin(), sparse_.end(), [](const SparseRow& r) { return r.empty(); });
}

bool Matrix::is_identity() const {
  if (rows_ != cols_) return false;
  bool ok = true;
  for_each_nonzero([&](std::size_t r, std::size_t c, const Scalar& v) {
    if (r != c || !v.is_one()) ok = false;
  });
  return ok && nonzeros() == rows_;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_, field_);
  for_each_nonzero([&](std::size_t r, std::size_t c, const Scalar& v) { t.set(c, r, v); });
  return t;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionError("block out of range");
  Matrix b(nr, nc, field_);
  for (std::size_t r = 0; r < nr; ++r)
    for_row(r0 + r, [&](std::size_t c, const Scalar& v) {
      if (c >= c0 && c < c0 + nc) b.set(r, c - c0, v);
    });
  return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& m) {
  if (r0 + m.rows_ > rows_ || c0 + m.cols_ > cols_) throw DimensionError("block out of range");
  for (std::size_t r = 0; r < m.rows_; ++r)
    for (std::size_t c = 0; c < m.cols_; ++c)
      if (!at(r0 + r, c0 + c).is_zero()) set(r0 + r, c0 + c, Scalar(0, field_));
  m.for_each_nonzero([&](std::size_t r, std::size_t c, const Scalar& v) { set(r0 + r, c0 + c, v); });
}

void Matrix::add_block(std::size_t r0, std::size_t c0, const Matrix& m, const Scalar& coeff) {
  if (r0 + m.rows_ > rows_ || c0 + m.cols_ > cols_) throw DimensionError("block out of range");
  if (coeff.is_zero()) return;
  m.for_each_nonzero(
      [&](std::size_t r, std::size_t c, const Scalar& v) { add_to(r0 + r, c0 + c, coeff * v); });
}

Vector Matrix::apply(const Vector& v) const {
  if (v.size() != cols_) throw DimensionError("matrix-vector size mismatch");
  Vector out(rows_, Scalar(0, field_));
  for (std::size_t r = 0; r < rows_; ++r)
    for_row(r, [&](std::size_t c, const Scalar& a) {
      if (!v[c].is_zero()) out[r] += a * v[c];
    });
  return out;
}

Vector Matrix::row_vector(std::size_t r) const {
  Vector out(cols_, Scalar(0, field_));
  for_row(r, [&](std::size_t c, const Scalar& v) { out[c] = v; });
  return out;
}

Vector Matrix::column_vector(std::size_t c) const {
  Vector out(rows_, Scalar(0, field_));
  for (std::size_t r = 0; r < rows_; ++r) out[r] = at(r, c);
  return out;
}

Matrix Matrix::operator-() const {
  Matrix m = *this;
  m *= Scalar(-1, field_);
  return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix sum size mismatch");
  if (dense_storage_) {
    for (std::size_t i = 0; i < dense_.size(); ++i)
      if (!o.dense_[i].is_zero()) dense_[i] += o.dense_[i];
    return *this;
  }
  o.for_each_nonzero([&](std::size_t r, std::size_t c, const Scalar& v) { add_to(r, c, v); });
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) { return *this += -o; }

Matrix& Matrix::operator*=(const Scalar& s) {
  if (s.is_zero()) {
    *this = Matrix(rows_, cols_, field_);
    return *this;
  }
  if (dense_storage_) {
    for (auto& v : dense_)
      if (!v.is_zero()) v *= s;
  } else {
    for (auto& row : sparse_)
      for (auto& e : row) e.second *= s;
  }
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("matrix product size mismatch");
  Field f = a.field_;
  Matrix out(a.rows_, b.cols_, f);
  if (a.rows_ == 0 || b.cols_ == 0 || a.cols_ == 0) return out;
  std::vector<Matrix::SparseRow> brows(b.rows_);
  for (std::size_t k = 0; k < b.rows_; ++k) brows[k] = b.row_entries(k);
  Vector acc(b.cols_, Scalar(0, f));
  std::vector<char> touched(b.cols_, 0);
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < a.rows_; ++i) {
    cols.clear();
    a.for_row(i, [&](std::size_t k, const Scalar& av) {
      for (const auto& [j, bv] : brows[k]) {
        if (!touched[j]) {
          touched[j] = 1;
          cols.push_back(j);
          acc[j] = av * bv;
        } else {
          acc[j] += av * bv;
        }
      }
    });
    std::sort(cols.begin(), cols.end());
    for (std::size_t j : cols) {
      if (!acc[j].is_zero()) out.set(i, j, acc[j]);
      touched[j] = 0;
    }
  }
  return out;
}

bool operator==(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
  for (std::size_t r = 0; r < a.rows_; ++r)
    if (a.row_entries(r) != b.row_entries(r)) return false;
  return true;
}

std::vector<std::vector<std::string>> Matrix::to_strings() const {
  std::vector<std::vector<std::string>> out(rows_, std::vector<std::string>(cols_, "0"));
  for_each_nonzero([&](std::size_t r, std::size_t c, const Scalar& v) { out[r][c] = v.str(); });
  return out;
}

Matrix hstack(const std::vector<Matrix>& blocks, std::size_t rows, Field f) {
  std::size_t cols = 0;
  for (const auto& b : blocks) {
    if (b.rows() != rows) throw DimensionError("hstack row mismatch");
    cols += b.cols();
  }
  Matrix out(rows, cols, f);
  std::size_t c0 = 0;
  for (const auto& b : blocks) {
    out.add_block(0, c0, b);
    c0 += b.cols();
  }
  return out;
}

Matrix vstack(const std::vector<Matrix>& blocks, std::size_t cols, Field f) {
  std::size_t rows = 0;
  for (const auto& b : blocks) {
    if (b.cols() != cols) throw DimensionError("vstack column mismatch");
    rows += b.rows();
  }
  Matrix out(rows, cols, f);
  std::size_t r0 = 0;
  for (const auto& b : blocks) {
    out.add_block(r0, 0, b);
    r0 += b.rows();
  }
  return out;
}

Matrix block_diag(const std::vector<Matrix>& blocks, Field f) {
  std::size_t rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Matrix out(rows, cols, f);
  std::size_t r0 = 0, c0 = 0;
  for (const auto& b : blocks) {
    out.add_block(r0, c0, b);
    r0 += b.rows();
    c0 += b.cols();
  }
  return out;
}

}  // namespace tcx
