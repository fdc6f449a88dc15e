#include "twistedcx/linalg.hpp"

#include <algorithm>

namespace tcx {

namespace {

using Row = Matrix::SparseRow;

// row <- row - c * piv
void axpy(Row& row, const Scalar& c, const Row& piv) {
  Row out;
  out.reserve(row.size() + piv.size());
  std::size_t i = 0, j = 0;
  while (i < row.size() || j < piv.size()) {
    if (j == piv.size() || (i < row.size() && row[i].first < piv[j].first)) {
      out.push_back(std::move(row[i++]));
    } else if (i == row.size() || piv[j].first < row[i].first) {
      out.emplace_back(piv[j].first, -(c * piv[j].second));
      ++j;
    } else {
      Scalar v = row[i].second - c * piv[j].second;
      if (!v.is_zero()) out.emplace_back(row[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  row = std::move(out);
}

Scalar entry(const Row& row, std::size_t col) {
  auto it = std::lower_bound(row.begin(), row.end(), col,
                             [](const auto& e, std::size_t k) { return e.first < k; });
  if (it != row.end() && it->first == col) return it->second;
  return Scalar(0);
}

}  // namespace

std::vector<std::size_t> Rref::free_cols() const {
  std::vector<char> piv(cols, 0);
  for (auto c : pivot_cols) piv[c] = 1;
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < cols; ++c)
    if (!piv[c]) out.push_back(c);
  return out;
}

Rref rref(const Matrix& m) {
  Rref out;
  out.cols = m.cols();
  out.field = m.field();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Row row = m.row_entries(r);
    // Reduce against existing pivots; pivot columns are cleared in pivot rows.
    for (std::size_t k = 0; k < out.rows.size() && !row.empty(); ++k) {
      Scalar c = entry(row, out.pivot_cols[k]);
      if (!c.is_zero()) axpy(row, c, out.rows[k]);
    }
    if (row.empty()) continue;
    Scalar inv = row.front().second.inverse();
    for (auto& e : row) e.second *= inv;
    std::size_t pc = row.front().first;
    for (auto& prow : out.rows) {
      Scalar c = entry(prow, pc);
      if (!c.is_zero()) axpy(prow, c, row);
    }
    out.rows.push_back(std::move(row));
    out.pivot_cols.push_back(pc);
  }
  return out;
}

std::size_t rank(const Matrix& m) { return rref(m).rank(); }

std::optional<Vector> solve_linear(const Matrix& a, const Vector& b) {
  if (b.size() != a.rows()) throw DimensionError("solve_linear: right-hand side size mismatch");
  auto x = solve_linear(a, Matrix::column(b, a.field()));
  if (!x) return std::nullopt;
  return x->column_vector(0);
}

std::optional<Matrix> solve_linear(const Matrix& a, const Matrix& b) {
  if (b.rows() != a.rows()) throw DimensionError("solve_linear: right-hand side size mismatch");
  Field f = a.field();
  Matrix aug = hstack({a, b}, a.rows(), f);
  Rref r = rref(aug);
  Matrix x(a.cols(), b.cols(), f);
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    std::size_t pc = r.pivot_cols[k];
    if (pc >= a.cols()) return std::nullopt;
    for (const auto& [c, v] : r.rows[k])
      if (c >= a.cols()) x.set(pc, c - a.cols(), v);
  }
  return x;
}

Matrix nullspace(const Matrix& a) {
  Rref r = rref(a);
  auto fc = r.free_cols();
  Matrix basis(a.cols(), fc.size(), a.field());
  for (std::size_t j = 0; j < fc.size(); ++j) {
    basis.set(fc[j], j, Scalar(1, a.field()));
    for (std::size_t k = 0; k < r.rows.size(); ++k) {
      Scalar c = entry(r.rows[k], fc[j]);
      if (!c.is_zero()) basis.set(r.pivot_cols[k], j, -c);
    }
  }
  return basis;
}

Vector nullspace_coordinates(const Rref& r, const Vector& v) {
  auto fc = r.free_cols();
  Vector out;
  out.reserve(fc.size());
  for (auto c : fc) out.push_back(v.at(c));
  return out;
}

}  // namespace tcx
