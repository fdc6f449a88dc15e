#include "twistedcx/system.hpp"

#include <map>
#include <tuple>

namespace tcx {

int MatrixSystem::add_unknown(std::size_t rows, std::size_t cols) {
  unknowns_.push_back({rows, cols});
  unknown_offset_.push_back(total_unknowns_);
  total_unknowns_ += rows * cols;
  return static_cast<int>(unknowns_.size()) - 1;
}

int MatrixSystem::add_equation(std::size_t rows, std::size_t cols) {
  equations_.push_back({rows, cols});
  equation_offset_.push_back(total_equations_);
  total_equations_ += rows * cols;
  return static_cast<int>(equations_.size()) - 1;
}

void MatrixSystem::add_term(int eq, const Matrix* left, int unknown, const Matrix* right, const Scalar& c) {
  const Shape& e = equations_.at(eq);
  const Shape& u = unknowns_.at(unknown);
  std::size_t lr = left ? left->rows() : u.rows, lc = left ? left->cols() : u.rows;
  std::size_t rr = right ? right->rows() : u.cols, rc = right ? right->cols() : u.cols;
  if (lr != e.rows || lc != u.rows || rr != u.cols || rc != e.cols)
    throw DimensionError("matrix system term has incompatible shapes");
  std::size_t eo = equation_offset_[eq], uo = unknown_offset_[unknown];
  // coefficient of X[i][j] in (L X R)[r][s] is L[r][i] R[j][s]
  auto emit = [&](std::size_t r, std::size_t i, const Scalar& l, std::size_t j, std::size_t s, const Scalar& rv) {
    entries_.emplace_back(eo + r * e.cols + s, uo + i * u.cols + j, c * l * rv);
  };
  Scalar one(1, field_);
  std::vector<std::tuple<std::size_t, std::size_t, Scalar>> lnz, rnz;
  if (left)
    left->for_each_nonzero([&](std::size_t r, std::size_t i, const Scalar& v) { lnz.emplace_back(r, i, v); });
  else
    for (std::size_t k = 0; k < u.rows; ++k) lnz.emplace_back(k, k, one);
  if (right)
    right->for_each_nonzero([&](std::size_t j, std::size_t s, const Scalar& v) { rnz.emplace_back(j, s, v); });
  else
    for (std::size_t k = 0; k < u.cols; ++k) rnz.emplace_back(k, k, one);
  for (const auto& [r, i, l] : lnz)
    for (const auto& [j, s, rv] : rnz) emit(r, i, l, j, s, rv);
}

void MatrixSystem::add_rhs(int eq, const Matrix& m, const Scalar& c) {
  const Shape& e = equations_.at(eq);
  if (m.rows() != e.rows || m.cols() != e.cols) throw DimensionError("matrix system right-hand side has the wrong shape");
  std::size_t eo = equation_offset_[eq];
  m.for_each_nonzero([&](std::size_t r, std::size_t s, const Scalar& v) { rhs_.emplace_back(eo + r * e.cols + s, c * v); });
}

std::optional<std::vector<Matrix>> MatrixSystem::solve() const {
  // merge duplicate coefficients before building the sparse matrix
  std::map<std::pair<std::size_t, std::size_t>, Scalar> acc;
  for (const auto& [r, c, v] : entries_) {
    auto [it, fresh] = acc.try_emplace({r, c}, v);
    if (!fresh) it->second += v;
  }
  Matrix a(total_equations_, total_unknowns_, field_);
  for (const auto& [rc, v] : acc)
    if (!v.is_zero()) a.set(rc.first, rc.second, v);
  Vector b(total_equations_, Scalar(0, field_));
  for (const auto& [r, v] : rhs_) b[r] += v;
  auto x = solve_linear(a, b);
  if (!x) return std::nullopt;
  std::vector<Matrix> out;
  for (std::size_t k = 0; k < unknowns_.size(); ++k) {
    Matrix m(unknowns_[k].rows, unknowns_[k].cols, field_);
    std::size_t off = unknown_offset_[k];
    for (std::size_t i = 0; i < unknowns_[k].rows; ++i)
      for (std::size_t j = 0; j < unknowns_[k].cols; ++j) {
        const Scalar& v = (*x)[off + i * unknowns_[k].cols + j];
        if (!v.is_zero()) m.set(i, j, v);
      }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace tcx
