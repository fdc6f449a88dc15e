#pragma once

#include <optional>
#include <tuple>
#include <vector>

#include "twistedcx/linalg.hpp"

namespace tcx {

// Linear system whose unknowns and equations are matrices. Each equation
// block reads  sum_k c_k L_k X_k R_k = rhs  and the whole system is solved
// with one elimination.
class MatrixSystem {
public:
  explicit MatrixSystem(Field f) : field_(f) {}

  int add_unknown(std::size_t rows, std::size_t cols);
  int add_equation(std::size_t rows, std::size_t cols);

  // eq += c * L X R; a null pointer stands for the identity.
  void add_term(int eq, const Matrix* left, int unknown, const Matrix* right, const Scalar& c = Scalar(1));
  void add_rhs(int eq, const Matrix& m, const Scalar& c = Scalar(1));

  std::size_t unknown_count() const { return total_unknowns_; }
  std::size_t equation_count() const { return total_equations_; }

  // One solution with free variables at zero, or nothing when inconsistent.
  std::optional<std::vector<Matrix>> solve() const;

private:
  struct Shape {
    std::size_t rows, cols;
  };
  Field field_;
  std::vector<Shape> unknowns_, equations_;
  std::vector<std::size_t> unknown_offset_, equation_offset_;
  std::size_t total_unknowns_ = 0, total_equations_ = 0;
  std::vector<std::tuple<std::size_t, std::size_t, Scalar>> entries_;
  std::vector<std::pair<std::size_t, Scalar>> rhs_;
};

}  // namespace tcx
