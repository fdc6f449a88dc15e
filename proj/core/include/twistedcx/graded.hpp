#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>

#include "twistedcx/linalg.hpp"

namespace tcx {

// Finite-dimensional graded space: degree -> dimension, zero outside a finite set.
class GradedSpace {
public:
  GradedSpace() = default;
  explicit GradedSpace(std::map<int, std::size_t> dims);

  std::size_t dim(int n) const;
  void set_dim(int n, std::size_t d);
  bool is_zero() const { return dims_.empty(); }
  std::size_t total() const;
  // Smallest and largest degree with nonzero dimension; (0,-1) when zero.
  std::pair<int, int> support() const;
  const std::map<int, std::size_t>& dims() const { return dims_; }
  GradedSpace shifted(int k) const;  // result(n) = this(n + k)

  friend bool operator==(const GradedSpace&, const GradedSpace&) = default;

private:
  std::map<int, std::size_t> dims_;
};

GradedSpace direct_sum(const GradedSpace& a, const GradedSpace& b);

// Degree-shifted linear map between graded spaces; component at source
// degree n maps src(n) -> dst(n + shift). Absent components are zero.
class GradedMap {
public:
  GradedMap() = default;
  GradedMap(GradedSpace src, GradedSpace dst, int shift, Field f);
  static GradedMap identity(const GradedSpace& s, Field f);

  const GradedSpace& src() const { return src_; }
  const GradedSpace& dst() const { return dst_; }
  int shift() const { return shift_; }
  Field field() const { return field_; }

  Matrix at(int n) const;
  void set(int n, Matrix m);
  void add(int n, const Matrix& m, const Scalar& coeff = Scalar(1));
  const std::map<int, Matrix>& components() const { return comps_; }
  bool is_zero() const;

  GradedMap& operator+=(const GradedMap& o);
  GradedMap& operator-=(const GradedMap& o);
  GradedMap& operator*=(const Scalar& s);
  friend GradedMap operator+(GradedMap a, const GradedMap& b) { return a += b; }
  friend GradedMap operator-(GradedMap a, const GradedMap& b) { return a -= b; }
  friend GradedMap operator*(const Scalar& s, GradedMap a) { return a *= s; }
  GradedMap operator-() const;
  friend bool operator==(const GradedMap& a, const GradedMap& b);

private:
  GradedSpace src_, dst_;
  int shift_ = 0;
  Field field_;
  std::map<int, Matrix> comps_;
};

// g o f
GradedMap compose(const GradedMap& g, const GradedMap& f);

class NotAComplex : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ChainComplex {
  GradedSpace space;
  GradedMap d;  // shift +1

  ChainComplex() = default;
  ChainComplex(GradedSpace s, GradedMap diff);
  static ChainComplex zero_differential(const GradedSpace& s, Field f);
  Field field() const { return d.field(); }
  bool squares_to_zero() const;
};

// dim ker d^n - rank d^{n-1} for every degree in the support; throws
// NotAComplex when d o d != 0.
std::map<int, std::size_t> cohomology_dims(const ChainComplex& c);
bool is_acyclic(const ChainComplex& c);

// Mapping cone of a degree-0 chain map f: C -> D; cone^n = C^{n+1} + D^n with
// differential [[-d_C, 0], [f, d_D]].
ChainComplex mapping_cone(const ChainComplex& c, const ChainComplex& d, const GradedMap& f);

// Solves d_D h + sign * h d_C = phi for h of shift phi.shift() - 1, as one
// linear system over all degrees.
std::optional<GradedMap> null_homotopy(const GradedMap& phi, const ChainComplex& src,
                                       const ChainComplex& dst, int sign = 1);

struct MinimalModel {
  ChainComplex model;  // zero differential
  GradedMap incl;      // model -> C
  GradedMap proj;      // C -> model
  GradedMap homotopy;  // C -> C, shift -1, incl o proj - id = d h + h d
};

// Iterated algebraic Gaussian elimination of invertible differential entries.
MinimalModel minimize_complex(const ChainComplex& c);

}  // namespace tcx
