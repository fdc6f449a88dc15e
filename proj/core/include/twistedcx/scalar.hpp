#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace tcx {

// Base field: the rationals (modulus 0) or the prime field F_p.
class Field {
public:
  Field() = default;
  static Field rational() { return Field(); }
  static Field prime(std::uint64_t p);
  // Accepts "q" or "fp:<prime>".
  static Field parse(std::string_view spec);

  bool is_rational() const { return p_ == 0; }
  std::uint64_t modulus() const { return p_; }
  std::string name() const;

  friend bool operator==(const Field&, const Field&) = default;

private:
  std::uint64_t p_ = 0;
};

class FieldError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Exact field element. A scalar built without a field (e.g. Scalar(1)) is a
// rational and is coerced into F_p when combined with a residue.
class Scalar {
public:
  Scalar() = default;
  Scalar(long n);  // NOLINT(google-explicit-constructor)
  Scalar(long n, Field f);
  Scalar(const mpq_class& q, Field f);

  // Parses "a", "-a", "a/b" (decimal integers).
  static Scalar parse(std::string_view text, Field f);

  Field field() const { return p_ == 0 ? Field::rational() : Field::prime(p_); }
  bool is_zero() const;
  bool is_one() const;
  std::string str() const;
  // Rational value; residues are returned as their representative in [0, p).
  mpq_class to_mpq() const;

  Scalar inverse() const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b);

private:
  void adopt(const Scalar& o);

  mpq_class q_;           // used when p_ == 0
  std::uint64_t r_ = 0;   // residue when p_ != 0
  std::uint64_t p_ = 0;
};

bool is_prime(std::uint64_t n);

}  // namespace tcx
