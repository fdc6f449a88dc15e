#include "twistedcx/scalar.hpp"

#include <charconv>

namespace tcx {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t reduce_mpz(const mpz_class& z, std::uint64_t p) {
  return mpz_fdiv_ui(z.get_mpz_t(), p);
}

std::uint64_t reduce_mpq(const mpq_class& q, std::uint64_t p) {
  std::uint64_t n = reduce_mpz(q.get_num(), p);
  std::uint64_t d = reduce_mpz(q.get_den(), p);
  if (d == 0) throw FieldError("denominator divisible by the field characteristic");
  return mulmod(n, powmod(d, p - 2, p), p);
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n && d < (1ull << 32); ++d)
    if (n % d == 0) return false;
  return true;
}

Field Field::prime(std::uint64_t p) {
  if (!is_prime(p)) throw FieldError("field modulus " + std::to_string(p) + " is not prime");
  Field f;
  f.p_ = p;
  return f;
}

Field Field::parse(std::string_view spec) {
  if (spec == "q" || spec == "Q") return rational();
  if (spec.substr(0, 3) == "fp:") {
    std::uint64_t p = 0;
    auto body = spec.substr(3);
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), p);
    if (ec != std::errc() || ptr != body.data() + body.size())
      throw FieldError("malformed prime in field spec '" + std::string(spec) + "'");
    return prime(p);
  }
  throw FieldError("unknown field spec '" + std::string(spec) + "'");
}

std::string Field::name() const { return p_ == 0 ? "q" : "fp:" + std::to_string(p_); }

Scalar::Scalar(long n) : q_(n) {}

Scalar::Scalar(long n, Field f) : Scalar(mpq_class(n), f) {}

Scalar::Scalar(const mpq_class& q, Field f) : p_(f.modulus()) {
  if (p_ == 0) {
    q_ = q;
    q_.canonicalize();
  } else {
    r_ = reduce_mpq(q, p_);
  }
}

Scalar Scalar::parse(std::string_view text, Field f) {
  std::string s(text);
  auto bad = [&] { return FieldError("malformed scalar '" + s + "'"); };
  if (s.empty()) throw bad();
  auto slash = s.find('/');
  auto valid_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+') throw bad();
  if (num[0] == '+') num = num.substr(1);
  mpz_class n(num), d(den);
  if (d == 0) throw FieldError("zero denominator in '" + s + "'");
  return Scalar(mpq_class(n, d), f);
}

void Scalar::adopt(const Scalar& o) {
  if (p_ == o.p_) return;
  if (p_ != 0 && o.p_ != 0) throw FieldError("mixing scalars from different prime fields");
  if (p_ == 0) {
    r_ = reduce_mpq(q_, o.p_);
    p_ = o.p_;
    q_ = 0;
  }
}

bool Scalar::is_zero() const { return p_ == 0 ? q_ == 0 : r_ == 0; }

bool Scalar::is_one() const { return p_ == 0 ? q_ == 1 : r_ == 1; }

std::string Scalar::str() const { return p_ == 0 ? q_.get_str() : std::to_string(r_); }

mpq_class Scalar::to_mpq() const { return p_ == 0 ? q_ : mpq_class(mpz_class(std::to_string(r_))); }

Scalar Scalar::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero");
  Scalar r = *this;
  if (p_ == 0)
    r.q_ = 1 / q_;
  else
    r.r_ = powmod(r_, p_ - 2, p_);
  return r;
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  if (p_ == 0)
    r.q_ = -q_;
  else
    r.r_ = r_ == 0 ? 0 : p_ - r_;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (o.p_ != p_) {
    Scalar c = o;
    adopt(c);
    c.adopt(*this);
    return *this += c;
  }
  if (p_ == 0) {
    q_ += o.q_;
  } else {
    r_ += o.r_;
    if (r_ >= p_) r_ -= p_;
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  if (o.p_ != p_) {
    Scalar c = o;
    adopt(c);
    c.adopt(*this);
    return *this *= c;
  }
  if (p_ == 0)
    q_ *= o.q_;
  else
    r_ = mulmod(r_, o.r_, p_);
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inverse(); }

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.p_ == b.p_) return a.p_ == 0 ? a.q_ == b.q_ : a.r_ == b.r_;
  Scalar x = a, y = b;
  x.adopt(y);
  y.adopt(x);
  return x == y;
}

}  // namespace tcx
