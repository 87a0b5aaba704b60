#pragma once

// Exact rational scalars backed by GMP, plus the 128-bit integer helpers used
// by the fast arc kernels.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <compare>
#include <ostream>
#include <utility>

namespace kglab {

using Integer = mpz_class;
using i128 = __int128;

inline Integer to_integer(long long v) { return Integer(static_cast<long>(v)); }

/// Exact reduced fraction with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(int v) : v_(static_cast<long>(v)) {}
  Rational(long v) : v_(v) {}
  Rational(long long v) : v_(static_cast<long>(v)) {}
  Rational(unsigned long v) : v_(v) {}
  Rational(unsigned long long v) : v_(static_cast<unsigned long>(v)) {}
  Rational(const Integer& v) : v_(v) {}
  Rational(long long num, long long den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    v_ = mpq_class(to_integer(num), to_integer(den));
    v_.canonicalize();
  }
  Rational(const Integer& num, const Integer& den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  const Integer& get_num() const { return v_.get_num(); }
  const Integer& get_den() const { return v_.get_den(); }
  mpz_srcptr get_num_mpz_t() const { return v_.get_num_mpz_t(); }
  mpz_srcptr get_den_mpz_t() const { return v_.get_den_mpz_t(); }
  double get_d() const { return v_.get_d(); }
  const mpq_class& raw() const { return v_; }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.v_ == 0) throw std::domain_error("rational division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.v_.get_num().get_str() << "/" << r.v_.get_den().get_str();
  }

 private:
  mpq_class v_{0};
};

inline Rational make_rational(long long num, long long den = 1) { return Rational(num, den); }
inline Rational make_rational(const Integer& num, const Integer& den) { return Rational(num, den); }

/// Canonical "num/den" form; integers keep an explicit "/1".
inline std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Accepts "num/den", "num", or a plain decimal such as "0.125".
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& v) {
    while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.pop_back();
    std::size_t i = 0;
    while (i < v.size() && (v[i] == ' ' || v[i] == '\t')) ++i;
    v.erase(0, i);
  };
  trim(s);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  try {
    if (auto dot = s.find('.'); dot != std::string::npos) {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      std::string den = "1" + std::string(s.size() - dot - 1, '0');
      if (digits == "-" || digits.empty()) digits += "0";
      return make_rational(Integer(digits), Integer(den));
    }
    if (auto slash = s.find('/'); slash != std::string::npos) {
      return make_rational(Integer(s.substr(0, slash)), Integer(s.substr(slash + 1)));
    }
    return make_rational(Integer(s), Integer(1));
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("malformed rational literal: " + s);
  }
}

inline Integer floor_of(const Rational& r) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

inline Rational frac_of(const Rational& r) { return r - Rational(floor_of(r)); }

/// Nearest integer, ties resolved toward the smaller value.
inline Integer nearest_integer(const Rational& r) {
  Rational shifted = r - Rational(1, 2);
  Integer c;
  mpz_cdiv_q(c.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
  return c;
}

inline Rational abs_of(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline long long to_ll(const Integer& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("integer exceeds 64 bits");
  return z.get_si();
}

inline Integer from_i128(i128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                            : static_cast<unsigned __int128>(v);
  Integer hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
  Integer lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
  Integer out = (hi << 64) + lo;
  return neg ? Integer(-out) : out;
}

inline Rational to_rational(i128 num, i128 den) {
  return make_rational(from_i128(num), from_i128(den));
}

inline i128 abs128(i128 v) { return v < 0 ? -v : v; }

inline i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline i128 floor_div128(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline i128 ceil_div128(i128 a, i128 b) { return -floor_div128(-a, b); }

/// Multiplication that reports overflow instead of wrapping.
inline bool mul_overflows(i128 a, i128 b, i128& out) { return __builtin_mul_overflow(a, b, &out); }


}  // namespace kglab
