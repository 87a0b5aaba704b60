#pragma once

// Number-theoretic kernel: factorization, multiplicative functions, gcd of
// integer vectors and enumeration of integer vectors of a given sup norm.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kglab/rational.hpp"

namespace kglab {

using IntVector = std::vector<long long>;

class UnsupportedDimension : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PrimePower {
  std::uint64_t prime;
  int exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factors in strictly increasing order.
using Factorization = std::vector<PrimePower>;

namespace detail {

inline constexpr std::uint32_t kSieveBound = 1'000'000;

inline const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<bool> composite(kSieveBound + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= kSieveBound; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = std::uint64_t{i} * i; j <= kSieveBound; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

// Deterministic for all 64-bit inputs with this witness set.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// Only reached for cofactors above the sieve range squared, i.e. > 10^12.
inline std::uint64_t pollard_rho(std::uint64_t n) {
  for (std::uint64_t c = 1;; ++c) {
    auto f = [&](std::uint64_t v) { return (mul_mod(v, v, n) + c) % n; };
    std::uint64_t x = 2, y = 2, d = 1;
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

inline void split_large(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  std::uint64_t d = pollard_rho(n);
  split_large(d, out);
  split_large(n / d, out);
}

}  // namespace detail

/// Trial division by the sieved primes up to 10^6; a remaining cofactor above
/// 10^12 is split with Miller-Rabin / Pollard rho.
inline Factorization factorize(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be positive");
  Factorization out;
  for (std::uint32_t p : detail::small_primes()) {
    if (std::uint64_t{p} * p > n) break;
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (n > 1) {
    std::vector<std::uint64_t> rest;
    detail::split_large(n, rest);
    std::sort(rest.begin(), rest.end());
    for (std::uint64_t p : rest) {
      if (!out.empty() && out.back().prime == p) {
        ++out.back().exponent;
      } else {
        out.push_back({p, 1});
      }
    }
  }
  return out;
}

inline int mobius(std::uint64_t n) {
  int sign = 1;
  for (const auto& [p, e] : factorize(n)) {
    if (e > 1) return 0;
    sign = -sign;
  }
  return sign;
}

inline std::uint64_t totient(std::uint64_t n) {
  std::uint64_t result = n;
  for (const auto& pp : factorize(n)) result = result / pp.prime * (pp.prime - 1);
  return result;
}

inline std::uint64_t divisor_count(std::uint64_t n) {
  std::uint64_t result = 1;
  for (const auto& pp : factorize(n)) result *= static_cast<std::uint64_t>(pp.exponent + 1);
  return result;
}

inline std::uint64_t divisor_sum(std::uint64_t n) {
  std::uint64_t result = 1;
  for (const auto& [p, e] : factorize(n)) {
    std::uint64_t term = 1, power = 1;
    for (int i = 0; i < e; ++i) {
      power *= p;
      term += power;
    }
    result *= term;
  }
  return result;
}

/// Positive divisors in increasing order.
inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out{1};
  for (const auto& [p, e] : factorize(n)) {
    std::size_t existing = out.size();
    std::uint64_t power = 1;
    for (int i = 0; i < e; ++i) {
      power *= p;
      for (std::size_t j = 0; j < existing; ++j) out.push_back(out[j] * power);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline long long gcd_vec(std::span<const long long> q) {
  long long g = 0;
  for (long long v : q) g = std::gcd(g, v < 0 ? -v : v);
  if (g == 0) throw std::invalid_argument("gcd_vec: zero vector");
  return g;
}

inline long long sup_norm(std::span<const long long> q) {
  long long s = 0;
  for (long long v : q) s = std::max(s, v < 0 ? -v : v);
  return s;
}

/// All integer vectors of sup norm exactly `s` in dimension 1 or 2, in a fixed
/// deterministic order.
inline std::vector<IntVector> enumerate_vectors(long long s, int n) {
  if (s < 1) throw std::invalid_argument("enumerate_vectors: s must be positive");
  if (n == 1) return {{s}, {-s}};
  if (n != 2) throw UnsupportedDimension("enumerate_vectors: only n <= 2 is materialized");
  std::vector<IntVector> out;
  out.reserve(static_cast<std::size_t>(8 * s));
  for (long long t = -s; t < s; ++t) {
    out.push_back({s, t});
    out.push_back({-s, -t});
    out.push_back({-t, s});
    out.push_back({t, -s});
  }
  return out;
}

inline std::uint64_t count_vectors_with_gcd(long long s, long long d, int n = 2) {
  if (n != 2) throw UnsupportedDimension("count_vectors_with_gcd: n must be 2");
  if (s < 1 || d < 1) throw std::invalid_argument("count_vectors_with_gcd: s, d must be positive");
  if (s % d != 0) return 0;
  return 8 * totient(static_cast<std::uint64_t>(s / d));
}

/// Number of vectors with sup norm s: 2 for n = 1, 8s for n = 2.
inline std::uint64_t count_vectors(long long s, int n) {
  if (n == 1) return 2;
  if (n == 2) return static_cast<std::uint64_t>(8 * s);
  throw UnsupportedDimension("count_vectors: only n <= 2");
}

}  // namespace kglab
