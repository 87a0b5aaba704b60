#pragma once

// Inhomogeneous targets and the Dirichlet pairs (a_d, b_d) attached to each
// modulus d: |b_d y - a_d| < 1/|d|, 1 <= b_d <= |d|, gcd(a_d, b_d) = 1.

#include <cstdlib>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kglab/arith.hpp"
#include "kglab/rational.hpp"

namespace kglab {

struct TargetScheme {
  enum class Kind { fixed_rational, fixed_pair, moving };

  Kind kind = Kind::fixed_rational;
  int m = 1;
  std::vector<Rational> y;  // fixed_rational: canonical representatives in [0,1)
  IntVector a;              // fixed_pair numerators
  long long b = 1;          // fixed_pair common denominator
  std::map<long long, Rational> moving_table;  // d -> y_d, carried but never swept

  static TargetScheme rational(const Rational& value) { return rational(std::vector<Rational>{value}); }

  static TargetScheme rational(std::vector<Rational> values) {
    if (values.empty()) throw std::invalid_argument("target needs at least one coordinate");
    TargetScheme t;
    t.kind = Kind::fixed_rational;
    t.m = static_cast<int>(values.size());
    for (auto& v : values) v = frac_of(v);
    t.y = std::move(values);
    return t;
  }

  static TargetScheme pair(IntVector numerators, long long denominator) {
    if (numerators.empty()) throw std::invalid_argument("fixed-pair target needs a numerator vector");
    if (denominator < 1) throw std::invalid_argument("fixed-pair denominator must be positive");
    long long g = denominator;
    for (long long v : numerators) g = std::gcd(g, std::llabs(v));
    if (g != 1) throw std::invalid_argument("fixed-pair target requires gcd(a, b) = 1");
    TargetScheme t;
    t.kind = Kind::fixed_pair;
    t.m = static_cast<int>(numerators.size());
    t.b = denominator;
    for (long long v : numerators) t.y.push_back(make_rational(v, denominator));
    t.a = std::move(numerators);
    return t;
  }

  static TargetScheme pair_from(const Rational& value) {
    Rational r = frac_of(value);
    return pair({to_ll(r.get_num())}, to_ll(r.get_den()));
  }

  static TargetScheme moving(std::map<long long, Rational> table) {
    TargetScheme t;
    t.kind = Kind::moving;
    t.m = 1;
    for (auto& [d, v] : table) v = frac_of(v);
    t.moving_table = std::move(table);
    return t;
  }

  /// The fixed target coordinate for m = 1 schemes.
  const Rational& scalar() const {
    if (kind == Kind::moving) throw std::invalid_argument("moving target has no fixed value");
    if (m != 1) throw std::invalid_argument("scalar target requested for m > 1");
    return y.front();
  }
};

struct DirichletPair {
  long long a = 0;
  long long b = 1;
  long long d = 1;
  friend bool operator==(const DirichletPair&, const DirichletPair&) = default;
};

/// Scan b = 1..|d| with a = nearest integer to b*y and accept the first b with
/// |b*y - a| < 1/|d|; ties on a go to the smaller |a|. The accepted pair is
/// reduced by gcd(|a|, b).
inline DirichletPair dirichlet_pair(const Rational& y, long long d) {
  if (d == 0) throw std::invalid_argument("dirichlet_pair: modulus must be nonzero");
  if (y < 0 || y >= 1) throw std::invalid_argument("dirichlet_pair: target must lie in [0,1)");
  const long long ad = std::llabs(d);
  const i128 u = to_ll(y.get_num());
  const i128 t = to_ll(y.get_den());
  for (long long bb = 1; bb <= ad; ++bb) {
    i128 prod = u * bb;
    // nearest integer to prod / t; prod >= 0, exact halves round down
    i128 a = (2 * prod + t - 1) / (2 * t);
    i128 err = abs128(prod - a * t);
    if (err * ad < t) {
      long long al = static_cast<long long>(a);
      long long g = std::gcd(std::llabs(al), bb);
      return {al / g, bb / g, d};
    }
  }
  throw std::logic_error("dirichlet_pair: no pair found (violates Dirichlet's theorem)");
}

inline DirichletPair pair_for_vector(const Rational& y, std::span<const long long> q) {
  return dirichlet_pair(y, gcd_vec(q));
}

/// Exact check of the three defining conditions.
inline bool satisfies_dirichlet_conditions(const DirichletPair& p, const Rational& y) {
  const long long ad = std::llabs(p.d);
  if (p.b < 1 || p.b > ad) return false;
  if (std::gcd(std::llabs(p.a), p.b) != 1) return false;
  Rational err = abs_of(Rational(p.b) * y - Rational(p.a));
  return err * ad < 1;
}

/// Memo of pairs keyed by |d|; fill once, then share read-only.
class DirichletTable {
 public:
  DirichletTable(Rational y, long long max_modulus) : y_(std::move(y)) {
    pairs_.reserve(static_cast<std::size_t>(max_modulus));
    for (long long d = 1; d <= max_modulus; ++d) pairs_.push_back(dirichlet_pair(y_, d));
  }

  const DirichletPair& operator()(long long d) const {
    long long ad = std::llabs(d);
    if (ad == 0 || ad > static_cast<long long>(pairs_.size()))
      throw std::out_of_range("DirichletTable: modulus outside table");
    return pairs_[static_cast<std::size_t>(ad - 1)];
  }

  const Rational& target() const { return y_; }
  long long max_modulus() const { return static_cast<long long>(pairs_.size()); }

 private:
  Rational y_;
  std::vector<DirichletPair> pairs_;
};

// Convergents standing in for irrational targets; each denominator exceeds
// every modulus used by the experiments (10^4).
inline Rational surrogate_sqrt2_minus_1() { return make_rational(5741, 13860); }
inline Rational surrogate_e_minus_2() { return make_rational(12993, 18089); }

inline Rational named_surrogate(const std::string& name) {
  if (name == "sqrt2-1") return surrogate_sqrt2_minus_1();
  if (name == "e-2") return surrogate_e_minus_2();
  throw std::invalid_argument("unknown surrogate target: " + name);
}

}  // namespace kglab
