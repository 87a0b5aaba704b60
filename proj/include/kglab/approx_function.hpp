#pragma once

// Approximating functions psi : N -> [0, 1/2), stored as exact rationals over
// a finite domain 1..q_max.

#include <cmath>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kglab/rational.hpp"

namespace kglab {

class ApproxFunction {
 public:
  enum class Kind { power, capped, table, sparse };

  /// c * q^(-exponent) on q_min..q_max, zero below q_min. Non-integer exponents
  /// are rounded down to the dyadic grid 2^-48 so every value stays exact.
  static ApproxFunction power(const Rational& c, const Rational& exponent, long long q_max,
                              long long q_min = 1) {
    check_domain(q_max, q_min);
    ApproxFunction f(Kind::power, q_max);
    f.q_min_ = q_min;
    f.label_ = "power(c=" + to_string(c) + ",s=" + to_string(exponent) + ")";
    const bool integral = exponent.get_den() == 1 && exponent >= 0;
    for (long long q = 1; q <= q_max; ++q) {
      if (q < q_min) {
        f.values_.emplace_back(0);
        continue;
      }
      if (integral) {
        Integer denom;
        mpz_ui_pow_ui(denom.get_mpz_t(), static_cast<unsigned long>(q),
                      static_cast<unsigned long>(exponent.get_num().get_ui()));
        f.values_.push_back(Rational(c / Rational(denom)));
      } else {
        long double v = static_cast<long double>(c.get_d()) *
                        std::pow(static_cast<long double>(q), -static_cast<long double>(exponent.get_d()));
        long double scaled = std::floor(v * 281474976710656.0L);  // 2^48
        Integer num(std::to_string(static_cast<unsigned long long>(scaled)));
        f.values_.push_back(make_rational(num, Integer(1) << 48));
      }
    }
    f.finish();
    return f;
  }

  /// Values for q = 1, 2, ..., values.size().
  static ApproxFunction table(std::vector<Rational> values) {
    if (values.empty()) throw std::invalid_argument("approximating function table is empty");
    ApproxFunction f(Kind::table, static_cast<long long>(values.size()));
    f.values_ = std::move(values);
    f.label_ = "table";
    f.finish();
    return f;
  }

  /// Supported on the keys of `support`, zero elsewhere.
  static ApproxFunction sparse(const std::map<long long, Rational>& support, long long q_max) {
    check_domain(q_max, 1);
    ApproxFunction f(Kind::sparse, q_max);
    f.values_.assign(static_cast<std::size_t>(q_max), Rational(0));
    for (const auto& [q, v] : support) {
      if (q < 1) throw std::invalid_argument("sparse support must be positive integers");
      if (q <= q_max) f.values_[static_cast<std::size_t>(q - 1)] = v;
    }
    f.label_ = "sparse";
    f.finish();
    return f;
  }

  static ApproxFunction zero(long long q_max) {
    return table(std::vector<Rational>(static_cast<std::size_t>(q_max), Rational(0)));
  }

  /// min(psi(q), 1/q).
  ApproxFunction capped() const {
    ApproxFunction f = *this;
    f.kind_ = Kind::capped;
    f.label_ = "capped(" + label_ + ")";
    for (long long q = 1; q <= q_max_; ++q) {
      Rational cap(1, q);
      auto& v = f.values_[static_cast<std::size_t>(q - 1)];
      if (cap < v) v = cap;
    }
    f.finish();
    return f;
  }

  const Rational& operator()(long long q) const {
    if (q < 1 || q > q_max_) throw std::out_of_range("psi evaluated outside 1..q_max");
    return values_[static_cast<std::size_t>(q - 1)];
  }

  double as_double(long long q) const { return doubles_.at(static_cast<std::size_t>(q - 1)); }

  Kind kind() const { return kind_; }
  long long q_max() const { return q_max_; }
  long long q_min() const { return q_min_; }
  const std::string& label() const { return label_; }

  /// psi(q) <= 1/q on the whole domain.
  bool satisfies_cap() const { return satisfies_cap_; }
  bool is_zero() const { return is_zero_; }

 private:
  ApproxFunction(Kind kind, long long q_max) : kind_(kind), q_max_(q_max) {}

  static void check_domain(long long q_max, long long q_min) {
    if (q_max < 1) throw std::invalid_argument("q_max must be positive");
    if (q_min < 1) throw std::invalid_argument("q_min must be positive");
  }

  void finish() {
    const Rational half(1, 2);
    doubles_.clear();
    satisfies_cap_ = true;
    is_zero_ = true;
    for (long long q = 1; q <= q_max_; ++q) {
      const auto& v = values_[static_cast<std::size_t>(q - 1)];
      if (v < 0 || v >= half)
        throw std::invalid_argument("psi(" + std::to_string(q) + ") = " + to_string(v) +
                                    " must lie in [0, 1/2)");
      if (v * q > 1) satisfies_cap_ = false;
      if (v != 0) is_zero_ = false;
      doubles_.push_back(v.get_d());
    }
  }

  Kind kind_;
  long long q_max_;
  long long q_min_ = 1;
  std::string label_;
  std::vector<Rational> values_;
  std::vector<double> doubles_;
  bool satisfies_cap_ = true;
  bool is_zero_ = true;
};

/// Psi defined on nonzero integer vectors.
using MultivariateApprox = std::function<Rational(std::span<const long long>)>;

}  // namespace kglab
