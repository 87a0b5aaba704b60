#pragma once

// Exact measure of the intersection of two one-dimensional arc families,
// computed on a common integer scale in 128-bit arithmetic. This is the hot
// path of the parallel-pair sums; the interval-union route in circle.hpp is
// the independent reference it is tested against.

#include <cstdlib>
#include <map>
#include <optional>
#include <utility>
#include <vector>
#include <cstdint>
#include <numeric>

#include "kglab/circle.hpp"
#include "kglab/rational.hpp"
#include "kglab/sets.hpp"

namespace kglab {

/// ArcFamily with all parameters as machine integers.
struct ScaledFamily {
  long long modulus = 1;
  long long target_num = 0;
  long long target_den = 1;
  long long delta_num = 0;
  long long delta_den = 1;
  bool filtered = false;
  long long filter_a = 0;
  long long filter_b = 1;

  const std::vector<std::uint8_t>* kept = nullptr;  // optional lookup by p mod |modulus|

  bool keeps(long long p) const {
    if (!filtered) return true;
    const long long ad = std::llabs(modulus);
    if (kept) {
      long long r = p % ad;
      return (*kept)[static_cast<std::size_t>(r < 0 ? r + ad : r)] != 0;
    }
    long long v = filter_b * p + filter_a;
    return std::gcd(ad, std::llabs(v)) == 1;
  }
};

inline std::optional<ScaledFamily> scale_family(const ArcFamily& f) {
  auto fits = [](const Integer& z) { return z.fits_slong_p(); };
  if (!fits(f.target.get_num()) || !fits(f.target.get_den()) || !fits(f.delta.get_num()) ||
      !fits(f.delta.get_den()))
    return std::nullopt;
  ScaledFamily s;
  s.modulus = f.modulus;
  s.target_num = f.target.get_num().get_si();
  s.target_den = f.target.get_den().get_si();
  s.delta_num = f.delta.get_num().get_si();
  s.delta_den = f.delta.get_den().get_si();
  if (f.filter) {
    s.filtered = true;
    s.filter_a = f.filter->a.front();
    s.filter_b = f.filter->b;
  }
  return s;
}

struct Fraction128 {
  i128 num = 0;
  i128 den = 1;
};

namespace detail {

inline constexpr i128 kScaleLimit = i128{1} << 120;

struct ScaledGeometry {
  i128 center_unit;  // L / (|d| t): multiplier of (p t + u)
  i128 radius;       // delta * L / |d|
  int sign;
};

}  // namespace detail

namespace detail {

// floor((x0 + i * dx) / s) for i = 0, 1, 2, ... without per-step division.
class FloorProgression {
 public:
  FloorProgression(i128 x0, i128 dx, i128 s) : s_(s) {
    q_ = floor_div128(x0, s);
    r_ = x0 - q_ * s;
    dq_ = floor_div128(dx, s);
    dr_ = dx - dq_ * s;
  }
  i128 value() const { return q_; }
  void advance() {
    q_ += dq_;
    r_ += dr_;
    if (r_ >= s_) {
      r_ -= s_;
      ++q_;
    }
  }

 private:
  i128 s_, q_, r_, dq_, dr_;
};

}  // namespace detail

/// |S_f ∩ S_g| as num / den, or nullopt if the common scale exceeds 2^120.
/// Each kept arc of the family with fewer residues is compared with the arcs
/// of the other family whose centres lie within the sum of the radii.
inline std::optional<Fraction128> intersection_measure_scaled(const ScaledFamily& f,
                                                              const ScaledFamily& g) {
  if (f.delta_num == 0 || g.delta_num == 0) return Fraction128{0, 1};
  const ScaledFamily& outer = std::llabs(f.modulus) <= std::llabs(g.modulus) ? f : g;
  const ScaledFamily& inner = &outer == &f ? g : f;

  auto base = [](const ScaledFamily& s, i128& out) {
    return !mul_overflows(i128{std::llabs(s.modulus)} * s.target_den, s.delta_den, out);
  };
  i128 a = 0, b = 0, scale = 0;
  if (!base(outer, a) || !base(inner, b)) return std::nullopt;
  if (mul_overflows(a / gcd128(a, b), b, scale) || scale > detail::kScaleLimit) return std::nullopt;

  auto geometry = [&](const ScaledFamily& s) {
    const i128 ad = std::llabs(s.modulus);
    return detail::ScaledGeometry{scale / (ad * s.target_den), s.delta_num * (scale / (ad * s.delta_den)),
                                  s.modulus > 0 ? 1 : -1};
  };
  const auto go = geometry(outer);
  const auto gi = geometry(inner);
  const i128 reach = go.radius + gi.radius;
  const i128 inner_step = gi.center_unit * inner.target_den;  // L / |d_inner|
  const i128 inner_offset = gi.center_unit * inner.target_num;
  const i128 outer_step = go.sign * go.center_unit * outer.target_den;

  // centre c_p = c0 + p * outer_step; window of inner indices from t = sign_i * c_p
  const i128 c0 = go.sign * i128{outer.target_num} * go.center_unit;
  const i128 t0 = gi.sign * c0;
  const i128 dt = gi.sign * outer_step;
  detail::FloorProgression lo_minus_one(t0 - reach - inner_offset, dt, inner_step);
  detail::FloorProgression hi(t0 + reach - inner_offset - 1, dt, inner_step);

  i128 total = 0;
  i128 c = c0;
  const long long outer_count = std::llabs(outer.modulus);
  for (long long p = 0; p < outer_count;
       ++p, c += outer_step, lo_minus_one.advance(), hi.advance()) {
    const i128 first = lo_minus_one.value() + 1;
    const i128 last = hi.value();
    if (first > last || !outer.keeps(p)) continue;
    for (i128 pp = first; pp <= last; ++pp) {
      if (!inner.keeps(static_cast<long long>(pp))) continue;
      const i128 c2 = gi.sign * (pp * inner_step + inner_offset);
      const i128 left = std::max(c - go.radius, c2 - gi.radius);
      const i128 right = std::min(c + go.radius, c2 + gi.radius);
      if (right > left) total += right - left;
    }
  }
  return Fraction128{total, scale};
}

inline Rational intersection_measure_intervals(const ArcFamily& f, const ArcFamily& g) {
  return intersect(build_interval_set(f), build_interval_set(g)).measure();
}

/// Fast path when the common scale fits, interval unions otherwise.
inline Rational intersection_measure(const ArcFamily& f, const ArcFamily& g) {
  auto sf = scale_family(f);
  auto sg = scale_family(g);
  if (sf && sg) {
    if (auto r = intersection_measure_scaled(*sf, *sg)) return to_rational(r->num, r->den);
  }
  return intersection_measure_intervals(f, g);
}

/// Sum of many 128-bit fractions, bucketed by reduced denominator so the
/// expensive big-rational additions happen once per distinct denominator.
class FractionAccumulator {
 public:
  void add(i128 num, i128 den, i128 weight = 1) {
    if (num == 0) return;
    const i128 g = gcd128(num, den);
    num /= g;
    den /= g;
    i128 scaled = 0;
    if (mul_overflows(num, weight, scaled)) {
      spill_ += Rational(from_i128(num), from_i128(den)) * Rational(from_i128(weight));
      return;
    }
    auto key = std::make_pair(static_cast<std::uint64_t>(static_cast<unsigned __int128>(den) >> 64),
                              static_cast<std::uint64_t>(den));
    auto [it, inserted] = buckets_.try_emplace(key, 0);
    i128 sum = 0;
    if (__builtin_add_overflow(it->second, scaled, &sum)) {
      spill_ += Rational(from_i128(it->second), from_i128(den));
      it->second = scaled;
    } else {
      it->second = sum;
    }
  }

  void add(const Rational& r) { spill_ += r; }

  Rational total() const {
    Rational out = spill_;
    for (const auto& [key, num] : buckets_) {
      i128 den = (static_cast<i128>(key.first) << 64) | static_cast<i128>(key.second);
      out += Rational(from_i128(num), from_i128(den));
    }
    return out;
  }

 private:
  std::map<std::pair<std::uint64_t, std::uint64_t>, i128> buckets_;
  Rational spill_{0};
};

}  // namespace kglab
