#pragma once

// Finite unions of half-open intervals on the circle R/Z, identified with
// [0,1). Values are kept in canonical form: sorted, pairwise disjoint and
// non-adjacent, so two unions are equal as sets iff their piece lists match.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kglab/rational.hpp"

namespace kglab {

struct Interval {
  Rational lo;
  Rational hi;
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct Arc {
  Rational center;
  Rational radius;
};

class CircleIntervalUnion {
 public:
  CircleIntervalUnion() = default;

  static CircleIntervalUnion empty() { return {}; }

  static CircleIntervalUnion full() {
    CircleIntervalUnion u;
    u.pieces_.push_back({Rational(0), Rational(1)});
    return u;
  }

  /// Arbitrary pieces [lo, hi) with lo <= hi and hi - lo <= 1; each piece is
  /// reduced mod 1 before normalization.
  static CircleIntervalUnion from_pieces(std::vector<Interval> raw) {
    std::vector<Interval> wrapped;
    wrapped.reserve(raw.size() + 2);
    for (auto& piece : raw) {
      if (piece.hi < piece.lo) throw std::invalid_argument("interval with hi < lo");
      Rational len = piece.hi - piece.lo;
      if (len == 0) continue;
      if (len >= 1) return full();
      Rational shift(floor_of(piece.lo));
      Rational lo = piece.lo - shift;
      Rational hi = piece.hi - shift;
      if (hi <= 1) {
        wrapped.push_back({lo, hi});
      } else {
        wrapped.push_back({lo, Rational(1)});
        wrapped.push_back({Rational(0), hi - 1});
      }
    }
    CircleIntervalUnion u;
    u.pieces_ = normalize(std::move(wrapped));
    return u;
  }

  /// Union of open arcs (center - radius, center + radius) taken mod 1.
  static CircleIntervalUnion from_arcs(const std::vector<Arc>& arcs) {
    std::vector<Interval> raw;
    raw.reserve(arcs.size());
    for (const auto& arc : arcs) {
      if (arc.radius < 0) throw std::invalid_argument("arc radius must be non-negative");
      if (arc.radius >= Rational(1, 2)) throw std::invalid_argument("arc radius must be < 1/2");
      raw.push_back({arc.center - arc.radius, arc.center + arc.radius});
    }
    return from_pieces(std::move(raw));
  }

  const std::vector<Interval>& pieces() const { return pieces_; }
  bool is_empty() const { return pieces_.empty(); }

  Rational measure() const {
    Rational total(0);
    for (const auto& p : pieces_) total += p.hi - p.lo;
    return total;
  }

  /// Membership of a point of [0,1) (reduced mod 1 first).
  bool contains(const Rational& x) const {
    Rational t = frac_of(x);
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                               [](const Rational& v, const Interval& p) { return v < p.lo; });
    if (it == pieces_.begin()) return false;
    --it;
    return t < it->hi;
  }

  /// True when x coincides with an endpoint of some piece.
  bool on_boundary(const Rational& x) const {
    Rational t = frac_of(x);
    for (const auto& p : pieces_) {
      if (t == p.lo || t == p.hi || (p.hi == 1 && t == 0)) return true;
    }
    return false;
  }

  CircleIntervalUnion complement() const {
    std::vector<Interval> out;
    Rational cursor(0);
    for (const auto& p : pieces_) {
      if (cursor < p.lo) out.push_back({cursor, p.lo});
      cursor = p.hi;
    }
    if (cursor < 1) out.push_back({cursor, Rational(1)});
    CircleIntervalUnion u;
    u.pieces_ = std::move(out);
    return u;
  }

  CircleIntervalUnion rotated(const Rational& shift) const {
    std::vector<Interval> raw;
    raw.reserve(pieces_.size());
    for (const auto& p : pieces_) raw.push_back({p.lo + shift, p.hi + shift});
    return from_pieces(std::move(raw));
  }

  std::vector<std::string> endpoint_strings() const {
    std::vector<std::string> out;
    out.reserve(2 * pieces_.size());
    for (const auto& p : pieces_) {
      out.push_back(to_string(p.lo));
      out.push_back(to_string(p.hi));
    }
    return out;
  }

  friend bool operator==(const CircleIntervalUnion&, const CircleIntervalUnion&) = default;

  friend CircleIntervalUnion intersect(const CircleIntervalUnion& u, const CircleIntervalUnion& v) {
    std::vector<Interval> out;
    std::size_t i = 0, j = 0;
    const auto& a = u.pieces_;
    const auto& b = v.pieces_;
    while (i < a.size() && j < b.size()) {
      const Rational& lo = a[i].lo < b[j].lo ? b[j].lo : a[i].lo;
      const Rational& hi = a[i].hi < b[j].hi ? a[i].hi : b[j].hi;
      if (lo < hi) out.push_back({lo, hi});
      if (a[i].hi < b[j].hi) {
        ++i;
      } else {
        ++j;
      }
    }
    CircleIntervalUnion w;
    // Pieces of the inputs are non-adjacent, so the sweep output is canonical.
    w.pieces_ = std::move(out);
    return w;
  }

  friend CircleIntervalUnion unite(const CircleIntervalUnion& u, const CircleIntervalUnion& v) {
    std::vector<Interval> all;
    all.reserve(u.pieces_.size() + v.pieces_.size());
    std::merge(u.pieces_.begin(), u.pieces_.end(), v.pieces_.begin(), v.pieces_.end(),
               std::back_inserter(all),
               [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    CircleIntervalUnion w;
    w.pieces_ = merge_sorted(std::move(all));
    return w;
  }

 private:
  static std::vector<Interval> normalize(std::vector<Interval> pieces) {
    std::sort(pieces.begin(), pieces.end(),
              [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    return merge_sorted(std::move(pieces));
  }

  static std::vector<Interval> merge_sorted(std::vector<Interval> sorted) {
    std::vector<Interval> out;
    out.reserve(sorted.size());
    for (auto& p : sorted) {
      if (p.lo >= p.hi) continue;
      if (!out.empty() && p.lo <= out.back().hi) {
        if (out.back().hi < p.hi) out.back().hi = p.hi;
      } else {
        out.push_back(std::move(p));
      }
    }
    return out;
  }

  std::vector<Interval> pieces_;
};

inline CircleIntervalUnion from_arcs(const std::vector<Arc>& arcs) {
  return CircleIntervalUnion::from_arcs(arcs);
}

inline Rational measure(const CircleIntervalUnion& u) { return u.measure(); }

}  // namespace kglab
