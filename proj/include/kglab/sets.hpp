#pragma once

// The approximation sets A_q, A'_q, Ã_q and A''_q: exact one-dimensional
// interval construction, point membership in any dimension, and the torus
// maps T_k that reduce an n x m problem to m dimensions.

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kglab/arith.hpp"
#include "kglab/circle.hpp"
#include "kglab/dirichlet.hpp"
#include "kglab/rational.hpp"

namespace kglab {

enum class Variant { plain, coprime, tilde, fixed_pair };

inline std::string to_string(Variant v) {
  switch (v) {
    case Variant::plain: return "plain";
    case Variant::coprime: return "coprime";
    case Variant::tilde: return "tilde";
    case Variant::fixed_pair: return "fixed-pair";
  }
  return "?";
}

inline Variant parse_variant(const std::string& s) {
  if (s == "plain") return Variant::plain;
  if (s == "coprime") return Variant::coprime;
  if (s == "tilde") return Variant::tilde;
  if (s == "fixed-pair" || s == "fixed_pair") return Variant::fixed_pair;
  throw std::invalid_argument("unknown set variant: " + s);
}

class UnsupportedExact : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Keeps residue p iff gcd(modulus, b*p + a) = 1 (coordinatewise a for m > 1).
struct ResidueFilter {
  IntVector a{0};
  long long b = 1;

  bool keeps(long long modulus, std::span<const long long> p) const {
    long long g = std::llabs(modulus);
    for (std::size_t j = 0; j < p.size() && g != 1; ++j) {
      long long v = b * p[j] + a[j];
      g = std::gcd(g, std::llabs(v));
    }
    return g == 1;
  }

  bool keeps(long long modulus, long long p) const {
    long long v = b * p + a[0];
    return std::gcd(std::llabs(modulus), std::llabs(v)) == 1;
  }
};

/// Target coordinates entering |qx - p - y|.
inline const std::vector<Rational>& target_values(const TargetScheme& t) {
  if (t.kind == TargetScheme::Kind::moving)
    throw std::invalid_argument("moving targets are carried in the data model but not evaluated");
  return t.y;
}

/// Residue filter of a variant for a vector with gcd |modulus|; empty for plain.
inline std::optional<ResidueFilter> residue_filter(Variant variant, const TargetScheme& target,
                                                   long long modulus) {
  switch (variant) {
    case Variant::plain: return std::nullopt;
    case Variant::coprime: return ResidueFilter{IntVector(static_cast<std::size_t>(target.m), 0), 1};
    case Variant::tilde: {
      if (target.kind != TargetScheme::Kind::fixed_rational || target.m != 1)
        throw std::invalid_argument("tilde variant needs a one-dimensional Dirichlet-pair target");
      DirichletPair pr = dirichlet_pair(target.scalar(), modulus);
      return ResidueFilter{{pr.a}, pr.b};
    }
    case Variant::fixed_pair: {
      if (target.kind != TargetScheme::Kind::fixed_pair)
        throw std::invalid_argument("fixed-pair variant needs a fixed-pair target");
      return ResidueFilter{target.a, target.b};
    }
  }
  return std::nullopt;
}

struct SetSpec {
  int n = 1;
  int m = 1;
  Variant variant = Variant::plain;
  IntVector q{1};
  Rational delta{0};
  TargetScheme target = TargetScheme::rational(Rational(0));

  void validate() const {
    if (n < 1 || m < 1) throw std::invalid_argument("set dimensions must be positive");
    if (static_cast<int>(q.size()) != n) throw std::invalid_argument("q must have length n");
    (void)gcd_vec(q);
    if (delta < 0 || delta >= Rational(1, 2)) throw std::invalid_argument("delta must lie in [0, 1/2)");
    if (target.kind != TargetScheme::Kind::moving && target.m != m)
      throw std::invalid_argument("target dimension differs from m");
    if (variant == Variant::tilde &&
        (target.kind != TargetScheme::Kind::fixed_rational || m != 1))
      throw std::invalid_argument("tilde variant requires a Dirichlet-pair target with m = 1");
    if (variant == Variant::fixed_pair && target.kind != TargetScheme::Kind::fixed_pair)
      throw std::invalid_argument("fixed-pair variant requires a fixed-pair target");
  }
};

/// One-dimensional set A_{1,1}(d, delta) or its gcd-restricted version: arcs
/// centred at (p + y)/d with radius delta/|d| for the kept residues p.
struct ArcFamily {
  long long modulus = 1;
  Rational target{0};
  Rational delta{0};
  std::optional<ResidueFilter> filter;

  Rational radius() const { return delta / Rational(std::llabs(modulus)); }
  Rational center(long long p) const { return (Rational(p) + target) / Rational(modulus); }
  bool keeps(long long p) const { return !filter || filter->keeps(modulus, p); }
};

inline ArcFamily arc_family(Variant variant, const TargetScheme& target, long long d,
                            const Rational& delta) {
  if (d == 0) throw std::invalid_argument("modulus must be nonzero");
  if (delta < 0 || delta >= Rational(1, 2)) throw std::invalid_argument("delta must lie in [0, 1/2)");
  if (target.m != 1) throw UnsupportedExact("exact interval sets exist only for m = 1");
  return ArcFamily{d, target_values(target).front(), delta, residue_filter(variant, target, d)};
}

inline CircleIntervalUnion build_interval_set(const ArcFamily& family) {
  std::vector<Arc> arcs;
  const long long ad = std::llabs(family.modulus);
  const Rational radius = family.radius();
  if (radius == 0) return CircleIntervalUnion::empty();
  arcs.reserve(static_cast<std::size_t>(ad));
  for (long long p = 0; p < ad; ++p) {
    if (family.keeps(p)) arcs.push_back({family.center(p), radius});
  }
  return CircleIntervalUnion::from_arcs(arcs);
}

/// The spec's own q is ignored; the set is built for the one-dimensional
/// modulus d with spec.delta, spec.variant and spec.target.
inline CircleIntervalUnion build_interval_set(const SetSpec& spec, long long d) {
  if (spec.m != 1) throw UnsupportedExact("exact interval sets exist only for m = 1");
  return build_interval_set(arc_family(spec.variant, spec.target, d, spec.delta));
}

/// n x m matrix, row-major; row i multiplies q_i.
template <typename T>
struct PointMatrix {
  int n = 1;
  int m = 1;
  std::vector<T> entries;

  const T& operator()(int i, int j) const { return entries[static_cast<std::size_t>(i * m + j)]; }
  T& operator()(int i, int j) { return entries[static_cast<std::size_t>(i * m + j)]; }
};

struct MembershipWitness {
  IntVector p;
  Rational error;
};

struct MembershipResult {
  bool member = false;
  std::optional<MembershipWitness> witness;
};

namespace detail {

inline std::optional<ResidueFilter> filter_for(const SetSpec& spec) {
  return residue_filter(spec.variant, spec.target, gcd_vec(spec.q));
}

}  // namespace detail

/// Exact membership: the nearest-integer p is the only candidate since
/// delta < 1/2.
inline MembershipResult membership(const PointMatrix<Rational>& x, const SetSpec& spec) {
  spec.validate();
  if (x.n != spec.n || x.m != spec.m) throw std::invalid_argument("point shape differs from set shape");
  if (spec.delta == 0) return {};
  const auto& y = target_values(spec.target);
  IntVector p(static_cast<std::size_t>(spec.m));
  Rational worst(0);
  for (int j = 0; j < spec.m; ++j) {
    Rational v(0);
    for (int i = 0; i < spec.n; ++i) v += Rational(spec.q[static_cast<std::size_t>(i)]) * x(i, j);
    v -= y[static_cast<std::size_t>(j)];
    Integer nearest = nearest_integer(v);
    p[static_cast<std::size_t>(j)] = to_ll(nearest);
    Rational err = abs_of(v - Rational(nearest));
    if (err > worst) worst = err;
  }
  if (!(worst < spec.delta)) return {};
  if (auto f = detail::filter_for(spec); f && !f->keeps(gcd_vec(spec.q), p)) return {};
  return {true, MembershipWitness{std::move(p), worst}};
}

/// Double-precision membership. `boundary` is set when the error lies within
/// 1e-12 of delta, in which case `member` must not be trusted.
struct FloatMembership {
  bool member = false;
  bool boundary = false;
  IntVector p;
  double error = 0.0;
};

inline constexpr double kBoundaryGuard = 1e-12;

inline FloatMembership membership(const PointMatrix<double>& x, const SetSpec& spec) {
  spec.validate();
  if (x.n != spec.n || x.m != spec.m) throw std::invalid_argument("point shape differs from set shape");
  FloatMembership out;
  if (spec.delta == 0) return out;
  const auto& y = target_values(spec.target);
  const double delta = spec.delta.get_d();
  out.p.resize(static_cast<std::size_t>(spec.m));
  for (int j = 0; j < spec.m; ++j) {
    double v = -y[static_cast<std::size_t>(j)].get_d();
    for (int i = 0; i < spec.n; ++i) v += static_cast<double>(spec.q[static_cast<std::size_t>(i)]) * x(i, j);
    double nearest = std::nearbyint(v);
    out.p[static_cast<std::size_t>(j)] = static_cast<long long>(nearest);
    out.error = std::max(out.error, std::fabs(v - nearest));
  }
  if (std::fabs(out.error - delta) <= kBoundaryGuard) out.boundary = true;
  if (!(out.error < delta)) return out;
  if (auto f = detail::filter_for(spec); f && !f->keeps(gcd_vec(spec.q), out.p)) return out;
  out.member = true;
  return out;
}

inline PointMatrix<double> to_double(const PointMatrix<Rational>& x) {
  PointMatrix<double> out{x.n, x.m, {}};
  out.entries.reserve(x.entries.size());
  for (const auto& v : x.entries) out.entries.push_back(v.get_d());
  return out;
}

/// Float path first; near the boundary the decision is redone exactly.
inline bool membership_guarded(const PointMatrix<Rational>& x, const SetSpec& spec) {
  FloatMembership fast = membership(to_double(x), spec);
  if (!fast.boundary) return fast.member;
  return membership(x, spec).member;
}

struct PrimitiveReduction {
  IntVector k;
  long long d = 1;
};

/// q = d * k with d = gcd(q) > 0 and k primitive, sharing the sign of q.
inline PrimitiveReduction reduce_to_primitive(std::span<const long long> q) {
  long long d = gcd_vec(q);
  IntVector k;
  k.reserve(q.size());
  for (long long v : q) k.push_back(v / d);
  return {std::move(k), d};
}

template <typename T>
std::vector<T> torus_map_image(std::span<const long long> k, const PointMatrix<T>& x) {
  if (gcd_vec(k) != 1) throw std::invalid_argument("torus map needs a primitive vector");
  if (static_cast<int>(k.size()) != x.n) throw std::invalid_argument("torus map shape mismatch");
  std::vector<T> out(static_cast<std::size_t>(x.m));
  for (int j = 0; j < x.m; ++j) {
    T v(0);
    for (int i = 0; i < x.n; ++i) v += T(k[static_cast<std::size_t>(i)]) * x(i, j);
    if constexpr (std::is_same_v<T, Rational>) {
      out[static_cast<std::size_t>(j)] = frac_of(v);
    } else {
      v -= std::floor(v);
      out[static_cast<std::size_t>(j)] = v >= 1.0 ? 0.0 : v;
    }
  }
  return out;
}

}  // namespace kglab
