#pragma once

// Closed-form measures, exact pairwise intersections, the inequality audits
// and the quasi-independence-on-average sums for (n, m) = (2, 1).

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kglab/approx_function.hpp"
#include "kglab/arc_kernel.hpp"
#include "kglab/arith.hpp"
#include "kglab/circle.hpp"
#include "kglab/dirichlet.hpp"
#include "kglab/parallel.hpp"
#include "kglab/rational.hpp"
#include "kglab/sets.hpp"

namespace kglab {

// ---------------------------------------------------------------------------
// Measures of single sets

inline Rational plain_measure(int m, const Rational& delta) {
  Rational out(1);
  for (int i = 0; i < m; ++i) out *= Rational(2) * delta;
  return out;
}

/// (2 delta)^m * prod over primes p | d with p not dividing b of (1 - p^-m).
inline Rational closed_form_measure(int m, long long d, const Rational& delta, long long b) {
  if (delta < 0 || delta >= Rational(1, 2)) throw std::invalid_argument("delta must lie in [0, 1/2)");
  if (d == 0) throw std::invalid_argument("modulus must be nonzero");
  Rational out = plain_measure(m, delta);
  for (const auto& pp : factorize(static_cast<std::uint64_t>(std::llabs(d)))) {
    const auto p = static_cast<long long>(pp.prime);
    if (b % p == 0) continue;
    long long pm = 1;
    for (int i = 0; i < m; ++i) pm *= p;
    out *= Rational(1) - Rational(1, pm);
  }
  return out;
}

/// Vector form: the measure depends on q only through gcd(q).
inline Rational closed_form_measure(int m, std::span<const long long> q, const Rational& delta, long long b) {
  return closed_form_measure(m, gcd_vec(q), delta, b);
}

/// |set| for any variant via the closed form.
inline Rational set_measure(Variant variant, const TargetScheme& target, int m, long long d,
                            const Rational& delta) {
  switch (variant) {
    case Variant::plain: return plain_measure(m, delta);
    case Variant::coprime: return closed_form_measure(m, d, delta, 1);
    case Variant::tilde: return closed_form_measure(m, d, delta, dirichlet_pair(target.scalar(), d).b);
    case Variant::fixed_pair: return closed_form_measure(m, d, delta, target.b);
  }
  return Rational(0);
}

/// sum_{q=1}^{Q} q^(n-1) psi(q)^m.
inline Rational partial_sum_psi(const ApproxFunction& psi, int n, int m, long long Q) {
  if (Q > psi.q_max()) throw std::invalid_argument("Q exceeds the domain of psi");
  Rational total(0);
  for (long long q = 1; q <= Q; ++q) {
    Rational term(1);
    for (int i = 1; i < n; ++i) term *= Rational(q);
    for (int i = 0; i < m; ++i) term *= psi(q);
    total += term;
  }
  return total;
}

struct SetMeasureSum {
  Rational total{0};
  Rational plain_total{0};       // sum of 8s * 2 psi(s)
  std::vector<Rational> per_norm;  // index s - 1
};

/// Exact sum of |set_q| over 1 <= |q| <= Q for (n, m) = (2, 1), grouped by
/// sup norm s and gcd d.
inline SetMeasureSum sum_set_measures(const ApproxFunction& psi, Variant variant,
                                      const TargetScheme& target, long long Q) {
  if (Q > psi.q_max()) throw std::invalid_argument("Q exceeds the domain of psi");
  SetMeasureSum out;
  out.per_norm.reserve(static_cast<std::size_t>(Q));
  for (long long s = 1; s <= Q; ++s) {
    Rational shell(0);
    if (psi(s) != 0) {
      for (std::uint64_t d : divisors(static_cast<std::uint64_t>(s))) {
        const auto dd = static_cast<long long>(d);
        shell += Rational(count_vectors_with_gcd(s, dd, 2)) * set_measure(variant, target, 1, dd, psi(s));
      }
    }
    out.per_norm.push_back(shell);
    out.total += shell;
    out.plain_total += Rational(16 * s) * psi(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pairwise intersections

struct PairIntersection {
  Rational value{0};
  bool parallel = false;
  bool exact = true;  // false: value is the product upper bound
};

/// n = 2, m = 1. Parallel pairs q = d k, r = e k reduce to the one-dimensional
/// sets for d and e; non-parallel pairs get the product of plain measures,
/// which is exact for the plain variant and an upper bound otherwise.
inline PairIntersection pairwise_intersection_measure(std::span<const long long> q,
                                                      std::span<const long long> r,
                                                      const ApproxFunction& psi, Variant variant,
                                                      const TargetScheme& target) {
  if (q.size() != 2 || r.size() != 2) throw UnsupportedDimension("pairwise intersections need n = 2");
  if (target.m != 1) throw UnsupportedExact("pairwise intersections need m = 1");
  const auto rq = reduce_to_primitive(q);
  const auto rr = reduce_to_primitive(r);
  const Rational dq = psi(sup_norm(q));
  const Rational dr = psi(sup_norm(r));
  const bool same = rq.k == rr.k;
  const bool opposite = rq.k[0] == -rr.k[0] && rq.k[1] == -rr.k[1];
  if (same || opposite) {
    const long long e = same ? rr.d : -rr.d;
    return {intersection_measure(arc_family(variant, target, rq.d, dq), arc_family(variant, target, e, dr)),
            true, true};
  }
  return {plain_measure(1, dq) * plain_measure(1, dr), false, variant == Variant::plain};
}

/// Same as above for two explicit set specs; mixing variants or targets is an error.
inline PairIntersection pairwise_intersection_measure(const SetSpec& a, const SetSpec& b) {
  a.validate();
  b.validate();
  if (a.variant != b.variant) throw std::invalid_argument("pairwise intersection of mixed variants");
  if (a.target.kind != b.target.kind || a.target.y != b.target.y)
    throw std::invalid_argument("pairwise intersection of mixed targets");
  if (a.n != 2 || b.n != 2 || a.m != 1 || b.m != 1)
    throw UnsupportedDimension("pairwise intersections need (n, m) = (2, 1)");
  const auto rq = reduce_to_primitive(a.q);
  const auto rr = reduce_to_primitive(b.q);
  const bool same = rq.k == rr.k;
  const bool opposite = rq.k[0] == -rr.k[0] && rq.k[1] == -rr.k[1];
  if (same || opposite) {
    const long long e = same ? rr.d : -rr.d;
    return {intersection_measure(arc_family(a.variant, a.target, rq.d, a.delta),
                                 arc_family(b.variant, b.target, e, b.delta)),
            true, true};
  }
  return {plain_measure(1, a.delta) * plain_measure(1, b.delta), false, a.variant == Variant::plain};
}

// ---------------------------------------------------------------------------
// Disjointness of gcd-restricted arcs

struct DisjointnessResult {
  Rational measure{0};
  bool hypotheses_hold = true;
  std::vector<std::string> violations;
};

/// Measure of Ã_{1,1}(d, psi(q)) ∩ A_{1,1}(e, psi(r)); zero whenever the
/// hypotheses gcd(d, e) >= 3, r >= 2 d^2, 1 <= r < q, 1 <= |e| < |d| and
/// psi(q) <= 1/q all hold. Violations are listed, not thrown.
inline DisjointnessResult disjointness_check(long long d, long long e, long long q, long long r,
                                             const ApproxFunction& psi, const Rational& y) {
  DisjointnessResult out;
  auto note = [&](bool ok, const char* what) {
    if (!ok) {
      out.hypotheses_hold = false;
      out.violations.emplace_back(what);
    }
  };
  note(1 <= r && r < q, "1 <= r < q");
  note(1 <= std::llabs(e) && std::llabs(e) < std::llabs(d), "1 <= |e| < |d|");
  note(psi.satisfies_cap(), "psi(q) <= 1/q");
  note(std::gcd(std::llabs(d), std::llabs(e)) >= 3, "gcd(d, e) >= 3");
  note(r >= 2 * d * d, "r >= 2 d^2");
  const TargetScheme target = TargetScheme::rational(y);
  out.measure = intersection_measure(arc_family(Variant::tilde, target, d, psi(q)),
                                     arc_family(Variant::plain, target, e, psi(r)));
  return out;
}

// ---------------------------------------------------------------------------
// Audits: both sides of an inequality whose implied constant is calibrated

struct BoundAudit {
  Rational lhs{0};
  Rational rhs{0};

  /// lhs / rhs, or 0 when rhs = 0 (then lhs = 0 as well in every audit here).
  Rational ratio() const { return rhs == 0 ? Rational(0) : lhs / rhs; }
};

/// |Ã(d, delta1) ∩ Ã(e, delta2)| against delta1 delta2 + delta1 gcd(d, e) / |d|.
inline BoundAudit basic_bound_audit(long long d, long long e, const Rational& delta1, const Rational& delta2,
                                    const TargetScheme& target, Variant variant = Variant::tilde) {
  BoundAudit out;
  out.lhs = intersection_measure(arc_family(variant, target, d, delta1), arc_family(variant, target, e, delta2));
  out.rhs = delta1 * delta2 + delta1 * Rational(std::gcd(std::llabs(d), std::llabs(e))) / Rational(std::llabs(d));
  return out;
}

struct StepAudit {
  Rational step2_lhs{0};
  Rational step2_rhs{0};
  Rational step3_lhs{0};
  Rational step3_rhs{0};
  Rational step3_divisor_form{0};  // psi(q) phi(q) sigma(q) / q
};

/// Both divisor sums of the parallel-pair decomposition at a fixed norm q,
/// weighted by the 8 phi(q/d) vectors of norm q and gcd d.
inline StepAudit step_bounds_audit(long long q, const ApproxFunction& psi) {
  if (!psi.satisfies_cap()) throw std::invalid_argument("step audit needs psi(q) <= 1/q");
  if (q < 1) throw std::invalid_argument("q must be positive");
  StepAudit out;
  const Rational value = psi(q);
  Rational step2(0), step3(0);
  for (std::uint64_t du : divisors(static_cast<std::uint64_t>(q))) {
    const auto d = static_cast<long long>(du);
    const Rational weight(count_vectors_with_gcd(q, d, 2));
    long long gcd_total = 0;  // sum of gcd(d, e) over 1 <= |e| < d with |e| q < 2 d^3
    long long coprime = 0, even_gcd = 0;
    for (long long e = 1; e < d; ++e) {
      const long long g = std::gcd(d, e);
      if (static_cast<i128>(e) * q < 2 * static_cast<i128>(d) * d * d) gcd_total += 2 * g;
      if (g == 1) coprime += 2;
      if (g == 2) even_gcd += 2;
    }
    step2 += weight * Rational(gcd_total, d);
    step3 += weight * Rational(coprime + 2 * even_gcd, d);
  }
  out.step2_lhs = value * step2;
  out.step3_lhs = value * step3;
  out.step2_rhs = out.step3_rhs = Rational(q) * value;
  const auto uq = static_cast<std::uint64_t>(q);
  out.step3_divisor_form = value * Rational(totient(uq)) * Rational(divisor_sum(uq)) / Rational(q);
  return out;
}

/// sum over j in Z^m \ {0} of |U(a) ∩ (U(b) + j)| with U(t) = (-t, t)^m,
/// through the per-axis overlaps o(j) = |(-a, a) ∩ (-b + j, b + j)|.
inline Rational gallagher_overlap_sum(const Rational& a, const Rational& b, int m) {
  if (a < 0 || b < 0) throw std::invalid_argument("Gallagher sum needs a, b >= 0");
  if (m < 1) throw std::invalid_argument("dimension must be positive");
  auto overlap = [&](long long j) {
    Rational lo = std::max(-a, Rational(j) - b);
    Rational hi = std::min(a, Rational(j) + b);
    return hi > lo ? hi - lo : Rational(0);
  };
  const long long reach = to_ll(floor_of(a + b)) + 1;
  Rational axis(0);
  for (long long j = -reach; j <= reach; ++j) axis += overlap(j);
  Rational all(1), centre(1);
  const Rational o0 = overlap(0);
  for (int i = 0; i < m; ++i) {
    all *= axis;
    centre *= o0;
  }
  return all - centre;
}

/// |A''(q, delta1) ∩ A''(r, delta2)| against b delta1 delta2 for a fixed-pair target, m = 1.
inline BoundAudit rational_pair_audit(long long q, long long r, const Rational& delta1, const Rational& delta2,
                                      const TargetScheme& target) {
  if (target.kind != TargetScheme::Kind::fixed_pair || target.m != 1)
    throw std::invalid_argument("rational pair audit needs a one-dimensional fixed-pair target");
  if (q < 1 || r == 0 || std::llabs(r) >= q) throw std::invalid_argument("rational pair audit needs 0 < |r| < q");
  BoundAudit out;
  out.lhs = intersection_measure(arc_family(Variant::fixed_pair, target, q, delta1),
                                 arc_family(Variant::fixed_pair, target, r, delta2));
  out.rhs = Rational(target.b) * delta1 * delta2;
  return out;
}

// ---------------------------------------------------------------------------
// Local density

/// C_m for m = 1: half of 1/2^m.
inline const Rational kLocalDensityConstant(1, 4);

struct Ball {
  Rational center;
  Rational radius;

  CircleIntervalUnion as_union() const {
    if (radius >= Rational(1, 2)) return CircleIntervalUnion::full();
    return CircleIntervalUnion::from_pieces({{center - radius, center + radius}});
  }
};

struct LocalDensityResult {
  Rational lhs{0};
  Rational rhs{0};
  bool threshold_ok = true;  // |d| > 1 / radius
  bool holds() const { return lhs >= rhs; }
};

inline LocalDensityResult local_density_check(long long d, const Rational& delta, const CircleIntervalUnion& window,
                                              Variant variant, const TargetScheme& target) {
  const CircleIntervalUnion set = build_interval_set(arc_family(variant, target, d, delta));
  LocalDensityResult out;
  out.lhs = intersect(set, window).measure();
  out.rhs = kLocalDensityConstant * set.measure() * window.measure();
  return out;
}

inline LocalDensityResult local_density_check(long long d, const Rational& delta, const Ball& window,
                                              Variant variant, const TargetScheme& target) {
  LocalDensityResult out = local_density_check(d, delta, window.as_union(), variant, target);
  out.threshold_ok = Rational(std::llabs(d)) * window.radius > 1;
  return out;
}

// ---------------------------------------------------------------------------
// Quasi-independence on average

struct QiaReport {
  long long Q = 0;
  Rational S1{0};
  Rational S2_parallel{0};
  Rational S2_nonparallel{0};
  Rational ratio{0};
  bool degenerate = false;  // S1 = 0
  Rational step2_lhs{0};
  Rational step2_rhs{0};
  Rational step3_lhs{0};
  Rational step3_rhs{0};

  Rational S2() const { return S2_parallel + S2_nonparallel; }
};

namespace detail {

/// kept[d - 1][p] for 0 <= p < d: residue p survives the variant's gcd filter.
inline std::vector<std::vector<std::uint8_t>> residue_tables(Variant variant, const TargetScheme& target,
                                                             long long max_modulus) {
  std::vector<std::vector<std::uint8_t>> out;
  out.reserve(static_cast<std::size_t>(max_modulus));
  for (long long d = 1; d <= max_modulus; ++d) {
    auto filter = residue_filter(variant, target, d);
    std::vector<std::uint8_t> row(static_cast<std::size_t>(d), 1);
    if (filter) {
      for (long long p = 0; p < d; ++p) row[static_cast<std::size_t>(p)] = filter->keeps(d, p) ? 1 : 0;
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace detail

/// QIA reports for every cutoff in `cutoffs` from a single pass at the largest.
///
/// S1 sums |set_q| over 1 <= |q| <= Q. The parallel block of S2 is exact: with
/// q = d k (d > 0, k primitive of norm s, 8 phi(s) choices) and r = e k,
/// |set_q ∩ set_r| is the one-dimensional intersection for (d, e), covering
/// the diagonal and r = -q. The non-parallel block is (sum |A_q|)^2 minus the
/// parallel pairs of plain measures, an upper bound for restricted variants.
/// The resulting ratio S1^2 / S2 is therefore a lower bound for the true one.
inline std::vector<QiaReport> qia_series(const ApproxFunction& psi, Variant variant, const TargetScheme& target,
                                         std::vector<long long> cutoffs) {
  if (cutoffs.empty()) return {};
  std::sort(cutoffs.begin(), cutoffs.end());
  cutoffs.erase(std::unique(cutoffs.begin(), cutoffs.end()), cutoffs.end());
  const long long q_top = cutoffs.back();
  if (cutoffs.front() < 1) throw std::invalid_argument("QIA cutoff must be positive");
  if (q_top > psi.q_max()) throw std::invalid_argument("QIA cutoff exceeds the domain of psi");
  if (target.m != 1) throw UnsupportedExact("QIA sums need m = 1");
  if (variant == Variant::tilde && !psi.satisfies_cap())
    throw std::invalid_argument("tilde QIA needs psi(q) <= 1/q");

  const std::size_t buckets = cutoffs.size();
  auto bucket_of = [&](long long norm) {
    return static_cast<std::size_t>(std::lower_bound(cutoffs.begin(), cutoffs.end(), norm) - cutoffs.begin());
  };
  const auto tables = detail::residue_tables(variant, target, q_top);

  // Parallel block, one task per primitive norm s.
  std::vector<std::vector<Rational>> per_s(static_cast<std::size_t>(q_top));
  parallel_for(static_cast<std::size_t>(q_top), [&](std::size_t idx) {
    const long long s = static_cast<long long>(idx) + 1;
    const long long n_max = q_top / s;
    std::vector<FractionAccumulator> acc(buckets);
    std::vector<Rational> slow(buckets, Rational(0));
    const auto mult = static_cast<i128>(8 * totient(static_cast<std::uint64_t>(s)));
    std::vector<ArcFamily> plus, minus;
    std::vector<std::optional<ScaledFamily>> plus_s, minus_s;
    for (long long d = 1; d <= n_max; ++d) {
      plus.push_back(arc_family(variant, target, d, psi(d * s)));
      minus.push_back(arc_family(variant, target, -d, psi(d * s)));
      auto sp = scale_family(plus.back());
      auto sm = scale_family(minus.back());
      if (sp) sp->kept = &tables[static_cast<std::size_t>(d - 1)];
      if (sm) sm->kept = &tables[static_cast<std::size_t>(d - 1)];
      plus_s.push_back(sp);
      minus_s.push_back(sm);
    }
    auto add_pair = [&](std::size_t i, std::size_t j, bool opposite, std::size_t bucket, i128 weight) {
      const auto& sf = plus_s[i];
      const auto& sg = opposite ? minus_s[j] : plus_s[j];
      if (sf && sg) {
        if (auto r = intersection_measure_scaled(*sf, *sg)) {
          acc[bucket].add(r->num, r->den, weight);
          return;
        }
      }
      const ArcFamily& g = opposite ? minus[j] : plus[j];
      slow[bucket] += Rational(from_i128(weight)) * intersection_measure_intervals(plus[i], g);
    };
    for (long long d = 1; d <= n_max; ++d) {
      for (long long e = d; e <= n_max; ++e) {
        // (d, e) and (e, d) agree; (d, -e) and (e, -d) agree by reflection x -> -x.
        const i128 weight = mult * (e == d ? 1 : 2);
        const std::size_t bucket = bucket_of(e * s);
        const auto i = static_cast<std::size_t>(d - 1), j = static_cast<std::size_t>(e - 1);
        add_pair(i, j, false, bucket, weight);
        add_pair(i, j, true, bucket, weight);
      }
    }
    std::vector<Rational> totals(buckets);
    for (std::size_t b = 0; b < buckets; ++b) totals[b] = acc[b].total() + slow[b];
    per_s[idx] = std::move(totals);
  });

  std::vector<Rational> parallel_bucket(buckets, Rational(0));
  for (const auto& row : per_s) {
    for (std::size_t b = 0; b < row.size(); ++b) parallel_bucket[b] += row[b];
  }

  const SetMeasureSum measures = sum_set_measures(psi, variant, target, q_top);
  std::vector<QiaReport> out;
  Rational parallel_running(0);
  for (std::size_t b = 0; b < buckets; ++b) {
    const long long Q = cutoffs[b];
    parallel_running += parallel_bucket[b];
    QiaReport rep;
    rep.Q = Q;
    Rational plain_sum(0);
    for (long long s = 1; s <= Q; ++s) {
      rep.S1 += measures.per_norm[static_cast<std::size_t>(s - 1)];
      plain_sum += Rational(16 * s) * psi(s);
    }
    Rational parallel_plain(0);
    for (long long s = 1; s <= Q; ++s) {
      Rational line(0);
      for (long long d = 1; d * s <= Q; ++d) line += Rational(2) * psi(d * s);
      parallel_plain += Rational(16 * static_cast<long long>(totient(static_cast<std::uint64_t>(s)))) * line * line;
    }
    rep.S2_parallel = parallel_running;
    rep.S2_nonparallel = plain_sum * plain_sum - parallel_plain;
    rep.degenerate = rep.S1 == 0;
    rep.ratio = rep.S2() == 0 ? Rational(0) : rep.S1 * rep.S1 / rep.S2();
    if (psi.satisfies_cap()) {
      for (long long q = 1; q <= Q; ++q) {
        const StepAudit a = step_bounds_audit(q, psi);
        rep.step2_lhs += a.step2_lhs;
        rep.step2_rhs += a.step2_rhs;
        rep.step3_lhs += a.step3_lhs;
        rep.step3_rhs += a.step3_rhs;
      }
    }
    out.push_back(std::move(rep));
  }
  return out;
}

inline QiaReport qia_ratio(const ApproxFunction& psi, Variant variant, const TargetScheme& target, long long Q) {
  return qia_series(psi, variant, target, {Q}).front();
}

}  // namespace kglab
