#pragma once

// Seeded Monte Carlo estimates of finite tail unions, Borel-Cantelli tail
// bounds, the Chung-Erdos floor and the T_l invariance check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kglab/analysis.hpp"
#include "kglab/approx_function.hpp"
#include "kglab/arith.hpp"
#include "kglab/circle.hpp"
#include "kglab/dirichlet.hpp"
#include "kglab/parallel.hpp"
#include "kglab/rational.hpp"
#include "kglab/rng.hpp"
#include "kglab/sets.hpp"

namespace kglab {

/// A union of A_q over Q0 <= |q| <= Q1 for one approximating function.
struct TailFamily {
  int n = 2;
  int m = 1;
  Variant variant = Variant::plain;
  ApproxFunction psi = ApproxFunction::zero(1);
  TargetScheme target = TargetScheme::rational(Rational(0));
};

struct TailEstimate {
  long long Q0 = 0;
  long long Q1 = 0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t exact_rechecks = 0;  // samples decided by the exact path
};

namespace detail {

inline void check_tail_family(const TailFamily& f, long long Q0, long long Q1) {
  if (f.n < 1 || f.n > 2) throw UnsupportedDimension("tail unions support n = 1 or 2");
  if (f.m < 1) throw std::invalid_argument("m must be positive");
  if (Q0 < 1 || Q0 > Q1) throw std::invalid_argument("tail window needs 1 <= Q0 <= Q1");
  if (Q1 > f.psi.q_max()) throw std::invalid_argument("tail window exceeds the domain of psi");
  if (f.target.kind == TargetScheme::Kind::moving) throw std::invalid_argument("tail unions need a fixed target");
  if (f.target.m != f.m) throw std::invalid_argument("target dimension differs from m");
  if (f.variant == Variant::tilde && f.m != 1) throw std::invalid_argument("tilde variant needs m = 1");
}

/// Membership of one point in the window union, scanning shells by norm.
class TailScanner {
 public:
  TailScanner(const TailFamily& f, long long Q0, long long Q1) : f_(f), Q0_(Q0), Q1_(Q1) {
    for (const auto& v : target_values(f.target)) y_.push_back(v.get_d());
    filters_.resize(static_cast<std::size_t>(Q1 + 1));
    if (f.variant != Variant::plain) {
      for (long long d = 1; d <= Q1; ++d) filters_[static_cast<std::size_t>(d)] = residue_filter(f.variant, f.target, d);
    }
  }

  /// x is row-major n x m. Returns {member, decided_exactly}.
  std::pair<bool, bool> contains(const std::vector<double>& x) const {
    bool exact_used = false;
    IntVector q(static_cast<std::size_t>(f_.n));
    for (long long s = Q0_; s <= Q1_; ++s) {
      const double delta = f_.psi.as_double(s);
      if (delta <= 0) continue;
      auto test = [&]() {
        const auto verdict = check(q, x, delta, s);
        if (verdict.second) exact_used = true;
        return verdict.first;
      };
      if (f_.n == 1) {
        for (long long sign : {1LL, -1LL}) {
          q[0] = sign * s;
          if (test()) return {true, exact_used};
        }
        continue;
      }
      for (long long t = -s; t <= s; ++t) {
        for (long long sign : {1LL, -1LL}) {
          q[0] = t;
          q[1] = sign * s;
          if (test()) return {true, exact_used};
          if (t == -s || t == s) continue;  // corners already covered
          q[0] = sign * s;
          q[1] = t;
          if (test()) return {true, exact_used};
        }
      }
    }
    return {false, exact_used};
  }

 private:
  std::pair<bool, bool> check(const IntVector& q, const std::vector<double>& x, double delta, long long s) const {
    double worst = 0.0;
    for (int j = 0; j < f_.m; ++j) {
      double v = -y_[static_cast<std::size_t>(j)];
      for (int i = 0; i < f_.n; ++i) v += static_cast<double>(q[static_cast<std::size_t>(i)]) * x[static_cast<std::size_t>(i * f_.m + j)];
      worst = std::max(worst, std::fabs(v - std::nearbyint(v)));
      if (worst > delta + kBoundaryGuard) return {false, false};
    }
    if (std::fabs(worst - delta) <= kBoundaryGuard) return {exact_check(q, x, s), true};
    if (!(worst < delta)) return {false, false};
    const long long d = gcd_vec(q);
    const auto& filter = filters_[static_cast<std::size_t>(d)];
    if (!filter) return {true, false};
    IntVector p(static_cast<std::size_t>(f_.m));
    for (int j = 0; j < f_.m; ++j) {
      double v = -y_[static_cast<std::size_t>(j)];
      for (int i = 0; i < f_.n; ++i) v += static_cast<double>(q[static_cast<std::size_t>(i)]) * x[static_cast<std::size_t>(i * f_.m + j)];
      p[static_cast<std::size_t>(j)] = static_cast<long long>(std::nearbyint(v));
    }
    return {filter->keeps(d, p), false};
  }

  bool exact_check(const IntVector& q, const std::vector<double>& x, long long s) const {
    PointMatrix<Rational> point{f_.n, f_.m, {}};
    for (double v : x) point.entries.emplace_back(mpq_class(v));
    SetSpec spec{f_.n, f_.m, f_.variant, q, f_.psi(s), f_.target};
    return membership(point, spec).member;
  }

  const TailFamily& f_;
  long long Q0_, Q1_;
  std::vector<double> y_;
  std::vector<std::optional<ResidueFilter>> filters_;
};

inline double standard_error(double p, std::uint64_t n) {
  return n == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace detail

inline constexpr std::uint64_t kMinTailSamples = 1000;

/// Fraction of seeded uniform points of [0,1)^{nm} in the union of A_q over
/// Q0 <= |q| <= Q1. Sample i depends only on (seed, i).
inline TailEstimate tail_union_estimate(const TailFamily& family, long long Q0, long long Q1,
                                        std::uint64_t samples, std::uint64_t seed) {
  detail::check_tail_family(family, Q0, Q1);
  if (samples < kMinTailSamples) throw std::invalid_argument("tail estimates need at least 1000 samples");
  TailEstimate out{Q0, Q1, samples, 0, 0.0, 0.0, seed, 0};
  if (family.psi.is_zero()) return out;
  const detail::TailScanner scanner(family, Q0, Q1);
  const CounterRng rng(seed);
  const std::size_t dims = static_cast<std::size_t>(family.n * family.m);
  constexpr std::uint64_t kChunk = 256;
  const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> counts(chunks);
  parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t c) {
    std::vector<double> x(dims);
    std::uint64_t hits = 0, exact = 0;
    const std::uint64_t end = std::min<std::uint64_t>(samples, (c + 1) * kChunk);
    for (std::uint64_t i = c * kChunk; i < end; ++i) {
      for (std::size_t k = 0; k < dims; ++k) x[k] = rng.uniform(k, i);
      const auto [member, exact_used] = scanner.contains(x);
      hits += member ? 1 : 0;
      exact += exact_used ? 1 : 0;
    }
    counts[c] = {hits, exact};
  });
  for (const auto& [h, e] : counts) {
    out.hits += h;
    out.exact_rechecks += e;
  }
  out.estimate = static_cast<double>(out.hits) / static_cast<double>(samples);
  out.stderr_ = detail::standard_error(out.estimate, samples);
  return out;
}

/// First Borel-Cantelli bound: sum over Q0 <= s <= Q1 of #{|q| = s} (2 psi(s))^m.
inline Rational tail_bound(const TailFamily& family, long long Q0, long long Q1) {
  detail::check_tail_family(family, Q0, Q1);
  Rational total(0);
  for (long long s = Q0; s <= Q1; ++s) {
    Rational measure(1);
    for (int j = 0; j < family.m; ++j) measure *= Rational(2) * family.psi(s);
    total += Rational(count_vectors(s, family.n)) * measure;
  }
  return total;
}

/// Exact measure of the window union for (n, m) = (1, 1).
inline Rational exact_union_measure(const TailFamily& family, long long Q0, long long Q1) {
  detail::check_tail_family(family, Q0, Q1);
  if (family.n != 1 || family.m != 1) throw UnsupportedExact("exact union measure needs (n, m) = (1, 1)");
  CircleIntervalUnion acc = CircleIntervalUnion::empty();
  for (long long s = Q0; s <= Q1; ++s) {
    for (long long q : {s, -s}) {
      acc = unite(acc, build_interval_set(arc_family(family.variant, family.target, q, family.psi(s))));
    }
  }
  return acc.measure();
}

struct DichotomyRow {
  TailEstimate estimate;
  Rational tail_bound{0};
  std::optional<double> floor;  // calibrated lower threshold, when known
};

struct DichotomyReport {
  std::vector<DichotomyRow> rows;
  std::string diagnosis;
};

/// Runs every window of `schedule` with the same seed. Diagnosis:
/// "convergence" when every estimate sits under its tail bound (plus 3 stderr)
/// and the last estimate is below the first by more than 3 combined stderr;
/// "divergence" when there is no such decrease and every estimate reaches the
/// floor (1/2 when no floor is given); otherwise "inconclusive".
inline DichotomyReport dichotomy_experiment(const TailFamily& family,
                                            const std::vector<std::pair<long long, long long>>& schedule,
                                            std::uint64_t samples, std::uint64_t seed,
                                            std::optional<double> floor = std::nullopt) {
  if (schedule.empty()) throw std::invalid_argument("schedule is empty");
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (schedule[i].first <= schedule[i - 1].first) throw std::invalid_argument("schedule must increase in Q0");
  }
  DichotomyReport out;
  bool under_bounds = true, all_high = true;
  const double threshold = floor.value_or(0.5);
  for (const auto& [Q0, Q1] : schedule) {
    DichotomyRow row{tail_union_estimate(family, Q0, Q1, samples, seed), tail_bound(family, Q0, Q1), floor};
    if (row.estimate.estimate > row.tail_bound.get_d() + 3.0 * row.estimate.stderr_) under_bounds = false;
    if (row.estimate.estimate < threshold) all_high = false;
    out.rows.push_back(std::move(row));
  }
  const TailEstimate& first = out.rows.front().estimate;
  const TailEstimate& last = out.rows.back().estimate;
  const bool decreasing = last.estimate < first.estimate - 3.0 * (first.stderr_ + last.stderr_);
  if (under_bounds && decreasing) {
    out.diagnosis = "convergence";
  } else if (!decreasing && all_high) {
    out.diagnosis = "divergence";
  } else {
    out.diagnosis = "inconclusive";
  }
  return out;
}

/// Monte Carlo estimate of |A ∩ B| for two sets of the same shape.
inline TailEstimate intersection_estimate(const SetSpec& a, const SetSpec& b, std::uint64_t samples,
                                          std::uint64_t seed) {
  a.validate();
  b.validate();
  if (a.n != b.n || a.m != b.m) throw std::invalid_argument("intersection estimate needs equal shapes");
  if (samples < kMinTailSamples) throw std::invalid_argument("estimates need at least 1000 samples");
  const CounterRng rng(seed);
  const std::size_t dims = static_cast<std::size_t>(a.n * a.m);
  TailEstimate out{0, 0, samples, 0, 0.0, 0.0, seed, 0};
  PointMatrix<double> x{a.n, a.m, std::vector<double>(dims)};
  auto inside = [&](const SetSpec& spec) {
    const FloatMembership fast = membership(x, spec);
    if (!fast.boundary) return fast.member;
    ++out.exact_rechecks;
    PointMatrix<Rational> exact{x.n, x.m, {}};
    for (double v : x.entries) exact.entries.emplace_back(mpq_class(v));
    return membership(exact, spec).member;
  };
  for (std::uint64_t i = 0; i < samples; ++i) {
    for (std::size_t k = 0; k < dims; ++k) x.entries[k] = rng.uniform(k, i);
    if (inside(a) && inside(b)) ++out.hits;
  }
  out.estimate = static_cast<double>(out.hits) / static_cast<double>(samples);
  out.stderr_ = detail::standard_error(out.estimate, samples);
  return out;
}

struct ChungErdosFloor {
  Rational value{0};
  bool degenerate = false;
};

/// S1^2 / S2 from a QIA report; degenerate when S1 = 0.
inline ChungErdosFloor chung_erdos_floor(const QiaReport& report) {
  if (report.S1 == 0) return {Rational(0), true};
  if (report.S2() == 0) throw std::domain_error("Chung-Erdos floor needs S2 > 0");
  return {report.S1 * report.S1 / report.S2(), false};
}

// ---------------------------------------------------------------------------
// Invariance of the approximable set under T_l, l = b + 1, for y = a / b

struct InvarianceResult {
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;
  std::uint64_t draws = 0;  // points tried, including rejected ones
};

namespace detail {

/// Common denominator form y = a / b of a rational target.
inline std::pair<IntVector, long long> common_denominator(const TargetScheme& target) {
  if (target.kind == TargetScheme::Kind::fixed_pair) return {target.a, target.b};
  if (target.kind != TargetScheme::Kind::fixed_rational) throw std::invalid_argument("invariance needs a rational target");
  Integer b(1);
  for (const auto& v : target.y) mpz_lcm(b.get_mpz_t(), b.get_mpz_t(), v.get_den_mpz_t());
  IntVector a;
  for (const auto& v : target.y) a.push_back(to_ll(v.get_num() * (b / v.get_den())));
  return {a, to_ll(b)};
}

}  // namespace detail

/// Draws x on the 2^-20 grid of [0,1)^{nm} and integer vectors q with
/// 1 <= |q| <= q_bound until |qx - p - y| < k Psi(q); each accepted pair is
/// pushed through T_l with p' = l p + a - q floor(l x) and the image
/// inequality |q T_l(x) - p' - y| < k l Psi(q) is checked exactly.
inline InvarianceResult zero_one_invariance_sample(const TargetScheme& target, int n,
                                                   const MultivariateApprox& Psi, std::uint64_t samples,
                                                   std::uint64_t seed, long long k, long long q_bound = 16) {
  if (n < 1 || k < 1 || q_bound < 1) throw std::invalid_argument("invariance sampling needs n, k, q_bound >= 1");
  const auto [a, b] = detail::common_denominator(target);
  const int m = static_cast<int>(a.size());
  const long long l = b + 1;
  std::vector<Rational> y;
  for (long long ai : a) y.push_back(make_rational(ai, b));
  const CounterRng rng(seed);
  constexpr long long kGrid = 1LL << 20;
  constexpr std::uint64_t kMaxDraws = 1000;
  InvarianceResult out;
  std::uint64_t counter = 0;
  PointMatrix<Rational> x{n, m, std::vector<Rational>(static_cast<std::size_t>(n * m))};
  IntVector q(static_cast<std::size_t>(n));
  for (std::uint64_t sample = 0; sample < samples; ++sample) {
    bool accepted = false;
    IntVector p(static_cast<std::size_t>(m));
    Rational bound(0);
    for (std::uint64_t attempt = 0; attempt < kMaxDraws && !accepted; ++attempt, ++counter) {
      ++out.draws;
      int pivot = -1;
      for (int i = 0; i < n; ++i) {
        q[static_cast<std::size_t>(i)] = static_cast<long long>(rng.below(1, counter * 8 + static_cast<std::uint64_t>(i), 2 * q_bound + 1)) - q_bound;
        if (pivot < 0 && q[static_cast<std::size_t>(i)] != 0) pivot = i;
      }
      if (pivot < 0) continue;
      bound = Rational(k) * Psi(q);
      if (bound <= 0) continue;
      accepted = true;
      // Free rows are uniform on the grid; the pivot row is solved so that
      // q.x - p - y equals a grid error strictly inside (-bound, bound).
      const long long qp = q[static_cast<std::size_t>(pivot)];
      for (int j = 0; j < m; ++j) {
        Rational t = y[static_cast<std::size_t>(j)];
        for (int i = 0; i < n; ++i) {
          if (i == pivot) continue;
          auto& v = x(i, j);
          v = make_rational(static_cast<long long>(rng.below(0, counter * 64 + static_cast<std::uint64_t>(i * m + j), kGrid)), kGrid);
          t -= Rational(q[static_cast<std::size_t>(i)]) * v;
        }
        const long long u = static_cast<long long>(rng.below(2, counter * 8 + static_cast<std::uint64_t>(j), kGrid));
        const Rational err = bound * (Rational(2 * u + 1, 2 * kGrid) * 2 - 1);
        const long long shift = static_cast<long long>(rng.below(3, counter * 8 + static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(qp < 0 ? -qp : qp)));
        Rational xv = (t + err + Rational(shift)) / Rational(qp);
        xv -= Rational(floor_of(xv));
        x(pivot, j) = xv;
        Rational v = -y[static_cast<std::size_t>(j)] - err;
        for (int i = 0; i < n; ++i) v += Rational(q[static_cast<std::size_t>(i)]) * x(i, j);
        p[static_cast<std::size_t>(j)] = to_ll(floor_of(v));
      }
    }
    if (!accepted) break;  // Psi vanishes on every sampled q
    ++out.samples;
    bool ok = true;
    for (int j = 0; j < m; ++j) {
      Rational image_err = -y[static_cast<std::size_t>(j)];
      Integer p_image = to_integer(l) * to_integer(p[static_cast<std::size_t>(j)]) + to_integer(a[static_cast<std::size_t>(j)]);
      for (int i = 0; i < n; ++i) {
        const Rational lx = Rational(l) * x(i, j);
        const Integer fl = floor_of(lx);
        image_err += Rational(q[static_cast<std::size_t>(i)]) * (lx - Rational(fl));
        p_image -= to_integer(q[static_cast<std::size_t>(i)]) * fl;
      }
      image_err -= Rational(p_image);
      if (!(abs_of(image_err) < Rational(l) * bound)) ok = false;
    }
    if (!ok) ++out.violations;
  }
  return out;
}

}  // namespace kglab
