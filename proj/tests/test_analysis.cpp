#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "kglab/analysis.hpp"

using namespace kglab;

namespace {

const TargetScheme kZero = TargetScheme::rational(Rational(0));

Rational oracle_set_measure(Variant v, const TargetScheme& t, long long d, const Rational& delta) {
  return build_interval_set(arc_family(v, t, d, delta)).measure();
}

// Brute-force S1 and S2 over every ordered pair of vectors with norm <= Q,
// using interval sweeps for parallel pairs and plain products otherwise.
std::pair<Rational, Rational> brute_qia(const ApproxFunction& psi, Variant v, const TargetScheme& t, long long Q) {
  std::vector<IntVector> vs;
  for (long long s = 1; s <= Q; ++s) {
    for (auto& q : enumerate_vectors(s, 2)) vs.push_back(q);
  }
  Rational S1(0), S2(0);
  for (const auto& q : vs) {
    const long long d = gcd_vec(q);
    S1 += oracle_set_measure(v, t, d, psi(sup_norm(q)));
    for (const auto& r : vs) {
      const Rational dq = psi(sup_norm(q)), dr = psi(sup_norm(r));
      if (q[0] * r[1] == q[1] * r[0]) {
        const auto kq = reduce_to_primitive(q), kr = reduce_to_primitive(r);
        const long long e = kq.k == kr.k ? kr.d : -kr.d;
        S2 += intersect(build_interval_set(arc_family(v, t, kq.d, dq)), build_interval_set(arc_family(v, t, e, dr)))
                  .measure();
      } else {
        S2 += Rational(4) * dq * dr;
      }
    }
  }
  return {S1, S2};
}

}  // namespace

TEST(Analysis, ClosedFormExamples) {
  EXPECT_EQ(closed_form_measure(1, 12, make_rational(1, 10), 1), make_rational(1, 15));
  EXPECT_EQ(closed_form_measure(1, 12, make_rational(1, 10), 2), make_rational(2, 15));
  EXPECT_EQ(closed_form_measure(1, 12, Rational(0), 1), Rational(0));
  EXPECT_EQ(oracle_set_measure(Variant::coprime, kZero, 12, make_rational(1, 10)), make_rational(1, 15));
  EXPECT_EQ(oracle_set_measure(Variant::fixed_pair, TargetScheme::pair({1}, 2), 12, make_rational(1, 10)),
            make_rational(2, 15));
  EXPECT_THROW(closed_form_measure(1, 12, make_rational(1, 2), 1), std::invalid_argument);
}

TEST(Analysis, ClosedFormHigherDimensionAndVectorForm) {
  // m = 2: (2 delta)^2 (1 - 1/4)(1 - 1/9)
  EXPECT_EQ(closed_form_measure(2, 6, make_rational(1, 10), 1), make_rational(1, 25) * make_rational(3, 4) * make_rational(8, 9));
  const IntVector q{12, -18};
  EXPECT_EQ(closed_form_measure(1, q, make_rational(1, 10), 1), closed_form_measure(1, 6, make_rational(1, 10), 1));
}

TEST(Analysis, ClosedFormMatchesIntervalOracleGrid) {
  for (const auto& y : {make_rational(1, 3), make_rational(5, 12)}) {
    for (long long d = -60; d <= 60; ++d) {
      if (d == 0) continue;
      const auto p = dirichlet_pair(y, d);
      EXPECT_EQ(closed_form_measure(1, d, make_rational(1, 7), p.b),
                oracle_set_measure(Variant::tilde, TargetScheme::rational(y), d, make_rational(1, 7)))
          << d;
    }
  }
}

TEST(Analysis, PartialSums) {
  const auto inv_sq = ApproxFunction::table({make_rational(1, 4), make_rational(1, 16), make_rational(1, 36)});
  // psi = 1/(4 q^2): q psi(q) sums to (1 + 1/2 + 1/3) / 4
  EXPECT_EQ(partial_sum_psi(inv_sq, 2, 1, 3), make_rational(11, 24));
  EXPECT_EQ(partial_sum_psi(ApproxFunction::zero(10), 2, 1, 10), Rational(0));
  EXPECT_EQ(partial_sum_psi(ApproxFunction::power(make_rational(1, 4), Rational(1), 10), 2, 1, 10), make_rational(5, 2));
  EXPECT_THROW(partial_sum_psi(ApproxFunction::zero(10), 2, 1, 11), std::invalid_argument);
}

TEST(Analysis, SumSetMeasures) {
  const auto psi = ApproxFunction::power(make_rational(1, 4), Rational(1), 10);
  EXPECT_EQ(sum_set_measures(psi, Variant::coprime, kZero, 2).total, Rational(7));
  EXPECT_EQ(sum_set_measures(psi, Variant::plain, kZero, 1).total, Rational(4));
  EXPECT_EQ(sum_set_measures(ApproxFunction::zero(5), Variant::plain, kZero, 5).total, Rational(0));
  const auto s = sum_set_measures(psi, Variant::plain, kZero, 10);
  EXPECT_EQ(s.total, s.plain_total);
}

TEST(Analysis, SumSetMeasuresMatchesEnumeration) {
  const auto psi = ApproxFunction::power(make_rational(1, 4), Rational(1), 20);
  const TargetScheme t = TargetScheme::rational(make_rational(2, 7));
  Rational brute(0);
  for (long long s = 1; s <= 12; ++s) {
    for (const auto& q : enumerate_vectors(s, 2)) brute += oracle_set_measure(Variant::tilde, t, gcd_vec(q), psi(s));
  }
  EXPECT_EQ(sum_set_measures(psi, Variant::tilde, t, 12).total, brute);
}

TEST(Analysis, ComparabilityStaysInBand) {
  const auto psi = ApproxFunction::power(make_rational(1, 4), Rational(1), 800).capped();
  const TargetScheme t = TargetScheme::rational(make_rational(1, 3));
  for (long long Q : {50, 100, 200, 400, 800}) {
    const auto s = sum_set_measures(psi, Variant::tilde, t, Q);
    const double ratio = (s.total / s.plain_total).get_d();
    // |set_q| / |A_q| is a product over primes of (1 - 1/p), bounded below by
    // phi(d)/d; the average over shells stays well inside (0, 1]
    EXPECT_GT(ratio, 0.5);
    EXPECT_LE(ratio, 1.0);
  }
}

TEST(Analysis, PairwiseExamples) {
  const auto psi = ApproxFunction::table({make_rational(1, 4), make_rational(1, 16), make_rational(1, 12),
                                          make_rational(1, 16)});
  const IntVector q{2, 0}, r{0, 2};
  const auto np = pairwise_intersection_measure(q, r, psi, Variant::plain, kZero);
  EXPECT_EQ(np.value, make_rational(1, 64));
  EXPECT_FALSE(np.parallel);
  EXPECT_TRUE(np.exact);

  const IntVector a{4, 4}, b{2, 2};
  const auto par = pairwise_intersection_measure(a, b, psi, Variant::tilde, TargetScheme::rational(make_rational(1, 3)));
  EXPECT_TRUE(par.parallel);
  const TargetScheme t = TargetScheme::rational(make_rational(1, 3));
  EXPECT_EQ(par.value, intersect(build_interval_set(arc_family(Variant::tilde, t, 4, psi(4))),
                                 build_interval_set(arc_family(Variant::tilde, t, 2, psi(2))))
                           .measure());

  const IntVector c{3, -3};
  EXPECT_EQ(pairwise_intersection_measure(c, c, psi, Variant::tilde, t).value,
            closed_form_measure(1, 3, psi(3), dirichlet_pair(t.scalar(), 3).b));
  const auto tilde_np = pairwise_intersection_measure(q, r, psi, Variant::tilde, t);
  EXPECT_FALSE(tilde_np.exact);
}

TEST(Analysis, PairwiseSpecOverloadRejectsMixedVariants) {
  const TargetScheme t = TargetScheme::rational(make_rational(1, 3));
  const SetSpec a{2, 1, Variant::tilde, {2, 2}, make_rational(1, 8), t};
  const SetSpec b{2, 1, Variant::plain, {1, 1}, make_rational(1, 8), t};
  EXPECT_THROW(pairwise_intersection_measure(a, b), std::invalid_argument);
  const SetSpec c{2, 1, Variant::tilde, {-1, -1}, make_rational(1, 8), t};
  const auto res = pairwise_intersection_measure(a, c);
  EXPECT_TRUE(res.parallel);
  EXPECT_EQ(res.value, intersect(build_interval_set(arc_family(Variant::tilde, t, 2, make_rational(1, 8))),
                                 build_interval_set(arc_family(Variant::tilde, t, -1, make_rational(1, 8))))
                           .measure());
}

TEST(Analysis, FastKernelMatchesIntervalSweep) {
  std::mt19937_64 rng(21);
  const Variant variants[] = {Variant::plain, Variant::coprime, Variant::tilde, Variant::fixed_pair};
  for (int it = 0; it < 2000; ++it) {
    long long d = static_cast<long long>(rng() % 50) + 1, e = static_cast<long long>(rng() % 50) + 1;
    if (rng() & 1) d = -d;
    if (rng() & 1) e = -e;
    const Variant v = variants[it % 4];
    const TargetScheme t = v == Variant::fixed_pair ? TargetScheme::pair({2}, 7)
                                                    : TargetScheme::rational(make_rational(static_cast<long long>(rng() % 89), 89));
    const Rational d1 = make_rational(static_cast<long long>(rng() % 60) + 1, 130);
    const Rational d2 = make_rational(static_cast<long long>(rng() % 60) + 1, 130);
    const auto f = arc_family(v, t, d, d1), g = arc_family(v, t, e, d2);
    EXPECT_EQ(intersection_measure(f, g),
              intersect(build_interval_set(f), build_interval_set(g)).measure());
  }
}

TEST(Analysis, DisjointnessExamples) {
  const auto psi = ApproxFunction::power(Rational(1), Rational(1), 200, 3);
  const auto ok = disjointness_check(6, 3, 150, 100, psi, make_rational(1, 7));
  EXPECT_TRUE(ok.hypotheses_hold);
  EXPECT_EQ(ok.measure, Rational(0));
  const auto near = disjointness_check(6, 3, 150, 50, psi, make_rational(1, 7));
  EXPECT_FALSE(near.hypotheses_hold);
  ASSERT_EQ(near.violations.size(), 1u);
  EXPECT_EQ(near.violations[0], "r >= 2 d^2");
}

TEST(Analysis, DisjointnessOracleGrid) {
  const auto psi = ApproxFunction::power(Rational(1), Rational(1), 400, 3);
  for (long long d : {6LL, -9LL, 12LL}) {
    for (long long e = 1; e < std::llabs(d); ++e) {
      if (std::gcd(std::llabs(d), e) < 3) continue;
      for (long long r = 2 * d * d; r <= 2 * d * d + 10; ++r) {
        const Rational y = make_rational(2, 7);
        const auto got = disjointness_check(d, e, r + 3, r, psi, y);
        // independent sweep of the tilde set against the plain set
        const TargetScheme t = TargetScheme::rational(y);
        const auto oracle = intersect(build_interval_set(arc_family(Variant::tilde, t, d, psi(r + 3))),
                                      build_interval_set(arc_family(Variant::plain, t, e, psi(r))));
        EXPECT_EQ(got.measure, oracle.measure());
        EXPECT_EQ(got.measure, Rational(0));
      }
    }
  }
}

TEST(Analysis, BasicBoundAuditExamples) {
  const auto a = basic_bound_audit(2, 1, make_rational(2, 5), make_rational(2, 5), kZero);
  EXPECT_EQ(a.lhs, make_rational(1, 5));
  EXPECT_EQ(a.rhs, make_rational(9, 25));
  EXPECT_EQ(basic_bound_audit(5, 3, Rational(0), make_rational(1, 4), kZero).lhs, Rational(0));
  const auto diag = basic_bound_audit(7, 7, make_rational(1, 5), make_rational(1, 5), kZero);
  EXPECT_EQ(diag.lhs, closed_form_measure(1, 7, make_rational(1, 5), 1));
}

TEST(Analysis, StepAudits) {
  const auto psi = ApproxFunction::power(make_rational(1, 4), Rational(1), 400).capped();
  const auto one = step_bounds_audit(1, psi);
  EXPECT_EQ(one.step2_lhs, Rational(0));
  EXPECT_EQ(one.step3_lhs, Rational(0));
  EXPECT_EQ(one.step2_rhs, make_rational(1, 4));
  for (long long p : {2LL, 3LL, 5LL, 7LL, 101LL, 397LL}) {
    const auto s = step_bounds_audit(p, psi);
    // d = p: 8 vectors, coprime e in 1..p-1 (both signs) gives 2(p-1)/p
    EXPECT_EQ(s.step3_lhs, psi(p) * Rational(8) * Rational(2 * (p - 1), p));
    EXPECT_LT(s.step3_divisor_form, s.step3_rhs);
  }
  const auto uncapped = ApproxFunction::table({make_rational(1, 3), make_rational(2, 5), make_rational(2, 5)});
  EXPECT_THROW(step_bounds_audit(3, uncapped), std::invalid_argument);
}

TEST(Analysis, StepAuditMatchesBruteForce) {
  const auto psi = ApproxFunction::power(make_rational(1, 4), Rational(1), 60).capped();
  for (long long q = 1; q <= 60; ++q) {
    Rational s2(0), s3(0);
    for (long long d = 1; d <= q; ++d) {
      if (q % d) continue;
      const Rational w(count_vectors_with_gcd(q, d, 2));
      for (long long e = -(d - 1); e <= d - 1; ++e) {
        if (e == 0) continue;
        const long long g = std::gcd(d, std::llabs(e));
        if (std::llabs(e) * q < 2 * d * d * d) s2 += w * psi(q) * Rational(g, d);
        if (g <= 2) s3 += w * psi(q) * Rational(g, d);
      }
    }
    const auto a = step_bounds_audit(q, psi);
    EXPECT_EQ(a.step2_lhs, s2) << q;
    EXPECT_EQ(a.step3_lhs, s3) << q;
  }
}

TEST(Analysis, Gallagher) {
  EXPECT_EQ(gallagher_overlap_sum(make_rational(3, 4), make_rational(3, 4), 1), Rational(1));
  EXPECT_EQ(gallagher_overlap_sum(make_rational(3, 4), make_rational(3, 4), 2), Rational(4));
  EXPECT_EQ(gallagher_overlap_sum(make_rational(1, 3), make_rational(1, 2), 2), Rational(0));
  EXPECT_EQ(gallagher_overlap_sum(make_rational(1, 2), make_rational(1, 2), 3), Rational(0));
  EXPECT_THROW(gallagher_overlap_sum(Rational(-1), Rational(1), 1), std::invalid_argument);
}

TEST(Analysis, GallagherMatchesDirectLatticeSum) {
  for (long long i = 1; i <= 12; ++i) {
    for (long long j = 1; j <= 12; ++j) {
      const Rational a = make_rational(i, 6), b = make_rational(j, 6);
      auto overlap = [&](long long k) {
        const Rational lo = std::max(-a, Rational(k) - b), hi = std::min(a, Rational(k) + b);
        return hi > lo ? hi - lo : Rational(0);
      };
      Rational direct(0);
      for (long long x = -5; x <= 5; ++x) {
        for (long long y = -5; y <= 5; ++y) {
          if (x == 0 && y == 0) continue;
          direct += overlap(x) * overlap(y);
        }
      }
      EXPECT_EQ(gallagher_overlap_sum(a, b, 2), direct);
    }
  }
}

TEST(Analysis, RationalPairAudit) {
  const TargetScheme t = TargetScheme::pair({1}, 3);
  const auto a = rational_pair_audit(5, 2, make_rational(1, 8), make_rational(1, 8), t);
  EXPECT_EQ(a.rhs, make_rational(3, 64));
  EXPECT_EQ(a.lhs, intersect(build_interval_set(arc_family(Variant::fixed_pair, t, 5, make_rational(1, 8))),
                             build_interval_set(arc_family(Variant::fixed_pair, t, 2, make_rational(1, 8))))
                       .measure());
  EXPECT_EQ(rational_pair_audit(5, 2, Rational(0), make_rational(1, 8), t).lhs, Rational(0));
  EXPECT_EQ(rational_pair_audit(7, 5, make_rational(1, 1000), make_rational(1, 1000), t).lhs, Rational(0));
  EXPECT_THROW(rational_pair_audit(3, 3, make_rational(1, 8), make_rational(1, 8), t), std::invalid_argument);
  EXPECT_THROW(rational_pair_audit(5, 2, make_rational(1, 8), make_rational(1, 8), kZero), std::invalid_argument);
}

TEST(Analysis, LocalDensity) {
  const auto hand = local_density_check(12, make_rational(1, 10), Ball{make_rational(1, 4), make_rational(1, 4)},
                                        Variant::tilde, kZero);
  EXPECT_EQ(hand.lhs, make_rational(1, 30));
  EXPECT_EQ(hand.rhs, make_rational(1, 120));
  EXPECT_TRUE(hand.holds());
  EXPECT_TRUE(hand.threshold_ok);
  const auto full = local_density_check(12, make_rational(1, 10), CircleIntervalUnion::full(), Variant::tilde, kZero);
  EXPECT_EQ(full.lhs, make_rational(1, 15));
  const auto none = local_density_check(12, make_rational(1, 10), CircleIntervalUnion::empty(), Variant::tilde, kZero);
  EXPECT_EQ(none.lhs, Rational(0));
  EXPECT_EQ(none.rhs, Rational(0));
  // small modulus above 1/radius can still miss the window entirely
  const auto miss = local_density_check(6, make_rational(1, 10), Ball{make_rational(1, 2), make_rational(1, 4)},
                                        Variant::tilde, kZero);
  EXPECT_TRUE(miss.threshold_ok);
  EXPECT_EQ(miss.lhs, Rational(0));
  EXPECT_FALSE(miss.holds());
}

TEST(Analysis, QiaHandValue) {
  const auto psi = ApproxFunction::power(make_rational(1, 4), Rational(1), 1);
  const auto r = qia_ratio(psi, Variant::coprime, kZero, 1);
  EXPECT_EQ(r.S1, Rational(4));
  EXPECT_EQ(r.S2_parallel, Rational(8));
  EXPECT_EQ(r.S2_nonparallel, Rational(12));
  EXPECT_EQ(r.ratio, make_rational(4, 5));
  EXPECT_FALSE(r.degenerate);
}

TEST(Analysis, QiaDegenerateAndErrors) {
  const auto r = qia_ratio(ApproxFunction::zero(5), Variant::plain, kZero, 5);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.S1, Rational(0));
  const auto psi = ApproxFunction::power(make_rational(1, 4), Rational(1), 10);
  EXPECT_THROW(qia_ratio(psi, Variant::plain, kZero, 11), std::invalid_argument);
  const auto wide = ApproxFunction::table({make_rational(1, 4), make_rational(2, 5), make_rational(2, 5)});
  EXPECT_THROW(qia_ratio(wide, Variant::tilde, kZero, 3), std::invalid_argument);
}

TEST(Analysis, QiaMatchesBruteForcePairs) {
  const auto psi = ApproxFunction::power(make_rational(1, 4), Rational(1), 10).capped();
  for (const auto& [v, t] : std::vector<std::pair<Variant, TargetScheme>>{
           {Variant::plain, TargetScheme::rational(make_rational(1, 3))},
           {Variant::coprime, TargetScheme::rational(make_rational(2, 7))},
           {Variant::tilde, TargetScheme::rational(make_rational(5, 12))},
           {Variant::fixed_pair, TargetScheme::pair({1}, 3)}}) {
    for (long long Q = 1; Q <= 5; ++Q) {
      const auto [S1, S2] = brute_qia(psi, v, t, Q);
      const auto r = qia_ratio(psi, v, t, Q);
      EXPECT_EQ(r.S1, S1) << to_string(v) << " Q=" << Q;
      EXPECT_EQ(r.S2(), S2) << to_string(v) << " Q=" << Q;
    }
  }
}

TEST(Analysis, QiaSeriesAgreesWithSingleCutoffs) {
  const auto psi = ApproxFunction::power(make_rational(1, 4), Rational(1), 40).capped();
  const TargetScheme t = TargetScheme::rational(make_rational(1, 3));
  const auto series = qia_series(psi, Variant::tilde, t, {40, 10, 20});
  ASSERT_EQ(series.size(), 3u);
  for (const auto& rep : series) {
    const auto single = qia_ratio(psi, Variant::tilde, t, rep.Q);
    EXPECT_EQ(rep.S1, single.S1);
    EXPECT_EQ(rep.S2_parallel, single.S2_parallel);
    EXPECT_EQ(rep.ratio, single.ratio);
    EXPECT_GT(rep.ratio, Rational(0));
    EXPECT_LE(rep.ratio, Rational(1));
  }
}

TEST(Analysis, QiaParallelBlockCoversDiagonal) {
  const auto psi = ApproxFunction::power(make_rational(1, 4), Rational(1), 30).capped();
  const TargetScheme t = TargetScheme::rational(make_rational(2, 7));
  const auto r = qia_ratio(psi, Variant::tilde, t, 30);
  EXPECT_GE(r.S2_parallel, r.S1);
}

TEST(Analysis, QiaIsThreadCountInvariant) {
  const auto psi = ApproxFunction::power(make_rational(1, 4), Rational(1), 60).capped();
  const TargetScheme t = TargetScheme::rational(make_rational(1, 3));
  set_worker_threads(1);
  const auto a = qia_ratio(psi, Variant::tilde, t, 60);
  set_worker_threads(4);
  const auto b = qia_ratio(psi, Variant::tilde, t, 60);
  set_worker_threads(0);
  EXPECT_EQ(a.ratio, b.ratio);
  EXPECT_EQ(a.S2_parallel, b.S2_parallel);
}
