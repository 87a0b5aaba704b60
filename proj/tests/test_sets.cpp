#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "kglab/sets.hpp"

using namespace kglab;

namespace {

// Direct oracle for m = 1, n = 1: x is in the set iff some integer p with
// |d x - p - y| < delta passes the gcd filter. Scans every p near d x.
bool oracle_member(long long d, const Rational& x, const Rational& y, const Rational& delta, long long a, long long b,
                   bool filtered) {
  const Rational v = Rational(d) * x - y;
  const long long centre = to_ll(floor_of(v));
  for (long long p = centre - 2; p <= centre + 2; ++p) {
    if (!(abs_of(v - Rational(p)) < delta)) continue;
    if (!filtered || std::gcd(std::llabs(d), std::llabs(b * p + a)) == 1) return true;
  }
  return false;
}

}  // namespace

TEST(Sets, PlainSetMeasureIsTwoDelta) {
  for (long long d : {1LL, 2LL, 7LL, -12LL, 60LL}) {
    const auto u = build_interval_set(arc_family(Variant::plain, TargetScheme::rational(make_rational(1, 3)), d,
                                                 make_rational(1, 7)));
    EXPECT_EQ(u.measure(), make_rational(2, 7));
  }
}

TEST(Sets, IntervalSetAgreesWithPointOracle) {
  std::mt19937_64 rng(3);
  const Rational y = make_rational(2, 7);
  for (int it = 0; it < 60; ++it) {
    const long long d = static_cast<long long>(rng() % 30) + 1;
    const Rational delta = make_rational(static_cast<long long>(rng() % 40) + 1, 100);
    for (Variant v : {Variant::plain, Variant::coprime, Variant::tilde}) {
      const TargetScheme t = TargetScheme::rational(y);
      const auto u = build_interval_set(arc_family(v, t, d, delta));
      long long a = 0, b = 1;
      if (v == Variant::tilde) {
        const auto p = dirichlet_pair(y, d);
        a = p.a;
        b = p.b;
      }
      for (int k = 0; k < 40; ++k) {
        const Rational x = make_rational(static_cast<long long>(rng() % 10007), 10007);
        EXPECT_EQ(u.contains(x), oracle_member(d, x, y, delta, a, b, v != Variant::plain));
      }
    }
  }
}

TEST(Sets, ExactMembershipMatchesIntervalSet) {
  std::mt19937_64 rng(4);
  const TargetScheme t = TargetScheme::rational(make_rational(1, 3));
  for (int it = 0; it < 300; ++it) {
    const long long d = static_cast<long long>(rng() % 40) + 1;
    const SetSpec spec{1, 1, Variant::tilde, {d}, make_rational(1, 8), t};
    const Rational x = make_rational(static_cast<long long>(rng() % 9973), 9973);
    const PointMatrix<Rational> pt{1, 1, {x}};
    EXPECT_EQ(membership(pt, spec).member, build_interval_set(spec, d).contains(x));
    EXPECT_EQ(membership_guarded(pt, spec), membership(pt, spec).member);
  }
}

TEST(Sets, TwoByOneMembershipWitness) {
  const SetSpec spec{2, 1, Variant::plain, {2, 3}, make_rational(1, 10), TargetScheme::rational(make_rational(1, 3))};
  const PointMatrix<Rational> pt{2, 1, {make_rational(1, 5), make_rational(1, 4)}};
  // 2/5 + 3/4 - 1/3 = 49/60, nearest integer 1, error 11/60 >= 1/10
  EXPECT_FALSE(membership(pt, spec).member);
  const PointMatrix<Rational> hit{2, 1, {make_rational(1, 6), make_rational(1, 3)}};
  // 1/3 + 1 - 1/3 = 1, error 0
  const auto r = membership(hit, spec);
  ASSERT_TRUE(r.member);
  EXPECT_EQ(r.witness->p, IntVector{1});
  EXPECT_EQ(r.witness->error, Rational(0));
}

TEST(Sets, BoundaryPointIsExcluded) {
  const SetSpec spec{1, 1, Variant::plain, {1}, make_rational(1, 4), TargetScheme::rational(Rational(0))};
  EXPECT_FALSE(membership(PointMatrix<Rational>{1, 1, {make_rational(1, 4)}}, spec).member);
  const auto f = membership(PointMatrix<double>{1, 1, {0.25}}, spec);
  EXPECT_TRUE(f.boundary);
  EXPECT_FALSE(membership_guarded(PointMatrix<Rational>{1, 1, {make_rational(1, 4)}}, spec));
}

TEST(Sets, ValidationErrors) {
  SetSpec bad{1, 1, Variant::plain, {0}, make_rational(1, 8), TargetScheme::rational(Rational(0))};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  SetSpec wide{1, 1, Variant::plain, {3}, make_rational(1, 2), TargetScheme::rational(Rational(0))};
  EXPECT_THROW(wide.validate(), std::invalid_argument);
  SetSpec pair{1, 1, Variant::fixed_pair, {3}, make_rational(1, 8), TargetScheme::rational(Rational(0))};
  EXPECT_THROW(pair.validate(), std::invalid_argument);
}

TEST(Sets, PrimitiveReductionAndTorusMap) {
  const IntVector q{-6, 4};
  const auto r = reduce_to_primitive(q);
  EXPECT_EQ(r.d, 2);
  EXPECT_EQ(r.k, (IntVector{-3, 2}));
  const PointMatrix<Rational> x{2, 1, {make_rational(1, 5), make_rational(2, 3)}};
  const auto img = torus_map_image<Rational>(r.k, x);
  EXPECT_EQ(img[0], frac_of(make_rational(-3, 5) + make_rational(4, 3)));
  EXPECT_THROW(torus_map_image<Rational>(q, x), std::invalid_argument);
}

TEST(Sets, TildeSetDependsOnlyOnGcd) {
  // |set_q| for q = d k equals the one-dimensional measure for d
  const TargetScheme t = TargetScheme::rational(make_rational(2, 7));
  std::mt19937_64 rng(8);
  const SetSpec spec{2, 1, Variant::tilde, {6, 9}, make_rational(1, 5), t};
  const auto u = build_interval_set(arc_family(Variant::tilde, t, 3, make_rational(1, 5)));
  int agree = 0, total = 0;
  for (int i = 0; i < 2000; ++i) {
    const Rational x1 = make_rational(static_cast<long long>(rng() % 1009), 1009);
    const Rational x2 = make_rational(static_cast<long long>(rng() % 1013), 1013);
    const bool in = membership(PointMatrix<Rational>{2, 1, {x1, x2}}, spec).member;
    // pushforward by T_k with k = (2, 3)
    const Rational image = frac_of(Rational(2) * x1 + Rational(3) * x2);
    agree += in == u.contains(image);
    ++total;
  }
  EXPECT_EQ(agree, total);
}
