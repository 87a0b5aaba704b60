#include <gtest/gtest.h>

#include <map>
#include <numeric>
#include <random>
#include <set>

#include "kglab/arith.hpp"

using namespace kglab;

namespace {

// Independent oracles by exhaustive trial division and counting.
std::uint64_t brute_totient(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t k = 1; k <= n; ++k) c += std::gcd(k, n) == 1;
  return c;
}

int brute_mobius(std::uint64_t n) {
  int sign = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    sign = -sign;
  }
  return n > 1 ? -sign : sign;
}

std::vector<std::uint64_t> brute_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 1; d <= n; ++d) {
    if (n % d == 0) out.push_back(d);
  }
  return out;
}

}  // namespace

TEST(Arith, TotientMatchesCounting) {
  for (std::uint64_t n = 1; n <= 500; ++n) EXPECT_EQ(totient(n), brute_totient(n)) << n;
}

TEST(Arith, MobiusMatchesTrialDivision) {
  for (std::uint64_t n = 1; n <= 2000; ++n) EXPECT_EQ(mobius(n), brute_mobius(n)) << n;
}

TEST(Arith, MobiusSumsToIndicatorOfOne) {
  for (std::uint64_t n = 1; n <= 300; ++n) {
    int s = 0;
    for (auto d : divisors(n)) s += mobius(d);
    EXPECT_EQ(s, n == 1 ? 1 : 0) << n;
  }
}

TEST(Arith, DivisorFunctions) {
  for (std::uint64_t n = 1; n <= 400; ++n) {
    const auto ds = brute_divisors(n);
    EXPECT_EQ(divisors(n), ds);
    EXPECT_EQ(divisor_count(n), ds.size());
    EXPECT_EQ(divisor_sum(n), std::accumulate(ds.begin(), ds.end(), std::uint64_t{0}));
  }
  EXPECT_EQ(divisor_count(360), 24u);
  EXPECT_EQ(divisor_sum(360), 1170u);
}

TEST(Arith, GaussTotientIdentity) {
  for (std::uint64_t n = 1; n <= 300; ++n) {
    std::uint64_t s = 0;
    for (auto d : divisors(n)) s += totient(d);
    EXPECT_EQ(s, n);
  }
}

TEST(Arith, FactorizeLargeSemiprimes) {
  const std::uint64_t p = 1000000007ULL, q = 998244353ULL;
  const auto f = factorize(p * q);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0].prime, q);
  EXPECT_EQ(f[1].prime, p);
  const auto g = factorize(1ULL << 40);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0].exponent, 40);
  EXPECT_TRUE(factorize(1).empty());
  EXPECT_THROW(factorize(0), std::invalid_argument);
}

TEST(Arith, FactorizeRoundTrip) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t n = rng() % (1ULL << 50) + 1;
    std::uint64_t prod = 1;
    for (const auto& pp : factorize(n)) {
      EXPECT_TRUE(detail::is_prime_u64(pp.prime));
      for (int k = 0; k < pp.exponent; ++k) prod *= pp.prime;
    }
    EXPECT_EQ(prod, n);
  }
}

TEST(Arith, GcdVecAndSupNorm) {
  const IntVector v{12, -18, 30};
  EXPECT_EQ(gcd_vec(v), 6);
  EXPECT_EQ(sup_norm(v), 30);
  const IntVector z{0, 0};
  EXPECT_THROW(gcd_vec(z), std::invalid_argument);
  const IntVector w{0, -7};
  EXPECT_EQ(gcd_vec(w), 7);
}

TEST(Arith, EnumerateVectorsShells) {
  for (long long s = 1; s <= 30; ++s) {
    const auto vs = enumerate_vectors(s, 2);
    EXPECT_EQ(vs.size(), static_cast<std::size_t>(8 * s));
    std::set<IntVector> unique(vs.begin(), vs.end());
    EXPECT_EQ(unique.size(), vs.size());
    for (const auto& v : vs) EXPECT_EQ(sup_norm(v), s);
  }
  EXPECT_EQ(enumerate_vectors(4, 1), (std::vector<IntVector>{{4}, {-4}}));
  EXPECT_THROW(enumerate_vectors(2, 3), UnsupportedDimension);
}

TEST(Arith, CountVectorsWithGcdMatchesEnumeration) {
  for (long long s = 1; s <= 120; ++s) {
    std::map<long long, std::uint64_t> by_gcd;
    for (long long a = -s; a <= s; ++a) {
      for (long long b = -s; b <= s; ++b) {
        if (std::max(std::llabs(a), std::llabs(b)) != s) continue;
        ++by_gcd[std::gcd(std::llabs(a), std::llabs(b))];
      }
    }
    std::uint64_t total = 0;
    for (auto d : divisors(static_cast<std::uint64_t>(s))) {
      const auto dd = static_cast<long long>(d);
      EXPECT_EQ(count_vectors_with_gcd(s, dd, 2), by_gcd[dd]) << s << " " << d;
      total += count_vectors_with_gcd(s, dd, 2);
    }
    EXPECT_EQ(total, static_cast<std::uint64_t>(8 * s));
    EXPECT_EQ(count_vectors(s, 2), static_cast<std::uint64_t>(8 * s));
  }
  EXPECT_EQ(count_vectors_with_gcd(12, 5, 2), 0u);
  EXPECT_EQ(count_vectors(7, 1), 2u);
}
