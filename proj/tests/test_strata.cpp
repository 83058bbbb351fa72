#include <gtest/gtest.h>

#include <random>

#include "corridorlab/conditioning.hpp"
#include "corridorlab/constants.hpp"
#include "corridorlab/random.hpp"
#include "corridorlab/strata.hpp"

using namespace corridorlab;

namespace {

const Alphabet abc = Alphabet::standard(3);
Word W(const char* s) { return parse_word(s, abc); }
PositiveAutomorphism gersten() { return ensure_inverse(PositiveAutomorphism::create(abc, {W("a"), W("ab"), W("aac")})); }
PositiveAutomorphism exp_map() { return ensure_inverse(PositiveAutomorphism::create(abc, {W("aab"), W("ab"), W("abc")})); }

std::vector<int> L(std::initializer_list<int> xs) { return xs; }

// |phi^n(x)| for n = 0..N via letter counts.
std::vector<BigInt> lengths(const PositiveAutomorphism& phi, int x, std::size_t N) {
  const auto A = phi.transition_matrix();
  std::vector<BigInt> c(phi.rank());
  c[static_cast<std::size_t>(x)] = 1;
  std::vector<BigInt> out;
  for (std::size_t n = 0; n <= N; ++n) {
    BigInt s = 0;
    for (auto& v : c) s += v;
    out.push_back(s);
    c = push_counts(c, A);
  }
  return out;
}

std::vector<BigInt> diff(const std::vector<BigInt>& v) {
  std::vector<BigInt> d;
  for (std::size_t i = 1; i < v.size(); ++i) d.push_back(v[i] - v[i - 1]);
  return d;
}

// Growth from finite differences of exact lengths (tail n >= 10).
Growth numeric_growth(const PositiveAutomorphism& phi, int x) {
  auto v = lengths(phi, x, 40);
  v.erase(v.begin(), v.begin() + 10);
  if (phi.image(x) == Word{Letter(x)}) return {GrowthKind::Constant, 0};
  for (int d = 0; d <= static_cast<int>(phi.rank()); ++d) {
    auto next = diff(v);
    bool zero = std::all_of(next.begin(), next.end(), [](const BigInt& b) { return b == 0; });
    if (zero) return d == 0 ? Growth{GrowthKind::Periodic, 0} : Growth{GrowthKind::Polynomial, d};
    v = next;
  }
  return {GrowthKind::Exponential, 0};
}

// |Y_n|: length of the prefix of phi^n(x) before the preferred future of x,
// by Y_{n+1} = phi(Y_n) u on letter counts.
std::vector<BigInt> prefix_lengths(const PositiveAutomorphism& phi, int x, std::size_t N) {
  const auto A = phi.transition_matrix();
  const Word& img = phi.image(x);
  const std::size_t pref = preferred_occurrence(phi, x);
  std::vector<BigInt> u(phi.rank()), y(phi.rank());
  for (std::size_t i = 0; i < pref; ++i) u[static_cast<std::size_t>(img[i].index())] += 1;
  std::vector<BigInt> out;
  for (std::size_t n = 1; n <= N; ++n) {
    y = push_counts(y, A);
    for (std::size_t i = 0; i < u.size(); ++i) y[i] += u[i];
    BigInt len = 0;
    for (auto& v : y) len += v;
    out.push_back(len);
  }
  return out;
}

std::string images(const PositiveAutomorphism& phi) {
  std::string out;
  for (const auto& w : phi.images()) out += format_word(w, phi.alphabet()) + " ";
  return out;
}

}  // namespace

TEST(TransitionMatrix, Examples) {
  auto A = transition_matrix(gersten());
  IntMatrix G(3, 3);
  G(0, 0) = 1, G(1, 0) = 1, G(1, 1) = 1, G(2, 0) = 2, G(2, 2) = 1;
  EXPECT_EQ(A, G);
  auto I = transition_matrix(PositiveAutomorphism::identity(Alphabet::standard(2)));
  EXPECT_EQ(I(0, 0), 1);
  EXPECT_EQ(I(0, 1), 0);
  EXPECT_EQ(I(1, 1), 1);
  auto E = transition_matrix(exp_map());
  std::int64_t want[3][3] = {{2, 1, 0}, {1, 1, 0}, {1, 1, 1}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(E(i, j), want[i][j]);
}

TEST(Strata, ExponentialExample) {
  auto r = supports_and_strata(exp_map());
  EXPECT_EQ(r.stratum(0).letters, L({0, 1}));
  EXPECT_EQ(r.stratum(1).letters, L({0, 1}));
  EXPECT_EQ(r.stratum(0).kind, StratumKind::Exponential);
  EXPECT_EQ(r.stratum(2).letters, L({2}));
  EXPECT_EQ(r.stratum(2).kind, StratumKind::Parabolic);
  EXPECT_EQ(r.support[2], L({0, 1, 2}));
  EXPECT_EQ(r.pre[2], L({0, 1}));
}

TEST(Strata, Identity) {
  auto r = supports_and_strata(PositiveAutomorphism::identity(abc));
  for (int x = 0; x < 3; ++x) {
    EXPECT_EQ(r.support[static_cast<std::size_t>(x)], L({x}));
    EXPECT_EQ(r.stratum(x).letters, L({x}));
    EXPECT_EQ(r.stratum(x).kind, StratumKind::Parabolic);
  }
}

TEST(Strata, Gersten) {
  auto r = supports_and_strata(gersten());
  EXPECT_EQ(r.support[0], L({0}));
  EXPECT_EQ(r.support[1], L({0, 1}));
  EXPECT_EQ(r.support[2], L({0, 2}));
  EXPECT_EQ(r.strata.size(), 3u);
  for (const auto& s : r.strata) EXPECT_EQ(s.kind, StratumKind::Parabolic);
}

TEST(Strata, InvariantsOnRandomMaps) {
  std::mt19937_64 rng(3);
  int checked = 0;
  while (checked < 300) {
    auto rank = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
    auto phi = random_positive_automorphism(rng, rank, std::uniform_int_distribution<std::size_t>(0, 5)(rng));
    bool small = std::all_of(phi.images().begin(), phi.images().end(), [](const Word& w) { return w.size() <= 6; });
    if (!small) continue;
    ++checked;
    auto r = supports_and_strata(phi);
    std::vector<int> covered(rank, 0);
    for (std::size_t x = 0; x < rank; ++x) {
      ASSERT_TRUE(r.in_support(static_cast<int>(x), static_cast<int>(x)));
      for (int y : r.support[x])
        for (int z : r.support[static_cast<std::size_t>(y)]) ASSERT_TRUE(r.in_support(static_cast<int>(x), z));
      for (int y : r.stratum(static_cast<int>(x)).letters) {
        ASSERT_EQ(r.support[static_cast<std::size_t>(y)], r.support[x]);
        ASSERT_EQ(r.stratum_of[static_cast<std::size_t>(y)], r.stratum_of[x]);
      }
    }
    for (const auto& s : r.strata)
      for (int y : s.letters) ++covered[static_cast<std::size_t>(y)];
    for (int c : covered) ASSERT_EQ(c, 1);
  }
}

TEST(Growth, Examples) {
  auto g = classify_growth(gersten());
  EXPECT_EQ(g[0], (Growth{GrowthKind::Constant, 0}));
  EXPECT_EQ(g[1], (Growth{GrowthKind::Polynomial, 1}));
  EXPECT_EQ(g[2], (Growth{GrowthKind::Polynomial, 1}));
  for (auto& x : classify_growth(exp_map())) EXPECT_EQ(x.kind, GrowthKind::Exponential);
  for (auto& x : classify_growth(PositiveAutomorphism::identity(abc))) EXPECT_EQ(x.kind, GrowthKind::Constant);
  auto sw = classify_growth(PositiveAutomorphism::create(Alphabet::standard(2), {Word{Letter(1)}, Word{Letter(0)}}));
  EXPECT_EQ(sw[0].kind, GrowthKind::Periodic);
}

TEST(Growth, QuadraticLetter) {
  // a -> a, b -> ba, c -> cb : c grows quadratically
  auto phi = PositiveAutomorphism::create(abc, {W("a"), W("ba"), W("cb")});
  auto g = classify_growth(phi);
  EXPECT_EQ(g[2], (Growth{GrowthKind::Polynomial, 2}));
  EXPECT_EQ(numeric_growth(phi, 2), g[2]);
}

TEST(Growth, AgreesWithFiniteDifferencesOnConditionedMaps) {
  std::mt19937_64 rng(5);
  int checked = 0;
  while (checked < 200) {
    auto c = random_conditioned(rng, 4, 4);
    if (!c) continue;
    ++checked;
    auto g = classify_growth(c->phi0);
    for (std::size_t x = 0; x < c->phi0.rank(); ++x)
      ASSERT_EQ(g[x], numeric_growth(c->phi0, static_cast<int>(x)))
          << "letter " << x << " of " << images(c->phi0);
  }
}

TEST(Preferred, Examples) {
  auto G = gersten();
  EXPECT_EQ(preferred_occurrence(G, 1) + 1, 2u);
  EXPECT_EQ(preferred_occurrence(G, 0) + 1, 1u);
  auto E3 = power(exp_map(), 3);
  auto occ = E3.image(0).occurrences(Letter(0));
  ASSERT_GE(occ.size(), 3u);
  EXPECT_EQ(preferred_occurrence(E3, 0), occ[1]);
  EXPECT_THROW(preferred_occurrence(exp_map(), 0), NotConditionedError);
  auto swap = PositiveAutomorphism::create(Alphabet::standard(2), {Word{Letter(1)}, Word{Letter(0)}});
  EXPECT_THROW(preferred_occurrence(swap, 0), NotConditionedError);
}

TEST(Fastness, Gersten) {
  auto c = classify_fastness(gersten());
  EXPECT_FALSE(c[1].left_fast);
  EXPECT_TRUE(c[1].left_para_linear);
  EXPECT_FALSE(c[1].right_fast);
  EXPECT_TRUE(c[1].right_para_linear);
  EXPECT_FALSE(c[0].left_fast || c[0].right_fast || c[0].left_para_linear || c[0].right_para_linear);
}

TEST(Fastness, ConditionedExponential) {
  auto E3 = condition(exp_map())->phi0;
  auto c = classify_fastness(E3);
  EXPECT_TRUE(c[0].left_fast);
  EXPECT_TRUE(left_fast(c, Letter(0)));
  EXPECT_EQ(right_fast(c, Letter(0, true)), left_fast(c, Letter(0)));
  EXPECT_EQ(left_fast(c, Letter(1, true)), right_fast(c, Letter(1)));
}

TEST(Fastness, IdentityHasNoFlags) {
  for (auto& c : classify_fastness(PositiveAutomorphism::identity(abc))) {
    EXPECT_FALSE(c.left_fast || c.right_fast || c.left_para_linear || c.right_para_linear);
  }
}

// Fast iff |Y_n| > B n throughout a tail window past n = 2B.
TEST(Fastness, AgreesWithPrefixOracle) {
  std::mt19937_64 rng(9);
  std::vector<PositiveAutomorphism> maps{ensure_inverse(gersten()), condition(exp_map())->phi0};
  while (maps.size() < 60) {
    auto c = random_conditioned(rng, 3, 4);
    if (c) maps.push_back(c->phi0);
  }
  for (const auto& phi : maps) {
    auto cls = classify_fastness(phi);
    const auto B = static_cast<std::size_t>(compute_B(compute_M(phi), compute_M_inv(phi)).exact());
    const std::size_t N = 2 * B + 20;
    for (std::size_t x = 0; x < phi.rank(); ++x) {
      if (cls[x].growth.kind == GrowthKind::Constant) continue;
      auto p = prefix_lengths(phi, static_cast<int>(x), N);
      bool above = true;
      for (std::size_t n = N - 10; n <= N; ++n) above = above && p[n - 1] > BigInt(B * n);
      EXPECT_EQ(cls[x].left_fast, above) << images(phi) << " letter " << x;
    }
  }
}
