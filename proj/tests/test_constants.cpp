#include <gtest/gtest.h>

#include <random>

#include "corridorlab/conditioning.hpp"
#include "corridorlab/constants.hpp"
#include "corridorlab/random.hpp"

using namespace corridorlab;

namespace {

const Alphabet abc = Alphabet::standard(3);
Word W(const char* s) { return parse_word(s, abc); }
PositiveAutomorphism gersten() { return ensure_inverse(PositiveAutomorphism::create(abc, {W("a"), W("ab"), W("aac")})); }
PositiveAutomorphism exp3() {
  return condition(ensure_inverse(PositiveAutomorphism::create(abc, {W("aab"), W("ab"), W("abc")})))->phi0;
}

BigInt geometric(unsigned base, unsigned L) {
  BigInt s = 0, p = 1;
  for (unsigned i = 0; i <= L; ++i, p *= base) s += p;
  return s;
}

void expect_identities(const ConstantsLedger& L) {
  EXPECT_EQ(L.B, 2 * L.M * L.M_inv + 1);
  EXPECT_EQ(L.C1, HugeInt(2 * static_cast<long long>(L.m)) * L.B * L.B);
  EXPECT_EQ(L.C4, L.M * L.M_inv);
  EXPECT_EQ(L.lambda0, max(2 * L.B * (L.T0 + 1) + 1, L.M * L.C4));
  EXPECT_EQ(L.T1, L.T1prime + 2 * L.T0);
  EXPECT_GE(L.T1prime, L.hatT1);
  EXPECT_EQ(L.K, 2 * L.C0 + 2 * L.K1 + 2 * L.B + 1);
}

}  // namespace

TEST(Ledger, Gersten) {
  auto L = compute_ledger(gersten());
  EXPECT_EQ(L.M, HugeInt(3));
  EXPECT_EQ(L.M_inv, HugeInt(3));
  EXPECT_EQ(L.B, HugeInt(19));
  EXPECT_EQ(L.C0, HugeInt(0));
  EXPECT_EQ(L.C1, HugeInt(2166));
  EXPECT_EQ(L.C4, HugeInt(9));
  EXPECT_EQ(L.T0, HugeInt(6) * HugeInt::word_count(6, 0) * HugeInt::word_count(6, 2166));
  EXPECT_EQ(L.T0.exact(), 6 * geometric(6, 2166));
  expect_identities(L);
  EXPECT_EQ(L.entry("C1").formula, "2 m B^2");
  EXPECT_THROW(L.entry("nope"), InputError);
}

TEST(Ledger, Identity) {
  auto L = compute_ledger(ensure_inverse(PositiveAutomorphism::identity(Alphabet::standard(2))));
  EXPECT_EQ(L.M, HugeInt(1));
  EXPECT_EQ(L.M_inv, HugeInt(1));
  EXPECT_EQ(L.B, HugeInt(3));
  EXPECT_EQ(L.C0, HugeInt(0));
  EXPECT_EQ(L.C1, HugeInt(36));
  expect_identities(L);
}

TEST(Formulas, Small) {
  EXPECT_EQ(compute_B(HugeInt(2), HugeInt(2)), HugeInt(9));
  EXPECT_EQ(compute_C1(1, HugeInt(3)), HugeInt(18));
  EXPECT_EQ(compute_T0(1, 0, 18), HugeInt(2 * ((BigInt(1) << 19) - 1)));
  for (std::size_t m = 1; m <= 4; ++m) EXPECT_EQ(compute_T0(m, 0, 0), HugeInt(2 * static_cast<long long>(m)));
}

TEST(Formulas, DegenerateZeros) {
  // m = 1: N(0) = 1, N(1) = 3 over two signed letters; tau = N(0) = 1
  const HugeInt z = 0;
  auto Ls = compute_L_short(z, z, z, z);
  EXPECT_EQ(Ls, z);
  auto hat = compute_hatT1(z, compute_tau(1, Ls));
  EXPECT_EQ(hat, HugeInt(1));
  auto T1p = compute_T1prime(1, z, z, z, hat);
  EXPECT_EQ(T1p, HugeInt(1 + 3 * 3 * 1 * 1 * 3));
  EXPECT_EQ(compute_T1(T1p, z), T1p);
  // The itemized K1 keeps its constant summands (+1 in genesis, 2B + 1 in the
  // bonus), so K1 = 2 and K = 5 rather than 1.
  auto K1 = compute_K1_terms(z, z, z, z, z, z, z).total();
  EXPECT_EQ(K1, HugeInt(2));
  EXPECT_EQ(compute_K(z, K1, z), HugeInt(5));
  EXPECT_EQ(compute_K(z, z, z), HugeInt(1));
}

TEST(C0, VacuousCases) {
  EXPECT_EQ(compute_C0(gersten(), 19).C0, HugeInt(0));
  EXPECT_TRUE(compute_C0(gersten(), 19).pairs.empty());
  EXPECT_EQ(compute_C0(PositiveAutomorphism::identity(abc), 3).C0, HugeInt(0));
}

TEST(C0, ConditionedExponentialRegression) {
  auto phi = exp3();
  const BigInt B = compute_B(compute_M(phi), compute_M_inv(phi)).exact();
  EXPECT_EQ(B, 883);
  auto r = compute_C0(phi, B);
  EXPECT_EQ(r.j_star, 5u);
  EXPECT_EQ(r.C0, HugeInt(4415));
}

// |Y_{x,j}| = |phi^{j-1}(u)| + sum_{i < j-1} |phi^i(P)|, summed separately.
TEST(C0, WindowConfirmedByDirectIteration) {
  auto phi = exp3();
  const BigInt B = compute_B(compute_M(phi), compute_M_inv(phi)).exact();
  auto r = compute_C0(phi, B);
  const auto A = phi.transition_matrix();
  const std::size_t m = phi.rank();
  auto total = [](const std::vector<BigInt>& v) {
    BigInt s = 0;
    for (auto& c : v) s += c;
    return s;
  };
  bool tight = false;
  for (const auto& pair : r.pairs) {
    const Word& img = phi.image(pair.letter);
    const Word& fimg = phi.image(pair.fast_letter);
    std::vector<BigInt> u(m), P(m);
    for (std::size_t i = 0; i < pair.position; ++i) u[static_cast<std::size_t>(img[i].index())] += 1;
    for (std::size_t i = 0; i < preferred_occurrence(phi, pair.fast_letter); ++i)
      P[static_cast<std::size_t>(fimg[i].index())] += 1;
    const std::size_t hi = 2 * r.j_star + m;
    std::vector<BigInt> Y(hi + 1);
    BigInt tail = 0;
    for (std::size_t j = 1; j <= hi; ++j) {
      Y[j] = total(u) + tail;
      tail += total(P);
      u = push_counts(u, A);
      P = push_counts(P, A);
    }
    for (std::size_t j = std::max<std::size_t>(r.j_star, 1); j <= hi; ++j) ASSERT_GT(Y[j], B * j) << j;
    for (std::size_t j = 1; j <= std::min(hi, pair.prefix_lengths.size()); ++j)
      ASSERT_EQ(Y[j], pair.prefix_lengths[j - 1]) << j;
    if (Y[r.j_star - 1] <= B * (r.j_star - 1)) tight = true;
  }
  EXPECT_TRUE(tight);
}

TEST(C0, RandomMapsCertify) {
  std::mt19937_64 rng(17);
  int n = 0;
  while (n < 30) {
    auto c = random_conditioned(rng, 3, 4);
    if (!c) continue;
    ++n;
    const BigInt B = compute_B(compute_M(c->phi0), compute_M_inv(c->phi0)).exact();
    auto r = compute_C0(c->phi0, B);
    for (const auto& pair : r.pairs) {
      for (std::size_t j = std::max<std::size_t>(pair.j_star, 1); j <= pair.prefix_lengths.size(); ++j)
        ASSERT_GT(pair.prefix_lengths[j - 1], B * j);
      for (std::size_t j = 2; j < pair.prefix_lengths.size(); ++j)
        ASSERT_GE(pair.prefix_lengths[j] - pair.prefix_lengths[j - 1],
                  pair.prefix_lengths[j - 1] - pair.prefix_lengths[j - 2]);
    }
  }
}

TEST(Ledger, MonotoneInSmallInputs) {
  auto ledger = [](std::size_t m, long long M, long long Mi) {
    ConstantsLedger L;
    L.B = compute_B(M, Mi);
    L.C1 = compute_C1(m, L.B);
    L.C4 = compute_C4(M, Mi);
    L.T0 = compute_T0(m, 0, L.C1);
    L.lambda0 = compute_lambda0(L.B, L.T0, M, L.C4);
    L.L_short = compute_L_short(L.B, 0, L.C1, L.T0);
    return L;
  };
  for (std::size_t m = 1; m <= 2; ++m)
    for (long long M = 1; M <= 2; ++M)
      for (long long Mi = 1; Mi <= 2; ++Mi) {
        auto a = ledger(m, M, Mi);
        for (auto b : {ledger(m + 1, M, Mi), ledger(m, M + 1, Mi), ledger(m, M, Mi + 1)}) {
          EXPECT_LE(a.B, b.B);
          EXPECT_LE(a.C1, b.C1);
          EXPECT_LE(a.C4, b.C4);
          EXPECT_LE(a.T0, b.T0);
          EXPECT_LE(a.lambda0, b.lambda0);
          EXPECT_LE(a.L_short, b.L_short);
        }
      }
}

TEST(Ledger, RandomIdentities) {
  std::mt19937_64 rng(2);
  int n = 0;
  while (n < 10) {
    auto c = random_conditioned(rng, 3, 3);
    if (!c) continue;
    ++n;
    expect_identities(compute_ledger(c->phi0));
  }
}

TEST(HugeInt, ExactArithmetic) {
  HugeInt a = 12, b = 30;
  EXPECT_EQ(a * b + 1, HugeInt(361));
  EXPECT_LT(a, b);
  EXPECT_EQ(max(a, b), b);
  EXPECT_EQ(HugeInt::word_count(2, 3), HugeInt(15));
  EXPECT_EQ(HugeInt(0).to_string(), "0");
  EXPECT_EQ(HugeInt(12345).brief(3), "1.2345e4");
}

TEST(HugeInt, SymbolicAtoms) {
  auto big = HugeInt::word_count(6, HugeInt(BigInt(1) << 40));
  EXPECT_FALSE(big.is_exact());
  EXPECT_EQ(big, HugeInt::word_count(6, HugeInt(BigInt(1) << 40)));
  EXPECT_NE(big, HugeInt::word_count(6, HugeInt((BigInt(1) << 40) + 1)));
  EXPECT_LT(HugeInt(BigInt(1) << 1000), big);
  // neighbouring atoms are too close for the magnitude bounds
  try {
    (void)(big < HugeInt::word_count(6, HugeInt((BigInt(1) << 40) + 1)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "undecidable");
  }
  EXPECT_EQ(2 * big - big, big);
  try {
    (void)big.exact();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "symbolic");
  }
  EXPECT_NE(big.brief().find("10^("), std::string::npos);
}

TEST(HugeInt, NestedAtoms) {
  auto big = HugeInt::word_count(6, HugeInt(BigInt(1) << 40));
  auto nested = HugeInt::word_count(6, 5 * big + 7);
  EXPECT_LT(big, nested);
  EXPECT_LT(HugeInt(BigInt(1) << 5000), nested);
  EXPECT_EQ(max(2 * nested, nested + big * big), 2 * nested);
  EXPECT_GT(nested - big * big * big, HugeInt(0));
  EXPECT_EQ(nested.brief().rfind("2^(2^(", 0), 0u);
  try {
    (void)(nested < HugeInt::word_count(6, 5 * big + 8));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "undecidable");
  }
}

TEST(Ledger, RankFourNestedAtoms) {
  std::mt19937_64 rng(2024);
  std::optional<Conditioned> c;
  while (!c) c = random_conditioned(rng, 4, 5);
  auto L = compute_ledger(c->phi0);
  expect_identities(L);
  EXPECT_LT(L.T0, L.T1);
  EXPECT_FALSE(L.T1.brief().empty());
}
