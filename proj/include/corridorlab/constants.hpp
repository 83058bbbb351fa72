#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "huge_int.hpp"
#include "strata.hpp"

namespace corridorlab {

/// One row of the ledger: value plus the formula and the lemma it comes from.
struct LedgerEntry {
  std::string name;
  HugeInt value;
  std::string formula;
  std::string citation;
};

struct ConstantsLedger {
  std::size_t m = 0;
  HugeInt M, M_inv, B, C0, C1, C4, lambda0, T0, L_short, tau, hatT1, T1prime, T1, K1, K;
  std::vector<LedgerEntry> entries;

  const LedgerEntry& entry(const std::string& name) const {
    for (const auto& e : entries)
      if (e.name == name) return e;
    throw InputError("no ledger entry named " + name);
  }
};

// ---------------------------------------------------------------------------
// Individual formulas

inline HugeInt compute_M(const PositiveAutomorphism& phi0) {
  std::size_t best = 0;
  for (const Word& u : phi0.images()) best = std::max(best, u.size());
  return HugeInt(static_cast<long long>(best));
}

inline HugeInt compute_M_inv(const PositiveAutomorphism& phi0) {
  std::size_t best = 0;
  for (const Word& v : phi0.inverse_images()) best = std::max(best, v.size());
  return HugeInt(static_cast<long long>(best));
}

inline HugeInt compute_B(const HugeInt& M, const HugeInt& M_inv) { return 2 * M * M_inv + 1; }
inline HugeInt compute_C1(std::size_t m, const HugeInt& B) { return HugeInt(2 * static_cast<long long>(m)) * B * B; }
inline HugeInt compute_C4(const HugeInt& M, const HugeInt& M_inv) { return M * M_inv; }

/// Number of reduced or unreduced words of length <= L over the 2m signed letters.
inline HugeInt word_count(std::size_t m, const HugeInt& L) {
  return HugeInt::word_count(static_cast<unsigned>(2 * m), L);
}

inline HugeInt compute_T0(std::size_t m, const HugeInt& C0, const HugeInt& C1) {
  return HugeInt(2 * static_cast<long long>(m)) * word_count(m, C0) * word_count(m, C0 + C1);
}

inline HugeInt compute_lambda0(const HugeInt& B, const HugeInt& T0, const HugeInt& M, const HugeInt& C4) {
  return max(2 * B * (T0 + 1) + 1, M * C4);
}

/// Length bound for a short implosive array.
inline HugeInt compute_L_short(const HugeInt& B, const HugeInt& C0, const HugeInt& C1, const HugeInt& T0) {
  return 2 * B * (2 * C0 + 2 * C1 + 5 * B + 1 + 2 * B * T0) + 2 * B * B * (1 + 2 * T0);
}

inline HugeInt compute_tau(std::size_t m, const HugeInt& L_short) { return word_count(m, L_short); }

inline HugeInt compute_hatT1(const HugeInt& T0, const HugeInt& tau) { return max(2 * T0, tau); }

inline HugeInt compute_T1prime(std::size_t m, const HugeInt& C0, const HugeInt& C1, const HugeInt& B,
                               const HugeInt& hatT1) {
  const HugeInt outer = word_count(m, C0 + C1 + 2 * B + 1);
  const HugeInt inner = word_count(m, C0 + C1);
  const HugeInt middle = word_count(m, 4 * B + 1);
  return max(hatT1, 1 + outer * outer * inner * inner * middle);
}

inline HugeInt compute_T1(const HugeInt& T1prime, const HugeInt& T0) { return T1prime + 2 * T0; }

struct K1Terms {
  HugeInt cancellation;  // 2 C1
  HugeInt adjacency;     // 6 B (T1 + T0)
  HugeInt short_teams;   // 2 lambda0 + 2B
  HugeInt genesis;
  HugeInt bonus;
  HugeInt total() const { return cancellation + adjacency + short_teams + genesis + bonus; }
};

inline K1Terms compute_K1_terms(const HugeInt& M, const HugeInt& B, const HugeInt& C1, const HugeInt& C4,
                                const HugeInt& lambda0, const HugeInt& T0, const HugeInt& T1) {
  K1Terms t;
  t.cancellation = 2 * C1;
  t.adjacency = 6 * B * (T1 + T0);
  t.short_teams = 2 * lambda0 + 2 * B;
  const HugeInt mc = 2 * M * C4;
  t.genesis = mc + 1 + mc * (3 * T1) + mc * (2 + 3 * T1 + 5 * T0) + mc * T0 * 3 + 2 * lambda0;
  t.bonus = 2 * M + (3 * T1 + 2 * T0 + 1) * M +
            (2 * M + 6 * M * T1 + 4 * M * T0 + 2 * lambda0 + 6 * B * T1 + 4 * B * T0) +
            (3 * M * T1 * B + 2 * M * T0 * B) + (2 * B + 1);
  return t;
}

inline HugeInt compute_K(const HugeInt& C0, const HugeInt& K1, const HugeInt& B) { return 2 * C0 + 2 * K1 + 2 * B + 1; }

// ---------------------------------------------------------------------------
// C0

/// Prefix growth of one (x, left-fast x') pair: |Y_j| is the length of the
/// part of phi^j(x) before the preferred future of the chosen x' in phi(x).
struct C0Pair {
  int letter = 0;
  std::size_t position = 0;  // of x' in phi(x), 0-based
  int fast_letter = 0;
  std::size_t j_star = 0;
  std::size_t certified_to = 0;     // D_j > 0 and increments >= B from here on
  std::vector<BigInt> prefix_lengths;  // |Y_1|, |Y_2|, ... up to certified_to (and at least 2 j* + m)
};

struct C0Report {
  HugeInt C0;
  std::size_t j_star = 0;
  std::vector<C0Pair> pairs;
};

/// Row vector of letter counts times the transition matrix.
inline std::vector<BigInt> push_counts(const std::vector<BigInt>& v, const IntMatrix& A) {
  std::vector<BigInt> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0)
      for (std::size_t j = 0; j < v.size(); ++j)
        if (A(i, j) != 0) out[j] += v[i] * A(i, j);
  return out;
}

/// C0 = B j*, where j* is least with |Y_j| > B j for all j >= max(j*, 1),
/// maximized over the pairs. For a conditioned map every letter occurs in its
/// own image, so the letters of Y_j are a sub-multiset of those of Y_{j+1} and
/// the increments of |Y_j| never decrease; once D_j = |Y_j| - Bj is positive
/// and the increment reaches B, D_j stays positive.
inline C0Report compute_C0(const PositiveAutomorphism& phi0, const BigInt& B, std::size_t max_iterations = 100000) {
  const std::size_t m = phi0.rank();
  const auto report = supports_and_strata(phi0);
  const auto classes = classify_fastness(phi0, report);
  const auto A = phi0.transition_matrix();
  C0Report out;
  for (std::size_t xi = 0; xi < m; ++xi) {
    const Word& img = phi0.image(static_cast<int>(xi));
    for (std::size_t p = 0; p < img.size(); ++p) {
      const int xp = img[p].index();
      if (!classes[static_cast<std::size_t>(xp)].left_fast) continue;
      C0Pair pair;
      pair.letter = static_cast<int>(xi);
      pair.position = p;
      pair.fast_letter = xp;
      // counts(Y_1) = counts(u); counts(Y_{j+1}) = counts(Y_j) A + counts(P)
      std::vector<BigInt> y(m), P(m);
      for (std::size_t i = 0; i < p; ++i) y[static_cast<std::size_t>(img[i].index())] += 1;
      const Word& fast_img = phi0.image(xp);
      const std::size_t pref = *classes[static_cast<std::size_t>(xp)].preferred;
      for (std::size_t i = 0; i < pref; ++i) P[static_cast<std::size_t>(fast_img[i].index())] += 1;
      auto total = [](const std::vector<BigInt>& v) {
        BigInt s = 0;
        for (const auto& c : v) s += c;
        return s;
      };
      std::size_t last_bad = 0;
      for (std::size_t j = 1;; ++j) {
        if (j > max_iterations) throw CapacityError("C0 scan did not certify", max_iterations);
        const BigInt len = total(y);
        pair.prefix_lengths.push_back(len);
        if (len <= B * j) last_bad = j;
        auto next = push_counts(y, A);
        for (std::size_t i = 0; i < m; ++i) next[i] += P[i];
        const BigInt increment = total(next) - len;
        y = std::move(next);
        const std::size_t candidate = last_bad == 0 ? 0 : last_bad + 1;
        if (len > B * j && increment >= B && j >= 2 * candidate + m) {
          pair.certified_to = j;
          break;
        }
      }
      pair.j_star = last_bad == 0 ? 0 : last_bad + 1;
      out.j_star = std::max(out.j_star, pair.j_star);
      out.pairs.push_back(std::move(pair));
    }
  }
  out.C0 = HugeInt(B * out.j_star);
  return out;
}

// ---------------------------------------------------------------------------
// Whole ledger

/// Assembles the ledger for a conditioned phi0 with known inverse images.
/// C0 may be supplied to skip the scan.
inline ConstantsLedger compute_ledger(const PositiveAutomorphism& phi0, std::optional<HugeInt> C0 = std::nullopt) {
  ConstantsLedger L;
  L.m = phi0.rank();
  L.M = compute_M(phi0);
  L.M_inv = compute_M_inv(phi0);
  L.B = compute_B(L.M, L.M_inv);
  L.C0 = C0 ? *C0 : compute_C0(phi0, L.B.exact()).C0;
  L.C1 = compute_C1(L.m, L.B);
  L.C4 = compute_C4(L.M, L.M_inv);
  L.T0 = compute_T0(L.m, L.C0, L.C1);
  L.lambda0 = compute_lambda0(L.B, L.T0, L.M, L.C4);
  L.L_short = compute_L_short(L.B, L.C0, L.C1, L.T0);
  L.tau = compute_tau(L.m, L.L_short);
  L.hatT1 = compute_hatT1(L.T0, L.tau);
  L.T1prime = compute_T1prime(L.m, L.C0, L.C1, L.B, L.hatT1);
  L.T1 = compute_T1(L.T1prime, L.T0);
  L.K1 = compute_K1_terms(L.M, L.B, L.C1, L.C4, L.lambda0, L.T0, L.T1).total();
  L.K = compute_K(L.C0, L.K1, L.B);
  L.entries = {
      {"M", L.M, "max |phi(a_i)|", "maximum image length"},
      {"M_inv", L.M_inv, "max |phi^-1(a_i)|", "maximum inverse image length"},
      {"B", L.B, "2 M M_inv + 1", "Bounded Cancellation Lemma"},
      {"C0", L.C0, "B j*, |Y_{x,j}| > B j for j >= j*", "left-fast prefix lemma (C0)"},
      {"C1", L.C1, "2 m B^2", "adjacency lemma (C1)"},
      {"C4", L.C4, "M M_inv", "glossary of constants"},
      {"T0", L.T0, "2m N(C0) N(C0 + C1)", "Two Colour Lemma"},
      {"lambda0", L.lambda0, "max{2B(T0 + 1) + 1, M C4}", "glossary of constants"},
      {"L_short", L.L_short, "2B(2C0 + 2C1 + 5B + 1 + 2B T0) + 2B^2(1 + 2T0)", "short arrays lemma, item 2"},
      {"tau", L.tau, "N(L_short)", "short arrays finiteness"},
      {"hatT1", L.hatT1, "max{2 T0, tau}", "pincer lifetime stipulation"},
      {"T1prime", L.T1prime, "max(hatT1, 1 + N(C0+C1+2B+1)^2 N(C0+C1)^2 N(4B+1))", "5-tuple repetition"},
      {"T1", L.T1, "T1' + 2 T0", "glossary of constants"},
      {"K1", L.K1, "2C1 + 6B(T1+T0) + short teams + genesis + bonus", "area of non-scattered teams"},
      {"K", L.K, "2 C0 + 2 K1 + 2B + 1", "final aggregation"},
  };
  return L;
}

}  // namespace corridorlab
