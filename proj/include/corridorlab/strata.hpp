#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "automorphism.hpp"

namespace corridorlab {

using TransitionMatrix = IntMatrix;

inline TransitionMatrix transition_matrix(const PositiveAutomorphism& phi) { return phi.transition_matrix(); }

enum class StratumKind { Parabolic, Exponential };

inline const char* to_string(StratumKind k) { return k == StratumKind::Parabolic ? "parabolic" : "exponential"; }

struct Stratum {
  std::vector<int> letters;  // sorted basis indices
  StratumKind kind = StratumKind::Parabolic;
};

/// Supports, strata and the induced partial order of a positive automorphism.
struct StrataReport {
  std::vector<std::vector<int>> support;  // supp(x), sorted
  std::vector<int> stratum_of;            // index into `strata`
  std::vector<Stratum> strata;            // in topological order: lower strata first
  std::vector<std::vector<int>> pre;      // pre(x) = {y : y < x} = supp(x) \ Sigma(x)

  bool in_support(int x, int y) const {
    const auto& s = support[static_cast<std::size_t>(x)];
    return std::binary_search(s.begin(), s.end(), y);
  }
  const Stratum& stratum(int x) const { return strata[static_cast<std::size_t>(stratum_of[static_cast<std::size_t>(x)])]; }
  bool exponential(int x) const { return stratum(x).kind == StratumKind::Exponential; }
};

/// supp(x) is the reflexive-transitive closure of "y occurs in phi(x)"; a
/// stratum is a class of letters with equal supports. A stratum is exponential
/// iff its restricted matrix has spectral radius > 1, which for an irreducible
/// nonnegative integer matrix means some in-stratum row sum is at least 2.
inline StrataReport supports_and_strata(const PositiveAutomorphism& phi) {
  const std::size_t m = phi.rank();
  const auto A = phi.transition_matrix();
  std::vector<std::vector<char>> reach(m, std::vector<char>(m, 0));
  for (std::size_t i = 0; i < m; ++i) {
    reach[i][i] = 1;
    for (std::size_t j = 0; j < m; ++j)
      if (A(i, j) > 0) reach[i][j] = 1;
  }
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < m; ++j)
          if (reach[k][j]) reach[i][j] = 1;

  StrataReport r;
  r.support.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (reach[i][j]) r.support[i].push_back(static_cast<int>(j));

  // Group letters by support, then order strata so each comes after every
  // stratum it reaches (smaller support size first is a valid linear extension).
  std::vector<int> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return r.support[static_cast<std::size_t>(a)].size() < r.support[static_cast<std::size_t>(b)].size(); });
  r.stratum_of.assign(m, -1);
  for (int x : order) {
    if (r.stratum_of[static_cast<std::size_t>(x)] >= 0) continue;
    Stratum s;
    for (std::size_t y = 0; y < m; ++y)
      if (r.support[y] == r.support[static_cast<std::size_t>(x)]) {
        s.letters.push_back(static_cast<int>(y));
        r.stratum_of[y] = static_cast<int>(r.strata.size());
      }
    for (int y : s.letters) {
      std::int64_t inside = 0;
      for (int z : s.letters) inside += A(static_cast<std::size_t>(y), static_cast<std::size_t>(z));
      if (inside >= 2) s.kind = StratumKind::Exponential;
    }
    r.strata.push_back(std::move(s));
  }
  r.pre.resize(m);
  for (std::size_t x = 0; x < m; ++x)
    for (int y : r.support[x])
      if (r.stratum_of[static_cast<std::size_t>(y)] != r.stratum_of[x]) r.pre[x].push_back(y);
  return r;
}

// ---------------------------------------------------------------------------
// Growth

enum class GrowthKind { Constant, Periodic, Polynomial, Exponential };

inline const char* to_string(GrowthKind g) {
  switch (g) {
    case GrowthKind::Constant: return "constant";
    case GrowthKind::Periodic: return "periodic";
    case GrowthKind::Polynomial: return "polynomial";
    case GrowthKind::Exponential: return "exponential";
  }
  return "?";
}

struct Growth {
  GrowthKind kind = GrowthKind::Constant;
  int degree = 0;  // meaningful for Polynomial only

  friend bool operator==(const Growth&, const Growth&) = default;
};

/// Growth type of |phi^n(x)| for each basis letter, computed over the
/// condensation DAG. Periodic covers bounded non-constant letters (letters
/// permuted within a parabolic stratum); they disappear after conditioning.
inline std::vector<Growth> classify_growth(const PositiveAutomorphism& phi, const StrataReport& report) {
  const std::size_t m = phi.rank();
  std::vector<Growth> out(m);
  std::vector<int> degree(report.strata.size(), 0);
  std::vector<char> expo(report.strata.size(), 0);
  for (std::size_t s = 0; s < report.strata.size(); ++s) {
    const Stratum& st = report.strata[s];
    bool exponential = st.kind == StratumKind::Exponential;
    int lower_degree = -1;  // -1: no letters outside the stratum in its images
    for (int x : st.letters) {
      for (Letter l : phi.image(x)) {
        auto t = static_cast<std::size_t>(report.stratum_of[static_cast<std::size_t>(l.index())]);
        if (t == s) continue;
        if (expo[t]) exponential = true;
        lower_degree = std::max(lower_degree, degree[t]);
      }
    }
    expo[s] = exponential;
    degree[s] = exponential ? 0 : lower_degree + 1;
    for (int x : st.letters) {
      auto& g = out[static_cast<std::size_t>(x)];
      if (exponential) {
        g = {GrowthKind::Exponential, 0};
      } else if (lower_degree >= 0) {
        g = {GrowthKind::Polynomial, degree[s]};
      } else if (phi.image(x) == Word{Letter(x)}) {
        g = {GrowthKind::Constant, 0};
      } else {
        g = {GrowthKind::Periodic, 0};
      }
    }
  }
  return out;
}

inline std::vector<Growth> classify_growth(const PositiveAutomorphism& phi) {
  return classify_growth(phi, supports_and_strata(phi));
}

inline bool is_constant_letter(const PositiveAutomorphism& phi, int x) {
  return phi.image(x) == Word{Letter(x)};
}

// ---------------------------------------------------------------------------
// Preferred futures and fastness

/// 0-based position of the preferred future of x in phi(x): the unique
/// occurrence for a parabolic letter, the second occurrence for an
/// exponential letter (which must occur at least three times).
inline std::size_t preferred_occurrence(const PositiveAutomorphism& phi, const StrataReport& report, int x) {
  auto occ = phi.image(x).occurrences(Letter(x));
  const auto& name = phi.alphabet().name(x);
  if (occ.empty()) throw NotConditionedError("letter " + name + " does not occur in its own image");
  if (report.exponential(x)) {
    if (occ.size() < 3)
      throw NotConditionedError("exponential letter " + name + " occurs only " + std::to_string(occ.size()) +
                                " times in its image");
    return occ[1];
  }
  if (occ.size() != 1)
    throw NotConditionedError("parabolic letter " + name + " occurs " + std::to_string(occ.size()) +
                              " times in its image");
  return occ[0];
}

inline std::size_t preferred_occurrence(const PositiveAutomorphism& phi, int x) {
  return preferred_occurrence(phi, supports_and_strata(phi), x);
}

/// Preferred occurrence for every letter, or nullopt where undefined.
inline std::vector<std::optional<std::size_t>> preferred_table(const PositiveAutomorphism& phi,
                                                               const StrataReport& report) {
  std::vector<std::optional<std::size_t>> table(phi.rank());
  for (std::size_t x = 0; x < phi.rank(); ++x) {
    try {
      table[x] = preferred_occurrence(phi, report, static_cast<int>(x));
    } catch (const NotConditionedError&) {
    }
  }
  return table;
}

struct LetterClass {
  Growth growth;
  bool left_fast = false;
  bool right_fast = false;
  bool left_para_linear = false;
  bool right_para_linear = false;
  std::optional<std::size_t> preferred;
};

/// Splits phi(x) = u x v at the preferred future. x is left-fast iff u holds
/// a non-constant letter (the prefix then grows at least quadratically);
/// left para-linear iff the prefix before the leftmost x is all constant.
/// Constant letters get every flag false.
inline std::vector<LetterClass> classify_fastness(const PositiveAutomorphism& phi, const StrataReport& report) {
  const auto growth = classify_growth(phi, report);
  std::vector<LetterClass> out(phi.rank());
  for (std::size_t xi = 0; xi < phi.rank(); ++xi) {
    const int x = static_cast<int>(xi);
    auto& c = out[xi];
    c.growth = growth[xi];
    const std::size_t pref = preferred_occurrence(phi, report, x);
    c.preferred = pref;
    if (growth[xi].kind == GrowthKind::Constant) continue;
    const Word& img = phi.image(x);
    auto non_constant = [&](std::size_t i) { return !is_constant_letter(phi, img[i].index()); };
    for (std::size_t i = 0; i < pref; ++i) c.left_fast = c.left_fast || non_constant(i);
    for (std::size_t i = pref + 1; i < img.size(); ++i) c.right_fast = c.right_fast || non_constant(i);
    auto occ = img.occurrences(Letter(x));
    c.left_para_linear = true;
    for (std::size_t i = 0; i < occ.front(); ++i) c.left_para_linear = c.left_para_linear && !non_constant(i);
    c.right_para_linear = true;
    for (std::size_t i = occ.back() + 1; i < img.size(); ++i)
      c.right_para_linear = c.right_para_linear && !non_constant(i);
  }
  return out;
}

inline std::vector<LetterClass> classify_fastness(const PositiveAutomorphism& phi) {
  return classify_fastness(phi, supports_and_strata(phi));
}

/// Fastness of a signed letter: x^{-1} is left-fast iff x is right-fast.
inline bool left_fast(const std::vector<LetterClass>& classes, Letter l) {
  const auto& c = classes[static_cast<std::size_t>(l.index())];
  return l.inverse() ? c.right_fast : c.left_fast;
}
inline bool right_fast(const std::vector<LetterClass>& classes, Letter l) {
  const auto& c = classes[static_cast<std::size_t>(l.index())];
  return l.inverse() ? c.left_fast : c.right_fast;
}

}  // namespace corridorlab
