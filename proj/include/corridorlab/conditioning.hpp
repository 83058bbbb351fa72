#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>
#include <optional>
#include <string>
#include <vector>

#include "strata.hpp"

namespace corridorlab {

/// Leftmost/rightmost stability of one stratum inside one letter's iterates.
struct StratumWitness {
  int letter = 0;
  std::size_t stratum = 0;
  std::optional<int> leftmost;   // leftmost stratum letter of phi0(x)
  std::optional<int> rightmost;
  std::vector<int> left_orbit;   // first letters y_j feeding the leftmost letter, until repetition
  std::vector<int> right_orbit;
  bool stable = true;
};

struct ConditioningCertificate {
  std::size_t k = 1;
  std::array<bool, 5> holds{};
  std::array<std::string, 5> failure;  // falsifying witness per property, empty when it holds
  // (1)-(3): self occurrences and the least occurrence count of a support letter.
  std::vector<std::size_t> self_occurrences;
  std::vector<std::size_t> min_support_occurrences;
  // (4): first and last letters of phi0(x).
  std::vector<int> first_letter, last_letter;
  // (5)
  std::vector<StratumWitness> strata_witnesses;
  std::size_t brute_force_depth = 0;

  bool all() const {
    for (bool b : holds)
      if (!b) return false;
    return true;
  }
};

namespace detail {

/// Leftmost (or rightmost) letter of phi^n(y) lying in `target`, by memoized
/// recursion over the images; never expands phi^n(y).
class ExtremeLetterTable {
 public:
  ExtremeLetterTable(const PositiveAutomorphism& phi, std::vector<char> target, bool from_left)
      : phi_(phi), target_(std::move(target)), left_(from_left) {}

  std::optional<int> at(int y, std::size_t n) {
    auto key = std::make_pair(y, n);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::optional<int> out;
    if (n == 0) {
      if (target_[static_cast<std::size_t>(y)]) out = y;
    } else {
      const Word& img = phi_.image(y);
      for (std::size_t i = 0; i < img.size() && !out; ++i) {
        std::size_t pos = left_ ? i : img.size() - 1 - i;
        out = at(img[pos].index(), n - 1);
      }
    }
    memo_.emplace(key, out);
    return out;
  }

 private:
  const PositiveAutomorphism& phi_;
  std::vector<char> target_;
  bool left_;
  std::map<std::pair<int, std::size_t>, std::optional<int>> memo_;
};

}  // namespace detail

/// Verifies the five conditioning properties for phi0 against phi0's own strata.
inline ConditioningCertificate check_conditioned(const PositiveAutomorphism& phi0) {
  const std::size_t m = phi0.rank();
  const auto report = supports_and_strata(phi0);
  const auto& names = phi0.alphabet();
  ConditioningCertificate cert;
  cert.holds.fill(true);
  auto fail = [&](int p, const std::string& why) {
    if (cert.holds[static_cast<std::size_t>(p - 1)]) cert.failure[static_cast<std::size_t>(p - 1)] = why;
    cert.holds[static_cast<std::size_t>(p - 1)] = false;
  };

  for (std::size_t xi = 0; xi < m; ++xi) {
    const int x = static_cast<int>(xi);
    const Word& img = phi0.image(x);
    const std::size_t self = img.count(x);
    cert.self_occurrences.push_back(self);
    if (self == 0) fail(1, names.name(x) + " does not occur in its image");
    if (report.exponential(x) && self < 3)
      fail(2, "exponential letter " + names.name(x) + " occurs " + std::to_string(self) + " times in its image");
    std::size_t min_occ = self;
    for (int y : report.support[xi]) {
      std::size_t c = img.count(y);
      min_occ = std::min(min_occ, c);
      if (c == 0) fail(3, names.name(y) + " is in supp(" + names.name(x) + ") but not in its image");
    }
    cert.min_support_occurrences.push_back(min_occ);
    const int first = img.front().index(), last = img.back().index();
    cert.first_letter.push_back(first);
    cert.last_letter.push_back(last);
    if (phi0.image(first).front().index() != first)
      fail(4, "first letter " + names.name(first) + " of phi(" + names.name(x) + ") is not a left fixpoint");
    if (phi0.image(last).back().index() != last)
      fail(4, "last letter " + names.name(last) + " of phi(" + names.name(x) + ") is not a right fixpoint");
  }

  // (5), exactly via the orbit of first stratum-reaching letters, plus a
  // direct check for j <= 2m.
  cert.brute_force_depth = 2 * m;
  for (std::size_t s = 0; s < report.strata.size(); ++s) {
    std::vector<char> in_stratum(m, 0), reaches(m, 0);
    for (int y : report.strata[s].letters) in_stratum[static_cast<std::size_t>(y)] = 1;
    for (std::size_t z = 0; z < m; ++z)
      for (int y : report.support[z])
        if (in_stratum[static_cast<std::size_t>(y)]) reaches[z] = 1;
    detail::ExtremeLetterTable left(phi0, in_stratum, true), right(phi0, in_stratum, false);
    for (std::size_t xi = 0; xi < m; ++xi) {
      if (!reaches[xi]) continue;  // stratum not inside supp(x)
      const int x = static_cast<int>(xi);
      StratumWitness w;
      w.letter = x;
      w.stratum = s;
      w.leftmost = left.at(x, 1);
      w.rightmost = right.at(x, 1);
      // Orbit: y -> first (last) letter of phi0(y) whose support meets the stratum.
      auto orbit = [&](bool from_left) {
        std::vector<int> seen{x};
        for (;;) {
          const Word& img = phi0.image(seen.back());
          int next = -1;
          for (std::size_t i = 0; i < img.size(); ++i) {
            int z = img[from_left ? i : img.size() - 1 - i].index();
            if (reaches[static_cast<std::size_t>(z)]) {
              next = z;
              break;
            }
          }
          if (next < 0 || std::find(seen.begin(), seen.end(), next) != seen.end()) return seen;
          seen.push_back(next);
        }
      };
      w.left_orbit = orbit(true);
      w.right_orbit = orbit(false);
      if (cert.holds[2]) {
        for (int y : w.left_orbit)
          if (left.at(y, 1) != w.leftmost) w.stable = false;
        for (int y : w.right_orbit)
          if (right.at(y, 1) != w.rightmost) w.stable = false;
      }
      bool brute = true;
      for (std::size_t j = 1; j <= cert.brute_force_depth; ++j)
        brute = brute && left.at(x, j) == w.leftmost && right.at(x, j) == w.rightmost;
      if (cert.holds[2] && brute != w.stable)
        throw std::logic_error("stratum stability: orbit argument and direct check disagree");
      if (!cert.holds[2]) w.stable = brute;
      if (!w.stable)
        fail(5, "extreme letters of stratum " + std::to_string(s) + " in iterates of " + names.name(x) +
                    " are not stable");
      cert.strata_witnesses.push_back(std::move(w));
    }
  }
  return cert;
}

struct Conditioned {
  PositiveAutomorphism phi0;
  ConditioningCertificate certificate;
};

/// Least k <= max_k with phi^k conditioned; nullopt means max_k was too small.
inline std::optional<Conditioned> condition(const PositiveAutomorphism& phi, std::size_t max_k = 64,
                                            std::size_t cap = kDefaultLengthCap) {
  PositiveAutomorphism current = phi;
  for (std::size_t k = 1; k <= max_k; ++k) {
    if (k > 1) current = compose(phi, current, cap);
    auto cert = check_conditioned(current);
    if (cert.all()) {
      cert.k = k;
      return Conditioned{current, std::move(cert)};
    }
  }
  return std::nullopt;
}

}  // namespace corridorlab
