#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "automorphism.hpp"
#include "matrix.hpp"

namespace corridorlab {

// Words over the presentation <a_1..a_m, t | t^-1 a_i t phi(a_i)^-1> use the
// ordinary Letter type; the stable letter t has index m.

inline Letter stable_letter(const PositiveAutomorphism& phi, bool inverse = false) {
  return Letter(static_cast<int>(phi.rank()), inverse);
}

inline bool is_stable(const PositiveAutomorphism& phi, Letter l) {
  return static_cast<std::size_t>(l.index()) == phi.rank();
}

/// Alphabet with the stable letter appended (named "t" unless taken).
inline Alphabet presentation_alphabet(const PositiveAutomorphism& phi) {
  std::string name = "t";
  while (phi.alphabet().index_of(name) >= 0) name += "_";
  return phi.alphabet().extended(name);
}

/// t^-1 a_i t phi(a_i)^-1
inline Word relator(const PositiveAutomorphism& phi, int i) {
  LetterSeq raw{stable_letter(phi, true), Letter(i), stable_letter(phi)};
  for (Letter l : phi.image(i).inverse()) raw.push_back(l);
  return Word(std::move(raw));
}

inline long stable_exponent(const PositiveAutomorphism& phi, const Word& w) {
  long s = 0;
  for (Letter l : w)
    if (is_stable(phi, l)) s += l.inverse() ? -1 : 1;
  return s;
}

/// Element t^k f of the mapping torus with f reduced.
struct NormalForm {
  long k = 0;
  Word f;
};

/// Right-multiplies letter by letter: f a -> f a, f t -> t phi(f),
/// f t^-1 -> t^-1 phi^-1(f). Needs inverse images.
inline NormalForm normal_form(const PositiveAutomorphism& phi, std::span<const Letter> w,
                              std::size_t cap = kDefaultLengthCap) {
  NormalForm nf;
  for (Letter l : w) {
    if (is_stable(phi, l)) {
      if (l.positive()) {
        nf.f = apply(phi, nf.f, cap);
        ++nf.k;
      } else {
        nf.f = apply_inverse(phi, nf.f, cap);
        --nf.k;
      }
    } else {
      nf.f = nf.f * Word{l};
    }
  }
  return nf;
}

/// Exact word problem in F x|_phi Z.
inline bool is_trivial(const PositiveAutomorphism& phi, const Word& w, std::size_t cap = kDefaultLengthCap) {
  if (stable_exponent(phi, w) != 0) return false;
  auto nf = normal_form(phi, w.letters(), cap);
  return nf.k == 0 && nf.f.empty();
}

// ---------------------------------------------------------------------------
// Area by non-crossing t-matchings

/// Minimal area of a null-homotopic word, via the corridor structure of
/// reduced diagrams: every cell has two t-edges, so the t-letters of w are
/// matched by non-crossing corridors, and the regions between corridors carry
/// no cells. A corridor t^-1 z t has |z| cells (z read as an element of F);
/// a corridor t z t^-1 has |phi^-1(z)| cells. nullopt if w is not trivial.
inline std::optional<std::size_t> corridor_area(const PositiveAutomorphism& phi, const Word& w,
                                                std::size_t cap = kDefaultLengthCap) {
  if (!is_trivial(phi, w, cap)) return std::nullopt;
  std::vector<std::size_t> tpos;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (is_stable(phi, w[i])) tpos.push_back(i);
  const std::size_t k = tpos.size();
  if (k == 0) return 0;
  constexpr std::size_t kInf = static_cast<std::size_t>(-1);
  // cost[a][c] for a < c
  std::vector<std::vector<std::size_t>> cost(k, std::vector<std::size_t>(k, kInf));
  for (std::size_t a = 0; a < k; ++a) {
    long balance = 0;
    for (std::size_t c = a + 1; c < k; ++c) {
      const Letter la = w[tpos[a]], lc = w[tpos[c]];
      if (balance == 0 && la.inverse() != lc.inverse()) {
        auto z = w.letters().subspan(tpos[a] + 1, tpos[c] - tpos[a] - 1);
        Word value = normal_form(phi, z, cap).f;
        cost[a][c] = la.inverse() ? value.size() : apply_inverse(phi, value, cap).size();
      }
      balance += lc.inverse() ? -1 : 1;
    }
  }
  // best[a][b]: perfect matching of t-letters a..b-1
  std::vector<std::vector<std::size_t>> best(k + 1, std::vector<std::size_t>(k + 1, kInf));
  for (std::size_t a = 0; a <= k; ++a) best[a][a] = 0;
  for (std::size_t len = 2; len <= k; len += 2) {
    for (std::size_t a = 0; a + len <= k; ++a) {
      const std::size_t b = a + len;
      std::size_t v = kInf;
      for (std::size_t c = a + 1; c < b; c += 2) {
        if (cost[a][c] == kInf || best[a + 1][c] == kInf || best[c + 1][b] == kInf) continue;
        v = std::min(v, cost[a][c] + best[a + 1][c] + best[c + 1][b]);
      }
      best[a][b] = v;
    }
  }
  if (best[0][k] == kInf) throw std::logic_error("corridor_area: trivial word without a matching");
  return best[0][k];
}

// ---------------------------------------------------------------------------
// Breadth-first search with witnesses

/// Cyclic reduction followed by least rotation: the search state of a word
/// up to conjugacy (area is conjugation invariant).
inline Word cyclic_normal(const Word& w) { return least_rotation(cyclic_reduce(w)); }

/// One relator application: the cyclic window of `before` of length
/// `length` starting at `position` equals the first `length` letters of the
/// rotation of relator(generator)^(+-1) starting at `rotation`; it is
/// replaced by the inverse of the remaining letters.
struct RelatorStep {
  Word before;
  std::size_t position = 0;
  int generator = 0;
  bool inverse = false;
  std::size_t rotation = 0;
  std::size_t length = 0;
};

namespace detail {

inline Word rotated_relator(const PositiveAutomorphism& phi, int gen, bool inverse, std::size_t rotation) {
  Word r = relator(phi, gen);
  if (inverse) r = r.inverse();
  LetterSeq rot;
  for (std::size_t i = 0; i < r.size(); ++i) rot.push_back(r[(rotation + i) % r.size()]);
  // A rotation of a cyclically reduced word is reduced.
  return Word(std::move(rot));
}

/// Applies a step; nullopt if the window does not match.
inline std::optional<Word> apply_step(const PositiveAutomorphism& phi, const RelatorStep& s) {
  const Word& w = s.before;
  const Word rho = rotated_relator(phi, s.generator, s.inverse, s.rotation);
  if (s.length == 0 || s.length > rho.size() || s.length > w.size()) return std::nullopt;
  for (std::size_t i = 0; i < s.length; ++i)
    if (w[(s.position + i) % w.size()] != rho[i]) return std::nullopt;
  LetterSeq raw;
  for (std::size_t i = rho.size(); i-- > s.length;) raw.push_back(rho[i].inv());
  for (std::size_t i = s.length; i < w.size(); ++i) raw.push_back(w[(s.position + i) % w.size()]);
  return cyclic_normal(Word(std::move(raw)));
}

/// Moves that sweep one letter across the left t-letter of an innermost
/// corridor (two cyclically consecutive t-letters of opposite sign). Every
/// minimal diagram can be dismantled this way one cell at a time, so the
/// restricted search is still exact.
inline std::vector<RelatorStep> sweep_moves(const PositiveAutomorphism& phi, const Word& w) {
  std::vector<RelatorStep> moves;
  const std::size_t n = w.size();
  std::vector<std::size_t> tpos;
  for (std::size_t i = 0; i < n; ++i)
    if (is_stable(phi, w[i])) tpos.push_back(i);
  for (std::size_t idx = 0; idx < tpos.size(); ++idx) {
    const std::size_t p = tpos[idx];
    const std::size_t q = tpos[(idx + 1) % tpos.size()];
    if (w[p].inverse() == w[q].inverse()) continue;
    const std::size_t gap = (q + n - p - 1) % n;  // F-letters between them
    for (std::size_t g = 0; g < phi.rank(); ++g) {
      for (bool inv : {false, true}) {
        // relator t^-1 a t phi(a)^-1: t^-1 sits at 0, t at 2. The inverse
        // relator phi(a) t^-1 a^-1 t has t^-1 at |phi(a)| and t at |phi(a)| + 2.
        const std::size_t ia = phi.image(static_cast<int>(g)).size();
        std::size_t rot;
        if (w[p].inverse())
          rot = inv ? ia : 0;
        else
          rot = inv ? ia + 2 : 2;
        Word rho = rotated_relator(phi, static_cast<int>(g), inv, rot);
        std::size_t lcp = 1;
        while (lcp < rho.size() && lcp <= gap && w[(p + lcp) % n] == rho[lcp]) ++lcp;
        if (w[p].inverse()) {
          // t^-1 a -> phi(a) t^-1 needs the letter after t^-1 to be a^(+-1)
          if (lcp < 2) continue;
          moves.push_back({w, p, static_cast<int>(g), inv, rot, 2});
        } else {
          // t q -> a t q'^-1 with q a prefix of phi(a)^(+-1)
          moves.push_back({w, p, static_cast<int>(g), inv, rot, std::min(lcp, ia + 1)});
        }
      }
    }
  }
  return moves;
}

}  // namespace detail

enum class AreaStatus { Found, NotNullHomotopic, Unknown };

inline const char* to_string(AreaStatus s) {
  switch (s) {
    case AreaStatus::Found: return "found";
    case AreaStatus::NotNullHomotopic: return "not-null-homotopic";
    case AreaStatus::Unknown: return "unknown";
  }
  return "?";
}

struct AreaCertificate {
  AreaStatus status = AreaStatus::Unknown;
  Word word;
  std::size_t area = 0;
  std::vector<RelatorStep> witness;
  std::size_t states = 0;
};

/// Minimal number of relator applications reducing w to the empty word,
/// by breadth-first search over cyclically normal words.
inline AreaCertificate area(const PositiveAutomorphism& phi, const Word& w, std::size_t max_area = 40,
                            std::size_t max_states = 2'000'000, std::size_t cap = kDefaultLengthCap) {
  AreaCertificate cert;
  cert.word = w;
  if (!is_trivial(phi, w, cap)) {
    cert.status = AreaStatus::NotNullHomotopic;
    return cert;
  }
  struct Node {
    Word word;
    std::size_t parent;
    RelatorStep step;
    std::size_t depth;
  };
  std::vector<Node> nodes;
  std::unordered_map<Word, std::size_t, WordHash> seen;
  const Word start = cyclic_normal(w);
  nodes.push_back({start, 0, {}, 0});
  seen.emplace(start, 0);
  std::optional<std::size_t> goal;
  if (start.empty()) goal = 0;
  for (std::size_t head = 0; head < nodes.size() && !goal; ++head) {
    if (nodes[head].depth >= max_area) break;
    for (auto& mv : detail::sweep_moves(phi, nodes[head].word)) {
      auto next = detail::apply_step(phi, mv);
      if (!next) throw std::logic_error("area: generated move does not apply");
      if (seen.count(*next)) continue;
      if (next->size() > cap) throw CapacityError("area search word too long", cap);
      const std::size_t id = nodes.size();
      seen.emplace(*next, id);
      nodes.push_back({*next, head, mv, nodes[head].depth + 1});
      if (next->empty()) {
        goal = id;
        break;
      }
      if (nodes.size() > max_states) {
        cert.states = nodes.size();
        return cert;  // Unknown
      }
    }
  }
  cert.states = nodes.size();
  if (!goal) return cert;
  cert.status = AreaStatus::Found;
  cert.area = nodes[*goal].depth;
  for (std::size_t id = *goal; id != 0; id = nodes[id].parent) cert.witness.push_back(nodes[id].step);
  std::reverse(cert.witness.begin(), cert.witness.end());
  return cert;
}

/// Replays a witness from scratch; returns the number of relator
/// applications if it ends at the empty word, nullopt otherwise.
inline std::optional<std::size_t> replay_witness(const PositiveAutomorphism& phi, const Word& w,
                                                 const std::vector<RelatorStep>& witness) {
  Word current = cyclic_normal(w);
  for (const auto& step : witness) {
    if (step.before != current) return std::nullopt;
    if (step.generator < 0 || static_cast<std::size_t>(step.generator) >= phi.rank()) return std::nullopt;
    auto next = detail::apply_step(phi, step);
    if (!next) return std::nullopt;
    current = *next;
  }
  if (!current.empty()) return std::nullopt;
  return witness.size();
}

// ---------------------------------------------------------------------------
// Stacks and sampling

/// t^-n w t^n phi^n(w)^-1
inline Word stack_word(const PositiveAutomorphism& phi, const Word& w, std::size_t n,
                       std::size_t cap = kDefaultLengthCap) {
  LetterSeq raw;
  for (std::size_t i = 0; i < n; ++i) raw.push_back(stable_letter(phi, true));
  raw.insert(raw.end(), w.begin(), w.end());
  for (std::size_t i = 0; i < n; ++i) raw.push_back(stable_letter(phi));
  Word tail = apply_power(phi, w, n, cap).inverse();
  raw.insert(raw.end(), tail.begin(), tail.end());
  return Word(std::move(raw));
}

/// sum_{j<n} |phi^j(w)|
inline std::size_t stack_area(const PositiveAutomorphism& phi, const Word& w, std::size_t n,
                              std::size_t cap = kDefaultLengthCap) {
  std::size_t total = 0;
  Word cur = w;
  for (std::size_t j = 0; j < n; ++j) {
    total += cur.size();
    if (j + 1 < n) cur = apply(phi, cur, cap);
  }
  return total;
}

struct DehnSample {
  std::size_t n = 0;
  std::size_t max_area = 0;
  std::size_t words_examined = 0;   // canonical candidates tested for triviality
  std::size_t trivial_words = 0;
  bool exhaustive = true;
  std::optional<Word> argmax;
  std::vector<std::size_t> max_area_by_length;  // index = length
};

namespace detail {

struct SampleSearch {
  const PositiveAutomorphism& phi;
  std::size_t n;
  std::size_t budget;
  std::size_t cap;
  std::size_t letters;  // m + 1
  std::vector<std::vector<BigInt>> functionals;  // integer kernel of (A - I), on F coordinates
  std::vector<std::int64_t> func_bound;          // max |y_i| per functional
  std::vector<std::int64_t> func_value;
  long tsum = 0;
  LetterSeq word;
  DehnSample* out;

  bool canonical(const Word& w) const {
    // least among rotations of w and of w^-1
    Word a = least_rotation(w), b = least_rotation(w.inverse());
    return a == w && !(b < w);
  }

  void visit() {
    const std::size_t len = word.size();
    const std::size_t remaining = n - len;
    if (static_cast<std::size_t>(std::abs(tsum)) > remaining) return;
    for (std::size_t f = 0; f < functionals.size(); ++f)
      if (std::abs(func_value[f]) > static_cast<std::int64_t>(remaining) * func_bound[f]) return;
    if (len > 0 && tsum == 0 && std::all_of(func_value.begin(), func_value.end(), [](auto v) { return v == 0; }) &&
        word.front() != word.back().inv()) {
      const Word w{std::span<const Letter>(word)};
      if (canonical(w)) {
        if (out->words_examined >= budget) {
          out->exhaustive = false;
          return;
        }
        ++out->words_examined;
        if (auto a = corridor_area(phi, w, cap)) {
          ++out->trivial_words;
          out->max_area_by_length[len] = std::max(out->max_area_by_length[len], *a);
          if (!out->argmax || *a > out->max_area) {
            out->max_area = *a;
            out->argmax = w;
          }
        }
      }
    }
    if (remaining == 0) return;
    for (std::size_t i = 0; i < letters; ++i) {
      for (bool inv : {false, true}) {
        Letter l(static_cast<int>(i), inv);
        if (!word.empty() && word.back() == l.inv()) continue;
        push(l, +1);
        visit();
        push(l, -1);
        if (!out->exhaustive) return;
      }
    }
  }

  void push(Letter l, int dir) {
    const int sgn = l.inverse() ? -1 : 1;
    if (static_cast<std::size_t>(l.index()) == letters - 1) {
      tsum += dir * sgn;
    } else {
      for (std::size_t f = 0; f < functionals.size(); ++f)
        func_value[f] += dir * sgn * static_cast<std::int64_t>(functionals[f][static_cast<std::size_t>(l.index())]);
    }
    if (dir > 0)
      word.push_back(l);
    else
      word.pop_back();
  }
};

}  // namespace detail

/// Exhaustive scan of cyclically reduced words of length <= n up to rotation
/// and inversion (area is invariant under both). Words that fail the
/// abelian obstructions are skipped; the rest are tested exactly and their
/// areas computed by corridor_area. `budget` caps the words tested.
inline DehnSample dehn_sample(const PositiveAutomorphism& phi, std::size_t n, std::size_t budget = 50'000'000,
                              std::size_t cap = kDefaultLengthCap) {
  DehnSample out;
  out.n = n;
  out.max_area_by_length.assign(n + 1, 0);
  const std::size_t m = phi.rank();
  IntMatrix AmI = phi.transition_matrix();
  for (std::size_t i = 0; i < m; ++i) AmI(i, i) -= 1;
  detail::SampleSearch search{phi, n, budget, cap, m + 1, integer_kernel(AmI), {}, {}, 0, {}, &out};
  for (const auto& y : search.functionals) {
    std::int64_t b = 0;
    for (const auto& c : y) b = std::max<std::int64_t>(b, static_cast<std::int64_t>(c < 0 ? BigInt(-c) : c));
    search.func_bound.push_back(b);
  }
  search.func_value.assign(search.functionals.size(), 0);
  search.visit();
  return out;
}

}  // namespace corridorlab
