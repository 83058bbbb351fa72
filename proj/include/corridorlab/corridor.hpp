#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "huge_int.hpp"
#include "strata.hpp"

namespace corridorlab {

/// One folded t-corridor. Positions in the naive top index the unreduced
/// concatenation of images; `cancellations` is the non-crossing matching
/// produced by the stack scan.
struct Corridor {
  Word bottom;
  LetterSeq naive_top;
  std::vector<std::size_t> naive_source;                     // bottom edge of each naive position
  std::vector<std::pair<std::size_t, std::size_t>> cancellations;  // (left, right) naive positions
  std::vector<std::optional<std::size_t>> naive_to_top;      // surviving naive position -> top index
  std::vector<std::size_t> top_source;                       // naive position of each top letter
  Word top;
  std::vector<char> died;                                     // per bottom edge
  std::vector<std::optional<std::size_t>> preferred_naive;   // per bottom edge
  std::vector<std::optional<std::size_t>> preferred_top;     // per bottom edge, if the preferred future survives

  std::size_t area() const { return bottom.size(); }
  bool is_old(std::size_t naive_pos) const {
    auto e = naive_source[naive_pos];
    return preferred_naive[e] && *preferred_naive[e] == naive_pos;
  }
};

/// Folds the corridor with bottom `bottom`. Preferred futures are filled in
/// where `phi` defines them (always, for a conditioned map).
inline Corridor fold_corridor(const PositiveAutomorphism& phi, const Word& bottom,
                              const std::vector<std::optional<std::size_t>>& preferred,
                              std::size_t cap = kDefaultLengthCap) {
  Corridor c;
  c.bottom = bottom;
  c.died.assign(bottom.size(), 1);
  c.preferred_naive.resize(bottom.size());
  c.preferred_top.resize(bottom.size());
  for (std::size_t i = 0; i < bottom.size(); ++i) {
    const Letter l = bottom[i];
    const Word& img = phi.image(l.index());
    if (c.naive_top.size() + img.size() > cap) throw CapacityError("corridor naive top too long", cap);
    const std::size_t start = c.naive_top.size();
    for (std::size_t k = 0; k < img.size(); ++k) {
      c.naive_top.push_back(l.positive() ? img[k] : img[img.size() - 1 - k].inv());
      c.naive_source.push_back(i);
    }
    if (auto p = preferred[static_cast<std::size_t>(l.index())])
      c.preferred_naive[i] = start + (l.positive() ? *p : img.size() - 1 - *p);
  }
  std::vector<std::size_t> stack;
  for (std::size_t p = 0; p < c.naive_top.size(); ++p) {
    if (!stack.empty() && c.naive_top[stack.back()] == c.naive_top[p].inv()) {
      c.cancellations.emplace_back(stack.back(), p);
      stack.pop_back();
    } else {
      stack.push_back(p);
    }
  }
  std::sort(c.cancellations.begin(), c.cancellations.end());
  c.naive_to_top.resize(c.naive_top.size());
  LetterSeq top;
  for (std::size_t k = 0; k < stack.size(); ++k) {
    c.naive_to_top[stack[k]] = k;
    c.top_source.push_back(stack[k]);
    top.push_back(c.naive_top[stack[k]]);
    c.died[c.naive_source[stack[k]]] = 0;
  }
  c.top = Word(std::move(top));
  for (std::size_t i = 0; i < bottom.size(); ++i)
    if (c.preferred_naive[i]) c.preferred_top[i] = c.naive_to_top[*c.preferred_naive[i]];
  return c;
}

inline Corridor fold_corridor(const PositiveAutomorphism& phi, const Word& bottom,
                              std::size_t cap = kDefaultLengthCap) {
  return fold_corridor(phi, bottom, preferred_table(phi, supports_and_strata(phi)), cap);
}

enum class EventKind { Death, Cancellation, ConsumptionLeft, ConsumptionRight, NeuteringComplete, PincerTop };

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::Death: return "death";
    case EventKind::Cancellation: return "cancellation";
    case EventKind::ConsumptionLeft: return "consumptionLeft";
    case EventKind::ConsumptionRight: return "consumptionRight";
    case EventKind::NeuteringComplete: return "neuteringComplete";
    case EventKind::PincerTop: return "pincerTop";
  }
  return "?";
}

/// `positions` are bottom-edge indices at `time` except for Cancellation,
/// where they are naive-top positions. For consumption events the consumer
/// comes first.
struct FlowEvent {
  EventKind kind;
  std::size_t time;
  std::vector<std::size_t> positions;
  std::vector<int> colours;
};

struct CorridorStack {
  std::vector<Corridor> corridors;
  // colour[t][i], parent[t][i] for the bottom of corridor t; index n holds the final top.
  std::vector<std::vector<int>> colour;
  std::vector<std::vector<std::size_t>> parent;  // parent[0] is empty
  std::vector<FlowEvent> events;
  std::vector<char> constant_letter;  // per basis index

  std::size_t steps() const { return corridors.size(); }
  const Word& word_at(std::size_t t) const { return t < corridors.size() ? corridors[t].bottom : corridors.back().top; }
  std::size_t area() const {
    std::size_t a = 0;
    for (const auto& c : corridors) a += c.area();
    return a;
  }
  bool non_constant(Letter l) const { return !constant_letter[static_cast<std::size_t>(l.index())]; }
};

/// Builds `steps` corridors starting from w0. Colours are indices of the
/// edges of w0.
inline CorridorStack flow_stack(const PositiveAutomorphism& phi, const Word& w0, std::size_t steps,
                                std::size_t cap = kDefaultLengthCap) {
  if (steps == 0) throw InputError("flow_stack: steps must be >= 1");
  CorridorStack s;
  for (std::size_t x = 0; x < phi.rank(); ++x) s.constant_letter.push_back(is_constant_letter(phi, static_cast<int>(x)));
  std::vector<int> col(w0.size());
  for (std::size_t i = 0; i < w0.size(); ++i) col[i] = static_cast<int>(i);
  s.colour.push_back(col);
  s.parent.emplace_back();

  // Colours that start with a negative non-constant edge, for neutering events.
  std::vector<char> watching(w0.size(), 0);
  for (std::size_t i = 0; i < w0.size(); ++i) watching[i] = w0[i].inverse() && s.non_constant(w0[i]);

  const auto preferred = preferred_table(phi, supports_and_strata(phi));
  Word bottom = w0;
  for (std::size_t t = 0; t < steps; ++t) {
    Corridor c = fold_corridor(phi, bottom, preferred, cap);
    const auto& cb = s.colour[t];
    for (std::size_t i = 0; i < c.bottom.size(); ++i)
      if (c.died[i]) s.events.push_back({EventKind::Death, t, {i}, {cb[i]}});
    for (auto [p, q] : c.cancellations) {
      const std::size_t e1 = c.naive_source[p], e2 = c.naive_source[q];
      s.events.push_back({EventKind::Cancellation, t, {p, q}, {cb[e1], cb[e2]}});
      const bool old1 = c.is_old(p), old2 = c.is_old(q);
      if (old1 && !old2) s.events.push_back({EventKind::ConsumptionRight, t, {e2, e1}, {cb[e2], cb[e1]}});
      if (old2 && !old1) s.events.push_back({EventKind::ConsumptionLeft, t, {e1, e2}, {cb[e1], cb[e2]}});
      if (cb[e1] != cb[e2] && s.non_constant(c.naive_top[p]))
        s.events.push_back({EventKind::PincerTop, t, {e1, e2}, {cb[e1], cb[e2]}});
    }
    std::vector<int> next_col;
    std::vector<std::size_t> next_parent;
    for (std::size_t pos : c.top_source) {
      next_parent.push_back(c.naive_source[pos]);
      next_col.push_back(cb[c.naive_source[pos]]);
    }
    const Word& top = c.top;
    for (std::size_t mu = 0; mu < watching.size(); ++mu) {
      if (!watching[mu]) continue;
      bool still = false;
      for (std::size_t k = 0; k < top.size() && !still; ++k)
        still = next_col[k] == static_cast<int>(mu) && top[k].inverse() && s.non_constant(top[k]);
      if (!still) {
        s.events.push_back({EventKind::NeuteringComplete, t + 1, {}, {static_cast<int>(mu)}});
        watching[mu] = 0;
      }
    }
    s.colour.push_back(std::move(next_col));
    s.parent.push_back(std::move(next_parent));
    bottom = c.top;
    s.corridors.push_back(std::move(c));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Checks. Each report counts what it examined and lists violations.

struct CheckReport {
  bool ok = true;
  std::size_t examined = 0;
  std::size_t max_observed = 0;
  std::size_t vacuous = 0;
  std::vector<std::string> violations;

  void fail(std::string why) {
    ok = false;
    if (violations.size() < 20) violations.push_back(std::move(why));
  }
};

/// Every maximal interval of bottom edges dying in one corridor is shorter than B.
inline CheckReport check_bounded_cancellation(const CorridorStack& s, std::size_t B) {
  CheckReport r;
  for (std::size_t t = 0; t < s.steps(); ++t) {
    const auto& died = s.corridors[t].died;
    std::size_t run = 0;
    for (std::size_t i = 0; i <= died.size(); ++i) {
      if (i < died.size() && died[i]) {
        ++run;
        continue;
      }
      if (run > 0) {
        ++r.examined;
        r.max_observed = std::max(r.max_observed, run);
        if (run >= B)
          r.fail("time " + std::to_string(t) + ": " + std::to_string(run) + " consecutive edges die ending at " +
                 std::to_string(i));
      }
      run = 0;
    }
  }
  return r;
}

/// No cancellation pairs two preferred futures.
inline CheckReport check_old_new(const CorridorStack& s) {
  CheckReport r;
  for (std::size_t t = 0; t < s.steps(); ++t) {
    const auto& c = s.corridors[t];
    for (auto [p, q] : c.cancellations) {
      ++r.examined;
      if (c.is_old(p) && c.is_old(q))
        r.fail("time " + std::to_string(t) + ": old edges at naive positions " + std::to_string(p) + " and " +
               std::to_string(q) + " cancel");
    }
  }
  return r;
}

/// For every maximal run I of constant letters in a bottom word whose two
/// neighbours have distinct colours mu1, mu2 and which does not wholly die,
/// no non-constant mu1 edge cancels a non-constant mu2 edge from then on.
/// Runs that wholly die are counted as vacuous.
inline CheckReport check_buffer(const CorridorStack& s) {
  CheckReport r;
  // earliest buffered time per unordered colour pair
  std::map<std::pair<int, int>, std::size_t> buffered;
  for (std::size_t t = 0; t < s.steps(); ++t) {
    const auto& c = s.corridors[t];
    const auto& col = s.colour[t];
    const Word& w = c.bottom;
    std::size_t i = 0;
    while (i < w.size()) {
      if (s.non_constant(w[i])) {
        ++i;
        continue;
      }
      std::size_t j = i;
      bool all_die = true;
      for (; j < w.size() && !s.non_constant(w[j]); ++j)
        if (!c.died[j]) all_die = false;
      if (i > 0 && j < w.size() && col[i - 1] != col[j]) {
        if (all_die) {
          ++r.vacuous;
        } else {
          ++r.examined;
          auto key = std::minmax(col[i - 1], col[j]);
          if (!buffered.count(key)) buffered[key] = t;
        }
      }
      i = j;
    }
    for (auto [p, q] : c.cancellations) {
      if (!s.non_constant(c.naive_top[p])) continue;
      const int a = col[c.naive_source[p]], b = col[c.naive_source[q]];
      if (a == b) continue;
      auto it = buffered.find(std::minmax(a, b));
      if (it != buffered.end() && it->second <= t)
        r.fail("time " + std::to_string(t) + ": colours " + std::to_string(a) + " and " + std::to_string(b) +
               " buffered since time " + std::to_string(it->second) + " cancel non-constant edges");
    }
  }
  return r;
}

/// Each colour occupies one interval of every bottom word.
inline CheckReport check_colour_contiguity(const CorridorStack& s) {
  CheckReport r;
  for (std::size_t t = 0; t < s.colour.size(); ++t) {
    std::set<int> closed;
    const auto& col = s.colour[t];
    for (std::size_t i = 0; i < col.size(); ++i) {
      ++r.examined;
      if (closed.count(col[i])) r.fail("time " + std::to_string(t) + ": colour " + std::to_string(col[i]) + " split");
      if (i + 1 < col.size() && col[i + 1] != col[i]) closed.insert(col[i]);
    }
  }
  return r;
}

/// Ancestors at every earlier time are monotone in position, so the cells
/// between two cells descend from cells between their ancestors.
inline CheckReport check_connected_pasts(const CorridorStack& s) {
  CheckReport r;
  for (std::size_t t = 1; t < s.colour.size(); ++t) {
    std::vector<std::size_t> anc(s.parent[t].begin(), s.parent[t].end());
    for (std::size_t back = t - 1;; --back) {
      for (std::size_t i = 0; i + 1 < anc.size(); ++i) {
        ++r.examined;
        if (anc[i] > anc[i + 1])
          r.fail("time " + std::to_string(t) + ": ancestors at time " + std::to_string(back) + " out of order");
      }
      if (back == 0) break;
      for (auto& a : anc) a = s.parent[back][a];
    }
  }
  return r;
}

/// Stack identity: each top is the reduced naive top and the next bottom.
inline CheckReport check_stack_identity(const PositiveAutomorphism& phi, const CorridorStack& s) {
  CheckReport r;
  for (std::size_t t = 0; t < s.steps(); ++t) {
    ++r.examined;
    const auto& c = s.corridors[t];
    if (c.top != apply(phi, c.bottom)) r.fail("time " + std::to_string(t) + ": top is not phi(bottom)");
    if (t + 1 < s.steps() && s.corridors[t + 1].bottom != c.top)
      r.fail("time " + std::to_string(t) + ": next bottom differs from top");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Pincers

struct Pincer {
  std::size_t base_time = 0;
  std::size_t top_time = 0;
  std::size_t adjacent_time = 0;  // earliest time mu1, mu2 are adjacent between the paths
  bool became_adjacent = false;
  std::size_t life = 0;
  int mu1 = 0, mu2 = 0;
  std::vector<std::size_t> path1, path2;  // bottom-edge index at times 0..top_time
  std::set<int> consumed;                 // colours other than mu1, mu2 inside the pincer
  bool within_bound = true;
};

/// One pincer per cancellation between non-constant edges of distinct
/// colours. In a stack the base corridor is always time 0. If the colours are
/// never adjacent between the paths before the top, life is the top time.
inline std::vector<Pincer> detect_pincers(const CorridorStack& s, const std::optional<HugeInt>& T1 = std::nullopt) {
  std::vector<Pincer> out;
  for (std::size_t t = 0; t < s.steps(); ++t) {
    const auto& c = s.corridors[t];
    const auto& col = s.colour[t];
    for (auto [p, q] : c.cancellations) {
      if (!s.non_constant(c.naive_top[p])) continue;
      const std::size_t e1 = c.naive_source[p], e2 = c.naive_source[q];
      if (col[e1] == col[e2]) continue;
      Pincer pin;
      pin.top_time = t;
      pin.mu1 = col[e1];
      pin.mu2 = col[e2];
      pin.path1.assign(t + 1, 0);
      pin.path2.assign(t + 1, 0);
      pin.path1[t] = e1;
      pin.path2[t] = e2;
      for (std::size_t back = t; back > 0; --back) {
        pin.path1[back - 1] = s.parent[back][pin.path1[back]];
        pin.path2[back - 1] = s.parent[back][pin.path2[back]];
      }
      for (std::size_t tau = 0; tau <= t; ++tau) {
        bool adjacent = true;
        for (std::size_t i = pin.path1[tau]; i <= pin.path2[tau]; ++i) {
          int mu = s.colour[tau][i];
          if (mu != pin.mu1 && mu != pin.mu2) {
            pin.consumed.insert(mu);
            adjacent = false;
          }
        }
        if (adjacent && !pin.became_adjacent) {
          pin.became_adjacent = true;
          pin.adjacent_time = tau;
        }
      }
      pin.life = (pin.became_adjacent ? pin.adjacent_time : t) - pin.base_time;
      if (T1) pin.within_bound = HugeInt(static_cast<long long>(pin.life)) <= *T1 * HugeInt(static_cast<long long>(1 + pin.consumed.size()));
      out.push_back(std::move(pin));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Neutering

struct NeuteringResult {
  std::optional<std::size_t> steps;  // least k, or nullopt for Never(max_steps)
  std::size_t max_steps = 0;
  bool never() const { return !steps.has_value(); }
};

/// Least k <= max_steps such that phi^k(U V^-1) has negative letters only on
/// constant letters. k = 0 is allowed.
inline NeuteringResult measure_neutering(const PositiveAutomorphism& phi, const Word& U, const Word& V,
                                         std::size_t max_steps, std::size_t cap = kDefaultLengthCap) {
  if (!U.is_positive() || !V.is_positive()) throw InputError("measure_neutering: U and V must be positive");
  NeuteringResult r;
  r.max_steps = max_steps;
  Word w = U * V.inverse();
  for (std::size_t k = 0; k <= max_steps; ++k) {
    bool neutered = std::none_of(w.begin(), w.end(), [&](Letter l) {
      return l.inverse() && !is_constant_letter(phi, l.index());
    });
    if (neutered) {
      r.steps = k;
      return r;
    }
    if (k < max_steps) w = apply(phi, w, cap);
  }
  return r;
}

}  // namespace corridorlab
