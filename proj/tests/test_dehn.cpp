#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <unordered_map>

#include "corridorlab/dehn.hpp"

using namespace corridorlab;

namespace {

const Alphabet abc = Alphabet::standard(3);
Word W(const char* s) { return parse_word(s, abc); }
PositiveAutomorphism gersten() { return ensure_inverse(PositiveAutomorphism::create(abc, {W("a"), W("ab"), W("aac")})); }
const Alphabet P = presentation_alphabet(gersten());
Word T(const char* s) { return parse_word(s, P); }

// Naive area oracle. A move multiplies a rotation of the cyclic word by a
// rotated relator (any of them, either orientation) and cyclically reduces.
// Distances from w and from the empty word to depth 2 meet, so areas up to 4
// come out exact.
struct NaiveArea {
  const PositiveAutomorphism& phi;
  std::vector<Word> relators;
  std::unordered_map<Word, std::size_t, WordHash> from_empty;

  explicit NaiveArea(const PositiveAutomorphism& p) : phi(p) {
    for (std::size_t i = 0; i < phi.rank(); ++i)
      for (bool inv : {false, true}) {
        Word r = relator(phi, static_cast<int>(i));
        if (inv) r = r.inverse();
        for (std::size_t k = 0; k < r.size(); ++k) {
          LetterSeq rot;
          for (std::size_t j = 0; j < r.size(); ++j) rot.push_back(r[(k + j) % r.size()]);
          relators.push_back(Word(std::move(rot)));
        }
      }
    from_empty = ball(Word());
  }

  std::vector<Word> neighbours(const Word& w) const {
    std::vector<Word> out;
    const std::size_t cuts = std::max<std::size_t>(w.size(), 1);
    for (std::size_t p = 0; p < cuts; ++p) {
      LetterSeq rot;
      for (std::size_t j = 0; j < w.size(); ++j) rot.push_back(w[(p + j) % w.size()]);
      Word base(std::move(rot));
      for (const auto& r : relators) out.push_back(cyclic_normal(base * r));
    }
    return out;
  }

  std::unordered_map<Word, std::size_t, WordHash> ball(const Word& w) const {
    std::unordered_map<Word, std::size_t, WordHash> d{{cyclic_normal(w), 0}};
    std::vector<Word> layer{cyclic_normal(w)};
    for (std::size_t depth = 1; depth <= 2; ++depth) {
      std::vector<Word> next;
      for (const auto& u : layer)
        for (auto& v : neighbours(u))
          if (d.emplace(v, depth).second) next.push_back(v);
      layer = std::move(next);
    }
    return d;
  }

  std::optional<std::size_t> operator()(const Word& w) const {
    std::optional<std::size_t> best;
    for (const auto& [u, dw] : ball(w)) {
      auto it = from_empty.find(u);
      if (it != from_empty.end() && (!best || dw + it->second < *best)) best = dw + it->second;
    }
    return best;
  }
};

}  // namespace

TEST(Presentation, RelatorsAndAlphabet) {
  auto G = gersten();
  EXPECT_EQ(P.names().back(), "t");
  EXPECT_EQ(relator(G, 1), T("t'btb'a'"));
  EXPECT_EQ(relator(G, 2), T("t'ctc'a'a'"));
  EXPECT_EQ(stable_exponent(G, T("t't'bt")), -1);
  const Alphabet named({"a", "t"});
  auto phi = ensure_inverse(PositiveAutomorphism::identity(named));
  EXPECT_EQ(presentation_alphabet(phi).names().back(), "t_");
}

TEST(NormalForm, Triviality) {
  auto G = gersten();
  EXPECT_TRUE(is_trivial(G, relator(G, 0)));
  EXPECT_TRUE(is_trivial(G, T("t't'btt b'a'a'")));
  EXPECT_FALSE(is_trivial(G, T("aba'b'")));
  EXPECT_FALSE(is_trivial(G, T("t")));
  EXPECT_FALSE(is_trivial(G, T("t'btb'")));
  auto nf = normal_form(G, T("tb").letters());
  EXPECT_EQ(nf.k, 1);
  auto nf2 = normal_form(G, T("bt").letters());
  EXPECT_EQ(nf2.k, 1);
  EXPECT_EQ(nf2.f, W("ab"));
}

TEST(Area, Examples) {
  auto G = gersten();
  auto one = area(G, T("t'btb'a'"));
  ASSERT_EQ(one.status, AreaStatus::Found);
  EXPECT_EQ(one.area, 1u);
  auto three = area(G, T("t't'btt b'a'a'"));
  ASSERT_EQ(three.status, AreaStatus::Found);
  EXPECT_EQ(three.area, 3u);
  EXPECT_EQ(corridor_area(G, T("t't'btt b'a'a'")), std::optional<std::size_t>(3));
  EXPECT_EQ(area(G, T("aba'b'")).status, AreaStatus::NotNullHomotopic);
  EXPECT_FALSE(corridor_area(G, T("aba'b'")));
  auto zero = area(G, Word());
  EXPECT_EQ(zero.status, AreaStatus::Found);
  EXPECT_EQ(zero.area, 0u);
  EXPECT_EQ(area(G, T("abb'a'")).area, 0u);
  EXPECT_EQ(area(G, T("t't'btt b'a'a'"), 2).status, AreaStatus::Unknown);
  EXPECT_EQ(area(G, T("t't'btt b'a'a'"), 40, 3).status, AreaStatus::Unknown);
}

TEST(StackArea, Examples) {
  auto G = gersten();
  EXPECT_EQ(stack_area(G, W("b"), 2), 3u);
  EXPECT_EQ(stack_area(G, W("c"), 3), 9u);
  auto id = ensure_inverse(PositiveAutomorphism::identity(abc));
  for (std::size_t k = 1; k <= 4; ++k) EXPECT_EQ(stack_area(id, W("ab'c"), k), 3 * k);
  EXPECT_EQ(stack_word(G, W("b"), 2), T("t't'btt b'a'a'"));
}

TEST(StackArea, EqualsAreaForSingleLetters) {
  auto G = gersten();
  for (const char* x : {"a", "b", "c"})
    for (std::size_t n = 1; n <= 4; ++n) {
      Word sw = stack_word(G, W(x), n);
      ASSERT_EQ(corridor_area(G, sw), std::optional<std::size_t>(stack_area(G, W(x), n))) << x << " " << n;
    }
  for (std::size_t n = 1; n <= 3; ++n) {
    Word sw = stack_word(G, W("b"), n);
    auto cert = area(G, sw);
    ASSERT_EQ(cert.status, AreaStatus::Found);
    EXPECT_EQ(cert.area, n * (n + 1) / 2);
    EXPECT_EQ(replay_witness(G, sw, cert.witness), std::optional<std::size_t>(cert.area));
  }
}

TEST(Replay, RejectsTampering) {
  auto G = gersten();
  Word w = stack_word(G, W("b"), 2);
  auto cert = area(G, w);
  ASSERT_EQ(cert.status, AreaStatus::Found);
  ASSERT_EQ(cert.witness.size(), 3u);
  EXPECT_EQ(replay_witness(G, w, cert.witness), std::optional<std::size_t>(3));
  auto dropped = cert.witness;
  dropped.pop_back();
  EXPECT_FALSE(replay_witness(G, w, dropped));
  auto flipped = cert.witness;
  flipped[0].inverse = !flipped[0].inverse;
  EXPECT_FALSE(replay_witness(G, w, flipped));
  auto moved = cert.witness;
  moved[1].generator = (moved[1].generator + 1) % 3;
  EXPECT_FALSE(replay_witness(G, w, moved));
  EXPECT_FALSE(replay_witness(G, T("aba'b'"), {}));
}

TEST(Area, AgreesWithNaiveOracle) {
  auto G = gersten();
  NaiveArea naive(G);
  std::vector<Word> words{relator(G, 0), relator(G, 1).inverse(), stack_word(G, W("b"), 2), stack_word(G, W("a"), 3),
                          T("t'abtb'a'a'")};
  // every trivial cyclically reduced word of length <= 6, up to rotation
  std::function<void(LetterSeq&)> gen = [&](LetterSeq& seq) {
    if (!seq.empty() && seq.front() != seq.back().inv()) {
      Word w{std::span<const Letter>(seq)};
      if (least_rotation(w) == w && is_trivial(G, w)) words.push_back(w);
    }
    if (seq.size() == 6) return;
    for (int i = 0; i < 4; ++i)
      for (bool inv : {false, true}) {
        Letter l(i, inv);
        if (!seq.empty() && seq.back() == l.inv()) continue;
        seq.push_back(l);
        gen(seq);
        seq.pop_back();
      }
  };
  LetterSeq seq;
  gen(seq);
  ASSERT_GE(words.size(), 10u);
  for (const auto& w : words) {
    auto dp = corridor_area(G, w);
    ASSERT_TRUE(dp) << format_word(w, P);
    auto bfs = area(G, w);
    ASSERT_EQ(bfs.status, AreaStatus::Found);
    EXPECT_EQ(bfs.area, *dp) << format_word(w, P);
    if (*dp <= 4) EXPECT_EQ(naive(w), dp) << format_word(w, P);
  }
}

TEST(Area, DynamicProgramMatchesSearchOnSampleArgmax) {
  auto G = gersten();
  for (std::size_t n : {4, 6, 8}) {
    auto s = dehn_sample(G, n);
    ASSERT_TRUE(s.argmax);
    auto cert = area(G, *s.argmax);
    ASSERT_EQ(cert.status, AreaStatus::Found);
    EXPECT_EQ(cert.area, s.max_area);
    EXPECT_EQ(replay_witness(G, *s.argmax, cert.witness), std::optional<std::size_t>(s.max_area));
  }
}

TEST(Sample, PinnedValues) {
  auto G = gersten();
  EXPECT_EQ(dehn_sample(G, 1).max_area, 0u);
  EXPECT_EQ(dehn_sample(G, 2).max_area, 0u);
  auto s4 = dehn_sample(G, 4);
  EXPECT_TRUE(s4.exhaustive);
  EXPECT_EQ(s4.max_area, 1u);
  EXPECT_EQ(s4.trivial_words, 1u);
  EXPECT_EQ(dehn_sample(G, 6).max_area, 3u);
  auto s8 = dehn_sample(G, 8);
  EXPECT_EQ(s8.max_area, 5u);
  EXPECT_EQ(s8.words_examined, 5364u);
  EXPECT_EQ(s8.trivial_words, 65u);
  EXPECT_EQ(s8.max_area_by_length, (std::vector<std::size_t>{0, 0, 0, 0, 1, 2, 3, 3, 5}));
}

TEST(Sample, MonotoneAndBudget) {
  auto G = gersten();
  std::size_t prev = 0;
  for (std::size_t n = 1; n <= 8; ++n) {
    auto s = dehn_sample(G, n);
    ASSERT_TRUE(s.exhaustive);
    EXPECT_GE(s.max_area, prev);
    prev = s.max_area;
  }
  auto partial = dehn_sample(G, 8, 100);
  EXPECT_FALSE(partial.exhaustive);
  EXPECT_LE(partial.words_examined, 100u);
}

TEST(Sample, IdentityMap) {
  const Alphabet ab = Alphabet::standard(2);
  auto id = ensure_inverse(PositiveAutomorphism::identity(ab));
  auto s = dehn_sample(id, 6);
  EXPECT_TRUE(s.exhaustive);
  // Z^3: the commutator t'a'ta has area 1, t'a'b'tba area 2
  EXPECT_EQ(s.max_area_by_length[4], 1u);
  EXPECT_EQ(s.max_area_by_length[6], 2u);
}
