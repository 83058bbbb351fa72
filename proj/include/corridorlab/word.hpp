#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace corridorlab {

/// A basis letter or its inverse. Stored as a signed 1-based index so that
/// inversion is negation and a word is a flat array of ints.
class Letter {
 public:
  constexpr Letter() = default;
  constexpr explicit Letter(int index, bool inverse = false)
      : code_(inverse ? -(index + 1) : index + 1) {}

  static constexpr Letter from_code(std::int32_t code) {
    Letter l;
    l.code_ = code;
    return l;
  }

  /// 0-based basis index.
  constexpr int index() const { return (code_ > 0 ? code_ : -code_) - 1; }
  constexpr bool inverse() const { return code_ < 0; }
  constexpr bool positive() const { return code_ > 0; }
  constexpr Letter inv() const { return from_code(-code_); }
  constexpr std::int32_t code() const { return code_; }

  friend constexpr bool operator==(Letter, Letter) = default;
  friend constexpr auto operator<=>(Letter a, Letter b) { return a.code_ <=> b.code_; }

 private:
  std::int32_t code_ = 1;
};

using LetterSeq = std::vector<Letter>;

/// Ordered, named basis a_1..a_m.
class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw InputError("alphabet must have rank >= 1");
    for (std::size_t i = 0; i < names_.size(); ++i) {
      const auto& n = names_[i];
      if (n.empty()) throw InputError("empty letter name");
      for (char ch : n) {
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
          throw InputError("letter name '" + n + "' must be alphanumeric");
      }
      if (!std::islower(static_cast<unsigned char>(n[0])))
        throw InputError("letter name '" + n + "' must start with a lowercase letter");
      for (std::size_t j = 0; j < i; ++j)
        if (names_[j] == n) throw InputError("duplicate letter name '" + n + "'");
    }
  }

  /// a_1, ..., a_m when `prefix` is "a"; single letters a, b, c, ... when empty.
  /// Single letters stop before 't', which is reserved for the stable letter.
  static Alphabet standard(std::size_t rank, const std::string& prefix = "") {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < rank; ++i) {
      if (prefix.empty() && rank <= 19)
        names.emplace_back(1, static_cast<char>('a' + i));
      else
        names.push_back((prefix.empty() ? std::string("a") : prefix) + std::to_string(i + 1));
    }
    return Alphabet(std::move(names));
  }

  std::size_t rank() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int index) const { return names_.at(static_cast<std::size_t>(index)); }

  int index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return static_cast<int>(i);
    return -1;
  }

  /// Alphabet extended by one extra letter (used for the stable letter t).
  Alphabet extended(const std::string& extra) const {
    auto names = names_;
    names.push_back(extra);
    return Alphabet(std::move(names));
  }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> names_;
};

/// Deterministic stack scan: cancels the leftmost adjacent inverse pair first.
inline LetterSeq free_reduce_seq(std::span<const Letter> raw) {
  LetterSeq out;
  out.reserve(raw.size());
  for (Letter l : raw) {
    if (!out.empty() && out.back() == l.inv())
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

/// Freely reduced word; the empty word is the identity.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Letter> letters) : letters_(free_reduce_seq(letters)) {}
  explicit Word(std::span<const Letter> raw) : letters_(free_reduce_seq(raw)) {}
  explicit Word(LetterSeq&& raw) : letters_(free_reduce_seq(raw)) {}

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }
  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }
  std::span<const Letter> letters() const { return letters_; }

  Word inverse() const {
    Word w;
    w.letters_.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(it->inv());
    return w;
  }

  bool is_positive() const {
    return std::all_of(letters_.begin(), letters_.end(), [](Letter l) { return l.positive(); });
  }

  std::size_t count(int index) const {
    return static_cast<std::size_t>(std::count_if(letters_.begin(), letters_.end(),
                                                  [&](Letter l) { return l.index() == index; }));
  }

  /// Positions (0-based) of the letter `l`, signs included.
  std::vector<std::size_t> occurrences(Letter l) const {
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < letters_.size(); ++i)
      if (letters_[i] == l) pos.push_back(i);
    return pos;
  }

  Word subword(std::size_t from, std::size_t len) const {
    Word w;
    w.letters_.assign(letters_.begin() + static_cast<std::ptrdiff_t>(from),
                      letters_.begin() + static_cast<std::ptrdiff_t>(from + len));
    return w;
  }

  friend Word operator*(const Word& u, const Word& v) {
    LetterSeq raw(u.letters_);
    raw.insert(raw.end(), v.letters_.begin(), v.letters_.end());
    return Word(std::move(raw));
  }

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& a, const Word& b) { return a.letters_ <=> b.letters_; }

 private:
  LetterSeq letters_;
};

inline Word free_reduce(std::span<const Letter> raw) { return Word(raw); }

/// x^power for a single letter (negative power inverts).
inline Word letter_power(int index, long power) {
  LetterSeq raw;
  for (long i = 0; i < (power < 0 ? -power : power); ++i) raw.emplace_back(index, power < 0);
  return Word(std::move(raw));
}

/// Cyclic reduction: strips matching x ... x^{-1} from both ends.
inline Word cyclic_reduce(const Word& w) {
  std::size_t lo = 0, hi = w.size();
  while (hi - lo >= 2 && w[lo] == w[hi - 1].inv()) {
    ++lo;
    --hi;
  }
  return w.subword(lo, hi - lo);
}

/// Lexicographically least rotation (by letter code) of a cyclically reduced word.
inline Word least_rotation(const Word& w) {
  const std::size_t n = w.size();
  if (n == 0) return w;
  std::size_t best = 0;
  for (std::size_t s = 1; s < n; ++s) {
    for (std::size_t k = 0; k < n; ++k) {
      auto a = w[(s + k) % n].code(), b = w[(best + k) % n].code();
      if (a != b) {
        if (a < b) best = s;
        break;
      }
    }
  }
  LetterSeq rot;
  rot.reserve(n);
  for (std::size_t k = 0; k < n; ++k) rot.push_back(w[(best + k) % n]);
  return Word(std::move(rot));
}

// ---------------------------------------------------------------------------
// Text form. Inverses are written with a trailing apostrophe ("a'b"); the
// parser also accepts uppercase initials ("Ab") and integer exponents
// ("a^-2c", "a1^3").

inline Word parse_word(std::string_view text, const Alphabet& alphabet) {
  LetterSeq raw;
  std::size_t i = 0;
  auto skip_space = [&] {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '.' ||
                               text[i] == '*'))
      ++i;
  };
  skip_space();
  if (text.substr(i) == "1") return Word();
  while (i < text.size()) {
    // Longest matching name, lowercase or with an uppercase initial.
    int found = -1;
    bool upper = false;
    std::size_t found_len = 0;
    for (std::size_t k = 0; k < alphabet.rank(); ++k) {
      const auto& n = alphabet.names()[k];
      if (n.size() <= found_len || i + n.size() > text.size()) continue;
      auto piece = text.substr(i, n.size());
      if (piece == n) {
        found = static_cast<int>(k), upper = false, found_len = n.size();
      } else if (std::toupper(static_cast<unsigned char>(n[0])) == piece[0] &&
                 piece.substr(1) == std::string_view(n).substr(1) &&
                 alphabet.index_of(std::string(piece)) < 0) {
        found = static_cast<int>(k), upper = true, found_len = n.size();
      }
    }
    if (found < 0)
      throw InputError("cannot parse word '" + std::string(text) + "' at offset " + std::to_string(i));
    i += found_len;
    long power = 1;
    while (i < text.size() && text[i] == '\'') {
      power = -power;
      ++i;
    }
    if (i < text.size() && text[i] == '^') {
      ++i;
      bool neg = false;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) neg = text[i++] == '-';
      if (i < text.size() && text[i] == '{') ++i;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) neg = text[i++] == '-';
      std::size_t start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (start == i) throw InputError("missing exponent in word '" + std::string(text) + "'");
      long e = std::stol(std::string(text.substr(start, i - start)));
      if (i < text.size() && text[i] == '}') ++i;
      power *= neg ? -e : e;
    }
    if (upper) power = -power;
    for (long r = 0; r < (power < 0 ? -power : power); ++r) raw.emplace_back(found, power < 0);
    skip_space();
  }
  return Word(std::move(raw));
}

inline LetterSeq parse_letters(std::string_view text, const Alphabet& alphabet) {
  // Raw (unreduced) sequence: parse each whitespace-separated token separately.
  LetterSeq raw;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (start == i) break;
    auto w = parse_word(text.substr(start, i - start), alphabet);
    raw.insert(raw.end(), w.begin(), w.end());
  }
  return raw;
}

/// True when some name is a proper prefix of another, so concatenation is ambiguous.
inline bool needs_separators(const Alphabet& alphabet) {
  for (const auto& a : alphabet.names())
    for (const auto& b : alphabet.names())
      if (a != b && b.compare(0, a.size(), a) == 0) return true;
  return false;
}

inline std::string format_letters(std::span<const Letter> letters, const Alphabet& alphabet) {
  const bool sep = needs_separators(alphabet);
  std::string out;
  for (Letter l : letters) {
    if (sep && !out.empty()) out += ' ';
    out += alphabet.name(l.index());
    if (l.inverse()) out += '\'';
  }
  return out;
}

inline std::string format_word(const Word& w, const Alphabet& alphabet) {
  return format_letters(w.letters(), alphabet);
}

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Letter l : w) h = (h ^ static_cast<std::size_t>(static_cast<std::uint32_t>(l.code()))) * 1099511628211ull;
    return h;
  }
};

}  // namespace corridorlab
