#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "matrix.hpp"
#include "word.hpp"

namespace corridorlab {

/// Concatenation of images, unreduced: the label of a corridor's naive top.
inline LetterSeq naive_expansion(std::span<const Word> images, std::span<const Letter> w,
                                 std::size_t cap = kDefaultLengthCap) {
  LetterSeq raw;
  for (Letter l : w) {
    if (static_cast<std::size_t>(l.index()) >= images.size())
      throw InputError("letter index " + std::to_string(l.index() + 1) + " outside alphabet of rank " +
                       std::to_string(images.size()));
    const Word& u = images[static_cast<std::size_t>(l.index())];
    if (raw.size() + u.size() > cap) throw CapacityError("naive expansion too long", cap);
    if (l.positive()) {
      raw.insert(raw.end(), u.begin(), u.end());
    } else {
      for (std::size_t k = u.size(); k-- > 0;) raw.push_back(u[k].inv());
    }
  }
  return raw;
}

/// Image of `w` under the endomorphism with the given basis images (any signs).
inline Word substitute(std::span<const Word> images, const Word& w, std::size_t cap = kDefaultLengthCap) {
  return Word(naive_expansion(images, w.letters(), cap));
}

/// entry(i, j) = number of occurrences of a_j^{+-1} in images[i].
inline IntMatrix occurrence_matrix(std::span<const Word> images, std::size_t rank) {
  IntMatrix m(rank, rank);
  for (std::size_t i = 0; i < images.size(); ++i)
    for (Letter l : images[i]) m(i, static_cast<std::size_t>(l.index())) += 1;
  return m;
}

/// Signed exponent sums (abelianization) of a word.
inline std::vector<std::int64_t> exponent_sums(const Word& w, std::size_t rank) {
  std::vector<std::int64_t> e(rank, 0);
  for (Letter l : w) e[static_cast<std::size_t>(l.index())] += l.inverse() ? -1 : 1;
  return e;
}

/// Positive automorphism: every basis image is a nonempty positive word and the
/// abelianized matrix is unimodular. Inverse images are optional but, when
/// present, always verified.
class PositiveAutomorphism {
 public:
  static PositiveAutomorphism create(Alphabet alphabet, std::vector<Word> images,
                                     std::optional<std::vector<Word>> inverse_images = std::nullopt) {
    if (images.size() != alphabet.rank())
      throw InputError("expected " + std::to_string(alphabet.rank()) + " images, got " +
                       std::to_string(images.size()));
    for (std::size_t i = 0; i < images.size(); ++i) {
      if (images[i].empty()) throw InputError("image of " + alphabet.name(static_cast<int>(i)) + " is empty");
      if (!images[i].is_positive())
        throw InputError("image of " + alphabet.name(static_cast<int>(i)) + " is not positive");
      for (Letter l : images[i])
        if (static_cast<std::size_t>(l.index()) >= alphabet.rank()) throw InputError("image letter outside alphabet");
    }
    auto det = determinant(occurrence_matrix(images, alphabet.rank()));
    if (det != 1 && det != -1)
      throw InputError("transition matrix has determinant " + det.str() + "; not an automorphism");
    PositiveAutomorphism phi;
    phi.alphabet_ = std::move(alphabet);
    phi.images_ = std::move(images);
    if (inverse_images) phi = phi.with_inverse(std::move(*inverse_images));
    return phi;
  }

  static PositiveAutomorphism identity(const Alphabet& alphabet) {
    std::vector<Word> images;
    for (std::size_t i = 0; i < alphabet.rank(); ++i) images.push_back(Word{Letter(static_cast<int>(i))});
    return create(alphabet, images, images);
  }

  /// Attaches inverse images after checking both composites are the identity.
  PositiveAutomorphism with_inverse(std::vector<Word> inverse_images) const {
    if (inverse_images.size() != rank()) throw InputError("inverse image count does not match rank");
    for (std::size_t i = 0; i < rank(); ++i) {
      Word gen{Letter(static_cast<int>(i))};
      if (substitute(images_, inverse_images[i]) != gen || substitute(inverse_images, images_[i]) != gen)
        throw InputError("supplied inverse image of " + alphabet_.name(static_cast<int>(i)) +
                         " does not invert the map");
    }
    PositiveAutomorphism phi = *this;
    phi.inverse_ = std::move(inverse_images);
    return phi;
  }

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t rank() const { return images_.size(); }
  const std::vector<Word>& images() const { return images_; }
  const Word& image(int index) const { return images_.at(static_cast<std::size_t>(index)); }
  bool has_inverse() const { return inverse_.has_value(); }
  const std::vector<Word>& inverse_images() const {
    if (!inverse_) throw InputError("automorphism has no inverse images; run find_inverse first");
    return *inverse_;
  }
  IntMatrix transition_matrix() const { return occurrence_matrix(images_, rank()); }

  friend bool operator==(const PositiveAutomorphism&, const PositiveAutomorphism&) = default;

 private:
  Alphabet alphabet_;
  std::vector<Word> images_;
  std::optional<std::vector<Word>> inverse_;
};

inline Word apply(const PositiveAutomorphism& phi, const Word& w, std::size_t cap = kDefaultLengthCap) {
  return substitute(phi.images(), w, cap);
}

inline Word apply_power(const PositiveAutomorphism& phi, Word w, std::size_t n,
                        std::size_t cap = kDefaultLengthCap) {
  for (std::size_t i = 0; i < n; ++i) w = apply(phi, w, cap);
  return w;
}

inline Word apply_inverse(const PositiveAutomorphism& phi, const Word& w, std::size_t cap = kDefaultLengthCap) {
  return substitute(phi.inverse_images(), w, cap);
}

/// phi o psi: a_i -> phi(psi(a_i)). Inverses compose when both are known.
inline PositiveAutomorphism compose(const PositiveAutomorphism& phi, const PositiveAutomorphism& psi,
                                    std::size_t cap = kDefaultLengthCap) {
  if (!(phi.alphabet() == psi.alphabet())) throw InputError("compose: alphabets differ");
  std::vector<Word> images;
  for (const Word& u : psi.images()) images.push_back(apply(phi, u, cap));
  std::optional<std::vector<Word>> inverse;
  if (phi.has_inverse() && psi.has_inverse()) {
    inverse.emplace();
    for (const Word& v : phi.inverse_images()) inverse->push_back(substitute(psi.inverse_images(), v, cap));
  }
  return PositiveAutomorphism::create(phi.alphabet(), std::move(images), std::move(inverse));
}

inline PositiveAutomorphism power(const PositiveAutomorphism& phi, std::size_t k,
                                  std::size_t cap = kDefaultLengthCap) {
  if (k == 0) throw InputError("power: exponent must be >= 1");
  PositiveAutomorphism result = phi;
  for (std::size_t i = 1; i < k; ++i) result = compose(phi, result, cap);
  return result;
}

namespace detail {

struct PreimageSearch {
  std::span<const Word> images;
  std::size_t rank;
  Word target;
  std::vector<std::int64_t> want;  // exponent sums the preimage must have
  std::vector<std::int64_t> have;
  LetterSeq current;
  std::size_t length = 0;

  std::int64_t distance() const {
    std::int64_t d = 0;
    for (std::size_t j = 0; j < rank; ++j) d += std::abs(want[j] - have[j]);
    return d;
  }

  bool dfs() {
    const auto remaining = static_cast<std::int64_t>(length - current.size());
    const auto d = distance();
    if (d > remaining || (remaining - d) % 2 != 0) return false;
    if (remaining == 0) return substitute(images, Word(std::span<const Letter>(current))) == target;
    for (std::size_t j = 0; j < rank; ++j) {
      for (bool inv : {false, true}) {
        Letter l(static_cast<int>(j), inv);
        if (!current.empty() && current.back() == l.inv()) continue;
        current.push_back(l);
        have[j] += inv ? -1 : 1;
        if (dfs()) return true;
        have[j] -= inv ? -1 : 1;
        current.pop_back();
      }
    }
    return false;
  }
};

}  // namespace detail

/// Searches, by increasing length up to `max_len`, for words v_i with
/// images(v_i) = a_i. The exponent sums of v_i are forced by the inverse of
/// the abelianized matrix, which prunes the search. nullopt means either the
/// map is not invertible or the bound is too small.
inline std::optional<std::vector<Word>> find_inverse(std::span<const Word> images, std::size_t max_len) {
  const std::size_t rank = images.size();
  auto inv = rational_inverse(occurrence_matrix(images, rank));
  if (!inv) return std::nullopt;
  std::vector<Word> result;
  for (std::size_t i = 0; i < rank; ++i) {
    // c(v) * A = e_i  =>  c(v) = e_i * A^{-1} = row i of A^{-1}.
    std::vector<std::int64_t> want(rank);
    for (std::size_t j = 0; j < rank; ++j) {
      const Rational& q = (*inv)[i][j];
      if (boost::multiprecision::denominator(q) != 1) return std::nullopt;
      want[j] = static_cast<std::int64_t>(boost::multiprecision::numerator(q));
    }
    detail::PreimageSearch search{images, rank, Word{Letter(static_cast<int>(i))}, want,
                                  std::vector<std::int64_t>(rank, 0), {}, 0};
    bool found = false;
    for (std::size_t len = 1; len <= max_len && !found; ++len) {
      search.length = len;
      search.current.clear();
      std::fill(search.have.begin(), search.have.end(), 0);
      found = search.dfs();
    }
    if (!found) return std::nullopt;
    result.emplace_back(std::span<const Letter>(search.current));
  }
  return result;
}

inline std::optional<std::vector<Word>> find_inverse(const PositiveAutomorphism& phi, std::size_t max_len) {
  return find_inverse(phi.images(), max_len);
}

/// Returns phi with inverse images attached, searching if none were supplied.
inline PositiveAutomorphism ensure_inverse(const PositiveAutomorphism& phi, std::size_t max_len = 8) {
  if (phi.has_inverse()) return phi;
  auto inv = find_inverse(phi, max_len);
  if (!inv)
    throw InputError("no inverse found with image length <= " + std::to_string(max_len) +
                     "; supply inverse_images or raise the bound");
  return phi.with_inverse(std::move(*inv));
}

}  // namespace corridorlab
