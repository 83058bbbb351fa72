#pragma once

#include <optional>
#include <random>
#include <vector>

#include "automorphism.hpp"
#include "conditioning.hpp"

namespace corridorlab {

/// a_i -> a_i a_j (or a_j a_i), with its inverse a_i -> a_i a_j^-1 (a_j^-1 a_i).
inline PositiveAutomorphism nielsen_move(const Alphabet& alphabet, std::size_t i, std::size_t j, bool on_left) {
  const std::size_t m = alphabet.rank();
  std::vector<Word> images, inverse;
  for (std::size_t k = 0; k < m; ++k) {
    const Letter x(static_cast<int>(k));
    if (k != i) {
      images.push_back(Word{x});
      inverse.push_back(Word{x});
      continue;
    }
    const Letter y(static_cast<int>(j));
    images.push_back(on_left ? Word{y, x} : Word{x, y});
    inverse.push_back(on_left ? Word{y.inv(), x} : Word{x, y.inv()});
  }
  return PositiveAutomorphism::create(alphabet, std::move(images)).with_inverse(std::move(inverse));
}

inline PositiveAutomorphism permutation_automorphism(const Alphabet& alphabet, const std::vector<std::size_t>& perm) {
  std::vector<Word> images(perm.size()), inverse(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    images[k] = Word{Letter(static_cast<int>(perm[k]))};
    inverse[perm[k]] = Word{Letter(static_cast<int>(k))};
  }
  return PositiveAutomorphism::create(alphabet, std::move(images)).with_inverse(std::move(inverse));
}

/// Random positive automorphism (with inverse) built from `moves` Nielsen
/// moves, optionally preceded by a letter permutation.
inline PositiveAutomorphism random_positive_automorphism(std::mt19937_64& rng, std::size_t rank, std::size_t moves,
                                                         std::size_t cap = kDefaultLengthCap) {
  const Alphabet alphabet = Alphabet::standard(rank);
  PositiveAutomorphism phi = PositiveAutomorphism::identity(alphabet);
  if (rank >= 2 && std::bernoulli_distribution(0.25)(rng)) {
    std::vector<std::size_t> perm(rank);
    for (std::size_t k = 0; k < rank; ++k) perm[k] = k;
    std::shuffle(perm.begin(), perm.end(), rng);
    phi = permutation_automorphism(alphabet, perm);
  }
  if (rank < 2) return phi;
  std::uniform_int_distribution<std::size_t> pick(0, rank - 1);
  for (std::size_t s = 0; s < moves; ++s) {
    std::size_t i = pick(rng), j = pick(rng);
    while (j == i) j = pick(rng);
    phi = compose(nielsen_move(alphabet, i, j, std::bernoulli_distribution(0.5)(rng)), phi, cap);
  }
  return phi;
}

/// Conditioned power of a random automorphism; nullopt when conditioning
/// needs more than max_k powers or the images outgrow `cap`.
inline std::optional<Conditioned> random_conditioned(std::mt19937_64& rng, std::size_t max_rank, std::size_t max_moves,
                                                     std::size_t max_k = 12, std::size_t cap = 4000) {
  const std::size_t rank = std::uniform_int_distribution<std::size_t>(1, max_rank)(rng);
  const std::size_t moves = std::uniform_int_distribution<std::size_t>(0, max_moves)(rng);
  try {
    auto phi = random_positive_automorphism(rng, rank, moves, cap);
    return condition(phi, max_k, cap);
  } catch (const CapacityError&) {
    return std::nullopt;
  }
}

/// Uniform freely reduced word of length exactly n over `rank` letters.
inline Word random_reduced_word(std::mt19937_64& rng, std::size_t rank, std::size_t n) {
  LetterSeq w;
  std::uniform_int_distribution<std::size_t> pick(0, 2 * rank - 1);
  while (w.size() < n) {
    const std::size_t k = pick(rng);
    const Letter l(static_cast<int>(k / 2), k % 2 == 1);
    if (!w.empty() && w.back() == l.inv()) continue;
    w.push_back(l);
  }
  return Word(std::move(w));
}

}  // namespace corridorlab
