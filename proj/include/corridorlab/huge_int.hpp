#pragma once

#include <cmath>
#include <compare>
#include <iomanip>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "error.hpp"
#include "matrix.hpp"

namespace corridorlab {

using BigFloat = boost::multiprecision::cpp_bin_float_50;

/// Values above this many bits are not expanded; word counts past it become
/// symbolic atoms.
inline constexpr std::size_t kMaterializeBits = std::size_t{1} << 17;

class HugeInt;

namespace detail {

struct Atom {
  unsigned base = 2;
  std::shared_ptr<const HugeInt> length;
  std::string key;
};

using AtomPtr = std::shared_ptr<const Atom>;
// Sorted by atom key; exponents >= 1.
using Monomial = std::vector<std::pair<AtomPtr, unsigned>>;

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (int c = a[i].first->key.compare(b[i].first->key); c != 0) return c < 0;
      if (a[i].second != b[i].second) return a[i].second < b[i].second;
    }
    return a.size() < b.size();
  }
};

inline Monomial multiply(const Monomial& a, const Monomial& b) {
  Monomial out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first->key < b[j].first->key)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first->key < a[i].first->key) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i, ++j;
    }
  }
  return out;
}

struct Interval {
  BigFloat lo, hi;
};

inline BigFloat log2_of(const BigInt& x) {
  // x > 0
  return boost::multiprecision::log2(BigFloat(x));
}

}  // namespace detail

/// Exact nonnegative integer that may be too large to write out. A value is a
/// polynomial with integer coefficients in opaque atoms N_b(L) = sum_{i<=L} b^i,
/// kept only when N_b(L) would exceed kMaterializeBits. Equality is structural
/// (exact); ordering falls back to interval bounds on log2 and throws when
/// they cannot separate the operands.
class HugeInt {
 public:
  HugeInt() = default;
  HugeInt(long long v) : HugeInt(BigInt(v)) {}  // NOLINT
  HugeInt(BigInt v) {                           // NOLINT
    if (v != 0) terms_.emplace(detail::Monomial{}, std::move(v));
  }

  /// Number of words of length <= L over `base` letters.
  static HugeInt word_count(unsigned base, const HugeInt& length) {
    if (base < 2) throw InputError("word_count: base must be >= 2");
    if (length.is_exact()) {
      BigInt L = length.exact();
      if (L < 0) throw InputError("word_count: negative length");
      double bits_per = std::log2(static_cast<double>(base));
      if (L < BigInt(kMaterializeBits) && static_cast<double>(L + 1) * bits_per <= kMaterializeBits) {
        BigInt b = base;
        return HugeInt((boost::multiprecision::pow(b, static_cast<unsigned>(L) + 1) - 1) / (b - 1));
      }
    }
    auto atom = std::make_shared<detail::Atom>();
    atom->base = base;
    atom->length = std::make_shared<const HugeInt>(length);
    atom->key = "N" + std::to_string(base) + "(" + length.to_string() + ")";
    HugeInt h;
    h.terms_.emplace(detail::Monomial{{atom, 1u}}, BigInt(1));
    return h;
  }

  bool is_exact() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }
  BigInt exact() const {
    if (!is_exact()) throw Error("symbolic", "value " + to_string() + " is not materialized");
    return terms_.empty() ? BigInt(0) : terms_.begin()->second;
  }

  friend HugeInt operator+(const HugeInt& a, const HugeInt& b) {
    HugeInt out = a;
    for (const auto& [mono, c] : b.terms_) out.add_term(mono, c);
    return out;
  }
  friend HugeInt operator-(const HugeInt& a, const HugeInt& b) {
    HugeInt out = a;
    for (const auto& [mono, c] : b.terms_) out.add_term(mono, -c);
    return out;
  }
  friend HugeInt operator*(const HugeInt& a, const HugeInt& b) {
    HugeInt out;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add_term(detail::multiply(ma, mb), ca * cb);
    return out;
  }
  HugeInt& operator+=(const HugeInt& o) { return *this = *this + o; }
  HugeInt& operator*=(const HugeInt& o) { return *this = *this * o; }

  friend bool operator==(const HugeInt& a, const HugeInt& b) { return (a - b).terms_.empty(); }

  /// -1, 0, +1. Throws Error("undecidable") if the bounds cannot separate.
  int sign() const {
    if (terms_.empty()) return 0;
    if (is_exact()) return terms_.begin()->second < 0 ? -1 : 1;
    // Dominant-term test on log2 magnitudes, or on log2 log2 once the
    // magnitudes themselves are out of float range (nested atoms).
    std::vector<detail::Interval> logs;
    try {
      for (const auto& [mono, c] : terms_) logs.push_back(term_log2(mono, c));
    } catch (const Error& e) {
      if (e.code() != "undecidable") throw;
      return sign_nested();
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < logs.size(); ++i)
      if (logs[i].lo > logs[best].lo) best = i;
    BigFloat rest_hi = -1;
    bool any_rest = false;
    for (std::size_t i = 0; i < logs.size(); ++i) {
      if (i == best) continue;
      rest_hi = any_rest ? std::max(rest_hi, logs[i].hi) : logs[i].hi;
      any_rest = true;
    }
    if (any_rest) rest_hi += boost::multiprecision::log2(BigFloat(logs.size()));
    auto it = terms_.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(best));
    if (!any_rest || logs[best].lo > rest_hi + 1) return it->second < 0 ? -1 : 1;
    auto v = value_bounds();
    if (v.lo > 0) return 1;
    if (v.hi < 0) return -1;
    throw Error("undecidable", "cannot decide the sign of " + to_string());
  }

  friend std::strong_ordering operator<=>(const HugeInt& a, const HugeInt& b) {
    int s = (a - b).sign();
    return s < 0 ? std::strong_ordering::less : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  /// Bounds on log2 of the value (which must be positive).
  detail::Interval log2_bounds() const {
    if (sign() <= 0) throw Error("undecidable", "log2 of a non-positive value");
    if (is_exact()) {
      auto l = detail::log2_of(exact());
      return {l * (1 - BigFloat(1e-40)), l * (1 + BigFloat(1e-40)) + BigFloat(1e-40)};
    }
    BigFloat lo = -1, hi = 0;
    bool first = true;
    for (const auto& [mono, c] : terms_) {
      if (c < 0) throw Error("undecidable", "log2 bounds need nonnegative coefficients: " + to_string());
      auto t = term_log2(mono, c);
      lo = first ? t.lo : std::max(lo, t.lo);
      hi = first ? t.hi : std::max(hi, t.hi);
      first = false;
    }
    hi += boost::multiprecision::log2(BigFloat(terms_.size()));
    return {lo, hi};
  }

  /// Bounds on log2 log2 of the value; works for one level of atom nesting.
  detail::Interval loglog2_bounds() const {
    if (sign() <= 0) throw Error("undecidable", "log2 of a non-positive value");
    BigFloat lo = 0, hi = 0;
    bool first = true;
    for (const auto& [mono, c] : terms_) {
      if (c < 0) throw Error("undecidable", "log2 bounds need nonnegative coefficients: " + to_string());
      auto t = term_loglog2(mono, c);
      lo = first ? t.lo : std::max(lo, t.lo);
      hi = first ? t.hi : std::max(hi, t.hi);
      first = false;
    }
    // log2 of a sum of n terms adds at most log2 n to log2, which is tiny here
    hi += 1;
    return {lo, hi};
  }

  /// Decimal digits when exact; otherwise the symbolic form.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [mono, c] = *it;
      BigInt mag = c < 0 ? BigInt(-c) : c;
      if (!out.empty()) out += c < 0 ? " - " : " + ";
      else if (c < 0) out += "-";
      bool wrote = false;
      if (mono.empty() || mag != 1) {
        out += mag.str();
        wrote = true;
      }
      for (const auto& [atom, e] : mono) {
        if (wrote) out += "*";
        out += atom->key;
        if (e > 1) out += "^" + std::to_string(e);
        wrote = true;
      }
    }
    return out;
  }

  /// Short human form: the decimal value when it has at most `max_digits`
  /// digits, else an order-of-magnitude estimate.
  std::string brief(std::size_t max_digits = 40) const {
    if (is_exact()) {
      auto s = exact().str();
      if (s.size() <= max_digits) return s;
      return s.substr(0, 1) + "." + s.substr(1, 5) + "e" + std::to_string(s.size() - 1);
    }
    std::ostringstream os;
    os << std::setprecision(6);
    try {
      auto l = log2_bounds();
      os << "10^(" << l.lo * boost::multiprecision::log10(BigFloat(2)) << ")";
    } catch (const Error&) {
      auto l = loglog2_bounds();
      os << "2^(2^(" << l.lo << "))";
    }
    return os.str();
  }

 private:
  void add_term(const detail::Monomial& mono, const BigInt& c) {
    if (c == 0) return;
    auto it = terms_.find(mono);
    if (it == terms_.end()) {
      terms_.emplace(mono, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  static detail::Interval atom_log2(const detail::Atom& a) {
    // b^L <= N_b(L) < b^(L+1)
    auto L = a.length->value_bounds();
    BigFloat lb = boost::multiprecision::log2(BigFloat(a.base));
    return {L.lo * lb, (L.hi + 1) * lb};
  }

  // log2 log2 |c * prod atoms|. log2 of the magnitude is a sum of positive
  // parts; log2 of a sum lies in [max part, max part + log2 #parts].
  static detail::Interval term_loglog2(const detail::Monomial& mono, const BigInt& c) {
    BigInt mag = c < 0 ? BigInt(-c) : c;
    auto msb = static_cast<long long>(boost::multiprecision::msb(mag));
    BigFloat lo = -1, hi = boost::multiprecision::log2(BigFloat(msb + 1));
    if (msb >= 1) lo = boost::multiprecision::log2(BigFloat(msb));
    for (const auto& [atom, e] : mono) {
      BigFloat lb = boost::multiprecision::log2(boost::multiprecision::log2(BigFloat(atom->base)));
      BigFloat le = boost::multiprecision::log2(BigFloat(e));
      // log2 N_b(L) in [L log2 b, (L+1) log2 b]; L is large for any atom
      detail::Interval l = atom->length->is_exact() ? detail::Interval{detail::log2_of(atom->length->exact()),
                                                                       detail::log2_of(atom->length->exact())}
                                                    : atom->length->log2_bounds();
      lo = std::max(lo, l.lo + lb + le);
      hi = std::max(hi, l.hi + BigFloat(1e-3) + lb + le);
    }
    hi += boost::multiprecision::log2(BigFloat(mono.size() + 1));
    return {lo, hi};
  }

  int sign_nested() const {
    std::vector<detail::Interval> ll;
    for (const auto& [mono, c] : terms_) ll.push_back(term_loglog2(mono, c));
    std::size_t best = 0;
    for (std::size_t i = 1; i < ll.size(); ++i)
      if (ll[i].lo > ll[best].lo) best = i;
    BigFloat rest_hi = -1;
    for (std::size_t i = 0; i < ll.size(); ++i)
      if (i != best) rest_hi = std::max(rest_hi, ll[i].hi);
    // 2^a >= 2^b + log2(#terms) + 1 once a >= b + 1 and 2^(a-1) covers the log
    const BigFloat need = boost::multiprecision::log2(boost::multiprecision::log2(BigFloat(ll.size() + 1)) + 1) + 1;
    if (ll[best].lo >= rest_hi + 1 && ll[best].lo >= need) {
      auto it = terms_.begin();
      std::advance(it, static_cast<std::ptrdiff_t>(best));
      return it->second < 0 ? -1 : 1;
    }
    throw Error("undecidable", "cannot decide the sign of " + to_string());
  }

  static detail::Interval term_log2(const detail::Monomial& mono, const BigInt& c) {
    BigInt mag = c < 0 ? BigInt(-c) : c;
    auto msb = static_cast<long long>(boost::multiprecision::msb(mag));
    detail::Interval out{BigFloat(msb), BigFloat(msb + 1)};
    for (const auto& [atom, e] : mono) {
      auto a = atom_log2(*atom);
      out.lo += a.lo * e;
      out.hi += a.hi * e;
    }
    return out;
  }

  /// Bounds on the value itself; only finite when no term is astronomically large.
  detail::Interval value_bounds() const {
    if (is_exact()) {
      BigFloat v(exact());
      return {v * (1 - BigFloat(1e-40)) - 1, v * (1 + BigFloat(1e-40)) + 1};
    }
    BigFloat lo = 0, hi = 0;
    for (const auto& [mono, c] : terms_) {
      auto t = term_log2(mono, c);
      if (t.hi > BigFloat(1'000'000'000)) throw Error("undecidable", "value too large to bound: " + to_string());
      BigFloat a = boost::multiprecision::exp2(t.lo), b = boost::multiprecision::exp2(t.hi);
      if (c > 0) {
        lo += a;
        hi += b;
      } else {
        lo -= b;
        hi -= a;
      }
    }
    return {lo, hi};
  }

  std::map<detail::Monomial, BigInt, detail::MonomialLess> terms_;
};

inline HugeInt max(const HugeInt& a, const HugeInt& b) { return a < b ? b : a; }

}  // namespace corridorlab
