#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace corridorlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Dense row-major integer matrix. Small (rank x rank), so no attempt at blocking.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols, std::int64_t fill = 0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::int64_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::int64_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<std::int64_t> row(std::size_t r) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
  }

  std::int64_t row_sum(std::size_t r) const {
    std::int64_t s = 0;
    for (std::size_t c = 0; c < cols_; ++c) s += (*this)(r, c);
    return s;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k)
        if (a(i, k) != 0)
          for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += a(i, k) * b(k, j);
    return out;
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  std::vector<std::vector<std::int64_t>> to_rows() const {
    std::vector<std::vector<std::int64_t>> out;
    for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r));
    return out;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::int64_t> data_;
};

namespace detail {

using RationalRows = std::vector<std::vector<Rational>>;

inline RationalRows to_rational(const IntMatrix& m) {
  RationalRows a(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m(i, j);
  return a;
}

}  // namespace detail

inline BigInt determinant(const IntMatrix& m) {
  auto a = detail::to_rational(m);
  const std::size_t n = m.rows();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a[r][c] == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return boost::multiprecision::numerator(det);
}

/// Exact inverse over the rationals; nullopt when singular.
inline std::optional<detail::RationalRows> rational_inverse(const IntMatrix& m) {
  const std::size_t n = m.rows();
  auto a = detail::to_rational(m);
  detail::RationalRows inv(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    Rational piv = a[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] /= piv;
      inv[c][k] /= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rational f = a[r][c];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= f * a[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

/// Integer basis of the right null space {y : m y = 0} (each vector scaled to
/// clear denominators).
inline std::vector<std::vector<BigInt>> integer_kernel(const IntMatrix& m) {
  auto a = detail::to_rational(m);
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    Rational piv = a[r][c];
    for (auto& x : a[r]) x /= piv;
    for (std::size_t q = 0; q < rows; ++q) {
      if (q == r || a[q][c] == 0) continue;
      Rational f = a[q][c];
      for (std::size_t k = 0; k < cols; ++k) a[q][k] -= f * a[r][k];
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<std::vector<BigInt>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (std::find(pivot_col.begin(), pivot_col.end(), free) != pivot_col.end()) continue;
    std::vector<Rational> y(cols);
    y[free] = 1;
    for (std::size_t i = 0; i < pivot_col.size(); ++i) y[pivot_col[i]] = -a[i][free];
    BigInt lcm = 1;
    for (auto& v : y) lcm = boost::multiprecision::lcm(lcm, BigInt(boost::multiprecision::denominator(v)));
    std::vector<BigInt> iy;
    for (auto& v : y) iy.push_back(BigInt(boost::multiprecision::numerator(Rational(v * Rational(lcm)))));
    basis.push_back(std::move(iy));
  }
  return basis;
}

}  // namespace corridorlab
