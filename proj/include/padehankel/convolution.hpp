#pragma once

#include <cstddef>
#include <vector>

#include "padehankel/errors.hpp"
#include "padehankel/poly.hpp"

namespace padehankel {

/// x * q in ring T.
template <class T>
T scale(const T& x, const BigRational& q) {
  return x * constant_like(x, q);
}
inline UnknownPoly scale(const UnknownPoly& x, const BigRational& q) { return x * q; }

/// Truncated Cauchy product: out[j] = sum_{k<=j} a[k] b[j-k], j = 0..J.
template <class T>
std::vector<T> series_product(const std::vector<T>& a, const std::vector<T>& b, std::size_t J) {
  if (a.size() < J + 1 || b.size() < J + 1) {
    throw Error(ErrorCode::LengthTooShort, "series_product needs " + std::to_string(J + 1) + " terms");
  }
  std::vector<T> out;
  out.reserve(J + 1);
  for (std::size_t j = 0; j <= J; ++j) {
    T acc = a[0] * b[j];
    for (std::size_t k = 1; k <= j; ++k) acc = acc + a[k] * b[j - k];
    out.push_back(std::move(acc));
  }
  return out;
}

/// a^n truncated at index J, n in {2, 3}.
template <class T>
std::vector<T> series_power(const std::vector<T>& a, int n, std::size_t J) {
  if (n < 2 || n > 3) throw Error(ErrorCode::BadParams, "series_power supports n = 2 or 3");
  std::vector<T> sq = series_product(a, a, J);
  if (n == 2) return sq;
  return series_product(sq, a, J);
}

/// Coefficient list grown one index at a time, with memoized square and cube
/// coefficients so every recurrence costs O(j) ring products per step.
template <class T>
class SeriesBuilder {
 public:
  explicit SeriesBuilder(T zero) : zero_(std::move(zero)) {}

  std::size_t size() const { return f_.size(); }
  const T& operator[](std::size_t j) const { return f_[j]; }
  const std::vector<T>& coeffs() const { return f_; }
  std::vector<T> take() && { return std::move(f_); }
  const T& zero() const { return zero_; }

  void push(T value) { f_.push_back(std::move(value)); }

  /// (f^2)_k; needs f_0 .. f_k.
  const T& square(std::size_t k) {
    while (sq_.size() <= k) {
      std::size_t m = sq_.size();
      T acc = zero_;
      for (std::size_t a = 0; a <= m; ++a) acc = acc + f_[a] * f_[m - a];
      sq_.push_back(std::move(acc));
    }
    return sq_[k];
  }

  /// (f^3)_k; needs f_0 .. f_k.
  const T& cube(std::size_t k) {
    square(k);
    while (cube_.size() <= k) {
      std::size_t m = cube_.size();
      T acc = zero_;
      for (std::size_t a = 0; a <= m; ++a) acc = acc + f_[a] * sq_[m - a];
      cube_.push_back(std::move(acc));
    }
    return cube_[k];
  }

 private:
  T zero_;
  std::vector<T> f_;
  std::vector<T> sq_;
  std::vector<T> cube_;
};

}  // namespace padehankel
