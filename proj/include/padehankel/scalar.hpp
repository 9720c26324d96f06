#pragma once

#include <cmath>
#include <utility>

#include "padehankel/bigfloat.hpp"

namespace padehankel {

// Scalar rings used by the coefficient recurrences and the elimination
// routines. Each ring R provides
//   constant_like(const R& proto, const BigRational& q) -> R
//   pivot_size(const R& x) -> ordered magnitude proxy
//   is_exact_zero(const R& x)
// so the same templated algorithm runs exactly (rationals, polynomials),
// in floating point (double, BigFloat), in the complex plane, and with
// forward-mode derivatives.

template <class R>
struct Complex {
  R re;
  R im;

  Complex() = default;
  Complex(R real, R imag) : re(std::move(real)), im(std::move(imag)) {}

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator/(const Complex& a, const Complex& b) {
    R n = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  Complex operator-() const { return {-re, -im}; }
  Complex& operator+=(const Complex& b) { return *this = *this + b; }
  Complex& operator-=(const Complex& b) { return *this = *this - b; }
  Complex& operator*=(const Complex& b) { return *this = *this * b; }
  Complex& operator/=(const Complex& b) { return *this = *this / b; }

  R norm() const { return re * re + im * im; }
  Complex conj() const { return {re, -im}; }
};

template <class R>
R abs(const Complex<R>& z) {
  using std::sqrt;
  return sqrt(z.norm());
}

/// First-order dual number: val + der * eps with eps^2 = 0.
template <class S>
struct Dual {
  S val;
  S der;

  Dual() = default;
  Dual(S v, S d) : val(std::move(v)), der(std::move(d)) {}

  friend Dual operator+(const Dual& a, const Dual& b) { return {a.val + b.val, a.der + b.der}; }
  friend Dual operator-(const Dual& a, const Dual& b) { return {a.val - b.val, a.der - b.der}; }
  friend Dual operator*(const Dual& a, const Dual& b) { return {a.val * b.val, a.val * b.der + a.der * b.val}; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    S q = a.val / b.val;
    return {q, (a.der - q * b.der) / b.val};
  }
  Dual operator-() const { return {-val, -der}; }
  Dual& operator+=(const Dual& b) { return *this = *this + b; }
  Dual& operator-=(const Dual& b) { return *this = *this - b; }
  Dual& operator*=(const Dual& b) { return *this = *this * b; }
  Dual& operator/=(const Dual& b) { return *this = *this / b; }
};

// ---- constant_like ---------------------------------------------------------

inline double constant_like(double, const BigRational& q) { return q.get_d(); }
inline long double constant_like(long double, const BigRational& q) {
  return static_cast<long double>(q.get_num().get_d()) / static_cast<long double>(q.get_den().get_d());
}
inline BigRational constant_like(const BigRational&, const BigRational& q) { return q; }
inline BigFloat constant_like(const BigFloat& proto, const BigRational& q) { return BigFloat(q, proto.digits()); }

template <class R>
Complex<R> constant_like(const Complex<R>& proto, const BigRational& q) {
  return {constant_like(proto.re, q), constant_like(proto.re, BigRational(0))};
}
template <class S>
Dual<S> constant_like(const Dual<S>& proto, const BigRational& q) {
  return {constant_like(proto.val, q), constant_like(proto.val, BigRational(0))};
}

// ---- pivot_size / is_exact_zero -------------------------------------------

inline double pivot_size(double x) { return std::fabs(x); }
inline long double pivot_size(long double x) { return std::fabs(x); }
inline BigRational pivot_size(const BigRational& x) { return abs(x); }
inline BigFloat pivot_size(const BigFloat& x) { return x.abs(); }
template <class R>
auto pivot_size(const Complex<R>& z) {
  return z.norm();
}
template <class S>
auto pivot_size(const Dual<S>& x) {
  return pivot_size(x.val);
}

inline bool is_exact_zero(double x) { return x == 0.0; }
inline bool is_exact_zero(long double x) { return x == 0.0L; }
inline bool is_exact_zero(const BigRational& x) { return sgn(x) == 0; }
inline bool is_exact_zero(const BigFloat& x) { return x.is_zero(); }
template <class R>
bool is_exact_zero(const Complex<R>& z) {
  return is_exact_zero(z.re) && is_exact_zero(z.im);
}
template <class S>
bool is_exact_zero(const Dual<S>& x) {
  return is_exact_zero(x.val);
}

/// Real scalar helpers for complex BigFloat values.
using ComplexFloat = Complex<BigFloat>;

inline ComplexFloat make_complex(const BigFloat& re) { return {re, BigFloat(0L, re.digits())}; }

}  // namespace padehankel
