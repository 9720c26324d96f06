#pragma once

#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "padehankel/errors.hpp"
#include "padehankel/scalar.hpp"

namespace padehankel {

/// Dense polynomial in the single unknown u with exact rational
/// coefficients; coeffs()[k] multiplies u^k. The zero polynomial has no
/// stored coefficients, and the highest stored coefficient is never zero.
class UnknownPoly {
 public:
  UnknownPoly() = default;
  explicit UnknownPoly(std::vector<BigRational> coeffs) : c_(std::move(coeffs)) { normalize(); }
  UnknownPoly(std::initializer_list<BigRational> coeffs) : c_(coeffs) { normalize(); }

  static UnknownPoly constant(const BigRational& q) { return UnknownPoly(std::vector<BigRational>{q}); }
  static UnknownPoly monomial(const BigRational& q, std::size_t power) {
    std::vector<BigRational> c(power + 1);
    c[power] = q;
    return UnknownPoly(std::move(c));
  }
  /// The unknown itself.
  static UnknownPoly u() { return monomial(1, 1); }

  const std::vector<BigRational>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  BigRational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : BigRational(0); }
  bool is_constant() const { return c_.size() <= 1; }

  /// Index of the lowest nonzero coefficient (order of vanishing at u = 0);
  /// -1 for the zero polynomial.
  long valuation() const {
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (sgn(c_[k]) != 0) return static_cast<long>(k);
    }
    return -1;
  }

  std::size_t nonzero_terms() const {
    std::size_t n = 0;
    for (const auto& q : c_) n += sgn(q) != 0 ? 1 : 0;
    return n;
  }

  /// p(u) / u^m; requires m <= valuation().
  UnknownPoly shift_down(std::size_t m) const {
    if (m == 0 || is_zero()) return *this;
    return UnknownPoly(std::vector<BigRational>(c_.begin() + static_cast<long>(m), c_.end()));
  }

  friend UnknownPoly operator+(const UnknownPoly& p, const UnknownPoly& q) {
    const auto& a = p.c_;
    const auto& b = q.c_;
    std::vector<BigRational> out(std::max(a.size(), b.size()));
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (k < a.size()) out[k] += a[k];
      if (k < b.size()) out[k] += b[k];
    }
    return UnknownPoly(std::move(out));
  }

  UnknownPoly operator-() const {
    UnknownPoly out = *this;
    for (auto& q : out.c_) q = -q;
    return out;
  }

  friend UnknownPoly operator-(const UnknownPoly& p, const UnknownPoly& q) { return p + (-q); }

  friend UnknownPoly operator*(const UnknownPoly& p, const UnknownPoly& q) {
    if (p.is_zero() || q.is_zero()) return {};
    if (q.c_.size() == 1) return p * q.c_[0];
    if (p.c_.size() == 1) return q * p.c_[0];
    std::vector<BigRational> out(p.c_.size() + q.c_.size() - 1);
    for (std::size_t i = 0; i < p.c_.size(); ++i) {
      if (sgn(p.c_[i]) == 0) continue;
      for (std::size_t j = 0; j < q.c_.size(); ++j) {
        if (sgn(q.c_[j]) == 0) continue;
        out[i + j] += p.c_[i] * q.c_[j];
      }
    }
    return UnknownPoly(std::move(out));
  }

  friend UnknownPoly operator*(const UnknownPoly& p, const BigRational& s) {
    if (sgn(s) == 0) return {};
    UnknownPoly out = p;
    for (auto& q : out.c_) q *= s;
    return out;
  }

  UnknownPoly& operator+=(const UnknownPoly& q) { return *this = *this + q; }
  UnknownPoly& operator-=(const UnknownPoly& q) { return *this = *this - q; }
  UnknownPoly& operator*=(const UnknownPoly& q) { return *this = *this * q; }

  friend bool operator==(const UnknownPoly& p, const UnknownPoly& q) { return p.c_ == q.c_; }

  /// Formal derivative with respect to u.
  UnknownPoly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<BigRational> out(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) out[k - 1] = c_[k] * static_cast<long>(k);
    return UnknownPoly(std::move(out));
  }

  /// Horner evaluation in any ring that supports constant_like. Exact for
  /// rational u; correctly rounded step by step for BigFloat u.
  template <class T>
  T eval(const T& u) const {
    if (c_.empty()) return constant_like(u, BigRational(0));
    T acc = constant_like(u, c_.back());
    for (std::size_t k = c_.size() - 1; k-- > 0;) {
      acc = acc * u;
      if (sgn(c_[k]) != 0) acc = acc + constant_like(u, c_[k]);
    }
    return acc;
  }

  /// Human-readable form, e.g. "-1/3 + u^4".
  std::string to_string(const std::string& var = "u") const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < c_.size(); ++k) {
      const BigRational& q = c_[k];
      if (sgn(q) == 0) continue;
      BigRational mag = abs(q);
      if (first) {
        if (sgn(q) < 0) os << "-";
      } else {
        os << (sgn(q) < 0 ? " - " : " + ");
      }
      first = false;
      bool unit = mag == 1;
      if (k == 0 || !unit) os << mag.get_str();
      if (k > 0) {
        if (!unit) os << "*";
        os << var;
        if (k > 1) os << "^" << k;
      }
    }
    return os.str();
  }

 private:
  void normalize() {
    for (auto& q : c_) q.canonicalize();
    while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
  }

  std::vector<BigRational> c_;
};

inline UnknownPoly constant_like(const UnknownPoly&, const BigRational& q) { return UnknownPoly::constant(q); }
inline bool is_exact_zero(const UnknownPoly& p) { return p.is_zero(); }

inline UnknownPoly poly_add(const UnknownPoly& p, const UnknownPoly& q) { return p + q; }
inline UnknownPoly poly_mul(const UnknownPoly& p, const UnknownPoly& q) { return p * q; }
inline UnknownPoly poly_derivative(const UnknownPoly& p) { return p.derivative(); }

template <class T>
T poly_eval(const UnknownPoly& p, const T& u) {
  return p.eval(u);
}

/// Quotient and remainder of polynomial long division; divisor must be
/// nonzero.
inline std::pair<UnknownPoly, UnknownPoly> poly_divmod(const UnknownPoly& num, const UnknownPoly& den) {
  if (den.is_zero()) throw Error(ErrorCode::IdenticallyZero, "polynomial division by zero");
  if (num.degree() < den.degree()) return {UnknownPoly{}, num};
  std::vector<BigRational> rem = num.coeffs();
  const auto& d = den.coeffs();
  std::size_t dn = d.size() - 1;
  std::vector<BigRational> quot(rem.size() - dn);
  BigRational lead_inv = 1 / d.back();
  for (std::size_t k = rem.size(); k-- > dn;) {
    if (sgn(rem[k]) == 0) continue;
    BigRational factor = rem[k] * lead_inv;
    quot[k - dn] = factor;
    for (std::size_t j = 0; j <= dn; ++j) rem[k - dn + j] -= factor * d[j];
  }
  rem.resize(dn);
  return {UnknownPoly(std::move(quot)), UnknownPoly(std::move(rem))};
}

/// Monic greatest common divisor over Q.
inline UnknownPoly poly_gcd(UnknownPoly a, UnknownPoly b) {
  while (!b.is_zero()) {
    UnknownPoly r = poly_divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return a * (1 / a.coeffs().back());
}

}  // namespace padehankel
