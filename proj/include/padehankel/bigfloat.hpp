#pragma once

#include <mpfr.h>
#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdlib>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "padehankel/errors.hpp"

namespace padehankel {

using BigInt = mpz_class;
using BigRational = mpq_class;

/// Rounding direction used when a BigFloat is rendered with a fixed number of
/// decimals.
enum class DecimalRounding { Nearest, TowardZero, Up, Down };

/// Floating-point scalar backed by MPFR.
///
/// The precision (in decimal digits) is part of the value. Binary operations
/// produce a result at the larger of the two operand precisions, correctly
/// rounded to nearest. There is no process-wide default precision: every
/// construction names its precision.
class BigFloat {
 public:
  static constexpr int kDefaultDigits = 50;

  static mpfr_prec_t digits_to_bits(int digits) {
    return static_cast<mpfr_prec_t>(std::ceil(std::max(digits, 2) * 3.3219280948873623)) + 8;
  }

  BigFloat() : BigFloat(0L, kDefaultDigits) {}

  BigFloat(long value, int digits) {
    init(digits_to_bits(digits));
    mpfr_set_si(v_, value, MPFR_RNDN);
  }
  BigFloat(int value, int digits) : BigFloat(static_cast<long>(value), digits) {}

  BigFloat(double value, int digits) {
    init(digits_to_bits(digits));
    mpfr_set_d(v_, value, MPFR_RNDN);
  }

  BigFloat(const BigRational& value, int digits) {
    init(digits_to_bits(digits));
    mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
  }

  BigFloat(const BigInt& value, int digits) {
    init(digits_to_bits(digits));
    mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
  }

  static BigFloat parse(std::string_view text, int digits) {
    BigFloat out(0L, digits);
    std::string s(text);
    if (mpfr_set_str(out.v_, s.c_str(), 10, MPFR_RNDN) != 0) {
      throw Error(ErrorCode::BadParams, "not a decimal number: '" + s + "'");
    }
    return out;
  }

  static BigFloat pi(int digits) {
    BigFloat out(0L, digits);
    mpfr_const_pi(out.v_, MPFR_RNDN);
    return out;
  }

  /// 10^exponent at the given precision.
  static BigFloat pow10(long exponent, int digits) {
    BigFloat out(10L, digits);
    mpfr_pow_si(out.v_, out.v_, exponent, MPFR_RNDN);
    return out;
  }

  BigFloat(const BigFloat& other) {
    init(mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  // Moved-from objects keep a valid (swapped-in) value.
  BigFloat(BigFloat&& other) noexcept {
    init(mpfr_get_prec(other.v_));
    mpfr_swap(v_, other.v_);
  }
  BigFloat& operator=(const BigFloat& other) {
    if (this != &other) {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
      mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  mpfr_prec_t bits() const { return mpfr_get_prec(v_); }
  int digits() const { return static_cast<int>(std::floor((bits() - 8) / 3.3219280948873623)); }

  /// Copy rounded (or widened) to a new precision.
  BigFloat with_digits(int digits) const {
    BigFloat out(0L, digits);
    mpfr_set(out.v_, v_, MPFR_RNDN);
    return out;
  }

  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }

  /// Exact rational value of the binary representation.
  BigRational to_rational() const {
    BigRational q;
    mpfr_get_q(q.get_mpq_t(), v_);
    return q;
  }

  /// Base-10 exponent e such that |x| = m * 10^e with 1 <= m < 10; zero maps to
  /// a very negative number.
  long decimal_exponent() const {
    if (is_zero()) return -1000000000L;
    BigFloat a = abs();
    mpfr_log10(a.v_, a.v_, MPFR_RNDN);
    mpfr_floor(a.v_, a.v_);
    return mpfr_get_si(a.v_, MPFR_RNDN);
  }

  BigFloat abs() const {
    BigFloat out(*this);
    mpfr_abs(out.v_, out.v_, MPFR_RNDN);
    return out;
  }
  BigFloat sqrt() const {
    BigFloat out(*this);
    mpfr_sqrt(out.v_, out.v_, MPFR_RNDN);
    return out;
  }
  BigFloat log10() const {
    BigFloat out(*this);
    mpfr_log10(out.v_, out.v_, MPFR_RNDN);
    return out;
  }
  BigFloat gamma() const {
    BigFloat out(*this);
    mpfr_gamma(out.v_, out.v_, MPFR_RNDN);
    return out;
  }
  std::pair<BigFloat, BigFloat> sin_cos() const {
    BigFloat s(0L, digits()), c(0L, digits());
    mpfr_sin_cos(s.v_, c.v_, v_, MPFR_RNDN);
    return {std::move(s), std::move(c)};
  }

  BigFloat operator-() const {
    BigFloat out(*this);
    mpfr_neg(out.v_, out.v_, MPFR_RNDN);
    return out;
  }

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b) { return binary(a, b, mpfr_add); }
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b) { return binary(a, b, mpfr_sub); }
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b) { return binary(a, b, mpfr_mul); }
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b) { return binary(a, b, mpfr_div); }

  friend BigFloat operator*(const BigFloat& a, long k) {
    BigFloat out(a);
    mpfr_mul_si(out.v_, out.v_, k, MPFR_RNDN);
    return out;
  }
  friend BigFloat operator*(long k, const BigFloat& a) { return a * k; }
  friend BigFloat operator/(const BigFloat& a, long k) {
    BigFloat out(a);
    mpfr_div_si(out.v_, out.v_, k, MPFR_RNDN);
    return out;
  }
  friend BigFloat operator+(const BigFloat& a, long k) {
    BigFloat out(a);
    mpfr_add_si(out.v_, out.v_, k, MPFR_RNDN);
    return out;
  }
  friend BigFloat operator-(const BigFloat& a, long k) {
    BigFloat out(a);
    mpfr_sub_si(out.v_, out.v_, k, MPFR_RNDN);
    return out;
  }

  BigFloat& operator+=(const BigFloat& b) { return *this = *this + b; }
  BigFloat& operator-=(const BigFloat& b) { return *this = *this - b; }
  BigFloat& operator*=(const BigFloat& b) { return *this = *this * b; }
  BigFloat& operator/=(const BigFloat& b) { return *this = *this / b; }

  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const BigFloat& a, const BigFloat& b) {
    if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
    int c = mpfr_cmp(a.v_, b.v_);
    if (c < 0) return std::partial_ordering::less;
    if (c > 0) return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
  }

  /// Decimal rendering with `significant` significant digits. Plain notation
  /// for moderate exponents, scientific otherwise.
  std::string to_string(int significant) const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return sign() < 0 ? "-inf" : "inf";
    if (is_zero()) return "0";
    significant = std::max(significant, 1);
    mpfr_exp_t exp10 = 0;
    char* raw = mpfr_get_str(nullptr, &exp10, 10, static_cast<size_t>(significant), v_, MPFR_RNDN);
    std::string mant(raw);
    mpfr_free_str(raw);
    bool neg = !mant.empty() && mant[0] == '-';
    if (neg) mant.erase(0, 1);
    // value = 0.mant * 10^exp10
    std::string out = neg ? "-" : "";
    long e = static_cast<long>(exp10);
    if (e > -6 && e <= 40) {
      if (e <= 0) {
        out += "0." + std::string(static_cast<size_t>(-e), '0') + mant;
      } else if (static_cast<size_t>(e) >= mant.size()) {
        out += mant + std::string(static_cast<size_t>(e) - mant.size(), '0');
      } else {
        out += mant.substr(0, static_cast<size_t>(e)) + "." + mant.substr(static_cast<size_t>(e));
      }
      return out;
    }
    out += mant.substr(0, 1);
    if (mant.size() > 1) out += "." + mant.substr(1);
    out += "e" + std::to_string(e - 1);
    return out;
  }

  /// Fixed-point rendering with exactly `decimals` digits after the point,
  /// rounded in the requested direction.
  std::string to_fixed(int decimals, DecimalRounding mode) const {
    BigFloat scaled = *this * pow10(decimals, std::max(digits(), decimals + 10));
    mpfr_rnd_t rnd = MPFR_RNDN;
    switch (mode) {
      case DecimalRounding::Nearest: rnd = MPFR_RNDN; break;
      case DecimalRounding::TowardZero: rnd = MPFR_RNDZ; break;
      case DecimalRounding::Up: rnd = MPFR_RNDU; break;
      case DecimalRounding::Down: rnd = MPFR_RNDD; break;
    }
    BigInt z;
    mpfr_get_z(z.get_mpz_t(), scaled.v_, rnd);
    bool neg = z < 0;
    std::string digits_str = abs_str(z);
    if (decimals > 0) {
      if (digits_str.size() <= static_cast<size_t>(decimals)) {
        digits_str = std::string(static_cast<size_t>(decimals) + 1 - digits_str.size(), '0') + digits_str;
      }
      digits_str.insert(digits_str.size() - static_cast<size_t>(decimals), ".");
    }
    return neg ? "-" + digits_str : digits_str;
  }

  friend std::ostream& operator<<(std::ostream& os, const BigFloat& x) { return os << x.to_string(x.digits()); }

 private:
  void init(mpfr_prec_t bits) { mpfr_init2(v_, std::max<mpfr_prec_t>(bits, MPFR_PREC_MIN)); }

  static std::string abs_str(const BigInt& z) {
    BigInt a = z;
    if (a < 0) a = -a;
    return a.get_str(10);
  }

  template <class Op>
  static BigFloat binary(const BigFloat& a, const BigFloat& b, Op op) {
    BigFloat out(0L, 2);
    mpfr_set_prec(out.v_, std::max(a.bits(), b.bits()));
    op(out.v_, a.v_, b.v_, MPFR_RNDN);
    return out;
  }

  mpfr_t v_;
};

inline BigFloat abs(const BigFloat& x) { return x.abs(); }
inline BigFloat sqrt(const BigFloat& x) { return x.sqrt(); }

/// Number of leading decimal places on which a and b agree, judged by
/// |a - b| < 10^-k; capped at `cap`.
inline int agreed_decimals(const BigFloat& a, const BigFloat& b, int cap) {
  BigFloat diff = (a - b).abs();
  if (diff.is_zero()) return cap;
  long e = diff.decimal_exponent();  // diff in [10^e, 10^(e+1))
  long k = -(e + 1);
  if (k < 0) k = 0;
  return static_cast<int>(std::min<long>(k, cap));
}

}  // namespace padehankel
