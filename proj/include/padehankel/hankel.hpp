#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "padehankel/series.hpp"

namespace padehankel {

/// Dimension D = N + 1 and offset d of H_D^d = |f_{i+j+d+1}|, i, j = 0..N.
struct HankelSpec {
  int D = 2;
  int d = 0;

  HankelSpec() = default;
  HankelSpec(int dim, int offset) : D(dim), d(offset) {
    if (D < 2) throw Error(ErrorCode::BadParams, "Hankel dimension D must be >= 2");
    if (d < 0) throw Error(ErrorCode::BadParams, "Hankel offset d must be >= 0");
  }

  /// Highest coefficient index that enters the matrix.
  std::size_t max_index() const { return static_cast<std::size_t>(2 * (D - 1) + d + 1); }
};

/// Dense square matrix, row-major.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t n, const T& fill) : n_(n), a_(n * n, fill) {}

  std::size_t size() const { return n_; }
  T& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  void swap_rows(std::size_t r, std::size_t s) {
    if (r == s) return;
    for (std::size_t j = 0; j < n_; ++j) std::swap(a_[r * n_ + j], a_[s * n_ + j]);
  }

 private:
  std::size_t n_ = 0;
  std::vector<T> a_;
};

/// Hankel matrix of an arbitrary coefficient list.
template <class T>
Matrix<T> hankel_from(const std::vector<T>& f, const HankelSpec& spec) {
  if (f.size() <= spec.max_index()) {
    throw Error(ErrorCode::NotEnoughCoefficients, "H_" + std::to_string(spec.D) + "^" + std::to_string(spec.d) +
                                                      " needs f_0..f_" + std::to_string(spec.max_index()));
  }
  const auto n = static_cast<std::size_t>(spec.D);
  Matrix<T> m(n, f[0]);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = f[i + j + static_cast<std::size_t>(spec.d) + 1];
  }
  return m;
}

inline Matrix<UnknownPoly> hankel_matrix(const SeriesExpansion& series, const HankelSpec& spec) {
  return hankel_from(series.coeffs, spec);
}

/// Exact determinant by fraction-free (Bareiss) elimination over Q[u].
/// Every division in the scheme is exact; a nonzero remainder is a logic
/// error and raises.
inline UnknownPoly det_exact(Matrix<UnknownPoly> m) {
  const std::size_t n = m.size();
  if (n == 0) throw Error(ErrorCode::DimensionMismatch, "determinant of an empty matrix");
  bool negate = false;
  UnknownPoly prev = UnknownPoly::constant(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k).is_zero()) {
      std::size_t r = k + 1;
      while (r < n && m(r, k).is_zero()) ++r;
      if (r == n) return {};
      m.swap_rows(k, r);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        UnknownPoly num = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        auto [quot, rem] = poly_divmod(num, prev);
        if (!rem.is_zero()) throw Error(ErrorCode::DimensionMismatch, "inexact Bareiss division");
        m(i, j) = std::move(quot);
      }
      m(i, k) = UnknownPoly{};
    }
    prev = m(k, k);
  }
  UnknownPoly det = m(n - 1, n - 1);
  return negate ? -det : det;
}

/// Determinant by Gaussian elimination with partial pivoting (largest
/// pivot_size). Works in any field-like scalar, including Dual numbers, where
/// it yields the determinant together with its derivative.
template <class T>
T determinant(Matrix<T> m) {
  const std::size_t n = m.size();
  if (n == 0) throw Error(ErrorCode::DimensionMismatch, "determinant of an empty matrix");
  T det = constant_like(m(0, 0), BigRational(1));
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    auto best = pivot_size(m(k, k));
    for (std::size_t r = k + 1; r < n; ++r) {
      auto s = pivot_size(m(r, k));
      if (s > best) {
        best = s;
        piv = r;
      }
    }
    if (is_exact_zero(m(piv, k))) return constant_like(m(0, 0), BigRational(0));
    if (piv != k) {
      m.swap_rows(k, piv);
      det = -det;
    }
    det = det * m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      T factor = m(i, k) / m(k, k);
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = m(i, j) - factor * m(k, j);
    }
  }
  return det;
}

/// H_D^d at a real point: entries are evaluated from the exact coefficient
/// polynomials, then eliminated at `precision` digits.
inline BigFloat det_eval(const SeriesExpansion& series, const HankelSpec& spec, const BigFloat& u, int precision) {
  if (series.coeffs.size() <= spec.max_index()) {
    throw Error(ErrorCode::NotEnoughCoefficients, "series too short for the requested determinant");
  }
  BigFloat x = u.with_digits(precision);
  std::vector<BigFloat> vals;
  vals.reserve(spec.max_index() + 1);
  for (std::size_t j = 0; j <= spec.max_index(); ++j) vals.push_back(series.coeffs[j].eval(x));
  return determinant(hankel_from(vals, spec));
}

/// Value and u-derivative of H_D^d at a real point. Each entry is carried as
/// a dual number (f_j(u), f_j'(u)) through the same pivoted elimination.
inline std::pair<BigFloat, BigFloat> det_eval_with_derivative(const SeriesExpansion& series, const HankelSpec& spec,
                                                              const BigFloat& u, int precision) {
  if (series.coeffs.size() <= spec.max_index()) {
    throw Error(ErrorCode::NotEnoughCoefficients, "series too short for the requested determinant");
  }
  BigFloat x = u.with_digits(precision);
  std::vector<Dual<BigFloat>> vals;
  vals.reserve(spec.max_index() + 1);
  for (std::size_t j = 0; j <= spec.max_index(); ++j) {
    vals.emplace_back(series.coeffs[j].eval(x), series.coeffs[j].derivative().eval(x));
  }
  Dual<BigFloat> det = determinant(hankel_from(vals, spec));
  return {det.val, det.der};
}

/// True when every u-dependent coefficient is a single monomial c_j u^(j+s)
/// with one common shift s, the structure that makes each Hankel determinant
/// a monomial whose only root is u = 0.
inline bool degenerate_check(const SeriesExpansion& series, std::size_t J) {
  J = std::min(J, series.coeffs.size() - 1);
  std::optional<long> shift;
  std::size_t dependent = 0;
  for (std::size_t j = 0; j <= J; ++j) {
    const UnknownPoly& c = series.coeffs[j];
    if (c.is_zero()) continue;
    if (c.degree() == 0) return false;
    if (c.nonzero_terms() != 1) return false;
    long s = c.degree() - static_cast<long>(j);
    if (shift && *shift != s) return false;
    shift = s;
    ++dependent;
  }
  return dependent > 0;
}

/// H and dH/du at a complex point.
struct HankelValue {
  ComplexFloat value;
  ComplexFloat derivative;
};

/// Evaluates H_D^d(u) for a fixed exact series (used when the coefficients
/// are given rather than generated, e.g. rescaled series).
class SeriesHankel {
 public:
  SeriesHankel(SeriesExpansion series, HankelSpec spec) : series_(std::move(series)), spec_(spec) {
    if (series_.coeffs.size() <= spec_.max_index()) {
      throw Error(ErrorCode::NotEnoughCoefficients, "series too short for the requested determinant");
    }
    for (std::size_t j = 0; j <= spec_.max_index(); ++j) derivs_.push_back(series_.coeffs[j].derivative());
  }

  const HankelSpec& spec() const { return spec_; }

  HankelValue evaluate(const ComplexFloat& u) const {
    std::vector<Dual<ComplexFloat>> vals;
    vals.reserve(spec_.max_index() + 1);
    for (std::size_t j = 0; j <= spec_.max_index(); ++j) {
      vals.emplace_back(series_.coeffs[j].eval(u), derivs_[j].eval(u));
    }
    Dual<ComplexFloat> det = determinant(hankel_from(vals, spec_));
    return {det.val, det.der};
  }

 private:
  SeriesExpansion series_;
  HankelSpec spec_;
  std::vector<UnknownPoly> derivs_;
};

/// Evaluates H_D^d(u) by running the problem's recurrence directly in
/// complex dual arithmetic at u; equivalent to evaluating the exact
/// coefficient polynomials, without ever forming them.
class RecurrenceHankel {
 public:
  RecurrenceHankel(ProblemDefinition problem, HankelSpec spec) : problem_(std::move(problem)), spec_(spec) {}

  const HankelSpec& spec() const { return spec_; }
  const ProblemDefinition& problem() const { return problem_; }

  HankelValue evaluate(const ComplexFloat& u) const {
    const int digits = u.re.digits();
    Dual<ComplexFloat> x{u, make_complex(BigFloat(1L, digits))};
    std::vector<Dual<ComplexFloat>> vals = expand(problem_, x, spec_.max_index());
    Dual<ComplexFloat> det = determinant(hankel_from(vals, spec_));
    return {det.val, det.der};
  }

 private:
  ProblemDefinition problem_;
  HankelSpec spec_;
};

}  // namespace padehankel
