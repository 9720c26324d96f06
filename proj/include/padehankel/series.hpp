#pragma once

#include <string>
#include <utility>
#include <vector>

#include "padehankel/problems.hpp"

namespace padehankel {

/// f(x) = x^alpha * sum_j coeffs[j] x^(beta j), each coefficient exact in the
/// unknown.
struct SeriesExpansion {
  BigRational alpha;
  BigRational beta;
  std::vector<UnknownPoly> coeffs;
  std::string unknown_name;

  std::size_t size() const { return coeffs.size(); }

  /// Every coefficient multiplied by the same nonzero rational.
  SeriesExpansion scaled(const BigRational& factor) const {
    SeriesExpansion out = *this;
    for (auto& c : out.coeffs) c = c * factor;
    return out;
  }
};

/// Exact coefficients f_0 .. f_J of the problem's series.
inline SeriesExpansion generate_coefficients(const ProblemDefinition& problem, std::size_t J) {
  SeriesExpansion s;
  s.alpha = problem.alpha;
  s.beta = problem.beta;
  s.unknown_name = problem.unknown_name();
  s.coeffs = expand(problem, UnknownPoly::u(), J);
  return s;
}

}  // namespace padehankel
