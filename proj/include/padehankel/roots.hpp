#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "padehankel/poly.hpp"

namespace padehankel {

struct RealRoot {
  BigFloat value;
  int multiplicity = 1;
};

namespace detail {

/// Square-free factors a_i with p = c * prod a_i^i (Yun).
inline std::vector<std::pair<UnknownPoly, int>> square_free_factors(const UnknownPoly& p) {
  std::vector<std::pair<UnknownPoly, int>> out;
  UnknownPoly dp = p.derivative();
  UnknownPoly b = poly_gcd(p, dp);
  UnknownPoly c = poly_divmod(p, b).first;
  UnknownPoly d = poly_divmod(dp, b).first - c.derivative();
  int i = 1;
  while (c.degree() > 0) {
    UnknownPoly a = poly_gcd(c, d);
    c = poly_divmod(c, a).first;
    d = poly_divmod(d, a).first - c.derivative();
    if (a.degree() > 0) out.emplace_back(std::move(a), i);
    ++i;
  }
  return out;
}

inline int sign_of(const BigRational& q) { return sgn(q); }

/// Sturm chain for a square-free polynomial; members are scaled by positive
/// constants only, which leaves every sign pattern unchanged.
inline std::vector<UnknownPoly> sturm_chain(const UnknownPoly& a) {
  std::vector<UnknownPoly> chain;
  auto scaled = [](const UnknownPoly& q) {
    if (q.is_zero()) return q;
    return q * (1 / abs(q.coeffs().back()));
  };
  chain.push_back(scaled(a));
  chain.push_back(scaled(a.derivative()));
  while (chain.back().degree() > 0) {
    UnknownPoly r = poly_divmod(chain[chain.size() - 2], chain.back()).second;
    if (r.is_zero()) break;
    chain.push_back(scaled(-r));
  }
  return chain;
}

inline int sign_variations(const std::vector<UnknownPoly>& chain, const BigRational& x) {
  int count = 0;
  int last = 0;
  for (const auto& s : chain) {
    int sg = sign_of(s.eval(x));
    if (sg == 0) continue;
    if (last != 0 && sg != last) ++count;
    last = sg;
  }
  return count;
}

}  // namespace detail

/// Number of distinct real roots of p in (lo, hi] counted by Sturm's theorem
/// (p is reduced to its square-free part first).
inline int sturm_count(const UnknownPoly& p, const BigRational& lo, const BigRational& hi) {
  if (p.is_zero()) throw Error(ErrorCode::IdenticallyZero, "sturm_count of the zero polynomial");
  if (p.degree() == 0) return 0;
  UnknownPoly sf = poly_divmod(p, poly_gcd(p, p.derivative())).first;
  auto chain = detail::sturm_chain(sf);
  return detail::sign_variations(chain, lo) - detail::sign_variations(chain, hi);
}

/// All distinct real roots of p in [lo, hi], sorted ascending, each refined
/// to an absolute accuracy of 10^-digits, with multiplicities.
inline std::vector<RealRoot> poly_real_roots(const UnknownPoly& p, const BigRational& lo, const BigRational& hi,
                                             int digits) {
  if (p.is_zero()) throw Error(ErrorCode::IdenticallyZero, "poly_real_roots of the zero polynomial");
  if (!(lo < hi)) throw Error(ErrorCode::BadParams, "poly_real_roots requires lo < hi");
  std::vector<RealRoot> roots;
  BigInt ten_pow = 1;
  for (int k = 0; k < digits + 2; ++k) ten_pow *= 10;
  const BigRational goal(BigInt(1), ten_pow);
  const int out_digits = digits + 10;

  for (const auto& [factor, mult] : detail::square_free_factors(p)) {
    auto chain = detail::sturm_chain(factor);
    if (sgn(factor.eval(lo)) == 0) roots.push_back({BigFloat(lo, out_digits), mult});

    struct Interval {
      BigRational l, r;
      int vl, vr;
    };
    std::vector<Interval> work{{lo, hi, detail::sign_variations(chain, lo), detail::sign_variations(chain, hi)}};
    while (!work.empty()) {
      Interval iv = work.back();
      work.pop_back();
      int count = iv.vl - iv.vr;
      if (count <= 0) continue;
      if (count == 1) {
        // Single simple root in (l, r]; bisect on the sign of the factor.
        BigRational l = iv.l, r = iv.r;
        int sr = sgn(factor.eval(r));
        if (sr == 0) {
          roots.push_back({BigFloat(r, out_digits), mult});
          continue;
        }
        bool exact = false;
        while (r - l > goal) {
          BigRational m = (l + r) / 2;
          int sm = sgn(factor.eval(m));
          if (sm == 0) {
            roots.push_back({BigFloat(m, out_digits), mult});
            exact = true;
            break;
          }
          if (sm == sr) {
            r = m;
          } else {
            l = m;
          }
        }
        if (!exact) roots.push_back({BigFloat(BigRational((l + r) / 2), out_digits), mult});
        continue;
      }
      BigRational m = (iv.l + iv.r) / 2;
      int vm = detail::sign_variations(chain, m);
      work.push_back({iv.l, m, iv.vl, vm});
      work.push_back({m, iv.r, vm, iv.vr});
    }
  }
  std::sort(roots.begin(), roots.end(), [](const RealRoot& a, const RealRoot& b) { return a.value < b.value; });
  return roots;
}

/// All complex roots of p (p(0) may vanish; zero roots are returned as such)
/// by Aberth-Ehrlich iteration at `digits` working digits, started from the
/// Newton polygon of |coefficients| so widely separated root magnitudes are
/// seeded on their own circles.
inline std::vector<ComplexFloat> poly_complex_roots(const UnknownPoly& p, int digits, int max_iterations = 800) {
  if (p.is_zero()) throw Error(ErrorCode::IdenticallyZero, "poly_complex_roots of the zero polynomial");
  std::vector<ComplexFloat> roots;
  long val = p.valuation();
  for (long k = 0; k < val; ++k) roots.push_back(make_complex(BigFloat(0L, digits)));
  UnknownPoly q = p.shift_down(static_cast<std::size_t>(val));
  const long n = q.degree();
  if (n <= 0) return roots;

  std::vector<BigFloat> a;
  for (const auto& c : q.coeffs()) a.emplace_back(c, digits);
  std::vector<BigFloat> da;
  for (long k = 1; k <= n; ++k) da.push_back(a[static_cast<std::size_t>(k)] * k);

  // Upper convex hull of (k, log10|a_k|).
  std::vector<std::pair<long, double>> pts;
  for (long k = 0; k <= n; ++k) {
    const auto& ak = a[static_cast<std::size_t>(k)];
    if (!ak.is_zero()) pts.emplace_back(k, ak.abs().log10().to_double());
  }
  std::vector<std::pair<long, double>> hull;
  for (const auto& pt : pts) {
    while (hull.size() >= 2) {
      const auto& p1 = hull[hull.size() - 2];
      const auto& p2 = hull.back();
      double cross = (p2.first - p1.first) * (pt.second - p1.second) - (p2.second - p1.second) * (pt.first - p1.first);
      if (cross >= 0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(pt);
  }

  std::vector<ComplexFloat> z;
  const BigFloat two_pi = BigFloat::pi(digits) * 2L;
  for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
    long count = hull[e + 1].first - hull[e].first;
    double log_r = (hull[e].second - hull[e + 1].second) / static_cast<double>(count);
    BigFloat radius(log_r, digits);
    mpfr_exp10(radius.get(), radius.get(), MPFR_RNDN);
    for (long m = 0; m < count; ++m) {
      BigFloat angle = two_pi * BigFloat(static_cast<double>(m) / static_cast<double>(count) + 0.137 + 0.05 * e, digits);
      auto [s, c] = angle.sin_cos();
      z.push_back({radius * c, radius * s});
    }
  }

  auto horner = [&](const std::vector<BigFloat>& coef, const ComplexFloat& x) {
    ComplexFloat acc = make_complex(coef.back());
    for (std::size_t k = coef.size() - 1; k-- > 0;) acc = acc * x + make_complex(coef[k]);
    return acc;
  };

  const BigFloat tol = BigFloat::pow10(-(digits - 6), digits);
  std::vector<bool> done(z.size(), false);
  for (int it = 0; it < max_iterations; ++it) {
    bool all_done = true;
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (done[k]) continue;
      ComplexFloat pv = horner(a, z[k]);
      if (is_exact_zero(pv)) {
        done[k] = true;
        continue;
      }
      ComplexFloat ratio = pv / horner(da, z[k]);
      ComplexFloat sum = make_complex(BigFloat(0L, digits));
      for (std::size_t j = 0; j < z.size(); ++j) {
        if (j != k) sum += ComplexFloat(make_complex(BigFloat(1L, digits))) / (z[k] - z[j]);
      }
      ComplexFloat one = make_complex(BigFloat(1L, digits));
      ComplexFloat step = ratio / (one - ratio * sum);
      z[k] -= step;
      if (step.norm() <= tol * tol * z[k].norm()) {
        done[k] = true;
      } else {
        all_done = false;
      }
    }
    if (all_done) break;
  }
  roots.insert(roots.end(), z.begin(), z.end());
  return roots;
}

}  // namespace padehankel
