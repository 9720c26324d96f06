#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "padehankel/hankel.hpp"
#include "padehankel/roots.hpp"

namespace padehankel {

struct RootEstimate {
  BigFloat u;          // real part of the root
  BigFloat imag;       // imaginary part; zero or tiny for an isolated real root
  int D = 0;
  int d = 0;
  BigFloat residual;   // |H_D^d(u)|
  BigFloat correction; // size of the last Newton step, the usable error estimate
  int precision_used = 0;
  int newton_iterations = 0;
  bool multiple = false;  // converged onto a root where H' vanishes too
};

enum class Classification { MonotoneIncreasing, MonotoneDecreasing, Oscillatory, Nonconvergent, Converged };
enum class BoundKind { Upper, Lower };

inline std::string to_string(Classification c) {
  switch (c) {
    case Classification::MonotoneIncreasing: return "monotone_increasing";
    case Classification::MonotoneDecreasing: return "monotone_decreasing";
    case Classification::Oscillatory: return "oscillatory";
    case Classification::Nonconvergent: return "nonconvergent";
    case Classification::Converged: return "converged";
  }
  return "nonconvergent";
}

inline std::string to_string(BoundKind b) { return b == BoundKind::Upper ? "upper" : "lower"; }

struct ClassifyResult {
  Classification classification = Classification::Nonconvergent;
  std::optional<BoundKind> bound_kind;
};

struct RootSequence {
  std::string problem;
  std::map<std::string, long> params;
  int d = 0;
  std::vector<RootEstimate> estimates;
  Classification classification = Classification::Nonconvergent;
  std::optional<BigFloat> converged_value;
  int agreed_digits = 0;
  std::optional<BoundKind> bound_kind;
  bool stopped_early = false;  // stopping rule fired before D_max
  bool lost = false;           // tracking failed; estimates are partial
  std::string diagnostic;
};

/// Working precision max(floor, per_dimension * D) digits unless `fixed` is
/// set, doubled on demand up to `ceiling`.
struct PrecisionPolicy {
  int floor = 50;
  int per_dimension = 3;
  int fixed = 0;
  int ceiling = 4000;

  int initial(int D) const { return fixed > 0 ? fixed : std::max(floor, per_dimension * D); }
};

struct SolverConfig {
  int target_digits = 30;
  int exact_threshold = 8;
  int ladder_digits = 120;  // clustered roots of the exact determinants need many digits
  PrecisionPolicy precision;
  int continuation_steps = 4;
  double seed_window = 0.5;     // ladder candidates within this relative distance
  double max_imag_ratio = 0.1;  // |Im u| / |Re u| accepted as a near-real root
  int max_newton_iterations = 80;
  int classify_window = 4;
};

// ---------------------------------------------------------------------------
// Root refinement

struct NewtonOptions {
  int max_iterations = 80;
  int tol_digits = 25;   // relative step size that counts as converged
  int deflate = 0;       // divide out u^deflate (multiplicity of the origin root)
  bool accelerate = true;  // multiplicity-aware step on linear convergence
};

struct NewtonOutcome {
  bool converged = false;
  ComplexFloat u;
  ComplexFloat value;
  BigFloat correction;
  int iterations = 0;
  bool multiple = false;
};

using HankelFunction = std::function<HankelValue(const ComplexFloat&)>;

/// Complex Newton iteration on H, optionally deflated by u^m. When steps shrink
/// geometrically (a multiple root) the step is scaled by the estimated
/// multiplicity 1/(1 - ratio).
inline NewtonOutcome newton_complex(const HankelFunction& h, ComplexFloat start, const NewtonOptions& opt) {
  const int digits = start.re.digits();
  NewtonOutcome out;
  out.u = start;
  const BigFloat tol = BigFloat::pow10(-opt.tol_digits, digits);
  const ComplexFloat m = make_complex(BigFloat(static_cast<long>(opt.deflate), digits));
  std::optional<BigFloat> last_step;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    out.iterations = it;
    HankelValue hv = h(out.u);
    out.value = hv.value;
    if (is_exact_zero(hv.value)) {
      out.converged = true;
      out.correction = BigFloat(0L, digits);
      out.multiple = is_exact_zero(hv.derivative);
      return out;
    }
    if (is_exact_zero(hv.derivative)) return out;
    ComplexFloat step;
    if (opt.deflate > 0 && !is_exact_zero(out.u)) {
      ComplexFloat denom = hv.derivative / hv.value - m / out.u;
      if (is_exact_zero(denom)) return out;
      step = make_complex(BigFloat(1L, digits)) / denom;
    } else {
      step = hv.value / hv.derivative;
    }
    BigFloat size = abs(step);
    if (!size.is_finite()) return out;
    if (opt.accelerate && last_step && !last_step->is_zero()) {
      double ratio = (size / *last_step).to_double();
      if (ratio > 0.3 && ratio < 0.95) {
        long k = std::lround(1.0 / (1.0 - ratio));
        if (k >= 2) {
          step = step * make_complex(BigFloat(k, digits));
          size = size * k;
          out.multiple = true;
        }
      }
    }
    out.u -= step;
    out.correction = size;
    last_step = size;
    BigFloat scale = abs(out.u);
    if (scale.is_zero()) scale = BigFloat(1L, digits);
    if (size <= tol * scale || out.u.re.is_zero()) {
      out.converged = true;
      HankelValue fin = h(out.u);
      out.value = fin.value;
      if (!out.multiple) out.multiple = is_exact_zero(fin.derivative);
      return out;
    }
  }
  return out;
}

/// Order of the root of H at u = 0, estimated from |H(2e)/H(e)| = 2^m.
inline int origin_order(const HankelFunction& h, int digits, const BigFloat& scale) {
  BigFloat eps = scale.abs() * BigFloat::pow10(-std::max(6, digits / 4), digits);
  HankelValue a = h(make_complex(eps));
  HankelValue b = h(make_complex(eps * 2L));
  if (is_exact_zero(a.value) || is_exact_zero(b.value)) return 0;
  double r = (abs(b.value) / abs(a.value)).log10().to_double() / std::log10(2.0);
  return std::max(0, static_cast<int>(std::lround(r)));
}

/// Real sign-change search around `guess` in [g(1-w), g(1+w)] with w doubling
/// from w0 to w_max, then bisection to a relative width of 10^-tol_digits.
inline std::optional<NewtonOutcome> bracket_root(const HankelFunction& h, const BigFloat& guess, int tol_digits,
                                                 double w0 = 1e-3, double w_max = 0.5) {
  const int digits = guess.digits();
  auto sign_at = [&](const BigFloat& x) { return h(make_complex(x)).value.re.sign(); };
  int s0 = sign_at(guess);
  if (s0 == 0) {
    NewtonOutcome out;
    out.converged = true;
    out.u = make_complex(guess);
    out.value = h(out.u).value;
    out.correction = BigFloat(0L, digits);
    return out;
  }
  const BigFloat tol = guess.abs() * BigFloat::pow10(-tol_digits, digits);
  for (double w = w0; w <= w_max * 1.0000001; w *= 2) {
    BigFloat width = guess.abs() * BigFloat(w, digits);
    for (int side : {1, -1}) {
      BigFloat far = side > 0 ? guess + width : guess - width;
      int sf = sign_at(far);
      if (sf == 0 || sf != s0) {
        BigFloat a = guess, b = far;
        int sa = s0;
        int it = 0;
        while ((b - a).abs() > tol && it < 4 * digits) {
          BigFloat mid = (a + b) * BigFloat(0.5, digits);
          int sm = sign_at(mid);
          if (sm == 0) {
            a = b = mid;
            break;
          }
          if (sm == sa) {
            a = mid;
          } else {
            b = mid;
          }
          ++it;
        }
        NewtonOutcome out;
        out.converged = true;
        out.u = make_complex((a + b) * BigFloat(0.5, digits));
        out.value = h(out.u).value;
        out.correction = (b - a).abs();
        out.iterations = it;
        return out;
      }
    }
  }
  return std::nullopt;
}

/// Root of H_D^d near `guess` for an exact series: Newton with a multiplicity
/// step, falling back to sign-change bracketing when Newton stagnates or
/// leaves the neighbourhood of the guess.
inline RootEstimate find_root_near(const SeriesExpansion& series, const HankelSpec& spec, const BigFloat& guess,
                                   int precision) {
  if (!guess.is_finite()) throw Error(ErrorCode::BadParams, "guess must be finite");
  SeriesHankel sh(series, spec);
  HankelFunction h = [&](const ComplexFloat& u) { return sh.evaluate(u); };
  BigFloat g = guess.with_digits(precision);
  NewtonOptions opt;
  opt.tol_digits = precision / 2;
  opt.max_iterations = 4 * precision;
  NewtonOutcome r = newton_complex(h, make_complex(g), opt);
  bool near = r.converged;
  if (near && !g.is_zero()) near = abs(r.u - make_complex(g)) <= g.abs() * BigFloat(1.0001, precision);
  if (!near) {
    auto b = bracket_root(h, g, precision / 2);
    if (!b) throw Error(ErrorCode::NoRootFound, "no sign change of H near the guess");
    r = *b;
  }
  RootEstimate e;
  e.u = r.u.re;
  e.imag = r.u.im;
  e.D = spec.D;
  e.d = spec.d;
  e.residual = abs(r.value);
  e.correction = r.correction;
  e.precision_used = precision;
  e.newton_iterations = r.iterations;
  e.multiple = r.multiple;
  return e;
}

// ---------------------------------------------------------------------------
// Classification and the delta curve

inline ClassifyResult classify_sequence(const std::vector<BigFloat>& values, int window = 4, int zero_digits = 0) {
  if (values.size() < 4) throw Error(ErrorCode::TooFewEstimates, "classification needs at least 4 estimates");
  std::vector<BigFloat> diffs;
  for (std::size_t i = 1; i < values.size(); ++i) diffs.push_back(values[i] - values[i - 1]);
  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(window), diffs.size());
  std::vector<BigFloat> last(diffs.end() - static_cast<long>(w), diffs.end());

  auto is_zero = [&](const BigFloat& x) {
    if (x.is_zero()) return true;
    if (zero_digits <= 0) return false;
    return x.abs() < BigFloat::pow10(-zero_digits, x.digits());
  };
  ClassifyResult out;
  if (std::all_of(last.begin(), last.end(), is_zero)) {
    out.classification = Classification::Converged;
    return out;
  }
  auto mag = [&](const BigFloat& x) { return is_zero(x) ? BigFloat(0L, x.digits()) : x.abs(); };
  // shrinking: the window's largest step against the largest of the window
  // before it, or of its own first half when the history is short
  auto largest = [&](std::size_t from, std::size_t to) {
    BigFloat m = mag(diffs[from]);
    for (std::size_t i = from + 1; i < to; ++i) m = std::max(m, mag(diffs[i]));
    return m;
  };
  const std::size_t n = diffs.size();
  BigFloat early, late;
  if (n >= 2 * w) {
    early = largest(n - 2 * w, n - w);
    late = largest(n - w, n);
  } else {
    early = largest(n - w, n - w + w / 2);
    late = largest(n - w + w / 2, n);
  }
  if (late >= early) {
    out.classification = Classification::Nonconvergent;
    return out;
  }
  int pos = 0, neg = 0;
  for (const auto& x : last) {
    if (is_zero(x)) continue;
    (x.sign() > 0 ? pos : neg)++;
  }
  if (neg == 0) {
    out.classification = Classification::MonotoneIncreasing;
    out.bound_kind = BoundKind::Lower;
  } else if (pos == 0) {
    out.classification = Classification::MonotoneDecreasing;
    out.bound_kind = BoundKind::Upper;
  } else {
    out.classification = Classification::Oscillatory;
  }
  return out;
}

inline ClassifyResult classify_sequence(const std::vector<RootEstimate>& estimates, int window = 4, int zero_digits = 0) {
  std::vector<BigFloat> v;
  for (const auto& e : estimates) v.push_back(e.u);
  return classify_sequence(v, window, zero_digits);
}

struct DeltaPoint {
  int D = 0;
  BigFloat delta;
};

struct DeltaCurve {
  std::vector<DeltaPoint> points;
  /// First D from which delta decreases strictly through the last point.
  std::optional<int> decreasing_from;
};

inline DeltaCurve delta_curve(const RootSequence& seq0, const RootSequence& seq1) {
  DeltaCurve out;
  for (const auto& a : seq0.estimates) {
    for (const auto& b : seq1.estimates) {
      if (a.D == b.D) out.points.push_back({a.D, (a.u - b.u).abs()});
    }
  }
  if (out.points.empty()) throw Error(ErrorCode::NoOverlap, "the two sequences share no dimension D");
  std::size_t k = out.points.size() - 1;
  while (k > 0 && out.points[k].delta < out.points[k - 1].delta) --k;
  if (k + 1 < out.points.size()) out.decreasing_from = out.points[k].D;
  return out;
}

// ---------------------------------------------------------------------------
// Sequence driver

/// What the driver needs from a problem: exact determinants for the ladder and
/// a numeric evaluator for larger D.
struct HankelSource {
  std::string name;
  std::map<std::string, long> params;
  SearchDomain domain;
  std::function<UnknownPoly(const HankelSpec&)> exact;
  std::function<HankelValue(const HankelSpec&, const ComplexFloat&)> numeric;
};

inline HankelSource source_for(const ProblemDefinition& problem, int d, int ladder_top) {
  HankelSource src;
  src.name = problem.name;
  src.params = problem.params;
  src.domain = problem.domain;
  std::size_t J = HankelSpec(std::max(2, ladder_top), d).max_index();
  auto series = std::make_shared<SeriesExpansion>(generate_coefficients(problem, J));
  src.exact = [series](const HankelSpec& spec) { return det_exact(hankel_matrix(*series, spec)); };
  src.numeric = [problem](const HankelSpec& spec, const ComplexFloat& u) {
    return RecurrenceHankel(problem, spec).evaluate(u);
  };
  return src;
}

inline HankelSource source_for(const SeriesExpansion& series, SearchDomain domain, std::string name = "series") {
  HankelSource src;
  src.name = std::move(name);
  src.domain = domain;
  auto s = std::make_shared<SeriesExpansion>(series);
  src.exact = [s](const HankelSpec& spec) { return det_exact(hankel_matrix(*s, spec)); };
  src.numeric = [s](const HankelSpec& spec, const ComplexFloat& u) { return SeriesHankel(*s, spec).evaluate(u); };
  return src;
}

namespace detail {

inline bool in_domain(const SearchDomain& dom, const ComplexFloat& z, double max_imag_ratio) {
  if (z.re.is_zero()) return false;
  BigRational re = z.re.to_rational();
  if (re < dom.lo || re > dom.hi) return false;
  return z.im.abs() <= z.re.abs() * BigFloat(max_imag_ratio, z.re.digits());
}

/// Near-real, in-domain, nonzero complex roots of an exact determinant.
inline std::vector<ComplexFloat> ladder_candidates(const UnknownPoly& det, const SearchDomain& dom, int digits,
                                                   double max_imag_ratio) {
  std::vector<ComplexFloat> out;
  if (det.is_zero() || det.degree() <= det.valuation()) return out;
  UnknownPoly q = det.shift_down(static_cast<std::size_t>(det.valuation()));
  for (auto& z : poly_complex_roots(q, digits)) {
    if (!in_domain(dom, z, max_imag_ratio)) continue;
    // real roots come back with noise-level imaginary parts; keep one member
    // of each genuine conjugate pair
    if (z.im.abs() <= z.re.abs() * BigFloat::pow10(-digits / 2, digits)) {
      z.im = BigFloat(0L, digits);
    } else if (z.im.sign() < 0) {
      continue;
    }
    out.push_back(z);
  }
  return out;
}

/// Nonconstant factor shared by every nonzero determinant from D = 3 on.
/// Its roots are parameter values where the series is exactly a rational
/// function (e.g. f = -x), which every Hankel determinant then annihilates;
/// they are not the boundary-value root being sought.
inline UnknownPoly common_factor(const std::map<int, UnknownPoly>& dets) {
  UnknownPoly g;
  int count = 0;
  for (const auto& [D, det] : dets) {
    if (D < 3 || det.is_zero()) continue;
    UnknownPoly q = det.shift_down(static_cast<std::size_t>(det.valuation()));
    g = g.is_zero() ? q : poly_gcd(g, q);
    ++count;
  }
  if (count < 3 || g.degree() < 1) return UnknownPoly::constant(1);
  return g;
}

/// det with every power of the common factor divided out.
inline UnknownPoly strip(UnknownPoly det, const UnknownPoly& common) {
  if (det.is_zero() || common.degree() < 1) return det;
  for (;;) {
    UnknownPoly g = poly_gcd(det, common);
    if (g.degree() < 1) return det;
    det = poly_divmod(det, g).first;
  }
}

inline ComplexFloat at_digits(const ComplexFloat& z, int digits) { return {z.re.with_digits(digits), z.im.with_digits(digits)}; }

struct Tracker {
  const HankelSource& src;
  const SolverConfig& cfg;
  int d;

  HankelFunction fn(int D) const {
    HankelSpec spec(D, d);
    return [this, spec](const ComplexFloat& u) { return src.numeric(spec, u); };
  }

  std::optional<NewtonOutcome> newton(int D, const ComplexFloat& start, int p, int deflate) const {
    NewtonOptions opt;
    opt.max_iterations = cfg.max_newton_iterations;
    opt.tol_digits = p / 2;
    opt.deflate = deflate;
    opt.accelerate = false;
    NewtonOutcome r = newton_complex(fn(D), at_digits(start, p), opt);
    if (!r.converged || !in_domain(src.domain, r.u, cfg.max_imag_ratio)) return std::nullopt;
    return r;
  }

  int deflation(int D, int p, const ComplexFloat& near) const {
    return origin_order(fn(D), p, near.re.is_zero() ? BigFloat(1L, p) : near.re);
  }

  /// Root of H_D^d nearest `prev`. Newton is started just above the real
  /// axis at the scale `delta` of the last move, so that it can reach a
  /// near-real conjugate pair, and again essentially on the axis; a real
  /// sign-change search is the last resort.
  std::optional<NewtonOutcome> nearest(int D, const ComplexFloat& prev, const BigFloat& delta, int p) const {
    const int m = deflation(D, p, prev);
    ComplexFloat base = at_digits(prev, p);
    BigFloat scale = base.re.abs();
    BigFloat off = std::max(delta.with_digits(p), scale * BigFloat::pow10(-p / 2, p));
    std::vector<ComplexFloat> starts{{base.re, base.im + off}, {base.re, base.im + scale * BigFloat::pow10(-30, p)}};
    std::optional<NewtonOutcome> best;
    std::optional<BigFloat> best_dist;
    for (const auto& s : starts) {
      auto r = newton(D, s, p, m);
      if (!r) continue;
      BigFloat dist = abs(r->u - base);
      if (!best_dist || dist < *best_dist) {
        best = r;
        best_dist = dist;
      }
      if (dist <= off * 10L) break;
    }
    if (!best) {
      auto b = bracket_root(fn(D), base.re, p / 2);
      if (b) best = b;
    }
    if (best && far_from(best->u, prev)) best.reset();
    return best;
  }

  bool far_from(const ComplexFloat& z, const ComplexFloat& anchor) const {
    if (!in_domain(src.domain, z, cfg.max_imag_ratio)) return true;
    BigFloat dist = abs(z - at_digits(anchor, z.re.digits()));
    return dist > anchor.re.abs() * BigFloat(cfg.seed_window, z.re.digits());
  }

  /// `nearest` at the dimension's working precision, certified by re-solving
  /// at doubled precision; the precision is doubled until the two agree to
  /// about p/2 digits. A jump of more than ten times the previous move also
  /// triggers one doubling before it is accepted.
  std::optional<RootEstimate> certified(int D, const ComplexFloat& prev, const BigFloat& delta, bool check_jump,
                                        std::string& why) const {
    int p = cfg.precision.initial(D);
    bool jump_retry = check_jump;
    while (p <= cfg.precision.ceiling) {
      auto r = nearest(D, prev, delta, p);
      if (!r) {
        why = "D=" + std::to_string(D) + ": no root near " + prev.re.to_string(12);
        p *= 2;
        continue;
      }
      if (jump_retry && abs(r->u - at_digits(prev, p)) > delta * 10L) {
        jump_retry = false;
        p *= 2;
        continue;
      }
      auto c = newton(D, r->u, 2 * p, deflation(D, 2 * p, r->u));
      if (!c) {
        why = "D=" + std::to_string(D) + ": Newton failed at doubled precision";
        p *= 2;
        continue;
      }
      BigFloat gap = abs(c->u - at_digits(r->u, 2 * p));
      if (gap > abs(c->u) * BigFloat::pow10(-(p / 2 - 5), 2 * p)) {
        why = "D=" + std::to_string(D) + ": root moved at doubled precision";
        p *= 2;
        continue;
      }
      RootEstimate e;
      e.u = r->u.re;
      e.imag = r->u.im;
      e.D = D;
      e.d = d;
      e.residual = abs(r->value);
      e.correction = r->correction;
      e.precision_used = p;
      e.newton_iterations = r->iterations;
      e.multiple = r->multiple;
      return e;
    }
    return std::nullopt;
  }
};

}  // namespace detail

/// Real, nonzero, in-domain roots of det_exact at the smallest D (up to the
/// exact threshold) that has any.
inline std::vector<BigFloat> seed_roots(const ProblemDefinition& problem, int d, int digits,
                                        int exact_threshold = 8) {
  if (problem.degenerate) throw Error(ErrorCode::Degenerate, problem.name + ": every Hankel root is u = 0");
  SeriesExpansion s = generate_coefficients(problem, HankelSpec(exact_threshold, d).max_index());
  if (degenerate_check(s, s.size() - 1)) throw Error(ErrorCode::Degenerate, problem.name + ": degenerate series");
  for (int D = 2; D <= exact_threshold; ++D) {
    UnknownPoly det = det_exact(hankel_matrix(s, HankelSpec(D, d)));
    if (det.is_zero()) continue;
    std::vector<BigFloat> out;
    for (const auto& r : poly_real_roots(det, problem.domain.lo, problem.domain.hi, digits)) {
      if (!r.value.is_zero()) out.push_back(r.value);
    }
    if (!out.empty()) return out;
  }
  throw Error(ErrorCode::NoRealRoots, problem.name + ": no nonzero real root up to D=" + std::to_string(exact_threshold) +
                                          "; supply a guess");
}

namespace detail {

inline void finish(RootSequence& seq, const SolverConfig& cfg) {
  const auto& es = seq.estimates;
  if (es.empty()) return;
  if (es.size() >= 2) {
    seq.agreed_digits = agreed_decimals(es[es.size() - 1].u, es[es.size() - 2].u, es.back().precision_used);
  }
  try {
    ClassifyResult c = classify_sequence(es, cfg.classify_window, es.back().precision_used / 2);
    seq.classification = c.classification;
    seq.bound_kind = c.bound_kind;
  } catch (const Error&) {
    seq.classification = Classification::Nonconvergent;
    if (!seq.diagnostic.empty()) seq.diagnostic += "; ";
    seq.diagnostic += "too few estimates to classify";
  }
  if (seq.lost) return;
  if (seq.classification == Classification::Oscillatory && es.size() >= 2) {
    seq.converged_value = (es[es.size() - 1].u + es[es.size() - 2].u) * BigFloat(0.5, es.back().u.digits());
  } else {
    seq.converged_value = es.back().u;
  }
}

}  // namespace detail

/// The Hankel sequence for offset d, D = 2 .. D_max.
inline RootSequence run_sequence(const HankelSource& src, int d, int D_max, const std::optional<BigFloat>& seed,
                                 const SolverConfig& cfg = {}) {
  if (D_max < 3) throw Error(ErrorCode::BadParams, "D_max must be >= 3");
  RootSequence seq;
  seq.problem = src.name;
  seq.params = src.params;
  seq.d = d;
  detail::Tracker tr{src, cfg, d};
  const int top = std::min(cfg.exact_threshold, D_max);
  const int seed_digits = cfg.ladder_digits;
  auto fail = [&](std::string why) {
    seq.lost = true;
    seq.diagnostic = std::move(why);
    detail::finish(seq, cfg);
    return seq;
  };

  // Ladder: near-real roots of the exact determinants for D <= top.
  std::map<int, UnknownPoly> dets;
  for (int D = 2; D <= top; ++D) dets[D] = src.exact(HankelSpec(D, d));
  const UnknownPoly common = detail::common_factor(dets);
  // roots piling up on a trivial root as D grows are not candidates either
  std::vector<BigFloat> trivial;
  if (common.degree() >= 1) {
    for (const auto& r : poly_real_roots(common, src.domain.lo, src.domain.hi, seed_digits)) trivial.push_back(r.value);
  }
  auto near_trivial = [&](const ComplexFloat& z) {
    for (const auto& t : trivial) {
      if (abs(detail::at_digits(z, seed_digits) - make_complex(t)) < t.abs() * BigFloat(0.05, seed_digits)) return true;
    }
    return false;
  };
  std::map<int, std::vector<ComplexFloat>> ladder;
  for (int D = 2; D <= top; ++D) {
    for (auto& z : detail::ladder_candidates(detail::strip(dets[D], common), src.domain, seed_digits, cfg.max_imag_ratio)) {
      if (!near_trivial(z)) ladder[D].push_back(z);
    }
  }
  int D_top = top;
  while (D_top >= 2 && ladder[D_top].empty()) --D_top;

  auto nearest_candidate = [&](int D, const ComplexFloat& to) -> std::optional<ComplexFloat> {
    std::optional<ComplexFloat> pick;
    std::optional<BigFloat> best;
    ComplexFloat target = detail::at_digits(to, seed_digits);
    for (const auto& c : ladder[D]) {
      BigFloat dist = abs(c - target);
      if (dist > target.re.abs() * BigFloat(cfg.seed_window, seed_digits)) continue;
      if (!best || dist < *best) {
        best = dist;
        pick = c;
      }
    }
    return pick;
  };

  // Reference: the user's guess, or the end point of the top-ladder candidate
  // whose continuation to larger D moves least.
  std::optional<ComplexFloat> ref;
  if (seed) {
    ref = make_complex(seed->with_digits(seed_digits));
  } else {
    if (D_top < 2) return fail("no near-real root in the search domain up to D=" + std::to_string(top));
    std::optional<BigFloat> best_move;
    for (const auto& c : ladder[D_top]) {
      ComplexFloat z = c;
      BigFloat delta = c.re.abs() * BigFloat::pow10(-3, seed_digits);
      BigFloat move;
      bool ok = true;
      for (int k = 1; k <= cfg.continuation_steps; ++k) {
        int D = D_top + k;
        std::optional<NewtonOutcome> r;
        try {
          r = tr.nearest(D, z, delta, cfg.precision.initial(D));
        } catch (const Error& e) {
          // a given series may end before D_top + continuation_steps
          if (e.code() != ErrorCode::NotEnoughCoefficients) throw;
          ok = k > 1;
          break;
        }
        if (!r) {
          ok = false;
          break;
        }
        move = abs(r->u - detail::at_digits(z, r->u.re.digits())) / abs(r->u);
        delta = abs(r->u - detail::at_digits(z, r->u.re.digits()));
        z = r->u;
      }
      if (!ok || near_trivial(z)) continue;
      if (!best_move || move < *best_move) {
        best_move = move;
        ref = z;
      }
    }
    if (!ref) return fail("no ladder candidate could be continued past D=" + std::to_string(D_top));
  }

  // Walk the ladder down from the candidate nearest the reference, each step
  // taking the root nearest the one above it.
  std::map<int, ComplexFloat> picks;
  if (D_top >= 2) {
    if (auto p = nearest_candidate(D_top, *ref)) {
      picks[D_top] = *p;
      ComplexFloat cur = *p;
      for (int D = D_top - 1; D >= 2; --D) {
        if (auto q = nearest_candidate(D, cur)) {
          picks[D] = *q;
          cur = *q;
        }
      }
    }
  }

  std::optional<ComplexFloat> prev;
  BigFloat delta;
  auto record = [&](const RootEstimate& e) {
    ComplexFloat z{e.u, e.imag};
    if (prev) delta = abs(z - detail::at_digits(*prev, e.u.digits()));
    seq.estimates.push_back(e);
    prev = z;
  };
  for (const auto& [D, c] : picks) {
    std::string why;
    BigFloat tiny = c.re.abs() * BigFloat::pow10(-20, seed_digits);
    auto e = tr.certified(D, c, tiny, false, why);
    if (!e) return fail(why);
    record(*e);
  }

  // Numeric continuation, nearest to the previous estimate.
  if (!prev) {
    prev = *ref;
    delta = ref->re.abs() * BigFloat::pow10(-3, seed_digits);
  } else if (seq.estimates.size() < 2) {
    delta = prev->re.abs() * BigFloat::pow10(-3, seed_digits);
  }
  int small_steps = 0;
  for (int D = top + 1; D <= D_max; ++D) {
    std::string why;
    auto e = tr.certified(D, *prev, delta, seq.estimates.size() >= 2, why);
    if (!e) {
      seq.lost = true;
      seq.diagnostic = why;
      break;
    }
    record(*e);
    if (seq.estimates.size() >= 2) {
      const auto& a = seq.estimates[seq.estimates.size() - 2];
      BigFloat step = (e->u - a.u).abs();
      small_steps = step < BigFloat::pow10(-cfg.target_digits, step.digits()) ? small_steps + 1 : 0;
      if (small_steps >= 2 && D < D_max) {
        seq.stopped_early = true;
        break;
      }
    }
  }
  detail::finish(seq, cfg);
  return seq;
}

inline RootSequence run_sequence(const ProblemDefinition& problem, int d, int D_max,
                                 const std::optional<BigFloat>& seed = std::nullopt, const SolverConfig& cfg = {}) {
  if (problem.degenerate) throw Error(ErrorCode::Degenerate, problem.name + ": every Hankel root is u = 0");
  if (d < problem.min_offset()) {
    throw Error(ErrorCode::BadParams, problem.name + " needs d >= " + std::to_string(problem.min_offset()));
  }
  SeriesExpansion probe = generate_coefficients(problem, 12);
  if (degenerate_check(probe, 12)) throw Error(ErrorCode::Degenerate, problem.name + ": degenerate series");
  return run_sequence(source_for(problem, d, std::min(cfg.exact_threshold, D_max)), d, D_max, seed, cfg);
}

}  // namespace padehankel
