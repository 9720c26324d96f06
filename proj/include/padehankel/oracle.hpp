#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "padehankel/problems.hpp"

namespace padehankel {

// Shooting in long double: integrate from a small x0 with initial data from
// the truncated series, classify the far-field behaviour, bisect.

enum class Verdict { Above, Below, Undecided };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Above: return "above";
    case Verdict::Below: return "below";
    case Verdict::Undecided: return "undecided";
  }
  return "undecided";
}

using State = std::array<long double, 2>;

struct TrajectorySample {
  long double x;
  State y;  // (f, f'); Riccati carries only f; Thomas-Fermi (xi, xi') in t
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  long double x_end = 0;
  int steps = 0;
  bool overflow = false;  // stopped by the |y| guard
  bool decided_early = false;
};

struct OracleConfig {
  long double x0 = 1e-3L;
  long double rel_tol = 1e-13L;
  long double overflow_threshold = 1e8L;
  int max_doublings = 4;
  int series_terms = 40;
};

struct ShootingResult {
  BigFloat parameter;
  BigFloat bracket_width;
  BigFloat lo;
  BigFloat hi;
  std::vector<std::pair<BigFloat, Verdict>> classifications;
  double x_max_used = 0;
  int steps = 0;
  bool converged = false;
};

namespace detail {

/// Right-hand side of the first-order system in the series variable.
inline State rhs(const ProblemDefinition& p, long double x, const State& y) {
  const long double f = y[0], fp = y[1];
  switch (p.kind) {
    case ProblemKind::GlVortex: {
      const long double n = static_cast<long double>(p.params.at("n"));
      return {fp, -fp / x - (1 - n * n / (x * x)) * f + f * f * f};
    }
    case ProblemKind::WilsonRg: return {fp, (4 * f * fp + 5 * x * fp - f) / 2};
    case ProblemKind::WegnerHoughton: return {fp, -(1 + fp) * (5 * f - x * fp) / 2};
    case ProblemKind::Riccati: return {f * f - x * x, 0};
    case ProblemKind::ThomasFermi: {
      // t xi'' - xi' - 4 t^2 xi^(3/2) = 0, xi kept nonnegative inside the root
      const long double xi = f > 0 ? f : 0;
      return {fp, (fp + 4 * x * x * xi * std::sqrt(xi)) / x};
    }
    case ProblemKind::Instanton: return {fp, f * f * f - f};
    case ProblemKind::Blasius: break;
  }
  throw Error(ErrorCode::OutOfScope, p.name + " is not in oracle scope");
}

/// f and df/dx from x^alpha sum f_j x^(beta j).
inline State series_state(const ProblemDefinition& p, long double u, long double x, int terms) {
  std::vector<long double> c = expand(p, u, static_cast<std::size_t>(terms));
  const long double alpha = p.alpha.get_d(), beta = p.beta.get_d();
  long double f = 0, fp = 0;
  for (int j = terms; j >= 0; --j) {
    long double e = alpha + beta * j;
    long double term = c[static_cast<std::size_t>(j)] * std::pow(x, e);
    f += term;
    if (e != 0) fp += c[static_cast<std::size_t>(j)] * e * std::pow(x, e - 1);
  }
  if (p.kind == ProblemKind::ThomasFermi) return {f * f, 2 * f * fp};
  return {f, fp};
}

}  // namespace detail

/// Far-field classifier fed one accepted sample at a time. The verdict is
/// sticky: the first conclusive event decides.
class TrajectoryClassifier {
 public:
  explicit TrajectoryClassifier(const ProblemDefinition& p) : p_(p) {}

  Verdict observe(const TrajectorySample& s) {
    if (verdict_ == Verdict::Undecided) verdict_ = decide(s);
    return verdict_;
  }
  Verdict verdict() const { return verdict_; }

 private:
  Verdict decide(const TrajectorySample& s) {
    const long double x = s.x, f = s.y[0], fp = s.y[1];
    switch (p_.kind) {
      case ProblemKind::GlVortex:
      case ProblemKind::Instanton:
        if (f > 1) return Verdict::Above;
        if (fp < 0) return Verdict::Below;
        break;
      case ProblemKind::Riccati:
        if (f > x + 2) return Verdict::Above;
        if (f < 0) return Verdict::Below;
        break;
      case ProblemKind::ThomasFermi:
        if (fp > 0) return Verdict::Above;
        if (f < 0) return Verdict::Below;
        break;
      case ProblemKind::WilsonRg:
        // |f'| stays below |f0| on the physical branch; a trial above it dives
        // first, one below it turns up first
        if (fp < -2) return Verdict::Above;
        if (fp > 2) return Verdict::Below;
        break;
      case ProblemKind::WegnerHoughton: {
        // physical: f' > 0 once it turns positive and 5f - x f' -> 0
        if (fp > 0) rising_ = true;
        if (rising_ && fp < 0) return Verdict::Above;
        if (5 * f - x * fp < -20) return Verdict::Below;
        break;
      }
      case ProblemKind::Blasius: break;
    }
    return Verdict::Undecided;
  }

  const ProblemDefinition& p_;
  bool rising_ = false;
  Verdict verdict_ = Verdict::Undecided;
};


/// Adaptive Dormand-Prince 5(4) integration from x0 to x_max. Stops early on
/// the overflow guard or when `stop` returns true for an accepted sample.
inline Trajectory integrate(const ProblemDefinition& problem, long double u, long double x_max, long double rel_tol,
                            const OracleConfig& cfg = {},
                            const std::function<bool(const TrajectorySample&)>& stop = {}) {
  if (!problem.oracle.in_scope) throw Error(ErrorCode::OutOfScope, problem.name + " is not in oracle scope");
  if (!std::isfinite(static_cast<double>(u))) throw Error(ErrorCode::BadParams, "trial parameter must be finite");
  if (!(x_max > cfg.x0)) throw Error(ErrorCode::BadParams, "x_max must exceed the start point");

  static constexpr long double c2 = 1.0L / 5, c3 = 3.0L / 10, c4 = 4.0L / 5, c5 = 8.0L / 9;
  static constexpr long double a21 = 1.0L / 5;
  static constexpr long double a31 = 3.0L / 40, a32 = 9.0L / 40;
  static constexpr long double a41 = 44.0L / 45, a42 = -56.0L / 15, a43 = 32.0L / 9;
  static constexpr long double a51 = 19372.0L / 6561, a52 = -25360.0L / 2187, a53 = 64448.0L / 6561,
                               a54 = -212.0L / 729;
  static constexpr long double a61 = 9017.0L / 3168, a62 = -355.0L / 33, a63 = 46732.0L / 5247, a64 = 49.0L / 176,
                               a65 = -5103.0L / 18656;
  static constexpr long double b1 = 35.0L / 384, b3 = 500.0L / 1113, b4 = 125.0L / 192, b5 = -2187.0L / 6784,
                               b6 = 11.0L / 84;
  static constexpr long double e1 = 71.0L / 57600, e3 = -71.0L / 16695, e4 = 71.0L / 1920, e5 = -17253.0L / 339200,
                               e6 = 22.0L / 525, e7 = -1.0L / 40;

  auto f = [&](long double x, const State& y) { return detail::rhs(problem, x, y); };
  auto axpy = [](const State& y, std::initializer_list<std::pair<long double, const State*>> terms, long double h) {
    State out = y;
    for (const auto& [c, k] : terms) {
      out[0] += h * c * (*k)[0];
      out[1] += h * c * (*k)[1];
    }
    return out;
  };

  Trajectory tr;
  long double x = cfg.x0;
  State y = detail::series_state(problem, u, x, cfg.series_terms);
  tr.samples.push_back({x, y});
  long double h = cfg.x0;
  const long double atol = rel_tol * 1e-12L;
  State k1 = f(x, y);
  while (x < x_max) {
    if (x + h > x_max) h = x_max - x;
    State k2 = f(x + c2 * h, axpy(y, {{a21, &k1}}, h));
    State k3 = f(x + c3 * h, axpy(y, {{a31, &k1}, {a32, &k2}}, h));
    State k4 = f(x + c4 * h, axpy(y, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, h));
    State k5 = f(x + c5 * h, axpy(y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, h));
    State k6 = f(x + h, axpy(y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, h));
    State yn = axpy(y, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}}, h);
    State k7 = f(x + h, yn);
    long double err = 0;
    for (int i = 0; i < 2; ++i) {
      long double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      long double sc = atol + rel_tol * std::max(std::fabs(y[i]), std::fabs(yn[i]));
      err = std::max(err, std::fabs(e) / sc);
    }
    if (!std::isfinite(static_cast<double>(err))) err = 1e10L;
    if (err <= 1) {
      x += h;
      y = yn;
      k1 = k7;  // first-same-as-last
      ++tr.steps;
      TrajectorySample s{x, y};
      tr.samples.push_back(s);
      if (std::fabs(y[0]) > cfg.overflow_threshold || std::fabs(y[1]) > cfg.overflow_threshold) {
        tr.overflow = true;
        break;
      }
      if (stop && stop(s)) {
        tr.decided_early = true;
        break;
      }
    }
    long double factor = err == 0 ? 5 : 0.9L * std::pow(err, -0.2L);
    h *= std::clamp(factor, 0.2L, 5.0L);
    if (h < 1e-16L * std::max(1.0L, std::fabs(x))) {
      throw Error(ErrorCode::StepUnderflow, problem.name + ": step size underflow at x = " + std::to_string(double(x)));
    }
  }
  tr.x_end = x;
  return tr;
}

/// First conclusive event along the trajectory.
inline Verdict classify_trajectory(const ProblemDefinition& problem, const Trajectory& tr) {
  TrajectoryClassifier c(problem);
  for (const auto& s : tr.samples) {
    if (c.observe(s) != Verdict::Undecided) break;
  }
  return c.verdict();
}

struct Shot {
  Verdict verdict = Verdict::Undecided;
  double x_max = 0;
  int steps = 0;
};

/// Integrate and classify, doubling x_max while undecided.
inline Shot shoot(const ProblemDefinition& problem, long double u, double x_max, const OracleConfig& cfg = {}) {
  Shot out;
  out.x_max = x_max;
  for (int k = 0; k <= cfg.max_doublings; ++k) {
    TrajectoryClassifier live(problem);
    auto stop = [&](const TrajectorySample& s) { return live.observe(s) != Verdict::Undecided; };
    Trajectory tr = integrate(problem, u, out.x_max, cfg.rel_tol, cfg, stop);
    out.steps += tr.steps;
    out.verdict = classify_trajectory(problem, tr);
    if (out.verdict != Verdict::Undecided) return out;
    if (k < cfg.max_doublings) out.x_max *= 2;
  }
  return out;
}

/// Bisection on the trial parameter until the bracket is at most `tol` wide.
inline ShootingResult bisect_parameter(const ProblemDefinition& problem, double lo, double hi, double tol,
                                       const OracleConfig& cfg = {}, double x_max = 0) {
  if (!problem.oracle.in_scope) throw Error(ErrorCode::OutOfScope, problem.name + " is not in oracle scope");
  if (!(lo < hi)) throw Error(ErrorCode::BadParams, "bisection needs lo < hi");
  if (!(tol > 0)) throw Error(ErrorCode::BadParams, "tolerance must be positive");
  if (x_max <= 0) x_max = problem.oracle.x_max;
  const int digits = 30;
  ShootingResult res;
  long double a = lo, b = hi;
  Shot sa = shoot(problem, a, x_max, cfg), sb = shoot(problem, b, x_max, cfg);
  res.classifications.emplace_back(BigFloat(static_cast<double>(a), digits), sa.verdict);
  res.classifications.emplace_back(BigFloat(static_cast<double>(b), digits), sb.verdict);
  res.steps = sa.steps + sb.steps;
  res.x_max_used = std::max(sa.x_max, sb.x_max);
  if (sa.verdict == Verdict::Undecided || sb.verdict == Verdict::Undecided) {
    throw Error(ErrorCode::UndecidedAtBracket, problem.name + ": trajectory undecided at a bracket end");
  }
  if (sa.verdict == sb.verdict) {
    throw Error(ErrorCode::SameSideBracket, problem.name + ": both bracket ends are " + to_string(sa.verdict));
  }
  const Verdict va = sa.verdict;
  while (b - a > tol) {
    long double m = (a + b) / 2;
    if (m <= a || m >= b) break;  // long double resolution reached
    Shot sm = shoot(problem, m, x_max, cfg);
    res.classifications.emplace_back(BigFloat(static_cast<double>(m), digits), sm.verdict);
    res.steps += sm.steps;
    res.x_max_used = std::max(res.x_max_used, sm.x_max);
    if (sm.verdict == Verdict::Undecided) break;  // the far field cannot separate them any more
    if (sm.verdict == va) {
      a = m;
    } else {
      b = m;
    }
  }
  auto to_big = [&](long double v) {
    // exact binary value of a long double via two doubles
    double hi_part = static_cast<double>(v);
    double lo_part = static_cast<double>(v - hi_part);
    return BigFloat(hi_part, digits) + BigFloat(lo_part, digits);
  };
  res.lo = to_big(a);
  res.hi = to_big(b);
  res.parameter = (res.lo + res.hi) * BigFloat(0.5, digits);
  res.bracket_width = res.hi - res.lo;
  res.converged = b - a <= tol;
  return res;
}

}  // namespace padehankel
