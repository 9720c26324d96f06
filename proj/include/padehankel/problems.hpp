#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "padehankel/convolution.hpp"
#include "padehankel/errors.hpp"
#include "padehankel/poly.hpp"

namespace padehankel {

enum class ProblemKind { GlVortex, WilsonRg, WegnerHoughton, Riccati, ThomasFermi, Instanton, Blasius };

/// Affine map from the unknown u to the value a user reports.
struct PhysicalMap {
  BigRational scale = 1;
  BigRational offset = 0;
  std::string label = "f0";

  BigFloat apply(const BigFloat& u) const {
    return u * BigFloat(scale, u.digits()) + BigFloat(offset, u.digits());
  }
};

/// Published value kept for acceptance checks only.
struct ReferenceValue {
  std::string value;
  std::string source;
};

/// Closed interval used when searching for candidate roots; the trivial
/// solution u = 0 is always excluded.
struct SearchDomain {
  BigRational lo;
  BigRational hi;
};

struct OracleDefaults {
  bool in_scope = true;
  double x_max = 10.0;
  double bracket_lo = 0.0;
  double bracket_hi = 1.0;
};

/// One boundary value problem: its series shape x^alpha sum f_j x^(beta j),
/// which coefficient is free, and everything needed to solve for it.
struct ProblemDefinition {
  ProblemKind kind = ProblemKind::Riccati;
  std::string name;
  std::map<std::string, long> params;
  std::string equation;
  BigRational alpha;
  BigRational beta;
  std::string variable = "x";
  int unknown_index = 0;
  std::map<int, BigRational> fixed_coeffs;
  std::vector<int> recommended_d;
  int ode_order = 2;
  std::string asymptotic;
  PhysicalMap physical_map;
  std::optional<ReferenceValue> reference_value;
  SearchDomain domain;
  bool degenerate = false;
  OracleDefaults oracle;

  std::string unknown_name() const { return "f" + std::to_string(unknown_index); }
  /// Smallest offset d for which the Hankel entries depend on u.
  int min_offset() const { return kind == ProblemKind::ThomasFermi ? 4 : 0; }
};

inline const std::vector<std::string>& catalog() {
  static const std::vector<std::string> names{"gl_vortex", "wilson_rg", "wegner_houghton", "riccati",
                                              "thomas_fermi", "instanton", "blasius"};
  return names;
}

inline bool in_catalog(const std::string& name) {
  const auto& c = catalog();
  return std::find(c.begin(), c.end(), name) != c.end();
}

inline ProblemDefinition instantiate(const std::string& name, const std::map<std::string, long>& params = {}) {
  if (!in_catalog(name)) throw Error(ErrorCode::UnknownProblem, "no problem named '" + name + "'");
  auto reject_extra = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : params) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) throw Error(ErrorCode::BadParams, name + " takes no parameter '" + key + "'");
    }
  };

  ProblemDefinition p;
  p.name = name;
  if (name == "gl_vortex") {
    reject_extra({"n"});
    auto it = params.find("n");
    long n = it == params.end() ? 1 : it->second;
    if (n < 1) throw Error(ErrorCode::BadParams, "gl_vortex requires an integer n >= 1");
    p.kind = ProblemKind::GlVortex;
    p.params["n"] = n;
    p.equation = "f'' + f'/r + (1 - n^2/r^2) f - f^3 = 0";
    p.alpha = n;
    p.beta = 2;
    p.variable = "r";
    p.recommended_d = {0, 1};
    p.asymptotic = "f(r -> inf) = 1";
    p.domain = {BigRational(0), BigRational(3, 2)};
    p.oracle = {true, 10.0, 1e-4, 1.0};
    static const std::map<long, std::string> best{
        {1, "0.58318949586060"}, {2, "0.15309910286"}, {3, "0.0261834207"}, {4, "0.0033271734"}};
    if (auto b = best.find(n); b != best.end()) {
      p.reference_value = ReferenceValue{b->second, n == 1 ? "lower end of the published d=0/d=1 bracket"
                                                           : "published best estimate"};
    }
  } else if (name == "wilson_rg") {
    reject_extra({});
    p.kind = ProblemKind::WilsonRg;
    p.equation = "2f'' - 4 f f' - 5x f' + f = 0";
    p.alpha = 1;
    p.beta = 2;
    p.recommended_d = {0, 1};
    p.asymptotic = "f(x) = a x^(1/5) + ...";
    p.domain = {BigRational(-3), BigRational(0)};
    p.oracle = {true, 20.0, -1.5, -1.1};
    p.reference_value = ReferenceValue{"-1.228598202437021924", "published d=0/d=1 bracket"};
  } else if (name == "wegner_houghton") {
    reject_extra({});
    p.kind = ProblemKind::WegnerHoughton;
    p.equation = "2f'' + (1 + f')(5f - x f') = 0";
    p.alpha = 1;
    p.beta = 2;
    p.recommended_d = {0, 1};
    p.asymptotic = "f(x) = a x^5 - 4/(3x) + ...";
    p.domain = {BigRational(-2), BigRational(0)};
    p.oracle = {true, 20.0, -0.6, -0.3};
    p.reference_value = ReferenceValue{"-0.4615337201162", "published Hankel sequence, D = 20"};
  } else if (name == "riccati") {
    reject_extra({});
    p.kind = ProblemKind::Riccati;
    p.equation = "f' - f^2 + x^2 = 0";
    p.alpha = 0;
    p.beta = 1;
    p.ode_order = 1;
    p.recommended_d = {0};
    p.asymptotic = "f(x) ~ x at the critical f(0); ~ -x below it; pole above it";
    p.domain = {BigRational(0), BigRational(2)};
    p.oracle = {true, 10.0, 0.0, 1.0};
    p.reference_value = ReferenceValue{"0.67597824006728472900", "published Hankel sequence, D = 17"};
  } else if (name == "thomas_fermi") {
    reject_extra({});
    p.kind = ProblemKind::ThomasFermi;
    p.equation = "t (f f'' + f'^2) - f f' - 2 t^2 f^3 = 0,  f = xi^(1/2), xi(t) = Phi(t^2)";
    p.alpha = 0;
    p.beta = 1;
    p.variable = "t";
    p.unknown_index = 2;
    p.fixed_coeffs = {{0, BigRational(1)}, {1, BigRational(0)}, {3, BigRational(2, 3)}};
    p.recommended_d = {4};
    p.asymptotic = "Phi(x -> inf) = 0";
    p.physical_map = {BigRational(2), BigRational(0), "2f2 = Phi'(0)"};
    p.domain = {BigRational(-2), BigRational(0)};
    p.oracle = {true, 50.0, -0.9, -0.7};
    p.reference_value = ReferenceValue{"-1.5880710226113753", "published Hankel sequence (2f2), D = 30"};
  } else if (name == "instanton") {
    reject_extra({});
    p.kind = ProblemKind::Instanton;
    p.equation = "f'' + f - f^3 = 0, f(0) = 0, f(inf) = 1";
    p.alpha = 1;
    p.beta = 2;
    p.recommended_d = {0, 1};
    p.asymptotic = "f(inf) = 1";
    p.domain = {BigRational(0), BigRational(2)};
    p.oracle = {true, 10.0, 0.5, 1.0};
    p.reference_value = ReferenceValue{"0.70710678118654752440", "exact solution tanh(x/sqrt(2))"};
  } else {  // blasius
    reject_extra({});
    p.kind = ProblemKind::Blasius;
    p.equation = "2y''' + y y'' = 0, y(0) = y'(0) = 0, y'(inf) = 1";
    p.alpha = 2;
    p.beta = 3;
    p.ode_order = 3;
    p.recommended_d = {0, 1};
    p.asymptotic = "y'(inf) = 1";
    p.domain = {BigRational(0), BigRational(2)};
    p.degenerate = true;
    p.oracle = {false, 10.0, 0.0, 1.0};
  }
  return p;
}

/// Coefficients f_0 .. f_J of the problem's series with the unknown set to
/// `u`, in any ring T (UnknownPoly with u = the symbol gives the exact
/// polynomials; BigFloat, complex or dual scalars give values).
template <class T>
std::vector<T> expand(const ProblemDefinition& p, const T& u, std::size_t J) {
  const T zero = constant_like(u, BigRational(0));
  SeriesBuilder<T> f(zero);
  auto q = [](long num, long den = 1) { return BigRational(num, den); };

  switch (p.kind) {
    case ProblemKind::GlVortex: {
      // 4j(n+j) f_j = (f^3)_{j-1-n} - f_{j-1}
      const long n = p.params.at("n");
      f.push(u);
      for (std::size_t j = 1; j <= J; ++j) {
        long jj = static_cast<long>(j);
        T rhs = zero - f[j - 1];
        if (jj - 1 - n >= 0) rhs = rhs + f.cube(static_cast<std::size_t>(jj - 1 - n));
        f.push(scale(rhs, q(1, 4 * jj * (n + jj))));
      }
      break;
    }
    case ProblemKind::WilsonRg: {
      // 4(2k+3)(k+1) f_{k+1} = 4 sum_{a+b=k} f_a (2b+1) f_b + (10k+4) f_k
      f.push(u);
      for (std::size_t k = 0; k < J; ++k) {
        long kk = static_cast<long>(k);
        T s = zero;
        for (std::size_t a = 0; a <= k; ++a) s = s + f[a] * scale(f[k - a], q(2 * static_cast<long>(k - a) + 1));
        T rhs = scale(s, q(4)) + scale(f[k], q(10 * kk + 4));
        f.push(scale(rhs, q(1, 4 * (2 * kk + 3) * (kk + 1))));
      }
      break;
    }
    case ProblemKind::WegnerHoughton: {
      // with g_j = (4-2j) f_j, h_j = (2j+1) f_j:
      // 4(2k+3)(k+1) f_{k+1} = -(g_k + sum_{a+b=k} h_a g_b)
      f.push(u);
      for (std::size_t k = 0; k < J; ++k) {
        long kk = static_cast<long>(k);
        auto g = [&](std::size_t j) { return scale(f[j], q(4 - 2 * static_cast<long>(j))); };
        T s = g(k);
        for (std::size_t a = 0; a <= k; ++a) s = s + scale(f[a], q(2 * static_cast<long>(a) + 1)) * g(k - a);
        f.push(scale(s, q(-1, 4 * (2 * kk + 3) * (kk + 1))));
      }
      break;
    }
    case ProblemKind::Riccati: {
      // (k+1) f_{k+1} = (f^2)_k - [k == 2]
      f.push(u);
      for (std::size_t k = 0; k < J; ++k) {
        T rhs = f.square(k);
        if (k == 2) rhs = rhs - constant_like(u, q(1));
        f.push(scale(rhs, q(1, static_cast<long>(k) + 1)));
      }
      break;
    }
    case ProblemKind::ThomasFermi: {
      // xi = f^2 obeys t xi'' - xi' = 4 t^2 f^3, so k(k-2) (f^2)_k = 4 (f^3)_{k-3};
      // with f_0 = 1 this fixes f_k for k >= 3, while f_2 = u is free.
      f.push(constant_like(u, q(1)));
      if (J >= 1) f.push(zero);
      if (J >= 2) f.push(u);
      for (std::size_t k = 3; k <= J; ++k) {
        long kk = static_cast<long>(k);
        T rest = zero;
        for (std::size_t a = 1; a < k; ++a) rest = rest + f[a] * f[k - a];
        T lhs = scale(f.cube(k - 3), q(4, kk * (kk - 2))) - rest;
        f.push(scale(lhs, q(1, 2)));
      }
      break;
    }
    case ProblemKind::Instanton: {
      // (2k+2)(2k+3) f_{k+1} = (f^3)_{k-1} - f_k
      f.push(u);
      for (std::size_t k = 0; k < J; ++k) {
        long kk = static_cast<long>(k);
        T rhs = zero - f[k];
        if (k >= 1) rhs = rhs + f.cube(k - 1);
        f.push(scale(rhs, q(1, (2 * kk + 2) * (2 * kk + 3))));
      }
      break;
    }
    case ProblemKind::Blasius: {
      // 2(3k+5)(3k+4)(3k+3) f_{k+1} = -sum_{a+b=k} f_a (3b+2)(3b+1) f_b
      f.push(u);
      for (std::size_t k = 0; k < J; ++k) {
        long kk = static_cast<long>(k);
        T s = zero;
        for (std::size_t a = 0; a <= k; ++a) {
          long b = static_cast<long>(k - a);
          s = s + f[a] * scale(f[k - a], q((3 * b + 2) * (3 * b + 1)));
        }
        f.push(scale(s, q(-1, 2 * (3 * kk + 5) * (3 * kk + 4) * (3 * kk + 3))));
      }
      break;
    }
  }
  std::vector<T> out = std::move(f).take();
  out.resize(J + 1, zero);
  return out;
}

}  // namespace padehankel
