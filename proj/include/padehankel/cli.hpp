#pragma once

#include <cstdlib>
#include <fstream>
#include <future>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "padehankel/oracle.hpp"
#include "padehankel/solver.hpp"

namespace padehankel::cli {

enum class Format { Text, Json, Csv };

struct RunConfig {
  std::string problem;
  std::map<std::string, long> params;
  std::vector<int> ds;
  int D_max = 20;
  int target_digits = 30;
  PrecisionPolicy precision;
  std::optional<std::string> guess;
  Format format = Format::Text;
  std::string out;
  double tol = 1e-10;
};

/// Exit status plus everything that would go to stdout / stderr.
struct CommandResult {
  int exit_code = 0;
  std::string output;
  std::string error;
};

inline int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::Degenerate: return 2;
    case ErrorCode::UnknownProblem:
    case ErrorCode::BadParams:
    case ErrorCode::Usage:
    case ErrorCode::OutOfScope: return 3;
    default: return 1;
  }
}

inline std::string format_name(Format f) {
  switch (f) {
    case Format::Text: return "text";
    case Format::Json: return "json";
    case Format::Csv: return "csv";
  }
  return "text";
}

inline std::string params_string(const std::map<std::string, long>& params) {
  std::string s;
  for (const auto& [k, v] : params) s += (s.empty() ? "" : ",") + k + "=" + std::to_string(v);
  return s;
}

inline void validate(const RunConfig& cfg) {
  if (cfg.D_max < 3) throw Error(ErrorCode::Usage, "--Dmax must be >= 3");
  if (cfg.target_digits < 6) throw Error(ErrorCode::Usage, "--digits must be >= 6");
}

inline SolverConfig solver_config(const RunConfig& cfg) {
  SolverConfig s;
  s.target_digits = cfg.target_digits;
  s.precision = cfg.precision;
  return s;
}

inline std::optional<BigFloat> parse_guess(const RunConfig& cfg) {
  if (!cfg.guess) return std::nullopt;
  try {
    return BigFloat::parse(*cfg.guess, std::max(50, cfg.precision.initial(cfg.D_max)));
  } catch (const std::exception&) {
    throw Error(ErrorCode::Usage, "--guess is not a number: " + *cfg.guess);
  }
}

/// One sequence per requested d, run concurrently; results in request order.
inline std::vector<RootSequence> run_all(const ProblemDefinition& problem, const RunConfig& cfg) {
  const SolverConfig scfg = solver_config(cfg);
  const auto seed = parse_guess(cfg);
  std::vector<std::future<RootSequence>> jobs;
  for (int d : cfg.ds) {
    jobs.push_back(std::async(std::launch::async, [&, d] { return run_sequence(problem, d, cfg.D_max, seed, scfg); }));
  }
  std::vector<RootSequence> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

// ---- rendering ---------------------------------------------------------

inline std::string decimal(const BigFloat& x, int sig = 30) { return x.to_string(sig); }

inline nlohmann::json sequence_json(const RootSequence& s, const ProblemDefinition& problem) {
  nlohmann::json j;
  j["problem"] = s.problem;
  j["params"] = nlohmann::json::object();
  for (const auto& [k, v] : s.params) j["params"][k] = v;
  j["d"] = s.d;
  j["estimates"] = nlohmann::json::array();
  for (const auto& e : s.estimates) {
    j["estimates"].push_back({{"D", e.D},
                              {"u", decimal(e.u)},
                              {"residual", decimal(e.residual, 6)},
                              {"precision", e.precision_used}});
  }
  j["classification"] = to_string(s.classification);
  j["bound_kind"] = s.bound_kind ? nlohmann::json(to_string(*s.bound_kind)) : nlohmann::json(nullptr);
  j["converged_value"] = s.converged_value ? nlohmann::json(decimal(*s.converged_value)) : nlohmann::json(nullptr);
  j["agreed_digits"] = s.agreed_digits;
  j["lost"] = s.lost;
  j["stopped_early"] = s.stopped_early;
  if (!s.diagnostic.empty()) j["diagnostic"] = s.diagnostic;
  if (s.converged_value && (problem.physical_map.scale != BigRational(1) || problem.physical_map.offset != BigRational(0))) {
    j["physical"] = {{"label", problem.physical_map.label},
                     {"value", decimal(problem.physical_map.apply(*s.converged_value))}};
  }
  return j;
}

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

/// Digits shown for row i of a sequence: two past the decimals that agree
/// with the previous row.
inline int row_decimals(const RootSequence& s, std::size_t i) {
  if (i == 0) return 3;
  int a = agreed_decimals(s.estimates[i].u, s.estimates[i - 1].u, s.estimates[i].precision_used);
  return std::clamp(a + 2, 3, 30);
}

inline DecimalRounding row_rounding(const RootSequence& s, const ProblemDefinition& problem) {
  DecimalRounding r = DecimalRounding::TowardZero;
  if (s.bound_kind == BoundKind::Upper) r = DecimalRounding::Up;
  if (s.bound_kind == BoundKind::Lower) r = DecimalRounding::Down;
  if (problem.physical_map.scale < BigRational(0)) {
    if (r == DecimalRounding::Up) return DecimalRounding::Down;
    if (r == DecimalRounding::Down) return DecimalRounding::Up;
  }
  return r;
}

inline std::string render_text(const std::vector<RootSequence>& seqs, const ProblemDefinition& problem) {
  std::ostringstream os;
  const auto& map = problem.physical_map;
  os << "Convergence of the Hankel sequences for " << problem.name;
  if (!problem.params.empty()) os << " (" << params_string(problem.params) << ")";
  os << ", column values are " << map.label << "\n\n";
  std::map<int, std::map<std::size_t, std::string>> cells;
  for (std::size_t k = 0; k < seqs.size(); ++k) {
    const auto& s = seqs[k];
    const DecimalRounding mode = row_rounding(s, problem);
    for (std::size_t i = 0; i < s.estimates.size(); ++i) {
      const auto& e = s.estimates[i];
      const int dec = row_decimals(s, i);
      // mark a complex pair only when the imaginary part shows at this resolution
      const bool cplx = e.imag.abs() >= BigFloat::pow10(-dec, e.imag.digits());
      cells[e.D][k] = map.apply(e.u).to_fixed(dec, mode) + (cplx ? " (c)" : "");
    }
  }
  std::vector<std::size_t> width(seqs.size(), 8);
  for (const auto& [D, row] : cells) {
    for (const auto& [k, v] : row) width[k] = std::max(width[k], v.size());
  }
  os << std::setw(4) << "D";
  for (std::size_t k = 0; k < seqs.size(); ++k) os << "  " << std::left << std::setw(static_cast<int>(width[k])) << ("d=" + std::to_string(seqs[k].d)) << std::right;
  os << "\n";
  for (const auto& [D, row] : cells) {
    os << std::setw(4) << D;
    for (std::size_t k = 0; k < seqs.size(); ++k) {
      auto it = row.find(k);
      os << "  " << std::left << std::setw(static_cast<int>(width[k])) << (it == row.end() ? "" : it->second) << std::right;
    }
    os << "\n";
  }
  os << "\n";
  for (const auto& s : seqs) {
    os << "d=" << s.d << ": " << to_string(s.classification);
    if (s.bound_kind) os << " (" << to_string(*s.bound_kind) << " bound)";
    os << ", agreed digits " << s.agreed_digits;
    if (s.converged_value) os << ", value " << map.apply(*s.converged_value).to_string(s.agreed_digits + 3);
    if (s.stopped_early) os << ", stopped early";
    if (s.lost) os << ", sequence lost";
    if (!s.diagnostic.empty()) os << " [" << s.diagnostic << "]";
    os << "\n";
  }
  return os.str();
}

inline std::string render_csv(const std::vector<RootSequence>& seqs) {
  std::ostringstream os;
  const bool many = seqs.size() > 1;
  os << (many ? "d,D,estimate\n" : "D,estimate\n");
  for (const auto& s : seqs) {
    for (const auto& e : s.estimates) {
      if (many) os << s.d << ",";
      os << e.D << "," << decimal(e.u) << "\n";
    }
  }
  return os.str();
}

inline int solve_exit(const std::vector<RootSequence>& seqs) {
  for (const auto& s : seqs) {
    if (s.lost || s.classification == Classification::Nonconvergent) return 1;
  }
  return 0;
}

// ---- commands ------------------------------------------------------------

template <class F>
CommandResult guarded(F&& body) {
  CommandResult r;
  try {
    body(r);
  } catch (const Error& e) {
    r.exit_code = exit_code_for(e.code());
    r.error = e.what();
  }
  return r;
}

inline CommandResult cmd_list(Format format) {
  return guarded([&](CommandResult& r) {
    if (format == Format::Json) {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& name : catalog()) {
        auto p = instantiate(name);
        j.push_back({{"name", p.name},
                     {"alpha", p.alpha.get_str()},
                     {"beta", p.beta.get_str()},
                     {"unknown", p.unknown_name()},
                     {"recommended_d", p.recommended_d},
                     {"degenerate", p.degenerate},
                     {"oracle", p.oracle.in_scope}});
      }
      r.output = dump(j);
      return;
    }
    std::ostringstream os;
    if (format == Format::Csv) {
      os << "name,alpha,beta,unknown,recommended_d\n";
    } else {
      os << std::left << std::setw(17) << "problem" << std::setw(7) << "alpha" << std::setw(6) << "beta"
         << std::setw(9) << "unknown" << "recommended d\n";
    }
    for (const auto& name : catalog()) {
      auto p = instantiate(name);
      std::string ds;
      for (int d : p.recommended_d) ds += (ds.empty() ? "" : " ") + std::to_string(d);
      if (p.degenerate) ds = "-";
      if (format == Format::Csv) {
        os << p.name << "," << p.alpha.get_str() << "," << p.beta.get_str() << "," << p.unknown_name() << "," << ds
           << "\n";
      } else {
        os << std::setw(17) << p.name << std::setw(7) << p.alpha.get_str() << std::setw(6) << p.beta.get_str()
           << std::setw(9) << p.unknown_name() << ds << (p.degenerate ? "  (degenerate)" : "") << "\n";
      }
    }
    r.output = os.str();
  });
}

inline CommandResult cmd_solve(RunConfig cfg) {
  return guarded([&](CommandResult& r) {
    validate(cfg);
    ProblemDefinition problem = instantiate(cfg.problem, cfg.params);
    if (cfg.ds.empty()) cfg.ds = problem.recommended_d.empty() ? std::vector<int>{0} : problem.recommended_d;
    auto seqs = run_all(problem, cfg);
    switch (cfg.format) {
      case Format::Json: {
        if (seqs.size() == 1) {
          r.output = dump(sequence_json(seqs[0], problem));
        } else {
          nlohmann::json j = nlohmann::json::array();
          for (const auto& s : seqs) j.push_back(sequence_json(s, problem));
          r.output = dump(j);
        }
        break;
      }
      case Format::Csv: r.output = render_csv(seqs); break;
      case Format::Text: r.output = render_text(seqs, problem); break;
    }
    r.exit_code = solve_exit(seqs);
    for (const auto& s : seqs) {
      if (!s.diagnostic.empty()) r.error += "d=" + std::to_string(s.d) + ": " + s.diagnostic + "\n";
    }
  });
}

inline CommandResult cmd_delta(RunConfig cfg) {
  return guarded([&](CommandResult& r) {
    validate(cfg);
    if (cfg.ds.empty()) cfg.ds = {0, 1};
    if (cfg.ds.size() != 2) throw Error(ErrorCode::Usage, "delta needs exactly two d values");
    if (cfg.ds[0] == cfg.ds[1]) throw Error(ErrorCode::Usage, "delta needs two different d values");
    ProblemDefinition problem = instantiate(cfg.problem, cfg.params);
    auto seqs = run_all(problem, cfg);
    DeltaCurve curve = delta_curve(seqs[0], seqs[1]);
    std::ostringstream os;
    if (cfg.format == Format::Json) {
      nlohmann::json j;
      j["problem"] = problem.name;
      j["params"] = nlohmann::json::object();
      for (const auto& [k, v] : problem.params) j["params"][k] = v;
      j["d"] = cfg.ds;
      j["points"] = nlohmann::json::array();
      for (const auto& p : curve.points) j["points"].push_back({{"D", p.D}, {"delta", decimal(p.delta, 6)}});
      j["decreasing_from"] = curve.decreasing_from ? nlohmann::json(*curve.decreasing_from) : nlohmann::json(nullptr);
      r.output = dump(j);
    } else {
      if (cfg.format == Format::Text) os << "# delta = |u(D, d=" << cfg.ds[0] << ") - u(D, d=" << cfg.ds[1] << ")|\n";
      os << "D,delta\n";
      for (const auto& p : curve.points) os << p.D << "," << decimal(p.delta, 6) << "\n";
      if (cfg.format == Format::Text && curve.decreasing_from) {
        os << "# strictly decreasing from D=" << *curve.decreasing_from << "\n";
      }
      r.output = os.str();
    }
    r.exit_code = solve_exit(seqs);
  });
}

inline CommandResult cmd_oracle(RunConfig cfg) {
  return guarded([&](CommandResult& r) {
    validate(cfg);
    ProblemDefinition problem = instantiate(cfg.problem, cfg.params);
    if (problem.degenerate || !problem.oracle.in_scope) {
      throw Error(ErrorCode::OutOfScope, problem.name + " is not in oracle scope");
    }
    if (cfg.ds.empty()) cfg.ds = {problem.recommended_d.empty() ? 0 : problem.recommended_d.front()};
    if (!(cfg.tol > 0)) throw Error(ErrorCode::Usage, "--tol must be positive");
    ShootingResult shot = bisect_parameter(problem, problem.oracle.bracket_lo, problem.oracle.bracket_hi, cfg.tol);
    RootSequence seq = run_sequence(problem, cfg.ds.front(), cfg.D_max, parse_guess(cfg), solver_config(cfg));
    std::optional<BigFloat> hankel = seq.converged_value;
    if (!hankel && !seq.estimates.empty()) hankel = seq.estimates.back().u;
    int agree = 0;
    if (hankel) agree = agreed_decimals(*hankel, shot.parameter, 30);
    if (cfg.format == Format::Json) {
      nlohmann::json j;
      j["problem"] = problem.name;
      j["shooting"] = {{"value", decimal(shot.parameter, 20)},
                       {"bracket_width", decimal(shot.bracket_width, 6)},
                       {"converged", shot.converged}};
      j["hankel"] = {{"d", seq.d},
                     {"value", hankel ? nlohmann::json(decimal(*hankel)) : nlohmann::json(nullptr)},
                     {"classification", to_string(seq.classification)}};
      j["agreed_digits"] = agree;
      r.output = dump(j);
    } else {
      std::ostringstream os;
      os << "problem   " << problem.name << "\n";
      os << "shooting  " << shot.parameter.to_string(16) << "  (bracket " << shot.bracket_width.to_string(3) << ")\n";
      os << "hankel    " << (hankel ? hankel->to_string(25) : std::string("none")) << "  (d=" << seq.d << ", "
         << to_string(seq.classification) << ")\n";
      os << "agreement " << agree << " digits\n";
      r.output = os.str();
    }
    r.exit_code = hankel ? 0 : 1;
  });
}

// ---- argument handling -----------------------------------------------------

inline std::map<std::string, long> parse_params(const std::vector<std::string>& kv) {
  std::map<std::string, long> out;
  for (const auto& item : kv) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorCode::BadParams, "expected key=value, got '" + item + "'");
    std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    char* end = nullptr;
    long v = std::strtol(val.c_str(), &end, 10);
    if (val.empty() || *end != '\0') throw Error(ErrorCode::BadParams, "parameter " + key + " must be an integer");
    out[key] = v;
  }
  return out;
}

/// Full command line to result; writes --out itself.
inline CommandResult run(int argc, const char* const* argv) {
  CLI::App app{"Hankel-Pade solver for nonlinear two-point boundary value problems"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::vector<std::string> kv;
  std::string format = "text";
  std::string guess;
  int precision = 0;

  auto* list = app.add_subcommand("list", "show the problem catalog");
  list->add_option("--format", format)->check(CLI::IsMember({"text", "json", "csv"}));

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("problem", cfg.problem, "problem name")->required();
    sub->add_option("-p,--param", kv, "problem parameter key=value");
    sub->add_option("--d", cfg.ds, "Hankel offset (repeatable)");
    sub->add_option("--Dmax", cfg.D_max, "largest determinant dimension");
    sub->add_option("--digits", cfg.target_digits, "stop once two steps agree to this many digits");
    sub->add_option("--precision", precision, "fixed working precision in digits");
    sub->add_option("--guess", guess, "start near this value");
    sub->add_option("--format", format)->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_option("--out", cfg.out, "write output here instead of stdout");
  };
  auto* solve = app.add_subcommand("solve", "run Hankel sequences");
  add_common(solve);
  auto* delta = app.add_subcommand("delta", "difference of two Hankel sequences");
  add_common(delta);
  auto* oracle = app.add_subcommand("oracle", "compare with shooting");
  add_common(oracle);
  oracle->add_option("--tol", cfg.tol, "shooting bracket width");

  CommandResult res;
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    int code = app.exit(e, out, err);
    res.output = out.str();
    res.error = err.str();
    res.exit_code = code == 0 ? 0 : 3;
    return res;
  }
  cfg.format = format == "json" ? Format::Json : format == "csv" ? Format::Csv : Format::Text;
  if (!guess.empty()) cfg.guess = guess;
  if (precision > 0) cfg.precision.fixed = precision;

  if (*list) {
    res = cmd_list(cfg.format);
  } else {
    try {
      cfg.params = parse_params(kv);
    } catch (const Error& e) {
      res.exit_code = exit_code_for(e.code());
      res.error = e.what();
      return res;
    }
    if (*solve) res = cmd_solve(cfg);
    if (*delta) res = cmd_delta(cfg);
    if (*oracle) res = cmd_oracle(cfg);
  }
  if (!cfg.out.empty() && !res.output.empty()) {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) {
      res.error += "cannot write " + cfg.out + "\n";
      res.exit_code = 3;
    } else {
      f << res.output;
      res.output.clear();
    }
  }
  return res;
}

}  // namespace padehankel::cli
