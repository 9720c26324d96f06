#include <gtest/gtest.h>

#include "padehankel/solver.hpp"
#include "reference_tables.hpp"

using namespace padehankel;

namespace {

std::vector<BigFloat> column(const std::vector<reftab::Row>& rows, int col) {
  std::vector<BigFloat> out;
  for (const auto& r : rows) {
    const char* v = col == 0 ? r.d0 : r.d1;
    if (v) out.push_back(BigFloat::parse(v, 40));
  }
  return out;
}

RootSequence hand_sequence(std::initializer_list<std::pair<int, const char*>> pts) {
  RootSequence s;
  for (const auto& [D, v] : pts) {
    RootEstimate e;
    e.D = D;
    e.u = BigFloat::parse(v, 40);
    s.estimates.push_back(e);
  }
  return s;
}

BigFloat P(const char* s) { return BigFloat::parse(s, 60); }

}  // namespace

TEST(SeedRoots, InstantonFromTwoByTwo) {
  auto r = seed_roots(instantiate("instanton"), 0, 40);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].to_fixed(5, DecimalRounding::TowardZero), "0.16870");
  EXPECT_EQ(r[1].to_fixed(5, DecimalRounding::TowardZero), "0.71499");
}

TEST(SeedRoots, RiccatiFirstSeedIsAtDThree) {
  auto r = seed_roots(instantiate("riccati"), 0, 40);
  ASSERT_FALSE(r.empty());
  bool found = false;
  for (const auto& x : r) found = found || x.to_fixed(4, DecimalRounding::TowardZero) == "0.6704";
  EXPECT_TRUE(found);
}

TEST(SeedRoots, BlasiusIsDegenerate) {
  for (int d = 0; d < 3; ++d) {
    try {
      seed_roots(instantiate("blasius"), d, 30);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::Degenerate);
    }
  }
}

TEST(FindRootNear, RiccatiDoubleRootAtZero) {
  auto s = generate_coefficients(instantiate("riccati"), 3);
  RootEstimate e = find_root_near(s, HankelSpec(2, 0), BigFloat(0.1, 40), 40);
  EXPECT_LT(e.u.abs().to_double(), 1e-10);
  EXPECT_TRUE(e.multiple);
}

TEST(FindRootNear, InstantonTwoByTwo) {
  auto s = generate_coefficients(instantiate("instanton"), 3);
  RootEstimate e = find_root_near(s, HankelSpec(2, 0), BigFloat(0.7, 40), 40);
  EXPECT_EQ(e.u.to_fixed(6, DecimalRounding::TowardZero), "0.714997");
}

TEST(FindRootNear, GlVortexDEight) {
  auto p = instantiate("gl_vortex", {{"n", 1}});
  auto s = generate_coefficients(p, HankelSpec(8, 0).max_index());
  RootEstimate e = find_root_near(s, HankelSpec(8, 0), BigFloat(0.58319, 50), 50);
  EXPECT_TRUE(reftab::matches(e.u, "0.5831897"));
}

TEST(FindRootNear, ScalingTheSeriesDoesNotMoveRoots) {
  for (const char* name : {"gl_vortex", "riccati", "wilson_rg"}) {
    auto p = instantiate(name);
    HankelSpec spec(5, 0);
    auto s = generate_coefficients(p, spec.max_index());
    BigFloat guess(p.reference_value ? BigFloat::parse(p.reference_value->value, 50) : BigFloat(0.5, 50));
    RootEstimate a = find_root_near(s, spec, guess, 50);
    for (BigRational q : {BigRational(-3), BigRational(1, 7), BigRational(1000)}) {
      RootEstimate b = find_root_near(s.scaled(q), spec, guess, 50);
      EXPECT_LT((a.u - b.u).abs(), BigFloat::pow10(-20, 50)) << name << " q=" << q.get_str();
    }
  }
}

TEST(ClassifySequence, PrintedGlColumns) {
  auto c0 = classify_sequence(column(reftab::gl_n1, 0));
  EXPECT_EQ(c0.classification, Classification::MonotoneDecreasing);
  EXPECT_EQ(c0.bound_kind, BoundKind::Upper);
  auto c1 = classify_sequence(column(reftab::gl_n1, 1));
  EXPECT_EQ(c1.classification, Classification::MonotoneIncreasing);
  EXPECT_EQ(c1.bound_kind, BoundKind::Lower);
}

TEST(ClassifySequence, ConstantIsConverged) {
  std::vector<BigFloat> v(6, BigFloat(0.25, 30));
  auto c = classify_sequence(v);
  EXPECT_EQ(c.classification, Classification::Converged);
  EXPECT_FALSE(c.bound_kind.has_value());
}

TEST(ClassifySequence, OscillatingAndGrowing) {
  std::vector<BigFloat> osc, grow;
  for (int k = 0; k < 10; ++k) {
    double step = std::pow(0.3, k) * (k % 2 ? -1 : 1);
    osc.push_back(BigFloat(1.0 + step, 30));
    grow.push_back(BigFloat(1.0 + std::pow(1.5, k) * (k % 2 ? -1 : 1), 30));
  }
  EXPECT_EQ(classify_sequence(osc).classification, Classification::Oscillatory);
  EXPECT_EQ(classify_sequence(grow).classification, Classification::Nonconvergent);
  std::vector<BigFloat> mono;
  for (int k = 0; k < 6; ++k) mono.push_back(BigFloat(static_cast<long>(k * k), 30));
  EXPECT_EQ(classify_sequence(mono).classification, Classification::Nonconvergent);
}

TEST(ClassifySequence, TooFew) {
  std::vector<BigFloat> v(3, BigFloat(1L, 30));
  try {
    classify_sequence(v);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewEstimates);
  }
}

TEST(DeltaCurve, IdenticalSequencesGiveZeros) {
  auto s = hand_sequence({{3, "0.5"}, {4, "0.25"}, {5, "0.125"}});
  auto c = delta_curve(s, s);
  ASSERT_EQ(c.points.size(), 3u);
  for (const auto& p : c.points) EXPECT_TRUE(p.delta.is_zero());
}

TEST(DeltaCurve, PrintedGlRow) {
  auto a = hand_sequence({{21, "0.5831894958609"}, {22, "0.5831894958607"}});
  auto b = hand_sequence({{21, "0.5831894958598"}, {22, "0.5831894958601"}});
  auto c = delta_curve(a, b);
  ASSERT_EQ(c.points.size(), 2u);
  EXPECT_NEAR(c.points[1].delta.to_double(), 6e-13, 1e-20);
  ASSERT_TRUE(c.decreasing_from.has_value());
  EXPECT_EQ(*c.decreasing_from, 21);
}

TEST(DeltaCurve, NoOverlap) {
  auto a = hand_sequence({{3, "1"}}), b = hand_sequence({{4, "1"}});
  try {
    delta_curve(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoOverlap);
  }
}

TEST(RunSequence, Errors) {
  auto expect_code = [](auto&& f, ErrorCode code) {
    try {
      f();
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), code);
    }
  };
  expect_code([] { run_sequence(instantiate("blasius"), 0, 10); }, ErrorCode::Degenerate);
  expect_code([] { run_sequence(instantiate("thomas_fermi"), 0, 10); }, ErrorCode::BadParams);
  expect_code([] { run_sequence(instantiate("riccati"), 0, 2); }, ErrorCode::BadParams);
}

TEST(RunSequence, Riccati) {
  auto s = run_sequence(instantiate("riccati"), 0, 17);
  EXPECT_TRUE(reftab::mismatches(s, reftab::riccati, 0).empty());
  ASSERT_TRUE(s.converged_value);
  EXPECT_EQ(s.converged_value->to_fixed(20, DecimalRounding::Nearest), "0.67597824006728472900");
  // f0c = 2 Gamma(3/4) / Gamma(1/4), evaluated independently
  const int p = 60;
  BigFloat exact = BigFloat(2L, p) * BigFloat(0.75, p).gamma() / BigFloat(0.25, p).gamma();
  EXPECT_GE(agreed_decimals(*s.converged_value, exact, 40), 18);
  EXPECT_EQ(s.classification, Classification::Oscillatory);
}

TEST(RunSequence, WegnerHoughton) {
  auto s = run_sequence(instantiate("wegner_houghton"), 0, 20);
  auto bad = reftab::mismatches(s, reftab::wegner_houghton, 0);
  EXPECT_TRUE(bad.empty()) << bad.front();
  ASSERT_FALSE(s.estimates.empty());
  EXPECT_TRUE(reftab::matches(s.estimates.back().u, "-0.4615337201162"));
}

TEST(RunSequence, ThomasFermiToFifteen) {
  auto p = instantiate("thomas_fermi");
  auto s = run_sequence(p, 4, 15);
  auto bad = reftab::mismatches(s, reftab::thomas_fermi, 0, 2, 15);
  EXPECT_TRUE(bad.empty()) << bad.front();
  ASSERT_FALSE(s.estimates.empty());
  EXPECT_TRUE(reftab::matches(p.physical_map.apply(s.estimates.back().u), "-1.58807102264"));
}

TEST(RunSequence, GlVortexN2Oscillates) {
  auto s = run_sequence(instantiate("gl_vortex", {{"n", 2}}), 0, 21);
  auto bad = reftab::mismatches(s, reftab::gl_n2, 0, 1, 21);
  EXPECT_TRUE(bad.empty()) << bad.front();
  EXPECT_EQ(s.classification, Classification::Oscillatory);
  ASSERT_FALSE(s.estimates.empty());
  EXPECT_TRUE(reftab::matches(s.estimates.back().u, "0.15309910286"));
}

TEST(RunSequence, UserSeedSelectsTheBranch) {
  auto s = run_sequence(instantiate("instanton"), 0, 6, P("0.7"));
  ASSERT_FALSE(s.estimates.empty());
  // D = 6 is still ~6e-4 away from 1/sqrt(2)
  EXPECT_NEAR(s.estimates.back().u.to_double(), 0.70710678, 2e-3);
}

TEST(RunSequence, ScaledSeriesGivesTheSameSequence) {
  auto p = instantiate("riccati");
  const int D_max = 10;
  auto base = run_sequence(p, 0, D_max);
  auto series = generate_coefficients(p, HankelSpec(D_max, 0).max_index());
  auto scaled = run_sequence(source_for(series.scaled(BigRational(-5, 3)), p.domain, "scaled"), 0, D_max, std::nullopt);
  ASSERT_EQ(base.estimates.size(), scaled.estimates.size());
  for (std::size_t i = 0; i < base.estimates.size(); ++i) {
    EXPECT_EQ(base.estimates[i].D, scaled.estimates[i].D);
    EXPECT_LT((base.estimates[i].u - scaled.estimates[i].u).abs(), BigFloat::pow10(-20, 50));
  }
}

TEST(RunSequence, StopsEarlyOnceConverged) {
  SolverConfig cfg;
  cfg.target_digits = 8;
  auto s = run_sequence(instantiate("riccati"), 0, 30, std::nullopt, cfg);
  EXPECT_TRUE(s.stopped_early);
  EXPECT_LT(s.estimates.back().D, 30);
}

TEST(PrecisionPolicy, GrowsWithDimension) {
  PrecisionPolicy p;
  EXPECT_EQ(p.initial(5), 50);
  EXPECT_EQ(p.initial(30), 90);
  p.fixed = 200;
  EXPECT_EQ(p.initial(5), 200);
}
