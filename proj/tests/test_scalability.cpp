#include <doctest.h>

#include <cmath>
#include <random>

#include "fjscale/scalability.hpp"

using namespace fjscale;

namespace {

FamilySpec family(FamilyKind kind, int i = 1) {
  FamilySpec s;
  s.kind = kind;
  s.index = i;
  return s;
}

int rank(Outcome o) {
  switch (o) {
    case Outcome::not_scalable: return 0;
    case Outcome::indeterminate: return 1;
    case Outcome::scalable: return 2;
  }
  return -1;
}

}  // namespace

TEST_CASE("decision table examples") {
  CHECK(theorem_verdict(1, 1, 2.5).outcome == Outcome::scalable);
  CHECK(theorem_verdict(2, 2, 2.5).outcome == Outcome::not_scalable);
  CHECK(theorem_verdict(std::log2(3.0), 2, 2.8).outcome == Outcome::indeterminate);
  CHECK(theorem_verdict(2, 2, 4).outcome == Outcome::scalable);
  CHECK(theorem_verdict(INFINITY, INFINITY, 50).outcome == Outcome::not_scalable);
  const auto v = theorem_verdict(1, 1, 2.5);
  REQUIRE(v.reasons.size() == 1);
  CHECK(v.reasons[0].find("1.5") != std::string::npos);
}

TEST_CASE("boundary alpha - 1 = dimension is indeterminate") {
  CHECK(theorem_verdict(1, 1, 2).outcome == Outcome::indeterminate);
  CHECK(theorem_verdict(2, 2, 3).outcome == Outcome::indeterminate);
}

TEST_CASE("unbounded degree or level overrides the dimensions") {
  const auto d = theorem_verdict(1, 1, 10, false, true);
  CHECK(d.outcome == Outcome::not_scalable);
  CHECK(d.reasons[0].find("degree") != std::string::npos);
  const auto l = theorem_verdict(1, 1, 10, true, false);
  CHECK(l.outcome == Outcome::not_scalable);
  CHECK(l.reasons[0].find("level") != std::string::npos);
}

TEST_CASE("invalid verdict inputs") {
  CHECK_THROWS_AS(theorem_verdict(1, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(theorem_verdict(1, 1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(theorem_verdict(-1, 1, 3), std::invalid_argument);
}

TEST_CASE("verdicts are consistent and monotone in alpha") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dim(0.0, 4.0);
  for (int t = 0; t < 500; ++t) {
    double s = dim(rng), e = dim(rng);
    if (s > e) std::swap(s, e);
    int prev = -1;
    for (double alpha = 1.05; alpha < 7; alpha += 0.1) {
      const auto v = theorem_verdict(s, e, alpha);
      if (v.outcome == Outcome::scalable) CHECK(e < alpha - 1);
      if (v.outcome == Outcome::not_scalable) CHECK(s > alpha - 1);
      if (v.outcome == Outcome::indeterminate) CHECK((s <= alpha - 1 && alpha - 1 <= e));
      CHECK(rank(v.outcome) >= prev);
      prev = rank(v.outcome);
    }
  }
}

TEST_CASE("sufficient condition through the tail integral") {
  const auto light = sufficient_via_K(ServiceDistribution::pareto(3, 1), 1);
  CHECK(light.sufficient);
  CHECK(light.K == 2);
  REQUIRE(light.integral.has_value());
  CHECK(*light.integral == doctest::Approx(3.0));
  const auto heavy = sufficient_via_K(ServiceDistribution::pareto(2, 1), 1);
  CHECK_FALSE(heavy.sufficient);
  CHECK(heavy.K == 2);
  CHECK(sufficient_via_K(ServiceDistribution::deterministic(1), 3).sufficient);
  CHECK(sufficient_via_K(ServiceDistribution::exponential(1), 2).K == 3);
  CHECK_FALSE(sufficient_via_K(ServiceDistribution::exponential(1), INFINITY).sufficient);
}

TEST_CASE("exponential growth along families") {
  const std::vector<int> trees = {4, 6, 8, 10, 12};
  CHECK(exponential_growth_verdict(family(FamilyKind::binary_tree), trees));
  CHECK(exponential_growth_verdict(family(FamilyKind::tandem_plus_tree), trees));
  const std::vector<int> lines = {32, 64, 128, 256, 512};
  CHECK_FALSE(exponential_growth_verdict(family(FamilyKind::tandem), lines));
  const std::vector<int> grids = {4, 8, 16, 32};
  CHECK_FALSE(exponential_growth_verdict(family(FamilyKind::lattice), grids));
}

TEST_CASE("degree and level condition") {
  const std::vector<int> idx = {2, 4, 6, 8};
  const auto t = condition_one(family(FamilyKind::tandem), idx);
  CHECK(t.degree_bounded);
  CHECK(t.level_bounded);
  CHECK(t.degrees == std::vector<int>{2, 2, 2, 2});
  CHECK(t.levels == std::vector<int>{1, 1, 1, 1});
  const auto g = condition_one(family(FamilyKind::lattice), idx);
  CHECK(g.degree_bounded);
  CHECK(g.level_bounded);
  CHECK_THROWS(condition_one(family(FamilyKind::tandem), std::vector<int>{3}));
}

TEST_CASE("empirical trend classification") {
  const std::vector<double> x = {10, 20, 40, 80, 160};
  std::vector<double> flat, decaying, mild;
  for (double i : x) {
    flat.push_back(0.4 * (1 + 0.01 * std::sin(i)));
    decaying.push_back(std::pow(i, -0.5));
    mild.push_back(std::pow(i, -0.08));
  }
  CHECK(empirical_verdict(x, flat).trend == Trend::plateau);
  const auto d = empirical_verdict(x, decaying);
  CHECK(d.trend == Trend::decay);
  CHECK(d.slope == doctest::Approx(-0.5));
  CHECK(d.ratio == doctest::Approx(std::pow(16.0, -0.5)));
  CHECK(empirical_verdict(x, mild).trend == Trend::inconclusive);
  CHECK_THROWS(empirical_verdict(std::vector<double>{1, 2, 3}, std::vector<double>{1, 1, 1}));

  TrendThresholds loose;
  loose.decay_slope = -0.05;
  loose.decay_ratio = 0.9;
  CHECK(empirical_verdict(x, mild, loose).trend == Trend::decay);
}

TEST_CASE("trend from a curve") {
  std::vector<CurvePoint> curve(4);
  for (int k = 0; k < 4; ++k) {
    curve[k].index = 1 << (k + 2);
    curve[k].estimate.point = 1.0 / curve[k].index;
  }
  const auto v = empirical_verdict(curve);
  CHECK(v.trend == Trend::decay);
  CHECK(v.slope == doctest::Approx(-1.0));
}

TEST_CASE("verdict json") {
  const auto j = verdict_json(theorem_verdict(std::log2(3.0), 2, 2.8));
  CHECK(j["outcome"] == "indeterminate");
  CHECK(j["thresholds"]["necessary_alpha_at_least"].get<double>() == doctest::Approx(std::log2(3.0) + 1));
  CHECK(j["thresholds"]["sufficient_alpha_above"] == 3.0);
  const auto inf = verdict_json(theorem_verdict(INFINITY, INFINITY, 3));
  CHECK(inf["inputs"]["dim_s"] == "infinity");
  CHECK(inf["thresholds"]["sufficient_alpha_above"] == "infinity");
  CHECK(to_string(Outcome::not_scalable) == "not_scalable");
  CHECK(to_string(Trend::plateau) == "plateau");
}

TEST_CASE("threshold overrides from json") {
  const auto t = thresholds_from_json({{"decay_ratio", 0.5}});
  CHECK(t.decay_ratio == 0.5);
  CHECK(t.decay_slope == -0.1);
  CHECK(t.plateau_slope == 0.05);
  CHECK(t.plateau_ratio == 0.7);
  const auto back = thresholds_from_json(to_json(t));
  CHECK(back.decay_ratio == 0.5);
}
