#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "fjscale/percolation.hpp"
#include "fjscale/simulation.hpp"
#include "test_helpers.hpp"

using namespace fjscale;
using fjscale::testing::make_net;

namespace {

std::vector<PrecedenceNode> targets(const std::vector<PrecedenceArc>& arcs) {
  std::vector<PrecedenceNode> out;
  for (const auto& a : arcs) out.push_back(a.to);
  return out;
}

// Exhaustive depth-first enumeration of every path from p, optionally to a
// fixed target; -inf when the target is unreachable.
double brute_force(const Network& net, const WeightField& field, PrecedenceNode p,
                   std::optional<PrecedenceNode> target = std::nullopt) {
  if (target && p == *target) return field(p);
  double best = target ? -INFINITY : 0.0;
  for (const auto& arc : arcs_out(net, p)) best = std::max(best, brute_force(net, field, arc.to, target));
  return best == -INFINITY ? best : field(p) + best;
}

FamilySpec tandem_spec(int i, int b = 1) {
  FamilySpec s;
  s.index = i;
  s.buffer_size = b;
  return s;
}

double exact_expected_max(double alpha, double n) {
  return std::exp(std::lgamma(n + 1) + std::lgamma(1 - 1 / alpha) - std::lgamma(n + 1 - 1 / alpha));
}

}  // namespace

TEST_CASE("arcs_out examples") {
  const Network t1 = make_net(2, {{0, 1}}, 1);
  const auto a = arcs_out(t1, {2, 1});
  CHECK(targets(a) == std::vector<PrecedenceNode>{{1, 1}, {2, 0}});
  CHECK(a[0].type == ArcType::type_II);
  CHECK(a[1].type == ArcType::type_I);

  CHECK(arcs_out(t1, {0, 0}).empty());
  CHECK(targets(arcs_out(t1, {0, 1})) == std::vector<PrecedenceNode>{{0, 0}});

  const Network t2 = make_net(2, {{0, 1}}, 2);
  const auto c = arcs_out(t2, {2, 0});
  CHECK(targets(c) == std::vector<PrecedenceNode>{{0, 1}, {1, 0}});
  CHECK(c[0].type == ArcType::type_III);
  CHECK(c[1].type == ArcType::type_II);
  CHECK(targets(arcs_out(t2, {1, 0})) == std::vector<PrecedenceNode>{{0, 0}});

  CHECK_THROWS(arcs_out(t1, {-1, 0}));
  CHECK_THROWS(arcs_out(t1, {0, 2}));
}

TEST_CASE("lpp_value examples") {
  CHECK(lpp_value(make_net(1, {}), ServiceDistribution::deterministic(1), 3, 0, 1, 0) == 4);
  const Network t = make_net(2, {{0, 1}});
  const auto dist = ServiceDistribution::pareto(2.5, 1.0);
  CHECK(lpp_value(t, dist, 2, 1, 99, 0) == completion_history(t, dist, 2, 99, 0)[2][1]);
}

TEST_CASE("lpp equals simulation on random networks") {
  std::mt19937_64 rng(31);
  const auto dist = ServiceDistribution::pareto(1.8, 1.0);
  for (int t = 0; t < 40; ++t) {
    const Network net = fjscale::testing::random_dag(rng, 1 + static_cast<int>(rng() % 6), 1 + t % 3);
    const std::uint64_t seed = rng();
    const auto hist = completion_history(net, dist, 8, seed, 2);
    for (std::int64_t m = 0; m <= 8; ++m)
      for (NodeId v = 0; v < net.num_nodes(); ++v) CHECK(lpp_value(net, dist, m, v, seed, 2) == hist[m][v]);
  }
}

TEST_CASE("lpp equals exhaustive enumeration on small precedence graphs") {
  std::mt19937_64 rng(32);
  const auto dist = ServiceDistribution::exponential(1.0);
  for (int t = 0; t < 60; ++t) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const Network net = fjscale::testing::random_dag(rng, n, 1 + t % 2);
    const WeightField field(dist, t, 0);
    for (std::int64_t m = 0; m <= 3; ++m)
      for (NodeId v = 0; v < n; ++v)
        CHECK(lpp_value(net, dist, m, v, t, 0) == doctest::Approx(brute_force(net, field, {m, v})).epsilon(1e-12));
  }
}

TEST_CASE("extracted paths are legal, heaviest and end on row 0") {
  std::mt19937_64 rng(33);
  const auto dist = ServiceDistribution::pareto(2.5, 1.0);
  for (int t = 0; t < 50; ++t) {
    const Network net = fjscale::testing::random_dag(rng, 1 + static_cast<int>(rng() % 7), 1 + t % 3);
    const std::int64_t m = static_cast<std::int64_t>(rng() % 15);
    const NodeId v = static_cast<NodeId>(rng() % net.num_nodes());
    const std::uint64_t seed = rng();
    const auto path = extract_max_path(net, dist, m, v, seed, 0);
    CHECK(path.nodes.front() == PrecedenceNode{m, v});
    CHECK(path.nodes.back().m == 0);
    CHECK(arcs_out(net, path.nodes.back()).empty());
    CHECK(path_is_consistent(net, path, WeightField(dist, seed, 0)));
    CHECK(path.weight == doctest::Approx(lpp_value(net, dist, m, v, seed, 0)).epsilon(1e-12));
  }
}

TEST_CASE("ties go to the smallest successor") {
  // Unit weights on a two-node tandem with b = 2: from (1,1) both (0,1) and
  // (1,0) lead to weight 3; (0,1) is the smaller successor.
  const Network t = make_net(2, {{0, 1}}, 2);
  const auto path = extract_max_path(t, ServiceDistribution::deterministic(1), 1, 1, 1, 0);
  REQUIRE(path.nodes.size() == 3);
  CHECK(path.nodes[1] == PrecedenceNode{0, 1});
  CHECK(path.weight == 3);

  // With b = 1 there is no tie: the blocking arc (1,0) -> (0,1) makes the
  // route through (1,0) one node longer.
  const Network t1 = make_net(2, {{0, 1}}, 1);
  const auto p1 = extract_max_path(t1, ServiceDistribution::deterministic(1), 1, 1, 1, 0);
  CHECK(p1.nodes == std::vector<PrecedenceNode>{{1, 1}, {1, 0}, {0, 1}, {0, 0}});
  CHECK(p1.weight == 4);
}

TEST_CASE("path_is_consistent rejects tampered paths") {
  const Network t = make_net(3, {{0, 1}, {1, 2}});
  const auto dist = ServiceDistribution::exponential(1);
  const WeightField field(dist, 4, 0);
  auto path = extract_max_path(t, dist, 4, 2, 4, 0);
  CHECK(path_is_consistent(t, path, field));
  auto heavier = path;
  heavier.weight += 1;
  CHECK_FALSE(path_is_consistent(t, heavier, field));
  auto skipped = path;
  skipped.nodes.erase(skipped.nodes.begin() + 1);
  skipped.arc_types.erase(skipped.arc_types.begin());
  CHECK_FALSE(path_is_consistent(t, skipped, field));
}

TEST_CASE("exists_path examples") {
  for (int b : {1, 2, 3}) {
    FamilySpec s;
    s.kind = FamilyKind::ladder;
    s.index = 4;
    s.buffer_size = b;
    const Network net = generate(s);
    const int diam = diameter(net).value;
    for (NodeId v = 0; v < net.num_nodes(); ++v)
      for (NodeId w = 0; w < net.num_nodes(); ++w) CHECK(exists_path(net, {10 + diam * b, v}, {10, w}));
  }
  const Network t = make_net(2, {{0, 1}});
  CHECK_FALSE(exists_path(t, {1, 0}, {2, 0}));
  CHECK(exists_path(t, {3, 1}, {3, 1}));
  CHECK_FALSE(exists_path(t, {3, 0}, {3, 1}));
}

TEST_CASE("point-to-point values match enumeration") {
  std::mt19937_64 rng(34);
  const auto dist = ServiceDistribution::pareto(3.0, 1.0);
  for (int t = 0; t < 60; ++t) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const Network net = fjscale::testing::random_dag(rng, n, 1 + t % 2);
    const PrecedenceNode from{static_cast<std::int64_t>(rng() % 4), static_cast<NodeId>(rng() % n)};
    const PrecedenceNode to{static_cast<std::int64_t>(rng() % (from.m + 1)), static_cast<NodeId>(rng() % n)};
    const WeightField field(dist, t, 1);
    const double brute = brute_force(net, field, from, to);
    const auto v = lpp_between(net, dist, from, to, t, 1);
    CHECK(exists_path(net, from, to) == v.has_value());
    CHECK(std::isfinite(brute) == v.has_value());
    if (v) {
      CHECK(*v == doctest::Approx(brute).epsilon(1e-12));
      const auto path = extract_path_between(net, dist, from, to, t, 1);
      REQUIRE(path.has_value());
      CHECK(path->nodes.back() == to);
      CHECK(path_is_consistent(net, *path, field));
      CHECK(path->weight == doctest::Approx(*v).epsilon(1e-12));
    } else {
      CHECK_FALSE(extract_path_between(net, dist, from, to, t, 1).has_value());
    }
  }
}

TEST_CASE("super-additivity") {
  const auto dist = ServiceDistribution::pareto(2.0, 1.0);
  const Network net = generate(tandem_spec(5));
  CHECK(check_superadditivity(net, dist, {9, 4}, {3, 2}, {3, 2}, 8, 0));
  // Equality in the degenerate case.
  const auto ac = *lpp_between(net, dist, {9, 4}, {3, 2}, 8, 0);
  const auto bb = *lpp_between(net, dist, {3, 2}, {3, 2}, 8, 0);
  CHECK(bb == WeightField(dist, 8, 0)({3, 2}));
  CHECK(ac + bb - WeightField(dist, 8, 0)({3, 2}) == ac);

  const int diam = 5;
  for (int b : {1, 2}) {
    const Network nb = generate(tandem_spec(5, b));
    const std::int64_t m = 3 * diam * b;
    for (NodeId v = 0; v <= 5; ++v)
      CHECK(check_superadditivity(nb, dist, {m, v}, {m - diam * b, 5 - v}, {m - 2 * diam * b, 0}, 11, 0));
  }
  CHECK_THROWS_AS(check_superadditivity(net, dist, {2, 0}, {3, 0}, {0, 0}, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(check_superadditivity(net, dist, {4, 0}, {3, 0}, {3, 1}, 1, 0), std::invalid_argument);
}

TEST_CASE("path length bounds") {
  const Network single = make_net(1, {});
  const auto path = extract_max_path(single, ServiceDistribution::deterministic(1), 3, 0, 1, 0);
  CHECK(path.num_arcs() == 3);
  const auto chk = path_length_bound_check(path, single, minimum_level(single));
  CHECK(chk.ok);
  CHECK(chk.length_budget_times_b == 3);  // max(0 + 1, 1) * 3

  const auto lvl1 = MinimumLevel{1, {0}};
  CHECK(path_length_bound_check(path, single, lvl1).length_budget_times_b == 6);

  std::mt19937_64 rng(35);
  for (int t = 0; t < 200; ++t) {
    const Network net = fjscale::testing::random_dag(rng, 2 + static_cast<int>(rng() % 6), 1 + t % 3);
    const auto level = minimum_level(net);
    const std::int64_t m = static_cast<std::int64_t>(rng() % 25);
    const NodeId v = static_cast<NodeId>(rng() % net.num_nodes());
    const auto p = extract_max_path(net, ServiceDistribution::pareto(1.5, 1.0), m, v, rng(), 0);
    const auto c = path_length_bound_check(p, net, level);
    CHECK(c.ok);
    if (p.nodes.back().v == v) CHECK(p.num_arcs() <= std::max(level.level + 1, net.buffer_size()) * m / net.buffer_size());
  }
}

TEST_CASE("type III count on a tandem with b = 2") {
  const Network net = generate(tandem_spec(6, 2));
  const auto level = minimum_level(net);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto p = extract_max_path(net, ServiceDistribution::pareto(2.0, 1.0), 30, 0, seed, 0);
    CHECK(p.type_counts[2] * 2 <= 30);
    CHECK(path_length_bound_check(p, net, level).type_III_ok);
  }
}

TEST_CASE("path length check catches a path that is too long") {
  const Network single = make_net(1, {});
  PathResult fake;
  fake.nodes = {{1, 0}, {0, 0}, {0, 0}, {0, 0}};
  fake.arc_types = {ArcType::type_II, ArcType::type_I, ArcType::type_I};
  CHECK_FALSE(path_length_bound_check(fake, single, minimum_level(single)).length_ok);
}

TEST_CASE("upper bound examples") {
  FamilySpec s = tandem_spec(4);
  const Network net = generate(s);
  const auto det = upper_bound_throughput(net, ServiceDistribution::deterministic(1), 100, 1);
  CHECK(det.bound == doctest::Approx(3.0 * 4));
  CHECK(det.std_error == doctest::Approx(0.0));
  CHECK(det.draws_per_sample == 4 * 5);

  const auto dist = ServiceDistribution::pareto(2.0, 1.0);
  const Network ladder = generate([] {
    FamilySpec l;
    l.kind = FamilyKind::ladder;
    l.index = 10;
    l.buffer_size = 2;
    return l;
  }());
  // The scaled maximum has infinite variance at alpha = 2, so many samples.
  const auto ub = upper_bound_throughput(ladder, dist, 1'000'000, 3);
  const double oracle = exact_expected_max(2.0, static_cast<double>(ub.draws_per_sample));
  CHECK(ub.draws_per_sample == 10 * 2 * 20);
  CHECK(std::abs(ub.mean_max - oracle) / oracle <= 0.02);
  CHECK(ub.bound == doctest::Approx(3.0 * 10 * 2 / ub.mean_max));
  CHECK_THROWS(upper_bound_throughput(net, dist, 99, 1));
}

TEST_CASE("upper bound on a long tandem falls below simulated throughput of a short one") {
  // The bound decays like i^(1 - 2/alpha) = i^(-1/3) at alpha = 1.5 but starts
  // a factor of about 3.5 above the simulated value at i = 10 (0.26 at i = 100
  // against 0.072), so the crossing sits near i = 4000.
  const auto dist = ServiceDistribution::pareto(1.5, 1.0);
  SimulationConfig cfg;
  cfg.replications = 8;
  const double theta10 = estimate_throughput(generate(tandem_spec(10)), dist, cfg).point;
  const auto at100 = upper_bound_throughput(generate(tandem_spec(100)), dist, 20000, 1);
  const auto at8000 = upper_bound_throughput(generate(tandem_spec(8000)), dist, 20000, 1);
  CHECK(at8000.bound < theta10);
  CHECK(at8000.bound < at100.bound);
  CHECK(at8000.bound / at100.bound == doctest::Approx(std::pow(80.0, -1.0 / 3)).epsilon(0.1));
}
