#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>

#include "fjscale/animals.hpp"
#include "test_helpers.hpp"

using namespace fjscale;

namespace {

double exact_expected_max(double alpha, double n) {
  return std::exp(std::lgamma(n + 1) + std::lgamma(1 - 1 / alpha) - std::lgamma(n + 1 - 1 / alpha));
}

bool connected(const std::vector<LatticePoint>& pts) {
  std::set<LatticePoint> all(pts.begin(), pts.end());
  std::set<LatticePoint> seen{pts.front()};
  std::vector<LatticePoint> stack{pts.front()};
  while (!stack.empty()) {
    auto p = stack.back();
    stack.pop_back();
    for (std::size_t t = 0; t < p.size(); ++t)
      for (int s : {-1, 1}) {
        auto q = p;
        q[t] += s;
        if (all.count(q) && seen.insert(q).second) stack.push_back(q);
      }
  }
  return seen.size() == all.size();
}

// Independent oracle: grow every connected set containing the origin by
// adding one neighbour at a time, deduplicating by the sorted point set.
double brute_force_animal(int n, const std::function<double(const LatticePoint&)>& w) {
  std::set<std::set<LatticePoint>> layer{{LatticePoint{0, 0}}};
  for (int size = 1; size < n; ++size) {
    std::set<std::set<LatticePoint>> next;
    for (const auto& a : layer)
      for (const auto& p : a)
        for (int t = 0; t < 2; ++t)
          for (int s : {-1, 1}) {
            auto q = p;
            q[t] += s;
            if (a.count(q)) continue;
            auto b = a;
            b.insert(q);
            next.insert(b);
          }
    layer = std::move(next);
  }
  double best = -INFINITY;
  for (const auto& a : layer) {
    double sum = 0;
    for (const auto& p : a) sum += w(p);
    best = std::max(best, sum);
  }
  return best;
}

FamilySpec family(FamilyKind kind, int i) {
  FamilySpec s;
  s.kind = kind;
  s.index = i;
  return s;
}

}  // namespace

TEST_CASE("evt scaling for alpha = 2") {
  const auto rep = evt_max_scaling(ServiceDistribution::pareto(2.0, 1.0), 100000, 10000, 1);
  CHECK(rep.limit == doctest::Approx(std::sqrt(M_PI)));
  CHECK(std::abs(rep.mean_scaled_max - std::sqrt(M_PI)) / std::sqrt(M_PI) <= 0.05);
  CHECK(rep.std_error > 0);
}

TEST_CASE("evt scaled means track the gamma-function oracle") {
  for (double alpha : {2.0, 3.0}) {
    const std::int64_t n = 10000;
    const auto rep = evt_max_scaling(ServiceDistribution::pareto(alpha, 1.0), n, 20000, 7);
    const double oracle = exact_expected_max(alpha, n) / std::pow(double(n), 1 / alpha);
    CAPTURE(alpha);
    CHECK(std::abs(rep.mean_scaled_max - oracle) / oracle <= 0.05);
  }
  // Infinite variance at 1.5: the sample mean converges slowly, so more draws.
  const auto rep = evt_max_scaling(ServiceDistribution::pareto(1.5, 1.0), 10000, 200000, 7);
  const double oracle = exact_expected_max(1.5, 1e4) / std::pow(1e4, 1 / 1.5);
  CHECK(std::abs(rep.mean_scaled_max - oracle) / oracle <= 0.05);
}

TEST_CASE("evt with n = 1 is the pareto mean") {
  const auto rep = evt_max_scaling(ServiceDistribution::pareto(3.0, 1.0), 1, 200000, 3);
  CHECK(rep.mean_scaled_max == doctest::Approx(1.5).epsilon(0.02));
}

TEST_CASE("evt rejects other laws") {
  CHECK_THROWS(evt_max_scaling(ServiceDistribution::exponential(1), 10, 10, 1));
  CHECK_THROWS(ServiceDistribution::pareto(1.0, 1.0));
}

TEST_CASE("frechet cdf") {
  CHECK(frechet_cdf(2.0, 1.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(frechet_cdf(2.0, 1e9) == doctest::Approx(1.0));
  CHECK(frechet_cdf(2.0, 0.0) == 0.0);
  CHECK(frechet_cdf(2.0, -3.0) == 0.0);
  double prev = 0;
  for (double x = 0.05; x < 50; x *= 1.3) {
    const double f = frechet_cdf(1.5, x);
    CHECK(f >= prev);
    prev = f;
  }
}

TEST_CASE("lattice field packing") {
  for (int K : {1, 2, 3, 4}) {
    const LatticeField field(ServiceDistribution::exponential(1), K, 1, 0);
    std::mt19937_64 rng(K);
    for (int t = 0; t < 200; ++t) {
      LatticePoint p(K);
      for (int& c : p) c = static_cast<int>(rng() % 2001) - 1000;
      CHECK(field.unpack(field.pack(p)) == p);
      CHECK(field(p) == field.packed(field.pack(p)));
    }
    LatticePoint a(K, 0), b(K, 0);
    b[0] = 1;
    CHECK(field.pack(a) < field.pack(b));
  }
}

TEST_CASE("greedy animal basics") {
  const auto dist = ServiceDistribution::pareto(2.0, 1.0);
  const LatticeField field(dist, 2, 5, 0);
  const auto one = greedy_animal(field, 1);
  REQUIRE(one.points.size() == 1);
  CHECK(one.points[0] == LatticePoint{0, 0});
  CHECK(one.weight == field(LatticePoint{0, 0}));

  const auto big = greedy_animal(field, 200);
  CHECK(big.points.size() == 200);
  CHECK(std::set<LatticePoint>(big.points.begin(), big.points.end()).size() == 200);
  CHECK(connected(big.points));
  double sum = 0;
  for (const auto& p : big.points) sum += field(p);
  CHECK(big.weight == doctest::Approx(sum));

  const auto prefix = greedy_prefix_weights(field, 200);
  CHECK(prefix.size() == 200);
  CHECK(prefix.back() == doctest::Approx(big.weight));
  CHECK(greedy_animal(2, 50, dist, 5, 0).weight == doctest::Approx(prefix[49]));
}

TEST_CASE("directed path prefix weights on unit weights") {
  const LatticeField field(ServiceDistribution::deterministic(1), 2, 1, 0);
  const auto w = directed_path_prefix_weights(field, 20);
  for (int n = 1; n <= 20; ++n) CHECK(w[n - 1] == n);
}

TEST_CASE("exact max animal small cases") {
  auto w = [](std::span<const int> p) {
    double s = 1.0;
    for (std::size_t t = 0; t < p.size(); ++t) s += (t + 1) * 0.1 * p[t] + 0.01 * p[t] * p[t];
    return s;
  };
  CHECK(exact_max_animal(2, 1, w) == doctest::Approx(1.0));
  auto w1 = [](std::span<const int> p) { return p[0] == -1 ? 5.0 : p[0] == 1 ? 3.0 : 1.0; };
  CHECK(exact_max_animal(1, 2, w1) == 6.0);
  CHECK_THROWS_AS(exact_max_animal(2, 8, w, 10), BudgetExceeded);
}

TEST_CASE("exact max animal matches brute force at n <= 4") {
  for (int t = 0; t < 10; ++t) {
    const LatticeField field(ServiceDistribution::pareto(1.5, 1.0), 2, 100 + t, 0);
    auto w = [&](const LatticePoint& p) { return field(p); };
    for (int n = 1; n <= 4; ++n)
      CHECK(exact_max_animal(2, n, [&](std::span<const int> p) { return field(p); }) ==
            doctest::Approx(brute_force_animal(n, w)));
  }
}

TEST_CASE("greedy never beats the exact optimum") {
  for (int n = 1; n <= 8; ++n)
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const LatticeField field(ServiceDistribution::pareto(2.0, 1.0), 2, seed, 0);
      const double exact = exact_max_animal(2, n, [&](std::span<const int> p) { return field(p); });
      CHECK(greedy_animal(field, n).weight <= exact * (1 + 1e-12));
      CHECK(directed_path_prefix_weights(field, n).back() <= exact * (1 + 1e-12));
    }
}

TEST_CASE("growth rate") {
  const std::vector<std::int64_t> sizes = {10, 100, 1000};
  for (auto strategy : {AnimalStrategy::greedy, AnimalStrategy::best_of}) {
    const auto unit = animal_growth_rate(2, sizes, ServiceDistribution::deterministic(1), 2, 1, strategy);
    for (const auto& p : unit) CHECK(p.mean == doctest::Approx(1.0));
  }
  const auto light = animal_growth_rate(2, sizes, ServiceDistribution::pareto(4.0, 1.0), 8, 1);
  CHECK(light.back().mean / light.front().mean <= 1.5);
  const auto heavy = animal_growth_rate(2, sizes, ServiceDistribution::pareto(1.5, 1.0), 8, 1);
  CHECK(heavy[1].mean > heavy[0].mean);
  CHECK(heavy[2].mean > heavy[1].mean);
  CHECK(animal_strategy_from_string(to_string(AnimalStrategy::greedy)) == AnimalStrategy::greedy);
  CHECK(animal_strategy_from_string("best_of") == AnimalStrategy::best_of);
  CHECK_THROWS(animal_strategy_from_string("exact"));
}

TEST_CASE("covering animal constant") {
  CHECK(covering_animal_size(1, 1, 1, 10) == 1 * 2 * 3 * 10 + 3 * 10 + 1);
  // K * max(c + 1, b) * 3 / b + 3
  CHECK(covering_animal_constant(2, 1, 1) == doctest::Approx(15.0));
  CHECK(covering_animal_constant(2, 1, 4) == doctest::Approx(9.0));
  CHECK(double(covering_animal_size(2, 3, 2, 1000)) / (1000 * 2) ==
        doctest::Approx(covering_animal_constant(2, 3, 2)).epsilon(1e-3));
}

TEST_CASE("embedding of extracted paths") {
  const auto dist = ServiceDistribution::pareto(2.0, 1.0);
  for (auto [kind, i] : {std::pair{FamilyKind::tandem, 8}, std::pair{FamilyKind::ladder, 6},
                         std::pair{FamilyKind::lattice, 4}, std::pair{FamilyKind::cycle, 5},
                         std::pair{FamilyKind::sierpinski, 4}}) {
    const FamilySpec s = family(kind, i);
    const Network net = generate(s);
    const auto ers = family_extended_resolving(s);
    REQUIRE(ers.has_value());
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto path = extract_max_path(net, dist, 20, net.num_nodes() - 1, seed, 0);
      const auto e = embed_check(net, *ers, path);
      CAPTURE(family_label(s));
      CHECK(e.ok);
      CHECK(e.max_multiplicity <= ers->lambda);
    }
  }
}

TEST_CASE("embedding trivial and failing cases") {
  const Network single("one", 1, {}, 1);
  const ExtendedResolvingSet ers{{{0}}, 1};
  const auto path = extract_max_path(single, ServiceDistribution::exponential(1), 5, 0, 1, 0);
  CHECK(embed_check(single, ers, path).ok);

  // A job-advancing arc must stay on the same lattice point.
  const FamilySpec s = family(FamilyKind::tandem, 4);
  const Network tan = generate(s);
  const auto basis = *family_extended_resolving(s);
  PathResult p;
  p.nodes = {{1, 0}, {0, 3}};
  p.arc_types = {ArcType::type_II};
  const auto e = embed_check(tan, basis, p);
  CHECK_FALSE(e.ok);
  CHECK_FALSE(e.failure.empty());

  const FamilySpec l = family(FamilyKind::ladder, 4);
  auto understated = *family_extended_resolving(l);
  REQUIRE(understated.lambda == 2);
  understated.lambda = 1;
  CHECK_THROWS_AS(embed_check(generate(l), understated, p), std::invalid_argument);
}

TEST_CASE("convolution tail integral") {
  const auto light = convolution_tail_integral(ServiceDistribution::pareto(3.0, 1.0), 2, 1, 200000, 1);
  CHECK(light.single_finite);
  CHECK(std::isfinite(light.integral));
  // E[sum] for K = 1 is twice the mean.
  CHECK(light.integral == doctest::Approx(3.0).epsilon(0.03));
  CHECK(light.integral <= light.bound);
  const auto heavy = convolution_tail_integral(ServiceDistribution::pareto(1.5, 1.0), 2, 2, 1000, 1);
  CHECK_FALSE(heavy.single_finite);
  CHECK(std::isinf(heavy.bound));
}
