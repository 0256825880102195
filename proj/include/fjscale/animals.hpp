#pragma once

// Extreme-value and lattice-animal numerics: maxima of Pareto samples,
// greedy and exact heaviest lattice animals on Z^K, and the embedding of
// precedence-graph paths into a lattice through an extended resolving set.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fjscale/dimensions.hpp"
#include "fjscale/network.hpp"
#include "fjscale/percolation.hpp"
#include "fjscale/service.hpp"

namespace fjscale {

struct MaxScalingReport {
  std::int64_t n = 0;
  double alpha = 0;
  int replications = 0;
  double mean_scaled_max = 0;  // E[M_n] / (x_min * n^(1/alpha))
  double std_error = 0;
  double limit = 0;            // Gamma(1 - 1/alpha)
};

/// Monte Carlo E[M_n] / n^(1/alpha) for a Pareto law; each replication draws
/// the maximum of n samples from a single uniform.
MaxScalingReport evt_max_scaling(const ServiceDistribution& dist, std::int64_t n, int replications,
                                 std::uint64_t seed);

/// exp(-x^-alpha) for x > 0, else 0.
double frechet_cdf(double alpha, double x);

using LatticePoint = std::vector<int>;

struct LatticeAnimal {
  std::vector<LatticePoint> points;  // in order of addition
  double weight = 0;
};

/// i.i.d. site weights on Z^K drawn from `dist` by counter-based keys.
class LatticeField {
 public:
  LatticeField(const ServiceDistribution& dist, int K, std::uint64_t seed, std::uint64_t replication);
  int dim() const { return K_; }
  double operator()(std::span<const int> point) const;
  double packed(std::uint64_t key) const;
  /// Coordinates packed into one word (32 bits each for K <= 2, 21 for K = 3,
  /// 16 for K = 4); lexicographic order is preserved.
  std::uint64_t pack(std::span<const int> point) const;
  LatticePoint unpack(std::uint64_t key) const;

 private:
  ServiceDistribution dist_;
  int K_;
  int bits_;
  std::uint64_t seed_;
  std::uint64_t replication_;
};

/// Grows from the origin, always adding the heaviest site adjacent to the
/// animal (ties to the lexicographically smallest point).
LatticeAnimal greedy_animal(const LatticeField& field, std::int64_t n);
LatticeAnimal greedy_animal(int K, std::int64_t n, const ServiceDistribution& dist,
                            std::uint64_t seed, std::uint64_t replication = 0);

/// Weight of the first n sites of one greedy run, for n = 1..n_max.
std::vector<double> greedy_prefix_weights(const LatticeField& field, std::int64_t n_max);

/// Heaviest up/right path of n sites from the origin in the first quadrant
/// of the first two coordinates (itself a lattice animal), for n = 1..n_max.
std::vector<double> directed_path_prefix_weights(const LatticeField& field, std::int64_t n_max);

using SiteWeight = std::function<double(std::span<const int>)>;

/// Exact heaviest animal of n sites containing the origin, by enumerating
/// every connected set once. Throws BudgetExceeded after `budget` sets.
double exact_max_animal(int K, int n, const SiteWeight& weight, std::int64_t budget = 50'000'000);

enum class AnimalStrategy { greedy, best_of };

std::string to_string(AnimalStrategy s);
AnimalStrategy animal_strategy_from_string(const std::string& s);

struct GrowthPoint {
  std::int64_t n = 0;
  double mean = 0;  // E[weight] / n
  double std_error = 0;
};

/// Mean heaviest-found weight per site for each n. `greedy` uses the greedy
/// animal; `best_of` takes the heavier of the greedy animal and the directed
/// path, both valid animals of n sites.
std::vector<GrowthPoint> animal_growth_rate(int K, std::span<const std::int64_t> sizes,
                                            const ServiceDistribution& dist, int replications,
                                            std::uint64_t seed,
                                            AnimalStrategy strategy = AnimalStrategy::best_of);

/// Animal size covering a path over 3 * diameter * b jobs mapped into Z^K,
/// K * max(c + 1, b) * 3 * diameter + 3 * b * diameter + 1, and its limit
/// ratio to diameter * b.
std::int64_t covering_animal_size(int K, int level, int b, std::int64_t diameter);
double covering_animal_constant(int K, int level, int b);

struct EmbedReport {
  bool ok = false;
  int max_multiplicity = 0;
  std::string failure;  // empty when ok
};

/// Maps (m, v) to (m, r(v) - r(end)) with r the extended representation and
/// checks the step rules along the path and the multiplicity bound lambda.
EmbedReport embed_check(const Network& net, const ExtendedResolvingSet& ers, const PathResult& path);

struct ConvolutionTail {
  double integral = 0;  // empirical integral of P(sum > x)^(1/K)
  double bound = 0;     // lambda^(1 + 1/K) * single-law integral; infinite if that diverges
  bool single_finite = false;
};

/// Integral of the survival function of a sum of `lambda` i.i.d. draws raised
/// to 1/K, from the empirical distribution of `samples` sums.
ConvolutionTail convolution_tail_integral(const ServiceDistribution& dist, int lambda, int K,
                                          int samples, std::uint64_t seed);

}  // namespace fjscale
