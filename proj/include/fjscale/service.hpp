#pragma once

// Service-time laws with counter-based sampling: every sample is a pure
// function of (seed, replication, job, node), so independent modules see the
// same weight field.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace fjscale {

struct SampleKey {
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
  std::int64_t job = 0;
  std::int64_t node = 0;
};

/// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Hash prefix shared by every node of one job row.
constexpr std::uint64_t row_hash(std::uint64_t seed, std::uint64_t replication, std::int64_t job) {
  return mix64(mix64(mix64(seed) ^ replication) ^ static_cast<std::uint64_t>(job));
}

constexpr std::uint64_t key_hash(std::uint64_t row, std::int64_t node) {
  return mix64(row ^ static_cast<std::uint64_t>(node) * 0xd1b54a32d192ed03ULL);
}

constexpr std::uint64_t key_hash(const SampleKey& key) {
  return key_hash(row_hash(key.seed, key.replication, key.job), key.node);
}

/// Maps a hash to (0, 1) on a 2^-52 grid; both the value and 1 - value are exact.
constexpr double unit_from_hash(std::uint64_t h) {
  return (static_cast<double>(h >> 12) + 0.5) * 0x1p-52;
}

class ServiceDistribution {
 public:
  enum class Kind { pareto, exponential, deterministic, uniform };

  static ServiceDistribution pareto(double alpha, double x_min = 1.0);
  static ServiceDistribution exponential(double rate);
  static ServiceDistribution deterministic(double c);
  static ServiceDistribution uniform(double a, double b);

  Kind kind() const { return kind_; }
  double param1() const { return p1_; }
  double param2() const { return p2_; }

  double cdf(double x) const;
  /// Survival function, computed directly so far tails keep full precision.
  double ccdf(double x) const;
  /// Inverse CDF for u in (0, 1).
  double quantile(double u) const { return upper_quantile(1.0 - u); }
  /// Inverse of the survival function: the x with P(sigma > x) = s. Keeps
  /// precision for tiny s, which the maxima code relies on.
  double upper_quantile(double s) const;
  double mean() const;

  double sample(const SampleKey& key) const { return sample_hash(key_hash(key)); }
  double sample_hash(std::uint64_t h) const { return upper_quantile(unit_from_hash(h)); }

  /// Maximum of n i.i.d. draws from one uniform variate u in (0, 1).
  double max_of(std::int64_t n, double u) const;

  /// Integral over [0, inf) of (1 - F(x))^(1/K); nullopt when it diverges.
  std::optional<double> tail_integral(int K) const;

  /// Tail index for regularly varying laws; nullopt for light tails.
  std::optional<double> rv_index() const;

  std::string describe() const;

 private:
  ServiceDistribution(Kind kind, double p1, double p2) : kind_(kind), p1_(p1), p2_(p2) {}

  Kind kind_;
  double p1_;
  double p2_;
};

nlohmann::json to_json(const ServiceDistribution& dist);
/// {"kind":"pareto","alpha":2.5,"xmin":1.0}, {"kind":"exponential","rate":1},
/// {"kind":"deterministic","c":1}, {"kind":"uniform","a":0,"b":2}.
ServiceDistribution distribution_from_json(const nlohmann::json& doc);

}  // namespace fjscale
