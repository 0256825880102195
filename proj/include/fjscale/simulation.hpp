#pragma once

// Streaming evaluation of the blocking recurrence
//   T[m][v] = S[m][v] + max( T[m][u] for arcs (u,v),
//                            T[m-1][v],
//                            T[m-b][w] for arcs (v,w) )
// and Monte-Carlo throughput estimates built on it.

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "fjscale/families.hpp"
#include "fjscale/network.hpp"
#include "fjscale/service.hpp"

namespace fjscale {

/// Ring of the last b+1 completion-time rows of one replication.
class CompletionFront {
 public:
  CompletionFront(const Network& net, const ServiceDistribution& dist, std::uint64_t seed,
                  std::uint64_t replication);

  /// Computes the next job row. The first call produces row 0.
  void advance();
  /// Index of the most recent row, -1 before the first advance().
  std::int64_t job() const { return job_; }
  /// Row m; m must lie within the last b+1 computed rows.
  std::span<const double> row(std::int64_t m) const;
  std::span<const double> latest() const { return row(job_); }

 private:
  const Network& net_;
  ServiceDistribution dist_;
  std::uint64_t seed_;
  std::uint64_t replication_;
  int width_;
  std::int64_t job_ = -1;
  std::vector<double> rows_;
};

/// Row T[m_max][*] of one replication.
std::vector<double> completion_times(const Network& net, const ServiceDistribution& dist,
                                     std::int64_t m_max, std::uint64_t seed,
                                     std::uint64_t replication);

/// Every row 0..m_max; meant for small checks only.
std::vector<std::vector<double>> completion_history(const Network& net,
                                                    const ServiceDistribution& dist,
                                                    std::int64_t m_max, std::uint64_t seed,
                                                    std::uint64_t replication);

struct SimulationConfig {
  std::int64_t m_max = 0;   // 0 selects 20000 * b
  std::int64_t warmup = -1; // negative selects m_max / 4
  int replications = 16;
  std::uint64_t seed = 1;

  /// Copy with the defaults filled in for buffer size b; throws on bad values.
  SimulationConfig resolved(int buffer_size) const;
};

inline constexpr std::int64_t kMinMeasuredJobs = 1000;

struct ThroughputEstimate {
  double point = 0;
  double std_error = 0;
  std::vector<double> per_replication;
  SimulationConfig config;  // resolved
  NodeId reference = 0;
  bool short_window = false;  // fewer than kMinMeasuredJobs jobs after warmup
};

ThroughputEstimate estimate_throughput(const Network& net, const ServiceDistribution& dist,
                                       const SimulationConfig& config);

struct CurvePoint {
  int index = 0;
  int num_nodes = 0;
  int diameter = 0;
  std::uint64_t seed = 0;
  ThroughputEstimate estimate;
};

/// Seed used for index i of a curve started from `seed`.
std::uint64_t curve_seed(std::uint64_t seed, int index);

std::vector<CurvePoint> throughput_curve(const FamilySpec& family, const ServiceDistribution& dist,
                                         std::span<const int> indices,
                                         const SimulationConfig& config);

/// Least-squares slope of log(theta) against log(index).
double decay_exponent(std::span<const double> indices, std::span<const double> throughput);
double decay_exponent(std::span<const CurvePoint> curve);

nlohmann::json to_json(const ThroughputEstimate& est);

}  // namespace fjscale
