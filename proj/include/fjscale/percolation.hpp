#pragma once

// Last-passage percolation on the precedence graph of a network: node (m, v)
// carries the service time S[m][v] and the completion time T[m][v] equals the
// heaviest path from (m, v) down to row 0.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

#include "fjscale/network.hpp"
#include "fjscale/service.hpp"

namespace fjscale {

struct PrecedenceNode {
  std::int64_t m = 0;
  NodeId v = 0;

  friend bool operator==(const PrecedenceNode&, const PrecedenceNode&) = default;
  friend auto operator<=>(const PrecedenceNode&, const PrecedenceNode&) = default;
};

enum class ArcType { type_I = 0, type_II = 1, type_III = 2 };

struct PrecedenceArc {
  PrecedenceNode to;
  ArcType type;
};

/// Legal successors of p, sorted by (m, v):
///   I   (m,v) -> (m,u)    for arcs (u,v)
///   II  (m,v) -> (m-1,v)  for m >= 1
///   III (m,v) -> (m-b,w)  for arcs (v,w), m >= b
std::vector<PrecedenceArc> arcs_out(const Network& net, PrecedenceNode p);

/// The shared service-time field S[m][v] for one (seed, replication).
class WeightField {
 public:
  WeightField(const ServiceDistribution& dist, std::uint64_t seed, std::uint64_t replication)
      : dist_(dist), seed_(seed), replication_(replication) {}
  double operator()(PrecedenceNode p) const {
    return dist_.sample(SampleKey{seed_, replication_, p.m, p.v});
  }

 private:
  ServiceDistribution dist_;
  std::uint64_t seed_;
  std::uint64_t replication_;
};

struct PathResult {
  std::vector<PrecedenceNode> nodes;
  std::vector<ArcType> arc_types;  // arc_types[k] joins nodes[k] and nodes[k+1]
  double weight = 0;
  std::array<int, 3> type_counts{};  // indexed by ArcType

  int num_arcs() const { return static_cast<int>(arc_types.size()); }
};

/// Heaviest path weight from (m, v) to row 0, both endpoints included.
double lpp_value(const Network& net, const ServiceDistribution& dist, std::int64_t m, NodeId v,
                 std::uint64_t seed, std::uint64_t replication);

/// A heaviest path from (m, v); ties go to the smallest successor by (m, v).
PathResult extract_max_path(const Network& net, const ServiceDistribution& dist, std::int64_t m,
                            NodeId v, std::uint64_t seed, std::uint64_t replication);

bool exists_path(const Network& net, PrecedenceNode from, PrecedenceNode to);

/// Heaviest from -> to path weight, nullopt when `to` is unreachable.
std::optional<double> lpp_between(const Network& net, const ServiceDistribution& dist,
                                  PrecedenceNode from, PrecedenceNode to, std::uint64_t seed,
                                  std::uint64_t replication);

/// A heaviest from -> to path, same tie rule as extract_max_path.
std::optional<PathResult> extract_path_between(const Network& net, const ServiceDistribution& dist,
                                               PrecedenceNode from, PrecedenceNode to,
                                               std::uint64_t seed, std::uint64_t replication);

/// W(a~>c) >= W(a~>b) + W(b~>c) - S(b), up to rounding. Throws
/// std::invalid_argument naming the leg without a path.
bool check_superadditivity(const Network& net, const ServiceDistribution& dist, PrecedenceNode a,
                           PrecedenceNode b, PrecedenceNode c, std::uint64_t seed,
                           std::uint64_t replication);

struct PathLengthCheck {
  bool ok = false;
  bool length_ok = false;
  bool type_III_ok = false;
  std::int64_t length_budget_times_b = 0;  // right-hand side of |path| * b <= budget
};

/// Arc-count bounds for a path from (m_s, v_s) to (m_e, v_e), using a level
/// labelling l with arc gaps in [1, level]:
///   |path| * b <= max(level + 1, b) * (m_s - m_e) + b * (l(v_s) - l(v_e))
///   #type III * b <= m_s - m_e
/// For v_e = v_s and m_e = 0 this is |path| <= max(level + 1, b) * m / b.
PathLengthCheck path_length_bound_check(const PathResult& path, const Network& net,
                                        const MinimumLevel& level);

struct UpperBoundEstimate {
  double bound = 0;
  double std_error = 0;
  double mean_max = 0;
  std::int64_t draws_per_sample = 0;  // diameter * b * |V|
  int samples = 0;
  int diameter = 0;
};

/// 3 * diameter * b / E[max of diameter * b * |V| service times], by Monte Carlo.
UpperBoundEstimate upper_bound_throughput(const Network& net, const ServiceDistribution& dist,
                                          int samples, std::uint64_t seed,
                                          std::optional<int> known_diameter = std::nullopt);

/// True if the path is legal (every step is an arcs_out step) and its stored
/// weight matches a re-summation over `field`.
bool path_is_consistent(const Network& net, const PathResult& path, const WeightField& field);

}  // namespace fjscale
