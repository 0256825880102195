#pragma once

// Metric dimension, extended resolving sets and the scaling-dimension
// estimate of a network family.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fjscale/families.hpp"
#include "fjscale/network.hpp"

namespace fjscale {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (dis(v, w_1), ..., dis(v, w_k)).
std::vector<int> metric_representation(const Network& net, NodeId v, std::span<const NodeId> W);

bool is_resolving(const Network& net, std::span<const NodeId> W);

struct MetricDimensionResult {
  int value = 0;
  std::vector<NodeId> witness;
};

inline constexpr int kExactMetricDimensionCutoff = 16;
inline constexpr std::int64_t kDefaultSubsetBudget = 50'000'000;
/// dimension_report runs the greedy bound up to this size, else reports [1, n-1].
inline constexpr int kGreedyMetricDimensionCutoff = 1000;

/// Smallest resolving set by exhaustive search in order of cardinality.
/// Throws BudgetExceeded above `cutoff` nodes or after `subset_budget`
/// candidate sets; use metric_dimension_greedy then.
MetricDimensionResult metric_dimension_exact(const Network& net,
                                             int cutoff = kExactMetricDimensionCutoff,
                                             std::int64_t subset_budget = kDefaultSubsetBudget);

/// Greedy upper bound: repeatedly add the node splitting the most
/// still-confused pairs.
MetricDimensionResult metric_dimension_greedy(const Network& net);

struct ExtendedResolvingSet {
  std::vector<std::vector<NodeId>> subsets;
  int lambda = 0;  // largest class sharing one representation

  int cardinality() const { return static_cast<int>(subsets.size()); }
};

/// (dis(v, W_1), ..., dis(v, W_k)) with dis(v, W) the distance to the nearest member.
std::vector<int> extended_representation(const Network& net, NodeId v,
                                         std::span<const std::vector<NodeId>> subsets);
/// Representation of every node, one BFS per subset.
std::vector<std::vector<int>> extended_representations(const Network& net,
                                                       std::span<const std::vector<NodeId>> subsets);

/// Multiplicity: the largest number of nodes sharing a representation.
/// Throws std::invalid_argument for empty subsets or bad ids.
int check_extended_resolving(const Network& net, std::span<const std::vector<NodeId>> subsets);

/// The family's own construction on the generated graph, with certified
/// lambda. nullopt for families without a bounded construction.
std::optional<ExtendedResolvingSet> family_extended_resolving(const FamilySpec& spec);

struct EmIndexResult {
  int index = 0;
  int num_nodes = 0;
  bool found = false;
  int k = 0;
  int lambda = 0;
  std::string method;  // "construction" or "search"
  ExtendedResolvingSet witness;
};

struct EmCertificate {
  bool bounded = false;      // every index has a family within lambda_max
  int k = 0;                 // certified dimension when bounded
  int lambda = 0;            // uniform multiplicity over the index window at k
  int k_lower = 0;           // largest per-index k found (interval answer when unbounded)
  std::vector<EmIndexResult> per_index;
};

struct EmSearchOptions {
  int lambda_max = 16;
  int single_subset_nodes = 16;  // exhaustive k=1 search up to this many nodes
  int pair_subset_nodes = 8;     // exhaustive k=2 search up to this many nodes
  std::int64_t budget = 5'000'000;
};

EmCertificate extended_metric_dimension(const FamilySpec& family, std::span<const int> indices,
                                        const EmSearchOptions& options = {});

struct ScalingEstimate {
  double value = 0;         // infinity when exponential growth is detected
  double whole_slope = 0;   // log|V| against log diameter
  double ball_slope = 0;    // best ball probe
  bool exponential = false;
  double exp_r2 = 0;        // fit of log|V| against diameter
  double power_r2 = 0;      // fit of log|V| against log diameter
  bool ball_exponential = false;
};

struct ScalingOptions {
  int centres = 8;
  std::uint64_t seed = 1;
  double exp_r2_threshold = 0.99;
  /// Ball probes also need log|ball| to grow at least this fast per unit
  /// radius; an offset linear ball (clique plus path) fits a short
  /// exponential well but grows slowly.
  double ball_min_rate = 0.3;
};

/// Needs >= 3 indices with increasing diameters.
ScalingEstimate scaling_dimension_estimate(const FamilySpec& family, std::span<const int> indices,
                                           const ScalingOptions& options = {});

/// Exponential-growth detection on the size/diameter series alone:
/// log|V| linear in diameter (R^2 above threshold, positive slope) and a
/// better fit than the power law.
bool exponential_growth(std::span<const double> sizes, std::span<const double> diameters,
                        double r2_threshold = 0.99);

struct MetricDimensionEntry {
  int index = 0;
  int num_nodes = 0;
  bool exact = false;
  int lower = 0;
  int upper = 0;
};

struct DimensionReport {
  std::string family;
  std::vector<int> indices;
  std::vector<MetricDimensionEntry> metric_dimension;
  EmCertificate extended;
  ScalingEstimate scaling;
  GroundTruth truth;

  double dim_em() const;  // certified k, or infinity
};

DimensionReport dimension_report(const FamilySpec& family, std::span<const int> indices,
                                 const EmSearchOptions& em = {}, const ScalingOptions& sc = {});

struct DimRelation {
  bool ordering_holds = false;    // dim_S estimate <= dim_EM + tolerance
  bool conjecture_holds = false;  // dim_EM <= ceil(dim_S estimate)
};

DimRelation check_dim_relation(const DimensionReport& report, double tolerance = 0.1);
DimRelation check_dim_relation(double dim_s, double dim_em, double tolerance = 0.1);

nlohmann::json to_json(const DimensionReport& report);

}  // namespace fjscale
