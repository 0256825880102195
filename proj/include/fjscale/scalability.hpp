#pragma once

// Scalability verdicts: the dimension/tail-index decision table and an
// empirical classification of simulated throughput curves.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fjscale/families.hpp"
#include "fjscale/service.hpp"
#include "fjscale/simulation.hpp"

namespace fjscale {

enum class Outcome { scalable, not_scalable, indeterminate };
std::string to_string(Outcome o);

struct Verdict {
  Outcome outcome = Outcome::indeterminate;
  std::vector<std::string> reasons;
  double dim_s = 0;
  double dim_em = 0;
  double alpha = 0;
  bool degree_bounded = true;
  bool level_bounded = true;
};

/// Not scalable when degree or minimum level is unbounded or dim_s > alpha-1;
/// scalable when dim_em < alpha-1; indeterminate otherwise (including the
/// boundary). Throws std::invalid_argument for alpha <= 1.
Verdict theorem_verdict(double dim_s, double dim_em, double alpha, bool degree_bounded = true,
                        bool level_bounded = true);

struct KSearch {
  bool sufficient = false;
  int K = 0;                        // first K tried (dim_em + 1) or the successful one
  std::optional<double> integral;   // tail integral at K when finite
};

/// Smallest K >= dim_em + 1 with a finite tail integral. Divergence at one K
/// implies divergence at every larger K, so the search stops there.
KSearch sufficient_via_K(const ServiceDistribution& dist, double dim_em);

/// Exponential size growth along the family (detection from the dimensions module).
bool exponential_growth_verdict(const FamilySpec& family, std::span<const int> indices);

struct ConditionOne {
  bool degree_bounded = true;
  bool level_bounded = true;
  std::vector<int> degrees;
  std::vector<int> levels;
};

/// Degree and minimum level over the window; "bounded" means the second half
/// of the window never exceeds the maximum of the first half.
ConditionOne condition_one(const FamilySpec& family, std::span<const int> indices);

enum class Trend { decay, plateau, inconclusive };
std::string to_string(Trend t);

struct TrendThresholds {
  double decay_slope = -0.1;   // slope at or below this ...
  double decay_ratio = 0.6;    // ... and last/first at or below this
  double plateau_slope = 0.05; // |slope| below this ...
  double plateau_ratio = 0.7;  // ... and last/first at or above this
};

struct EmpiricalVerdict {
  Trend trend = Trend::inconclusive;
  double slope = 0;
  double ratio = 0;  // last / first
};

/// Needs >= 4 points with positive indices and throughput.
EmpiricalVerdict empirical_verdict(std::span<const double> indices, std::span<const double> throughput,
                                   const TrendThresholds& thresholds = {});
EmpiricalVerdict empirical_verdict(std::span<const CurvePoint> curve, const TrendThresholds& thresholds = {});

/// Necessary threshold dim_s + 1 and sufficient threshold dim_em + 1 on alpha.
nlohmann::json verdict_json(const Verdict& v);
nlohmann::json to_json(const TrendThresholds& t);
TrendThresholds thresholds_from_json(const nlohmann::json& doc, TrendThresholds base = {});

}  // namespace fjscale
