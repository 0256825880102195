#include "fjscale/scalability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fjscale/dimensions.hpp"

namespace fjscale {

namespace {

std::string fmt(double x) {
  if (std::isinf(x)) return "infinity";
  std::ostringstream out;
  out << x;
  return out.str();
}

nlohmann::json dim_json(double v) {
  if (std::isinf(v)) return "infinity";
  return v;
}

}  // namespace

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::scalable: return "scalable";
    case Outcome::not_scalable: return "not_scalable";
    case Outcome::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

std::string to_string(Trend t) {
  switch (t) {
    case Trend::decay: return "decay";
    case Trend::plateau: return "plateau";
    case Trend::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Verdict theorem_verdict(double dim_s, double dim_em, double alpha, bool degree_bounded, bool level_bounded) {
  if (!(alpha > 1)) throw std::invalid_argument("tail index must exceed 1");
  if (dim_s < 0 || dim_em < 0) throw std::invalid_argument("dimensions must be non-negative");
  Verdict v{Outcome::indeterminate, {}, dim_s, dim_em, alpha, degree_bounded, level_bounded};
  const double edge = alpha - 1;
  if (!degree_bounded || !level_bounded) {
    v.outcome = Outcome::not_scalable;
    v.reasons.push_back(std::string(!degree_bounded ? "network degree" : "minimum level") +
                        " is unbounded along the family; this necessity is established for light "
                        "tails and carried over to heavy tails");
    return v;
  }
  if (dim_s > edge) {
    v.outcome = Outcome::not_scalable;
    v.reasons.push_back("scaling dimension " + fmt(dim_s) + " exceeds alpha - 1 = " + fmt(edge));
    return v;
  }
  if (dim_em < edge) {
    v.outcome = Outcome::scalable;
    v.reasons.push_back("extended metric dimension " + fmt(dim_em) + " is below alpha - 1 = " + fmt(edge) +
                        " with bounded degree and minimum level");
    return v;
  }
  v.reasons.push_back("alpha - 1 = " + fmt(edge) + " lies in [" + fmt(dim_s) + ", " + fmt(dim_em) +
                      "], between the necessary and sufficient conditions");
  return v;
}

KSearch sufficient_via_K(const ServiceDistribution& dist, double dim_em) {
  KSearch out;
  if (std::isinf(dim_em)) return out;
  out.K = static_cast<int>(std::ceil(dim_em - 1e-9)) + 1;
  out.integral = dist.tail_integral(out.K);
  out.sufficient = out.integral.has_value();
  return out;
}

bool exponential_growth_verdict(const FamilySpec& family, std::span<const int> indices) {
  return scaling_dimension_estimate(family, indices).exponential;
}

ConditionOne condition_one(const FamilySpec& family, std::span<const int> indices) {
  if (indices.size() < 2) throw std::invalid_argument("condition check needs >= 2 indices");
  ConditionOne c;
  for (int i : indices) {
    const Network net = generate(family.with_index(i));
    c.degrees.push_back(degree(net));
    c.levels.push_back(minimum_level(net).level);
  }
  auto bounded = [](const std::vector<int>& xs) {
    const std::size_t half = xs.size() / 2;
    const int early = *std::max_element(xs.begin(), xs.begin() + half);
    const int late = *std::max_element(xs.begin() + half, xs.end());
    return late <= early;
  };
  c.degree_bounded = bounded(c.degrees);
  c.level_bounded = bounded(c.levels);
  return c;
}

EmpiricalVerdict empirical_verdict(std::span<const double> indices, std::span<const double> throughput,
                                   const TrendThresholds& thresholds) {
  if (indices.size() < 4) throw std::invalid_argument("empirical verdict needs >= 4 points");
  EmpiricalVerdict v;
  v.slope = decay_exponent(indices, throughput);
  v.ratio = throughput.back() / throughput.front();
  if (v.slope <= thresholds.decay_slope && v.ratio <= thresholds.decay_ratio) {
    v.trend = Trend::decay;
  } else if (std::abs(v.slope) < thresholds.plateau_slope && v.ratio >= thresholds.plateau_ratio) {
    v.trend = Trend::plateau;
  }
  return v;
}

EmpiricalVerdict empirical_verdict(std::span<const CurvePoint> curve, const TrendThresholds& thresholds) {
  std::vector<double> x, y;
  for (const auto& p : curve) {
    x.push_back(p.index);
    y.push_back(p.estimate.point);
  }
  return empirical_verdict(x, y, thresholds);
}

nlohmann::json verdict_json(const Verdict& v) {
  return {{"outcome", to_string(v.outcome)},
          {"reasons", v.reasons},
          {"inputs",
           {{"dim_s", dim_json(v.dim_s)},
            {"dim_em", dim_json(v.dim_em)},
            {"alpha", v.alpha},
            {"degree_bounded", v.degree_bounded},
            {"level_bounded", v.level_bounded}}},
          {"thresholds",
           {{"necessary_alpha_at_least", dim_json(v.dim_s + 1)},
            {"sufficient_alpha_above", dim_json(v.dim_em + 1)}}}};
}

nlohmann::json to_json(const TrendThresholds& t) {
  return {{"decay_slope", t.decay_slope},
          {"decay_ratio", t.decay_ratio},
          {"plateau_slope", t.plateau_slope},
          {"plateau_ratio", t.plateau_ratio}};
}

TrendThresholds thresholds_from_json(const nlohmann::json& doc, TrendThresholds base) {
  base.decay_slope = doc.value("decay_slope", base.decay_slope);
  base.decay_ratio = doc.value("decay_ratio", base.decay_ratio);
  base.plateau_slope = doc.value("plateau_slope", base.plateau_slope);
  base.plateau_ratio = doc.value("plateau_ratio", base.plateau_ratio);
  return base;
}

}  // namespace fjscale
