#include "fjscale/service.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fjscale {

ServiceDistribution ServiceDistribution::pareto(double alpha, double x_min) {
  if (!(alpha > 1) || !(x_min > 0)) throw std::invalid_argument("pareto needs alpha > 1 and xmin > 0");
  return {Kind::pareto, alpha, x_min};
}

ServiceDistribution ServiceDistribution::exponential(double rate) {
  if (!(rate > 0)) throw std::invalid_argument("exponential needs rate > 0");
  return {Kind::exponential, rate, 0};
}

ServiceDistribution ServiceDistribution::deterministic(double c) {
  if (!(c > 0)) throw std::invalid_argument("deterministic needs c > 0");
  return {Kind::deterministic, c, 0};
}

ServiceDistribution ServiceDistribution::uniform(double a, double b) {
  if (!(a >= 0) || !(b > a)) throw std::invalid_argument("uniform needs 0 <= a < b");
  return {Kind::uniform, a, b};
}

double ServiceDistribution::cdf(double x) const {
  switch (kind_) {
    case Kind::pareto:
      return x < p2_ ? 0.0 : 1.0 - std::pow(p2_ / x, p1_);
    case Kind::exponential:
      return x <= 0 ? 0.0 : -std::expm1(-p1_ * x);
    case Kind::deterministic:
      return x < p1_ ? 0.0 : 1.0;
    case Kind::uniform:
      if (x <= p1_) return 0.0;
      if (x >= p2_) return 1.0;
      return (x - p1_) / (p2_ - p1_);
  }
  return 0.0;
}

double ServiceDistribution::ccdf(double x) const {
  switch (kind_) {
    case Kind::pareto:
      return x < p2_ ? 1.0 : std::pow(p2_ / x, p1_);
    case Kind::exponential:
      return x <= 0 ? 1.0 : std::exp(-p1_ * x);
    case Kind::deterministic:
    case Kind::uniform:
      return 1.0 - cdf(x);
  }
  return 1.0;
}

double ServiceDistribution::upper_quantile(double s) const {
  switch (kind_) {
    case Kind::pareto:
      return p2_ * std::pow(s, -1.0 / p1_);
    case Kind::exponential:
      return -std::log(s) / p1_;
    case Kind::deterministic:
      return p1_;
    case Kind::uniform:
      return p2_ - s * (p2_ - p1_);
  }
  return 0.0;
}

double ServiceDistribution::mean() const {
  switch (kind_) {
    case Kind::pareto:
      return p1_ > 1 ? p1_ * p2_ / (p1_ - 1) : INFINITY;
    case Kind::exponential:
      return 1.0 / p1_;
    case Kind::deterministic:
      return p1_;
    case Kind::uniform:
      return 0.5 * (p1_ + p2_);
  }
  return 0.0;
}

double ServiceDistribution::max_of(std::int64_t n, double u) const {
  if (n < 1) throw std::invalid_argument("max_of needs n >= 1");
  // min of n survival values: 1 - (1-u)^(1/n), without cancellation
  const double s = -std::expm1(std::log1p(-u) / static_cast<double>(n));
  return upper_quantile(s);
}

std::optional<double> ServiceDistribution::tail_integral(int K) const {
  if (K < 1) throw std::invalid_argument("tail integral needs K >= 1");
  switch (kind_) {
    case Kind::pareto:
      if (p1_ <= K) return std::nullopt;
      return p2_ * (1.0 + K / (p1_ - K));
    case Kind::exponential:
      return K / p1_;
    case Kind::deterministic:
      return p1_;
    case Kind::uniform:
      return p1_ + (p2_ - p1_) * K / (K + 1.0);
  }
  return std::nullopt;
}

std::optional<double> ServiceDistribution::rv_index() const {
  if (kind_ == Kind::pareto) return p1_;
  return std::nullopt;
}

std::string ServiceDistribution::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::pareto: out << "pareto(" << p1_ << "," << p2_ << ")"; break;
    case Kind::exponential: out << "exponential(" << p1_ << ")"; break;
    case Kind::deterministic: out << "deterministic(" << p1_ << ")"; break;
    case Kind::uniform: out << "uniform(" << p1_ << "," << p2_ << ")"; break;
  }
  return out.str();
}

nlohmann::json to_json(const ServiceDistribution& dist) {
  using K = ServiceDistribution::Kind;
  switch (dist.kind()) {
    case K::pareto: return {{"kind", "pareto"}, {"alpha", dist.param1()}, {"xmin", dist.param2()}};
    case K::exponential: return {{"kind", "exponential"}, {"rate", dist.param1()}};
    case K::deterministic: return {{"kind", "deterministic"}, {"c", dist.param1()}};
    case K::uniform: return {{"kind", "uniform"}, {"a", dist.param1()}, {"b", dist.param2()}};
  }
  return {};
}

ServiceDistribution distribution_from_json(const nlohmann::json& doc) {
  try {
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "pareto")
      return ServiceDistribution::pareto(doc.at("alpha").get<double>(), doc.value("xmin", 1.0));
    if (kind == "exponential") return ServiceDistribution::exponential(doc.value("rate", 1.0));
    if (kind == "deterministic") return ServiceDistribution::deterministic(doc.value("c", 1.0));
    if (kind == "uniform")
      return ServiceDistribution::uniform(doc.at("a").get<double>(), doc.at("b").get<double>());
    throw std::invalid_argument("unknown distribution kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad distribution spec: ") + e.what());
  }
}

}  // namespace fjscale
