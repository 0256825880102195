#include "fjscale/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fjscale/stats.hpp"

namespace fjscale {

CompletionFront::CompletionFront(const Network& net, const ServiceDistribution& dist,
                                 std::uint64_t seed, std::uint64_t replication)
    : net_(net),
      dist_(dist),
      seed_(seed),
      replication_(replication),
      width_(net.buffer_size() + 1),
      rows_(static_cast<std::size_t>(width_) * net.num_nodes(), 0.0) {
  if (!net.is_acyclic()) throw NetworkError("cannot simulate a cyclic network");
}

std::span<const double> CompletionFront::row(std::int64_t m) const {
  if (m < 0 || m > job_ || job_ - m >= width_) throw std::out_of_range("row outside the window");
  const std::size_t n = static_cast<std::size_t>(net_.num_nodes());
  return {rows_.data() + static_cast<std::size_t>(m % width_) * n, n};
}

void CompletionFront::advance() {
  const std::int64_t m = ++job_;
  const int b = net_.buffer_size();
  const std::size_t n = static_cast<std::size_t>(net_.num_nodes());
  double* cur = rows_.data() + static_cast<std::size_t>(m % width_) * n;
  const double* prev = m >= 1 ? rows_.data() + static_cast<std::size_t>((m - 1) % width_) * n : nullptr;
  const double* back = m >= b ? rows_.data() + static_cast<std::size_t>((m - b) % width_) * n : nullptr;
  const std::uint64_t prefix = row_hash(seed_, replication_, m);
  for (NodeId v : net_.topological_order()) {
    double t = 0.0;
    for (NodeId u : net_.predecessors(v)) t = std::max(t, cur[u]);
    if (prev) t = std::max(t, prev[v]);
    if (back)
      for (NodeId w : net_.successors(v)) t = std::max(t, back[w]);
    cur[v] = t + dist_.sample_hash(key_hash(prefix, v));
  }
}

std::vector<double> completion_times(const Network& net, const ServiceDistribution& dist,
                                     std::int64_t m_max, std::uint64_t seed,
                                     std::uint64_t replication) {
  if (m_max < 0) throw std::invalid_argument("m_max must be >= 0");
  CompletionFront front(net, dist, seed, replication);
  for (std::int64_t m = 0; m <= m_max; ++m) front.advance();
  auto last = front.latest();
  return {last.begin(), last.end()};
}

std::vector<std::vector<double>> completion_history(const Network& net,
                                                    const ServiceDistribution& dist,
                                                    std::int64_t m_max, std::uint64_t seed,
                                                    std::uint64_t replication) {
  if (m_max < 0) throw std::invalid_argument("m_max must be >= 0");
  CompletionFront front(net, dist, seed, replication);
  std::vector<std::vector<double>> out;
  for (std::int64_t m = 0; m <= m_max; ++m) {
    front.advance();
    auto r = front.latest();
    out.emplace_back(r.begin(), r.end());
  }
  return out;
}

SimulationConfig SimulationConfig::resolved(int buffer_size) const {
  SimulationConfig c = *this;
  if (c.m_max == 0) c.m_max = 20000LL * buffer_size;
  if (c.warmup < 0) c.warmup = c.m_max / 4;
  if (c.m_max < 1) throw std::invalid_argument("m_max must be positive");
  if (c.warmup >= c.m_max) throw std::invalid_argument("warmup must be below m_max");
  if (c.replications < 1) throw std::invalid_argument("replications must be >= 1");
  return c;
}

ThroughputEstimate estimate_throughput(const Network& net, const ServiceDistribution& dist,
                                       const SimulationConfig& config) {
  ThroughputEstimate est;
  est.config = config.resolved(net.buffer_size());
  const auto& cfg = est.config;
  const auto sinks = net.sinks();
  if (sinks.empty()) throw NetworkError("network has no sink");
  est.reference = sinks.front();
  est.short_window = cfg.m_max - cfg.warmup < kMinMeasuredJobs;

  for (int r = 0; r < cfg.replications; ++r) {
    CompletionFront front(net, dist, cfg.seed, static_cast<std::uint64_t>(r));
    double t0 = 0;
    for (std::int64_t m = 0; m <= cfg.m_max; ++m) {
      front.advance();
      if (m == cfg.warmup) t0 = front.latest()[est.reference];
    }
    const double t1 = front.latest()[est.reference];
    est.per_replication.push_back(static_cast<double>(cfg.m_max - cfg.warmup) / (t1 - t0));
  }
  const Summary s = summarize(est.per_replication);
  est.point = s.mean;
  est.std_error = s.std_error;
  return est;
}

std::uint64_t curve_seed(std::uint64_t seed, int index) {
  return mix64(seed ^ (0x5851f42d4c957f2dULL * static_cast<std::uint64_t>(index)));
}

std::vector<CurvePoint> throughput_curve(const FamilySpec& family, const ServiceDistribution& dist,
                                         std::span<const int> indices,
                                         const SimulationConfig& config) {
  std::vector<CurvePoint> out;
  for (int i : indices) {
    const Network net = generate(family.with_index(i));
    CurvePoint p;
    p.index = i;
    p.num_nodes = net.num_nodes();
    p.diameter = diameter(net).value;
    SimulationConfig c = config;
    c.seed = p.seed = curve_seed(config.seed, i);
    p.estimate = estimate_throughput(net, dist, c);
    out.push_back(std::move(p));
  }
  return out;
}

double decay_exponent(std::span<const double> indices, std::span<const double> throughput) {
  if (indices.size() != throughput.size() || indices.size() < 3)
    throw std::invalid_argument("decay exponent needs >= 3 paired points");
  std::vector<double> x, y;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (!(indices[k] > 0) || !(throughput[k] > 0))
      throw std::invalid_argument("decay exponent needs positive values");
    x.push_back(std::log(indices[k]));
    y.push_back(std::log(throughput[k]));
  }
  return fit_line(x, y).slope;
}

double decay_exponent(std::span<const CurvePoint> curve) {
  std::vector<double> x, y;
  for (const auto& p : curve) {
    x.push_back(p.index);
    y.push_back(p.estimate.point);
  }
  return decay_exponent(x, y);
}

nlohmann::json to_json(const ThroughputEstimate& est) {
  return {{"point", est.point},
          {"std_error", est.std_error},
          {"per_replication", est.per_replication},
          {"reference_node", est.reference},
          {"short_window", est.short_window},
          {"config",
           {{"m_max", est.config.m_max},
            {"warmup", est.config.warmup},
            {"replications", est.config.replications},
            {"seed", est.config.seed}}}};
}

}  // namespace fjscale
