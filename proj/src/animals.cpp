#include "fjscale/animals.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "fjscale/stats.hpp"

namespace fjscale {

namespace {

// Distinct job tags keep these fields apart from the simulation's S[m][v].
constexpr std::int64_t kEvtTag = -2;
constexpr std::int64_t kLatticeTag = -3;
constexpr std::int64_t kConvolutionTag = -16;

int bits_for(int K) {
  if (K < 1 || K > 4) throw std::invalid_argument("lattice dimension must be in 1..4");
  if (K <= 2) return 32;
  return K == 3 ? 21 : 16;
}

}  // namespace

MaxScalingReport evt_max_scaling(const ServiceDistribution& dist, std::int64_t n, int replications,
                                 std::uint64_t seed) {
  if (dist.kind() != ServiceDistribution::Kind::pareto)
    throw std::invalid_argument("max scaling needs a pareto law");
  if (n < 1 || replications < 1) throw std::invalid_argument("max scaling needs n >= 1 and replications >= 1");
  const double alpha = dist.param1();
  const double scale = dist.param2() * std::pow(static_cast<double>(n), 1.0 / alpha);
  std::vector<double> scaled;
  scaled.reserve(replications);
  for (int r = 0; r < replications; ++r) {
    const double u = unit_from_hash(key_hash(row_hash(seed, static_cast<std::uint64_t>(r), kEvtTag), 0));
    scaled.push_back(dist.max_of(n, u) / scale);
  }
  const Summary s = summarize(scaled);
  return {n, alpha, replications, s.mean, s.std_error, std::tgamma(1.0 - 1.0 / alpha)};
}

double frechet_cdf(double alpha, double x) {
  if (!(alpha > 0)) throw std::invalid_argument("frechet needs alpha > 0");
  return x > 0 ? std::exp(-std::pow(x, -alpha)) : 0.0;
}

LatticeField::LatticeField(const ServiceDistribution& dist, int K, std::uint64_t seed,
                           std::uint64_t replication)
    : dist_(dist), K_(K), bits_(bits_for(K)), seed_(seed), replication_(replication) {}

std::uint64_t LatticeField::pack(std::span<const int> point) const {
  if (static_cast<int>(point.size()) != K_) throw std::invalid_argument("point has the wrong dimension");
  const std::uint64_t mask = bits_ == 32 ? 0xffffffffULL : ((1ULL << bits_) - 1);
  const std::int64_t offset = 1LL << (bits_ - 1);
  std::uint64_t key = 0;
  for (int c : point) {
    if (c < -offset || c >= offset) throw std::out_of_range("lattice coordinate out of range");
    key = (key << bits_) | (static_cast<std::uint64_t>(c + offset) & mask);
  }
  return key;
}

LatticePoint LatticeField::unpack(std::uint64_t key) const {
  const std::uint64_t mask = bits_ == 32 ? 0xffffffffULL : ((1ULL << bits_) - 1);
  const std::int64_t offset = 1LL << (bits_ - 1);
  LatticePoint p(K_);
  for (int t = K_ - 1; t >= 0; --t) {
    p[t] = static_cast<int>(static_cast<std::int64_t>(key & mask) - offset);
    key >>= bits_;
  }
  return p;
}

double LatticeField::packed(std::uint64_t key) const {
  return dist_.sample_hash(key_hash(row_hash(seed_, replication_, kLatticeTag - K_), static_cast<std::int64_t>(key)));
}

double LatticeField::operator()(std::span<const int> point) const { return packed(pack(point)); }

namespace {

struct Frontier {
  double weight;
  std::uint64_t key;
  // max-heap on weight, then smallest key first
  bool operator<(const Frontier& o) const {
    if (weight != o.weight) return weight < o.weight;
    return key > o.key;
  }
};

template <class OnAdd>
void run_greedy(const LatticeField& field, std::int64_t n, OnAdd&& on_add) {
  if (n < 1) throw std::invalid_argument("animal size must be >= 1");
  const int K = field.dim();
  std::priority_queue<Frontier> frontier;
  std::unordered_set<std::uint64_t> seen;
  const LatticePoint origin(K, 0);
  const std::uint64_t start = field.pack(origin);
  frontier.push({field.packed(start), start});
  seen.insert(start);
  for (std::int64_t added = 0; added < n; ++added) {
    const Frontier top = frontier.top();
    frontier.pop();
    on_add(top);
    LatticePoint p = field.unpack(top.key);
    for (int t = 0; t < K; ++t) {
      for (int step : {-1, 1}) {
        p[t] += step;
        const std::uint64_t key = field.pack(p);
        if (seen.insert(key).second) frontier.push({field.packed(key), key});
        p[t] -= step;
      }
    }
  }
}

}  // namespace

LatticeAnimal greedy_animal(const LatticeField& field, std::int64_t n) {
  LatticeAnimal animal;
  run_greedy(field, n, [&](const Frontier& f) {
    animal.points.push_back(field.unpack(f.key));
    animal.weight += f.weight;
  });
  return animal;
}

LatticeAnimal greedy_animal(int K, std::int64_t n, const ServiceDistribution& dist, std::uint64_t seed,
                            std::uint64_t replication) {
  return greedy_animal(LatticeField(dist, K, seed, replication), n);
}

std::vector<double> greedy_prefix_weights(const LatticeField& field, std::int64_t n_max) {
  std::vector<double> out;
  out.reserve(n_max);
  double total = 0;
  run_greedy(field, n_max, [&](const Frontier& f) {
    total += f.weight;
    out.push_back(total);
  });
  return out;
}

std::vector<double> directed_path_prefix_weights(const LatticeField& field, std::int64_t n_max) {
  if (n_max < 1) throw std::invalid_argument("path size must be >= 1");
  const int K = field.dim();
  LatticePoint p(K, 0);
  std::vector<double> out;
  out.reserve(n_max);
  if (K == 1) {
    double total = 0;
    for (std::int64_t x = 0; x < n_max; ++x) {
      p[0] = static_cast<int>(x);
      total += field(p);
      out.push_back(total);
    }
    return out;
  }
  // best[x] holds the heaviest path ending at (x, s - x) on anti-diagonal s
  std::vector<double> best{field(p)}, next;
  out.push_back(best[0]);
  for (std::int64_t s = 1; s < n_max; ++s) {
    next.assign(s + 1, 0.0);
    double top = 0;
    for (std::int64_t x = 0; x <= s; ++x) {
      p[0] = static_cast<int>(x);
      p[1] = static_cast<int>(s - x);
      const double from_left = x >= 1 ? best[x - 1] : -1.0;
      const double from_below = x <= s - 1 ? best[x] : -1.0;
      next[x] = field(p) + std::max(from_left, from_below);
      top = std::max(top, next[x]);
    }
    best.swap(next);
    out.push_back(top);
  }
  return out;
}

double exact_max_animal(int K, int n, const SiteWeight& weight, std::int64_t budget) {
  if (K < 1 || n < 1) throw std::invalid_argument("exact animal needs K >= 1 and n >= 1");
  std::set<LatticePoint> banned;  // members and excluded sites
  std::vector<LatticePoint> members;
  double best = -1.0;
  auto neighbours = [K](const LatticePoint& p) {
    std::vector<LatticePoint> out;
    for (int t = 0; t < K; ++t)
      for (int step : {-1, 1}) {
        LatticePoint q = p;
        q[t] += step;
        out.push_back(std::move(q));
      }
    return out;
  };
  // Every connected set containing the root is produced exactly once: a
  // candidate is either taken now or banned for the remaining branches.
  std::function<void(std::vector<LatticePoint>, double)> grow = [&](std::vector<LatticePoint> cand, double w) {
    if (--budget < 0) throw BudgetExceeded("animal enumeration budget exhausted");
    if (static_cast<int>(members.size()) == n) {
      best = std::max(best, w);
      return;
    }
    std::vector<LatticePoint> newly_banned;
    while (!cand.empty()) {
      LatticePoint v = cand.back();
      cand.pop_back();
      std::vector<LatticePoint> next = cand;
      for (auto& q : neighbours(v))
        if (!banned.count(q) && std::find(next.begin(), next.end(), q) == next.end() && q != v)
          next.push_back(std::move(q));
      banned.insert(v);
      members.push_back(v);
      grow(std::move(next), w + weight(v));
      members.pop_back();
      newly_banned.push_back(v);  // stays banned for the siblings that follow
    }
    for (const auto& v : newly_banned) banned.erase(v);
  };
  const LatticePoint origin(K, 0);
  banned.insert(origin);
  members.push_back(origin);
  grow(neighbours(origin), weight(origin));
  return best;
}

std::string to_string(AnimalStrategy s) { return s == AnimalStrategy::greedy ? "greedy" : "best_of"; }

AnimalStrategy animal_strategy_from_string(const std::string& s) {
  if (s == "greedy") return AnimalStrategy::greedy;
  if (s == "best_of") return AnimalStrategy::best_of;
  throw std::invalid_argument("unknown animal strategy '" + s + "'");
}

std::vector<GrowthPoint> animal_growth_rate(int K, std::span<const std::int64_t> sizes,
                                            const ServiceDistribution& dist, int replications,
                                            std::uint64_t seed, AnimalStrategy strategy) {
  if (sizes.empty() || replications < 1) throw std::invalid_argument("growth rate needs sizes and replications");
  const std::int64_t n_max = *std::max_element(sizes.begin(), sizes.end());
  if (*std::min_element(sizes.begin(), sizes.end()) < 1) throw std::invalid_argument("animal sizes must be >= 1");
  std::vector<std::vector<double>> per_size(sizes.size());
  for (int r = 0; r < replications; ++r) {
    const LatticeField field(dist, K, seed, static_cast<std::uint64_t>(r));
    const auto greedy = greedy_prefix_weights(field, n_max);
    std::vector<double> path;
    if (strategy == AnimalStrategy::best_of) path = directed_path_prefix_weights(field, n_max);
    for (std::size_t t = 0; t < sizes.size(); ++t) {
      const std::int64_t n = sizes[t];
      double w = greedy[n - 1];
      if (!path.empty()) w = std::max(w, path[n - 1]);
      per_size[t].push_back(w / static_cast<double>(n));
    }
  }
  std::vector<GrowthPoint> out;
  for (std::size_t t = 0; t < sizes.size(); ++t) {
    const Summary s = summarize(per_size[t]);
    out.push_back({sizes[t], s.mean, s.std_error});
  }
  return out;
}

std::int64_t covering_animal_size(int K, int level, int b, std::int64_t diameter) {
  return static_cast<std::int64_t>(K) * std::max(level + 1, b) * 3 * diameter + 3LL * b * diameter + 1;
}

double covering_animal_constant(int K, int level, int b) {
  return 3.0 * K * std::max(level + 1, b) / b + 3.0;
}

EmbedReport embed_check(const Network& net, const ExtendedResolvingSet& ers, const PathResult& path) {
  if (ers.subsets.empty()) throw std::invalid_argument("extended resolving set is empty");
  const int actual = check_extended_resolving(net, ers.subsets);
  if (ers.lambda != 0 && ers.lambda < actual)
    throw std::invalid_argument("extended resolving set understates its multiplicity");
  const int lambda = ers.lambda != 0 ? ers.lambda : actual;
  EmbedReport report;
  if (path.nodes.empty()) {
    report.ok = true;
    return report;
  }
  const auto rep = extended_representations(net, ers.subsets);
  const auto& anchor = rep[path.nodes.back().v];
  const int k = ers.cardinality();
  auto image = [&](const PrecedenceNode& p) {
    std::vector<int> r(k + 1);
    r[0] = static_cast<int>(p.m);
    for (int t = 0; t < k; ++t) r[t + 1] = rep[p.v][t] - anchor[t];
    return r;
  };
  auto sup_gap = [&](const std::vector<int>& a, const std::vector<int>& b) {
    int g = 0;
    for (int t = 1; t <= k; ++t) g = std::max(g, std::abs(a[t] - b[t]));
    return g;
  };
  std::map<std::vector<int>, int> visits;
  const int b = net.buffer_size();
  for (std::size_t s = 0; s < path.nodes.size(); ++s) {
    const auto here = image(path.nodes[s]);
    report.max_multiplicity = std::max(report.max_multiplicity, ++visits[here]);
    if (s + 1 == path.nodes.size()) break;
    const auto there = image(path.nodes[s + 1]);
    const int dm = here[0] - there[0];
    const int gap = sup_gap(here, there);
    bool ok = true;
    switch (path.arc_types[s]) {
      case ArcType::type_I: ok = dm == 0 && gap <= 1; break;
      case ArcType::type_II: ok = dm == 1 && gap == 0; break;
      case ArcType::type_III: ok = dm == b && gap <= 1; break;
    }
    if (!ok && report.failure.empty()) report.failure = "illegal image step at arc " + std::to_string(s);
  }
  if (report.failure.empty() && report.max_multiplicity > lambda)
    report.failure = "lattice point visited " + std::to_string(report.max_multiplicity) + " times";
  report.ok = report.failure.empty();
  return report;
}

ConvolutionTail convolution_tail_integral(const ServiceDistribution& dist, int lambda, int K,
                                          int samples, std::uint64_t seed) {
  if (lambda < 1 || K < 1 || samples < 2) throw std::invalid_argument("bad convolution parameters");
  std::vector<double> sums(samples, 0.0);
  for (int j = 0; j < samples; ++j)
    for (int l = 0; l < lambda; ++l) sums[j] += dist.sample({seed, static_cast<std::uint64_t>(j), kConvolutionTag, l});
  std::sort(sums.begin(), sums.end());
  ConvolutionTail out;
  const double N = samples;
  out.integral = sums[0];
  for (int k = 0; k + 1 < samples; ++k)
    out.integral += std::pow((N - k - 1) / N, 1.0 / K) * (sums[k + 1] - sums[k]);
  const auto single = dist.tail_integral(K);
  out.single_finite = single.has_value();
  out.bound = single ? std::pow(lambda, 1.0 + 1.0 / K) * *single : INFINITY;
  return out;
}

}  // namespace fjscale
