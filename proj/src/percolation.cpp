#include "fjscale/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fjscale/stats.hpp"

namespace fjscale {

namespace {

template <class F>
void for_each_successor(const Network& net, PrecedenceNode p, F&& f) {
  for (NodeId u : net.predecessors(p.v)) f(PrecedenceNode{p.m, u}, ArcType::type_I);
  if (p.m >= 1) f(PrecedenceNode{p.m - 1, p.v}, ArcType::type_II);
  if (p.m >= net.buffer_size())
    for (NodeId w : net.successors(p.v)) f(PrecedenceNode{p.m - net.buffer_size(), w}, ArcType::type_III);
}

constexpr double kUndefined = -std::numeric_limits<double>::infinity();

// Path values over rows [lo, hi]. Without a target every node is defined and
// holds its heaviest path to row 0; with a target only nodes that reach it
// are defined.
class PathTable {
 public:
  PathTable(const Network& net, const WeightField& field, std::int64_t hi,
            std::optional<PrecedenceNode> target)
      : net_(net), lo_(target ? target->m : 0), n_(net.num_nodes()) {
    if (hi < lo_) throw std::invalid_argument("path table with empty row range");
    val_.assign(static_cast<std::size_t>(hi - lo_ + 1) * n_, kUndefined);
    for (std::int64_t m = lo_; m <= hi; ++m) {
      for (NodeId v : net.topological_order()) {
        const PrecedenceNode p{m, v};
        if (target && p == *target) {
          at(p) = field(p);
          continue;
        }
        double best = target ? kUndefined : 0.0;
        for_each_successor(net, p, [&](PrecedenceNode y, ArcType) {
          if (y.m >= lo_) best = std::max(best, at(y));
        });
        if (best != kUndefined) at(p) = field(p) + best;
      }
    }
  }

  double value(PrecedenceNode p) const { return val_[index(p)]; }

  PathResult walk(PrecedenceNode from, std::optional<PrecedenceNode> target,
                  const WeightField& field) const {
    PathResult path;
    PrecedenceNode p = from;
    path.nodes.push_back(p);
    path.weight = field(p);
    while (!(target && p == *target)) {
      double best = kUndefined;
      PrecedenceNode next{};
      ArcType type = ArcType::type_I;
      bool found = false;
      for (const auto& arc : arcs_out(net_, p)) {
        if (arc.to.m < lo_) continue;
        const double v = value(arc.to);
        if (v == kUndefined) continue;
        if (!found || v > best) {
          best = v;
          next = arc.to;
          type = arc.type;
          found = true;
        }
      }
      if (!found) break;
      p = next;
      path.nodes.push_back(p);
      path.arc_types.push_back(type);
      ++path.type_counts[static_cast<int>(type)];
      path.weight += field(p);
    }
    return path;
  }

 private:
  std::size_t index(PrecedenceNode p) const {
    return static_cast<std::size_t>(p.m - lo_) * n_ + static_cast<std::size_t>(p.v);
  }
  double& at(PrecedenceNode p) { return val_[index(p)]; }

  const Network& net_;
  std::int64_t lo_;
  std::size_t n_;
  std::vector<double> val_;
};

void check_node(const Network& net, PrecedenceNode p) {
  if (p.m < 0 || p.v < 0 || p.v >= net.num_nodes())
    throw std::invalid_argument("precedence node out of range");
  if (!net.is_acyclic()) throw NetworkError("precedence graph needs an acyclic network");
}

}  // namespace

std::vector<PrecedenceArc> arcs_out(const Network& net, PrecedenceNode p) {
  check_node(net, p);
  std::vector<PrecedenceArc> out;
  for_each_successor(net, p, [&](PrecedenceNode y, ArcType t) { out.push_back({y, t}); });
  std::sort(out.begin(), out.end(), [](const PrecedenceArc& a, const PrecedenceArc& b) { return a.to < b.to; });
  return out;
}

double lpp_value(const Network& net, const ServiceDistribution& dist, std::int64_t m, NodeId v,
                 std::uint64_t seed, std::uint64_t replication) {
  check_node(net, {m, v});
  const WeightField field(dist, seed, replication);
  const int width = net.buffer_size() + 1;
  const std::size_t n = static_cast<std::size_t>(net.num_nodes());
  std::vector<double> ring(n * width, 0.0);
  auto slot = [&](PrecedenceNode p) -> double& {
    return ring[static_cast<std::size_t>(p.m % width) * n + static_cast<std::size_t>(p.v)];
  };
  for (std::int64_t row = 0; row <= m; ++row) {
    for (NodeId u : net.topological_order()) {
      const PrecedenceNode p{row, u};
      double best = 0.0;
      for_each_successor(net, p, [&](PrecedenceNode y, ArcType) { best = std::max(best, slot(y)); });
      slot(p) = field(p) + best;
    }
  }
  return slot({m, v});
}

PathResult extract_max_path(const Network& net, const ServiceDistribution& dist, std::int64_t m,
                            NodeId v, std::uint64_t seed, std::uint64_t replication) {
  check_node(net, {m, v});
  const WeightField field(dist, seed, replication);
  const PathTable table(net, field, m, std::nullopt);
  return table.walk({m, v}, std::nullopt, field);
}

bool exists_path(const Network& net, PrecedenceNode from, PrecedenceNode to) {
  check_node(net, from);
  check_node(net, to);
  if (from == to) return true;
  if (from.m < to.m) return false;
  const std::size_t n = static_cast<std::size_t>(net.num_nodes());
  std::vector<char> reach(static_cast<std::size_t>(from.m - to.m + 1) * n, 0);
  auto at = [&](PrecedenceNode p) -> char& {
    return reach[static_cast<std::size_t>(p.m - to.m) * n + static_cast<std::size_t>(p.v)];
  };
  at(to) = 1;
  for (std::int64_t m = to.m; m <= from.m; ++m) {
    for (NodeId v : net.topological_order()) {
      const PrecedenceNode p{m, v};
      if (p == to) continue;
      char r = 0;
      for_each_successor(net, p, [&](PrecedenceNode y, ArcType) {
        if (y.m >= to.m && at(y)) r = 1;
      });
      at(p) = r;
    }
  }
  return at(from) != 0;
}

std::optional<double> lpp_between(const Network& net, const ServiceDistribution& dist,
                                  PrecedenceNode from, PrecedenceNode to, std::uint64_t seed,
                                  std::uint64_t replication) {
  check_node(net, from);
  check_node(net, to);
  if (from.m < to.m) return std::nullopt;
  const WeightField field(dist, seed, replication);
  const PathTable table(net, field, from.m, to);
  const double v = table.value(from);
  if (v == kUndefined) return std::nullopt;
  return v;
}

std::optional<PathResult> extract_path_between(const Network& net, const ServiceDistribution& dist,
                                               PrecedenceNode from, PrecedenceNode to,
                                               std::uint64_t seed, std::uint64_t replication) {
  check_node(net, from);
  check_node(net, to);
  if (from.m < to.m) return std::nullopt;
  const WeightField field(dist, seed, replication);
  const PathTable table(net, field, from.m, to);
  if (table.value(from) == kUndefined) return std::nullopt;
  return table.walk(from, to, field);
}

bool check_superadditivity(const Network& net, const ServiceDistribution& dist, PrecedenceNode a,
                           PrecedenceNode b, PrecedenceNode c, std::uint64_t seed,
                           std::uint64_t replication) {
  const auto ab = lpp_between(net, dist, a, b, seed, replication);
  if (!ab) throw std::invalid_argument("no path from the first node to the middle node");
  const auto bc = lpp_between(net, dist, b, c, seed, replication);
  if (!bc) throw std::invalid_argument("no path from the middle node to the last node");
  const auto ac = lpp_between(net, dist, a, c, seed, replication);
  if (!ac) return false;  // concatenation exists, so this cannot happen
  const double s_b = WeightField(dist, seed, replication)(b);
  return *ac >= *ab + *bc - s_b - 1e-9 * std::abs(*ac);
}

PathLengthCheck path_length_bound_check(const PathResult& path, const Network& net,
                                        const MinimumLevel& level) {
  if (path.nodes.empty()) throw std::invalid_argument("empty path");
  if (static_cast<int>(level.labelling.size()) != net.num_nodes())
    throw std::invalid_argument("labelling size does not match the network");
  const PrecedenceNode s = path.nodes.front();
  const PrecedenceNode e = path.nodes.back();
  const std::int64_t b = net.buffer_size();
  const std::int64_t rows = s.m - e.m;
  PathLengthCheck out;
  out.length_budget_times_b = std::max<std::int64_t>(level.level + 1, b) * rows +
                              b * (level.labelling[s.v] - level.labelling[e.v]);
  out.length_ok = static_cast<std::int64_t>(path.num_arcs()) * b <= out.length_budget_times_b;
  out.type_III_ok = static_cast<std::int64_t>(path.type_counts[2]) * b <= rows;
  out.ok = out.length_ok && out.type_III_ok;
  return out;
}

UpperBoundEstimate upper_bound_throughput(const Network& net, const ServiceDistribution& dist,
                                          int samples, std::uint64_t seed,
                                          std::optional<int> known_diameter) {
  if (samples < 100) throw std::invalid_argument("upper bound needs >= 100 samples");
  UpperBoundEstimate out;
  out.diameter = known_diameter ? *known_diameter : diameter(net).value;
  out.diameter = std::max(out.diameter, 1);
  out.samples = samples;
  const std::int64_t b = net.buffer_size();
  out.draws_per_sample = out.diameter * b * net.num_nodes();
  std::vector<double> maxima;
  maxima.reserve(samples);
  for (int k = 0; k < samples; ++k) {
    const double u = unit_from_hash(key_hash(row_hash(seed, static_cast<std::uint64_t>(k), -1), 0));
    maxima.push_back(dist.max_of(out.draws_per_sample, u));
  }
  const Summary s = summarize(maxima);
  const double scale = 3.0 * out.diameter * static_cast<double>(b);
  out.mean_max = s.mean;
  out.bound = scale / s.mean;
  out.std_error = scale * s.std_error / (s.mean * s.mean);
  return out;
}

bool path_is_consistent(const Network& net, const PathResult& path, const WeightField& field) {
  if (path.nodes.empty() || path.arc_types.size() + 1 != path.nodes.size()) return false;
  std::array<int, 3> counts{};
  double weight = field(path.nodes.front());
  for (std::size_t k = 0; k + 1 < path.nodes.size(); ++k) {
    bool legal = false;
    for (const auto& arc : arcs_out(net, path.nodes[k]))
      if (arc.to == path.nodes[k + 1] && arc.type == path.arc_types[k]) legal = true;
    if (!legal) return false;
    ++counts[static_cast<int>(path.arc_types[k])];
    weight += field(path.nodes[k + 1]);
  }
  return counts == path.type_counts && std::abs(weight - path.weight) <= 1e-9 * std::abs(weight);
}

}  // namespace fjscale
