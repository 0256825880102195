#include "fjscale/dimensions.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "fjscale/service.hpp"
#include "fjscale/stats.hpp"

namespace fjscale {

namespace {

std::vector<std::vector<int>> all_pairs(const Network& net) {
  std::vector<std::vector<int>> d(net.num_nodes());
  for (NodeId v = 0; v < net.num_nodes(); ++v) d[v] = bfs_distances(net, v);
  return d;
}

void check_ids(const Network& net, std::span<const NodeId> ids) {
  for (NodeId w : ids)
    if (w < 0 || w >= net.num_nodes()) throw std::invalid_argument("node id out of range");
}

// Largest number of nodes sharing one key.
int max_multiplicity(std::vector<std::vector<int>> keys) {
  if (keys.empty()) return 0;
  std::sort(keys.begin(), keys.end());
  int best = 1, run = 1;
  for (std::size_t k = 1; k < keys.size(); ++k) {
    run = keys[k] == keys[k - 1] ? run + 1 : 1;
    best = std::max(best, run);
  }
  return best;
}

bool resolves(const std::vector<std::vector<int>>& dist, std::span<const NodeId> W) {
  const int n = static_cast<int>(dist.size());
  std::vector<std::vector<int>> keys(n, std::vector<int>(W.size()));
  for (int v = 0; v < n; ++v)
    for (std::size_t t = 0; t < W.size(); ++t) keys[v][t] = dist[W[t]][v];
  return max_multiplicity(std::move(keys)) <= 1;
}

// Calls f(combination) for every k-subset of [0, n) in lexicographic order
// until f returns true. Returns whether f accepted one.
template <class F>
bool for_each_combination(int n, int k, F&& f) {
  std::vector<NodeId> c(k);
  std::iota(c.begin(), c.end(), 0);
  while (true) {
    if (f(std::span<const NodeId>(c))) return true;
    int t = k - 1;
    while (t >= 0 && c[t] == n - k + t) --t;
    if (t < 0) return false;
    ++c[t];
    for (int s = t + 1; s < k; ++s) c[s] = c[s - 1] + 1;
  }
}

std::vector<NodeId> select_nodes(const FamilyLayout& layout,
                                 const std::function<bool(const std::vector<int>&)>& pred) {
  std::vector<NodeId> out;
  for (std::size_t v = 0; v < layout.coordinates.size(); ++v)
    if (pred(layout.coordinates[v])) out.push_back(static_cast<NodeId>(v));
  return out;
}

// Vertices of the hexagonal cells chosen by `pick`, matching the generator's
// cell-centre and offset layout.
std::vector<NodeId> hexagon_cells(const FamilyLayout& layout, int i,
                                  const std::function<bool(int, int)>& pick) {
  static constexpr int kOffsets[6][2] = {{1, 1}, {0, 2}, {-1, 1}, {-1, -1}, {0, -2}, {1, -1}};
  std::map<std::vector<int>, NodeId> id;
  for (std::size_t v = 0; v < layout.coordinates.size(); ++v) id.emplace(layout.coordinates[v], v);
  std::vector<NodeId> out;
  for (int q = -(i - 1); q <= i - 1; ++q)
    for (int r = -(i - 1); r <= i - 1; ++r) {
      if (std::abs(q + r) > i - 1 || !pick(q, r)) continue;
      for (const auto& o : kOffsets) out.push_back(id.at({2 * q + r + o[0], 3 * r + o[1]}));
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct Candidate {
  int k = 0;
  int lambda = 0;
  std::string method;
  ExtendedResolvingSet witness;
};

// Best single subset (k = 1) or pair of subsets (k = 2) by exhaustive search
// over node masks; nullopt if the budget runs out.
std::optional<Candidate> search_subsets(const Network& net, int k, std::int64_t& budget) {
  const int n = net.num_nodes();
  const auto dist = all_pairs(net);
  const std::uint32_t full = (1u << n) - 1;
  std::vector<std::vector<int>> nearest(full + 1, std::vector<int>(n, std::numeric_limits<int>::max()));
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const int low = std::countr_zero(mask);
    const std::uint32_t rest = mask & (mask - 1);
    for (int v = 0; v < n; ++v)
      nearest[mask][v] = rest ? std::min(nearest[rest][v], dist[low][v]) : dist[low][v];
  }
  auto members = [&](std::uint32_t mask) {
    std::vector<NodeId> out;
    for (int v = 0; v < n; ++v)
      if (mask >> v & 1u) out.push_back(v);
    return out;
  };
  Candidate best;
  best.k = k;
  best.lambda = std::numeric_limits<int>::max();
  best.method = "search";
  std::vector<std::vector<int>> keys(n, std::vector<int>(k));
  for (std::uint32_t a = 1; a <= full; ++a) {
    for (std::uint32_t b = (k == 1 ? 0 : a + 1); b <= (k == 1 ? 0 : full); ++b) {
      if (--budget < 0) return std::nullopt;
      for (int v = 0; v < n; ++v) {
        keys[v][0] = nearest[a][v];
        if (k == 2) keys[v][1] = nearest[b][v];
      }
      const int lambda = max_multiplicity(keys);
      if (lambda < best.lambda) {
        best.lambda = lambda;
        best.witness.subsets = {members(a)};
        if (k == 2) best.witness.subsets.push_back(members(b));
      }
      if (k == 1) break;
    }
  }
  best.witness.lambda = best.lambda;
  return best;
}

double log_size(std::int64_t size) { return std::log(static_cast<double>(size)); }

}  // namespace

std::vector<int> metric_representation(const Network& net, NodeId v, std::span<const NodeId> W) {
  check_ids(net, W);
  check_ids(net, std::span<const NodeId>(&v, 1));
  std::vector<int> out;
  for (NodeId w : W) out.push_back(distance(net, v, w));
  return out;
}

bool is_resolving(const Network& net, std::span<const NodeId> W) {
  check_ids(net, W);
  std::vector<std::vector<int>> rows;
  for (NodeId w : W) rows.push_back(bfs_distances(net, w));
  std::vector<std::vector<int>> keys(net.num_nodes(), std::vector<int>(W.size()));
  for (NodeId v = 0; v < net.num_nodes(); ++v)
    for (std::size_t t = 0; t < W.size(); ++t) keys[v][t] = rows[t][v];
  return max_multiplicity(std::move(keys)) <= 1;
}

MetricDimensionResult metric_dimension_exact(const Network& net, int cutoff, std::int64_t subset_budget) {
  const int n = net.num_nodes();
  if (n > cutoff)
    throw BudgetExceeded("exact metric dimension limited to " + std::to_string(cutoff) +
                         " nodes; use the greedy heuristic");
  if (n == 1) return {0, {}};
  const auto dist = all_pairs(net);
  std::int64_t budget = subset_budget;
  for (int k = 1; k < n; ++k) {
    MetricDimensionResult out;
    const bool found = for_each_combination(n, k, [&](std::span<const NodeId> W) {
      if (--budget < 0) throw BudgetExceeded("subset budget exhausted; use the greedy heuristic");
      if (!resolves(dist, W)) return false;
      out = {k, std::vector<NodeId>(W.begin(), W.end())};
      return true;
    });
    if (found) return out;
  }
  std::vector<NodeId> all(n - 1);
  std::iota(all.begin(), all.end(), 0);
  return {n - 1, all};
}

MetricDimensionResult metric_dimension_greedy(const Network& net) {
  const int n = net.num_nodes();
  if (n == 1) return {0, {}};
  const auto dist = all_pairs(net);
  // cls[v] < n always, dist < n, so (cls, dist) packs into one index.
  std::vector<int> cls(n, 0);
  std::vector<std::int64_t> count(static_cast<std::size_t>(n) * n, 0);
  std::vector<std::size_t> touched;
  std::vector<char> chosen(n, 0);
  MetricDimensionResult out;
  auto confused_after = [&](NodeId w) {
    std::int64_t pairs = 0;
    touched.clear();
    for (int v = 0; v < n; ++v) {
      const std::size_t key = static_cast<std::size_t>(cls[v]) * n + dist[w][v];
      if (count[key]++ == 0) touched.push_back(key);
      pairs += count[key] - 1;
    }
    for (std::size_t key : touched) count[key] = 0;
    return pairs;
  };
  while (true) {
    std::int64_t best_pairs = std::numeric_limits<std::int64_t>::max();
    NodeId best = -1;
    for (NodeId w = 0; w < n; ++w) {
      if (chosen[w]) continue;
      const auto p = confused_after(w);
      if (p < best_pairs) {
        best_pairs = p;
        best = w;
      }
    }
    chosen[best] = 1;
    out.witness.push_back(best);
    std::map<std::pair<int, int>, int> relabel;
    for (int v = 0; v < n; ++v) {
      const auto key = std::make_pair(cls[v], dist[best][v]);
      const auto it = relabel.emplace(key, static_cast<int>(relabel.size())).first;
      cls[v] = it->second;
    }
    if (best_pairs == 0) break;
  }
  out.value = static_cast<int>(out.witness.size());
  return out;
}

std::vector<std::vector<int>> extended_representations(const Network& net,
                                                       std::span<const std::vector<NodeId>> subsets) {
  std::vector<std::vector<int>> rows;
  for (const auto& W : subsets) {
    if (W.empty()) throw std::invalid_argument("extended resolving subsets must be nonempty");
    check_ids(net, W);
    rows.push_back(bfs_distances(net, std::span<const NodeId>(W)));
  }
  std::vector<std::vector<int>> rep(net.num_nodes(), std::vector<int>(subsets.size()));
  for (NodeId v = 0; v < net.num_nodes(); ++v)
    for (std::size_t t = 0; t < subsets.size(); ++t) rep[v][t] = rows[t][v];
  return rep;
}

std::vector<int> extended_representation(const Network& net, NodeId v,
                                         std::span<const std::vector<NodeId>> subsets) {
  check_ids(net, std::span<const NodeId>(&v, 1));
  return extended_representations(net, subsets)[v];
}

int check_extended_resolving(const Network& net, std::span<const std::vector<NodeId>> subsets) {
  return max_multiplicity(extended_representations(net, subsets));
}

std::optional<ExtendedResolvingSet> family_extended_resolving(const FamilySpec& spec) {
  const FamilyLayout layout = generate_layout(spec);
  using C = std::vector<int>;
  ExtendedResolvingSet ers;
  auto add = [&](const std::function<bool(const C&)>& pred) { ers.subsets.push_back(select_nodes(layout, pred)); };
  switch (spec.kind) {
    case FamilyKind::tandem:
      add([](const C& c) { return c[0] == 0; });
      break;
    case FamilyKind::series_parallel:
    case FamilyKind::tandem_component:
    case FamilyKind::cycle:
      add([](const C& c) { return c[0] == 0 && c[1] == 0; });
      break;
    case FamilyKind::ladder:
    case FamilyKind::complete_plus_tandem:
      add([](const C& c) { return c[0] == 0; });
      break;
    case FamilyKind::lattice:
      for (int t = 0; t < spec.lattice_dim; ++t) add([t](const C& c) { return c[t] == 0; });
      break;
    case FamilyKind::hexagon: {
      const int i = spec.index;
      ers.subsets.push_back(hexagon_cells(layout, i, [i](int, int r) { return r == -(i - 1); }));
      ers.subsets.push_back(hexagon_cells(layout, i, [i](int q, int) { return q == i - 1; }));
      break;
    }
    case FamilyKind::tetrahedron:
      add([](const C& c) { return c[0] == 0 && c[1] == 0 && c[2] == 0; });
      add([](const C& c) { return c[0] == 0; });
      add([](const C& c) { return c[1] == 0; });
      break;
    case FamilyKind::sierpinski: {
      // Two corners of the outer triangle. The two outer sides leave classes
      // that grow with the index (size 9 at i = 8).
      const int side = 1 << (spec.index - 1);
      add([](const C& c) { return c[0] == 0 && c[1] == 0; });
      add([side](const C& c) { return c[0] == side && c[1] == 0; });
      break;
    }
    case FamilyKind::binary_tree:
    case FamilyKind::tandem_plus_tree:
      return std::nullopt;
  }
  ers.lambda = check_extended_resolving(layout.network, ers.subsets);
  return ers;
}

EmCertificate extended_metric_dimension(const FamilySpec& family, std::span<const int> indices,
                                        const EmSearchOptions& options) {
  if (indices.empty()) throw std::invalid_argument("extended metric dimension needs indices");
  EmCertificate cert;
  std::vector<std::vector<Candidate>> candidates;
  std::int64_t budget = options.budget;
  for (int i : indices) {
    const FamilySpec spec = family.with_index(i);
    const Network net = generate(spec);
    std::vector<Candidate> cands;
    if (auto ers = family_extended_resolving(spec))
      cands.push_back({ers->cardinality(), ers->lambda, "construction", *ers});
    if (net.num_nodes() <= options.single_subset_nodes)
      if (auto c = search_subsets(net, 1, budget)) cands.push_back(*c);
    if (net.num_nodes() <= options.pair_subset_nodes)
      if (auto c = search_subsets(net, 2, budget)) cands.push_back(*c);
    std::erase_if(cands, [&](const Candidate& c) { return c.lambda > options.lambda_max; });
    candidates.push_back(std::move(cands));
  }

  cert.bounded = true;
  for (std::size_t t = 0; t < indices.size(); ++t) {
    int k_min = std::numeric_limits<int>::max();
    for (const auto& c : candidates[t]) k_min = std::min(k_min, c.k);
    if (candidates[t].empty()) {
      cert.bounded = false;
    } else {
      cert.k_lower = std::max(cert.k_lower, k_min);
    }
  }
  const int k = cert.k_lower;
  for (std::size_t t = 0; t < indices.size(); ++t) {
    EmIndexResult r;
    r.index = indices[t];
    r.num_nodes = generate(family.with_index(indices[t])).num_nodes();
    const Candidate* best = nullptr;
    for (const auto& c : candidates[t])
      if (c.k <= k && (!best || c.lambda < best->lambda)) best = &c;
    if (best) {
      r.found = true;
      r.k = best->k;
      r.lambda = best->lambda;
      r.method = best->method;
      r.witness = best->witness;
      cert.lambda = std::max(cert.lambda, best->lambda);
    }
    cert.per_index.push_back(std::move(r));
  }
  if (cert.bounded) cert.k = k;
  return cert;
}

bool exponential_growth(std::span<const double> sizes, std::span<const double> diameters,
                        double r2_threshold) {
  std::vector<double> log_n, log_d;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    log_n.push_back(std::log(sizes[k]));
    log_d.push_back(std::log(diameters[k]));
  }
  const LineFit exp_fit = fit_line(diameters, log_n);
  const LineFit pow_fit = fit_line(log_d, log_n);
  return exp_fit.r2 > r2_threshold && exp_fit.slope > 0 && exp_fit.r2 > pow_fit.r2;
}

ScalingEstimate scaling_dimension_estimate(const FamilySpec& family, std::span<const int> indices,
                                           const ScalingOptions& options) {
  if (indices.size() < 3) throw std::invalid_argument("scaling dimension needs >= 3 indices");
  ScalingEstimate est;
  std::vector<double> sizes, diams, log_n, log_d;
  est.ball_slope = 0;
  for (int i : indices) {
    const Network net = generate(family.with_index(i));
    const int d = diameter(net).value;
    if (!diams.empty() && d <= diams.back())
      throw std::invalid_argument("scaling dimension needs increasing diameters");
    sizes.push_back(net.num_nodes());
    diams.push_back(d);
    log_n.push_back(log_size(net.num_nodes()));
    log_d.push_back(std::log(static_cast<double>(d)));

    // Ball probe around a handful of deterministic and pseudo-random centres.
    const int n = net.num_nodes();
    std::vector<NodeId> centres{0, n - 1};
    NodeId hub = 0;
    for (NodeId v = 0; v < n; ++v)
      if (net.neighbors(v).size() > net.neighbors(hub).size()) hub = v;
    centres.push_back(hub);
    for (int k = 0; static_cast<int>(centres.size()) < std::min(n, options.centres + 3) && k < 4 * options.centres; ++k)
      centres.push_back(static_cast<NodeId>(mix64(options.seed + 0x9e37ULL * (k + 1) + i) % n));
    std::sort(centres.begin(), centres.end());
    centres.erase(std::unique(centres.begin(), centres.end()), centres.end());

    const int exp_radius = static_cast<int>(std::ceil(std::log2(static_cast<double>(n)))) + 1;
    for (NodeId c : centres) {
      const auto dist = bfs_distances(net, c);
      const int ecc = *std::max_element(dist.begin(), dist.end());
      std::vector<std::int64_t> within(ecc + 1, 0);
      for (int x : dist) ++within[x];
      for (int r = 1; r <= ecc; ++r) within[r] += within[r - 1];

      std::vector<double> lr, ls;
      for (int r = 1; r <= ecc; r *= 2) {
        lr.push_back(std::log(static_cast<double>(r)));
        ls.push_back(log_size(within[r]));
      }
      if (lr.size() >= 3) est.ball_slope = std::max(est.ball_slope, fit_line(lr, ls).slope);

      std::vector<double> rs, lrs, lss;
      for (int r = 1; r <= std::min(ecc, exp_radius); ++r) {
        rs.push_back(r);
        lrs.push_back(std::log(static_cast<double>(r)));
        lss.push_back(log_size(within[r]));
      }
      if (rs.size() >= 4) {
        const LineFit e = fit_line(rs, lss);
        const LineFit p = fit_line(lrs, lss);
        if (e.r2 > options.exp_r2_threshold && e.slope >= options.ball_min_rate && e.r2 > p.r2)
          est.ball_exponential = true;
      }
    }
  }
  const LineFit whole = fit_line(log_d, log_n);
  const LineFit exp_fit = fit_line(diams, log_n);
  est.whole_slope = whole.slope;
  est.power_r2 = whole.r2;
  est.exp_r2 = exp_fit.r2;
  est.exponential = exponential_growth(sizes, diams, options.exp_r2_threshold) || est.ball_exponential;
  est.value = est.exponential ? kInfiniteDimension : std::max(est.whole_slope, est.ball_slope);
  return est;
}

double DimensionReport::dim_em() const {
  return extended.bounded ? static_cast<double>(extended.k) : kInfiniteDimension;
}

DimensionReport dimension_report(const FamilySpec& family, std::span<const int> indices,
                                 const EmSearchOptions& em, const ScalingOptions& sc) {
  DimensionReport report;
  report.family = to_string(family.kind);
  report.indices.assign(indices.begin(), indices.end());
  for (int i : indices) {
    const Network net = generate(family.with_index(i));
    MetricDimensionEntry e;
    e.index = i;
    e.num_nodes = net.num_nodes();
    if (net.num_nodes() <= kExactMetricDimensionCutoff) {
      e.exact = true;
      e.lower = e.upper = metric_dimension_exact(net).value;
    } else {
      e.lower = 1;
      e.upper = net.num_nodes() <= kGreedyMetricDimensionCutoff ? metric_dimension_greedy(net).value
                                                                : net.num_nodes() - 1;
    }
    report.metric_dimension.push_back(e);
  }
  report.extended = extended_metric_dimension(family, indices, em);
  report.scaling = scaling_dimension_estimate(family, indices, sc);
  report.truth = ground_truth(family.with_index(indices.back()));
  return report;
}

DimRelation check_dim_relation(double dim_s, double dim_em, double tolerance) {
  DimRelation r;
  if (std::isinf(dim_em)) {
    r.ordering_holds = true;
    r.conjecture_holds = std::isinf(dim_s);
    return r;
  }
  if (std::isinf(dim_s)) return r;
  r.ordering_holds = dim_s <= dim_em + tolerance;
  r.conjecture_holds = dim_em <= std::ceil(dim_s - 1e-9);
  return r;
}

DimRelation check_dim_relation(const DimensionReport& report, double tolerance) {
  return check_dim_relation(report.scaling.value, report.dim_em(), tolerance);
}

namespace {
nlohmann::json dim_json(double v) {
  if (std::isinf(v)) return "infinity";
  return v;
}
}  // namespace

nlohmann::json to_json(const DimensionReport& report) {
  nlohmann::json md = nlohmann::json::array();
  for (const auto& e : report.metric_dimension)
    md.push_back({{"index", e.index}, {"num_nodes", e.num_nodes}, {"exact", e.exact},
                  {"lower", e.lower}, {"upper", e.upper}});
  nlohmann::json per = nlohmann::json::array();
  for (const auto& r : report.extended.per_index)
    per.push_back({{"index", r.index}, {"num_nodes", r.num_nodes}, {"found", r.found}, {"k", r.k},
                   {"lambda", r.lambda}, {"method", r.method}, {"subsets", r.witness.subsets}});
  const DimRelation rel = check_dim_relation(report);
  return {{"family", report.family},
          {"indices", report.indices},
          {"metric_dimension", md},
          {"dim_em",
           {{"bounded", report.extended.bounded},
            {"k", dim_json(report.dim_em())},
            {"lambda", report.extended.lambda},
            {"k_lower", report.extended.k_lower},
            {"per_index", per}}},
          {"dim_s_estimate",
           {{"value", dim_json(report.scaling.value)},
            {"whole_slope", report.scaling.whole_slope},
            {"ball_slope", report.scaling.ball_slope},
            {"exponential", report.scaling.exponential}}},
          {"ground_truth",
           {{"dim_s", dim_json(report.truth.dim_scaling)},
            {"dim_em", dim_json(report.truth.dim_extended)},
            {"lambda", report.truth.lambda},
            {"source", report.truth.source}}},
          {"ordering_holds", rel.ordering_holds},
          {"conjecture_evidence", rel.conjecture_holds}};
}

}  // namespace fjscale
