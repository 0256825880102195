#include "fjscale/network.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

namespace fjscale {

Adjacency::Adjacency(int num_nodes, const std::vector<std::pair<NodeId, NodeId>>& pairs)
    : offsets_(static_cast<size_t>(num_nodes) + 1, 0), targets_(pairs.size()) {
  for (const auto& [from, to] : pairs) ++offsets_[from + 1];
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [from, to] : pairs) targets_[cursor[from]++] = to;
  for (int v = 0; v < num_nodes; ++v)
    std::sort(targets_.begin() + offsets_[v], targets_.begin() + offsets_[v + 1]);
}

Network::Network(std::string name, int num_nodes, std::vector<Arc> arcs, int buffer_size)
    : name_(std::move(name)), num_nodes_(num_nodes), arcs_(std::move(arcs)), buffer_size_(buffer_size) {
  if (num_nodes_ < 1) throw NetworkError("num_nodes must be at least 1");
  if (buffer_size_ < 1) throw NetworkError("buffer_size must be at least 1");
  std::vector<std::pair<NodeId, NodeId>> out, in;
  std::set<std::pair<NodeId, NodeId>> undirected;
  out.reserve(arcs_.size());
  in.reserve(arcs_.size());
  for (const Arc& a : arcs_) {
    if (a.from < 0 || a.from >= num_nodes_ || a.to < 0 || a.to >= num_nodes_) {
      throw NetworkError("arc (" + std::to_string(a.from) + "," + std::to_string(a.to) +
                         ") references a node outside 0.." + std::to_string(num_nodes_ - 1));
    }
    out.emplace_back(a.from, a.to);
    in.emplace_back(a.to, a.from);
    if (a.from != a.to) {
      undirected.emplace(a.from, a.to);
      undirected.emplace(a.to, a.from);
    }
  }
  out_ = Adjacency(num_nodes_, out);
  in_ = Adjacency(num_nodes_, in);
  undirected_ = Adjacency(num_nodes_, {undirected.begin(), undirected.end()});

  // Kahn's algorithm; a smallest-id-first queue keeps the order canonical.
  std::vector<int> indeg(num_nodes_, 0);
  for (const Arc& a : arcs_) ++indeg[a.to];
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (NodeId v = 0; v < num_nodes_; ++v)
    if (indeg[v] == 0) ready.push(v);
  std::vector<NodeId> order;
  order.reserve(num_nodes_);
  while (!ready.empty()) {
    NodeId v = ready.top();
    ready.pop();
    order.push_back(v);
    for (NodeId w : out_.row(v))
      if (--indeg[w] == 0) ready.push(w);
  }
  if (static_cast<int>(order.size()) == num_nodes_) topo_order_ = std::move(order);
}

std::vector<NodeId> Network::sources() const {
  std::vector<NodeId> result;
  for (NodeId v = 0; v < num_nodes_; ++v)
    if (in_.size(v) == 0) result.push_back(v);
  return result;
}

std::vector<NodeId> Network::sinks() const {
  std::vector<NodeId> result;
  for (NodeId v = 0; v < num_nodes_; ++v)
    if (out_.size(v) == 0) result.push_back(v);
  return result;
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::cycle: return "cycle";
    case ViolationKind::disconnected: return "disconnected";
    case ViolationKind::self_loop: return "self_loop";
    case ViolationKind::duplicate_arc: return "duplicate_arc";
  }
  return "unknown";
}

std::vector<Violation> validate(const Network& net) {
  std::vector<Violation> found;
  std::set<Arc> seen;
  bool has_self_loop = false;
  for (const Arc& a : net.arcs()) {
    if (a.from == a.to) {
      has_self_loop = true;
      found.push_back({ViolationKind::self_loop, "self-loop on node " + std::to_string(a.from)});
    } else if (!seen.insert(a).second) {
      found.push_back({ViolationKind::duplicate_arc,
                       "duplicate arc (" + std::to_string(a.from) + "," + std::to_string(a.to) + ")"});
    }
  }

  // Cycle detection ignoring self-loops, so a self-loop is reported once.
  if (!net.is_acyclic()) {
    bool cyclic = true;
    if (has_self_loop) {
      std::vector<Arc> rest;
      for (const Arc& a : net.arcs())
        if (a.from != a.to) rest.push_back(a);
      cyclic = !Network(net.name(), net.num_nodes(), rest, net.buffer_size()).is_acyclic();
    }
    if (cyclic) found.push_back({ViolationKind::cycle, "arcs contain a directed cycle"});
  }

  std::vector<int> dist = bfs_distances(net, 0);
  int unreachable = static_cast<int>(std::count(dist.begin(), dist.end(), -1));
  if (unreachable > 0) {
    found.push_back({ViolationKind::disconnected,
                     std::to_string(unreachable) + " node(s) unreachable from node 0"});
  }
  return found;
}

void require_valid(const Network& net) {
  auto violations = validate(net);
  if (violations.empty()) return;
  std::string message = "invalid network '" + net.name() + "':";
  for (const auto& v : violations) message += " [" + to_string(v.kind) + ": " + v.detail + "]";
  throw NetworkError(message);
}

int degree(const Network& net) {
  int best = 0;
  for (NodeId v = 0; v < net.num_nodes(); ++v) {
    best = std::max(best, static_cast<int>(net.successors(v).size() + net.predecessors(v).size()));
  }
  return best;
}

std::vector<int> bfs_distances(const Network& net, std::span<const NodeId> sources) {
  std::vector<int> dist(net.num_nodes(), -1);
  std::vector<NodeId> frontier;
  frontier.reserve(net.num_nodes());
  for (NodeId s : sources) {
    if (dist[s] != 0) {
      dist[s] = 0;
      frontier.push_back(s);
    }
  }
  for (size_t head = 0; head < frontier.size(); ++head) {
    NodeId u = frontier[head];
    for (NodeId w : net.neighbors(u)) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        frontier.push_back(w);
      }
    }
  }
  return dist;
}

std::vector<int> bfs_distances(const Network& net, NodeId source) {
  return bfs_distances(net, std::span<const NodeId>(&source, 1));
}

int distance(const Network& net, NodeId u, NodeId v) {
  int d = bfs_distances(net, u)[v];
  if (d < 0) {
    throw NetworkError("nodes " + std::to_string(u) + " and " + std::to_string(v) + " are not connected");
  }
  return d;
}

namespace {

std::pair<NodeId, int> farthest(const std::vector<int>& dist) {
  NodeId arg = 0;
  for (NodeId v = 1; v < static_cast<NodeId>(dist.size()); ++v)
    if (dist[v] > dist[arg]) arg = v;
  return {arg, dist[arg]};
}

}  // namespace

DiameterResult diameter(const Network& net, int exact_cutoff) {
  if (net.num_nodes() <= exact_cutoff) {
    int best = 0;
    for (NodeId s = 0; s < net.num_nodes(); ++s) {
      auto dist = bfs_distances(net, s);
      if (std::find(dist.begin(), dist.end(), -1) != dist.end())
        throw NetworkError("diameter of a disconnected network is undefined");
      best = std::max(best, farthest(dist).second);
    }
    return {best, true};
  }
  auto [far, d0] = farthest(bfs_distances(net, 0));
  auto [other, d1] = farthest(bfs_distances(net, far));
  (void)other;
  return {std::max(d0, d1), false};
}

bool level_feasible(const Network& net, int k, std::vector<int>* labelling) {
  // Difference constraints l(j) - l(i) >= 1 and l(j) - l(i) <= k become
  // edges j -> i (weight -1) and i -> j (weight k); a feasible labelling is
  // a shortest-path potential, which exists iff there is no negative cycle.
  const int n = net.num_nodes();
  std::vector<std::vector<std::pair<NodeId, int>>> edges(n);
  for (const Arc& a : net.arcs()) {
    edges[a.to].emplace_back(a.from, -1);
    edges[a.from].emplace_back(a.to, k);
  }
  std::vector<long long> dist(n, 0);
  std::vector<int> hops(n, 0);
  std::vector<char> queued(n, 1);
  std::deque<NodeId> queue;
  for (NodeId v = 0; v < n; ++v) queue.push_back(v);
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    queued[u] = 0;
    for (const auto& [w, weight] : edges[u]) {
      if (dist[u] + weight < dist[w]) {
        dist[w] = dist[u] + weight;
        hops[w] = hops[u] + 1;
        if (hops[w] >= n) return false;  // a shortest path with n arcs repeats a node
        if (!queued[w]) {
          queued[w] = 1;
          queue.push_back(w);
        }
      }
    }
  }
  if (labelling) {
    long long lowest = *std::min_element(dist.begin(), dist.end());
    labelling->resize(n);
    for (NodeId v = 0; v < n; ++v) (*labelling)[v] = static_cast<int>(dist[v] - lowest);
  }
  return true;
}

MinimumLevel minimum_level(const Network& net) {
  if (!net.is_acyclic()) throw NetworkError("minimum level requires an acyclic network");
  MinimumLevel result;
  if (net.arcs().empty()) {
    result.labelling.assign(net.num_nodes(), 0);
    return result;
  }
  int lo = 1;
  int hi = std::max(1, net.num_nodes() - 1);
  while (lo < hi) {
    int mid = lo + (hi - lo) / 2;
    if (level_feasible(net, mid)) hi = mid;
    else lo = mid + 1;
  }
  result.level = lo;
  level_feasible(net, lo, &result.labelling);
  return result;
}

std::vector<NodeId> ball(const Network& net, NodeId v, int r) {
  if (r < 0) throw std::invalid_argument("ball radius must be non-negative");
  std::vector<int> dist(net.num_nodes(), -1);
  std::vector<NodeId> members{v};
  dist[v] = 0;
  for (size_t head = 0; head < members.size(); ++head) {
    NodeId u = members[head];
    if (dist[u] == r) continue;
    for (NodeId w : net.neighbors(u)) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        members.push_back(w);
      }
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

TopologyMetrics compute_metrics(const Network& net) {
  TopologyMetrics m;
  m.degree = degree(net);
  auto d = diameter(net);
  m.diameter = d.value;
  m.diameter_exact = d.exact;
  auto level = minimum_level(net);
  m.min_level = level.level;
  m.labelling = std::move(level.labelling);
  m.num_sources = static_cast<int>(net.sources().size());
  m.num_sinks = static_cast<int>(net.sinks().size());
  return m;
}

nlohmann::json to_json(const Network& net) {
  nlohmann::json arcs = nlohmann::json::array();
  for (const Arc& a : net.arcs()) arcs.push_back({a.from, a.to});
  return {{"name", net.name()},
          {"buffer_size", net.buffer_size()},
          {"num_nodes", net.num_nodes()},
          {"arcs", std::move(arcs)}};
}

nlohmann::json to_json(const TopologyMetrics& m) {
  return {{"degree", m.degree},
          {"diameter", m.diameter},
          {"diameter_exact", m.diameter_exact},
          {"min_level", m.min_level},
          {"labelling", m.labelling},
          {"num_sources", m.num_sources},
          {"num_sinks", m.num_sinks}};
}

Network network_from_json(const nlohmann::json& doc) {
  try {
    if (!doc.is_object()) throw NetworkError("network document must be a JSON object");
    std::string name = doc.at("name").get<std::string>();
    int buffer_size = doc.at("buffer_size").get<int>();
    int num_nodes = doc.at("num_nodes").get<int>();
    std::vector<Arc> arcs;
    for (const auto& pair : doc.at("arcs")) {
      if (!pair.is_array() || pair.size() != 2) throw NetworkError("each arc must be a pair [from, to]");
      arcs.push_back({pair[0].get<int>(), pair[1].get<int>()});
    }
    Network net(std::move(name), num_nodes, std::move(arcs), buffer_size);
    require_valid(net);
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw NetworkError(std::string("malformed network document: ") + e.what());
  }
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NetworkError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw NetworkError("malformed JSON in " + path.string() + ": " + e.what());
  }
  return network_from_json(doc);
}

void save_network(const Network& net, const std::filesystem::path& path) {
  write_file_atomically(path, to_json(net).dump(2) + "\n");
}

void write_file_atomically(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace fjscale
