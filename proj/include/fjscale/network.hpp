#pragma once

// Fork-join queueing network with blocking: an immutable DAG of single
// servers with a uniform buffer capacity on every arc, plus the topology
// metrics used throughout the library (degree, distance, diameter,
// minimum level).

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace fjscale {

using NodeId = int;

struct Arc {
  NodeId from = 0;
  NodeId to = 0;

  friend bool operator==(const Arc&, const Arc&) = default;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

/// Compressed adjacency rows (CSR).
class Adjacency {
 public:
  Adjacency() = default;
  Adjacency(int num_nodes, const std::vector<std::pair<NodeId, NodeId>>& pairs);

  std::span<const NodeId> row(NodeId v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  int size(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

 private:
  std::vector<int> offsets_;
  std::vector<NodeId> targets_;
};

/// Thrown when a network file or constructor input breaks the model.
class NetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Network {
 public:
  /// Arc endpoints must lie in [0, num_nodes); num_nodes and buffer_size
  /// must be positive. Structural invariants (acyclic, connected, simple)
  /// are not enforced here; see validate().
  Network(std::string name, int num_nodes, std::vector<Arc> arcs, int buffer_size);

  const std::string& name() const { return name_; }
  int num_nodes() const { return num_nodes_; }
  int buffer_size() const { return buffer_size_; }
  std::span<const Arc> arcs() const { return arcs_; }

  /// Downstream nodes w with (v, w) in E.
  std::span<const NodeId> successors(NodeId v) const { return out_.row(v); }
  /// Upstream nodes u with (u, v) in E.
  std::span<const NodeId> predecessors(NodeId v) const { return in_.row(v); }
  /// Neighbours in the undirected counterpart, without repeats.
  std::span<const NodeId> neighbors(NodeId v) const { return undirected_.row(v); }

  bool is_acyclic() const { return !topo_order_.empty() || num_nodes_ == 0; }
  /// Kahn order, sources first. Empty when the arc set has a cycle.
  const std::vector<NodeId>& topological_order() const { return topo_order_; }

  std::vector<NodeId> sources() const;
  std::vector<NodeId> sinks() const;

 private:
  std::string name_;
  int num_nodes_;
  std::vector<Arc> arcs_;
  int buffer_size_;
  Adjacency out_;
  Adjacency in_;
  Adjacency undirected_;
  std::vector<NodeId> topo_order_;
};

enum class ViolationKind { cycle, disconnected, self_loop, duplicate_arc };

struct Violation {
  ViolationKind kind;
  std::string detail;
};

std::string to_string(ViolationKind kind);

/// Every broken network invariant; empty means the network is valid.
std::vector<Violation> validate(const Network& net);

/// Throws NetworkError listing all violations when validate() is non-empty.
void require_valid(const Network& net);

/// Maximum over nodes of in-degree plus out-degree.
int degree(const Network& net);

/// Undirected BFS distances from `source`; -1 marks unreachable nodes.
std::vector<int> bfs_distances(const Network& net, NodeId source);

/// Distance to the nearest member of `sources` (multi-source BFS).
std::vector<int> bfs_distances(const Network& net, std::span<const NodeId> sources);

/// Undirected shortest-path length. Throws NetworkError if unreachable.
int distance(const Network& net, NodeId u, NodeId v);

struct DiameterResult {
  int value = 0;
  bool exact = true;
};

inline constexpr int kExactDiameterCutoff = 20000;

/// Exact all-sources BFS up to `exact_cutoff` nodes, double-sweep lower
/// bound (flagged inexact) beyond it.
DiameterResult diameter(const Network& net, int exact_cutoff = kExactDiameterCutoff);

struct MinimumLevel {
  int level = 0;
  std::vector<int> labelling;
};

/// Smallest k admitting a labelling with 1 <= l(j) - l(i) <= k on every arc,
/// together with a witnessing labelling (minimum label 0).
MinimumLevel minimum_level(const Network& net);

/// True iff a labelling with arc gaps in [1, k] exists.
bool level_feasible(const Network& net, int k, std::vector<int>* labelling = nullptr);

/// Nodes within undirected distance r of v, sorted by id.
std::vector<NodeId> ball(const Network& net, NodeId v, int r);

struct TopologyMetrics {
  int degree = 0;
  int diameter = 0;
  bool diameter_exact = true;
  int min_level = 0;
  std::vector<int> labelling;
  int num_sources = 0;
  int num_sinks = 0;
};

TopologyMetrics compute_metrics(const Network& net);

nlohmann::json to_json(const Network& net);
nlohmann::json to_json(const TopologyMetrics& metrics);
/// Parses the network file schema and enforces every invariant.
Network network_from_json(const nlohmann::json& doc);

Network load_network(const std::filesystem::path& path);
void save_network(const Network& net, const std::filesystem::path& path);

/// Writes `contents` to a sibling temporary file, then renames it over `path`.
void write_file_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace fjscale
