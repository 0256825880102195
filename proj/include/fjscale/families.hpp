#pragma once

// Deterministic generators for the network families used in the scalability
// study, with their closed-form size/diameter formulas and known dimensions.

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fjscale/network.hpp"

namespace fjscale {

enum class FamilyKind {
  tandem,
  series_parallel,
  tandem_component,
  ladder,
  lattice,
  hexagon,
  tetrahedron,
  sierpinski,
  binary_tree,
  cycle,
  complete_plus_tandem,
  tandem_plus_tree,
};

std::string to_string(FamilyKind kind);
/// Accepts the names produced by to_string; throws std::invalid_argument.
FamilyKind family_kind_from_string(std::string_view name);
const std::vector<FamilyKind>& all_family_kinds();

struct FamilySpec {
  FamilyKind kind = FamilyKind::tandem;
  int index = 1;
  int buffer_size = 1;
  int lattice_dim = 2;  // lattice only
  int clique_size = 5;  // complete_plus_tandem only

  FamilySpec with_index(int i) const {
    FamilySpec copy = *this;
    copy.index = i;
    return copy;
  }
};

/// Throws std::invalid_argument for an index or parameter outside the family.
void check_spec(const FamilySpec& spec);
std::string family_label(const FamilySpec& spec);

/// Generated network plus the integer coordinates each node was built from.
/// Node ids follow the lexicographic order of the coordinates and every arc
/// points from the smaller coordinate to the larger one.
struct FamilyLayout {
  Network network;
  std::vector<std::vector<int>> coordinates;
};

FamilyLayout generate_layout(const FamilySpec& spec);
Network generate(const FamilySpec& spec);

inline constexpr double kInfiniteDimension = std::numeric_limits<double>::infinity();

struct GroundTruth {
  long long num_nodes = 0;
  long long diameter = 0;     // published formula; may differ from BFS (binary tree)
  double dim_scaling = 0;     // infinity for exponential growth
  double dim_extended = 0;    // integer valued or infinity
  int lambda = 0;             // multiplicity of the canonical extended resolving set; 0 if none
  int degree_bound = 0;       // uniform degree bound along the family
  std::string source = "published";
};

GroundTruth ground_truth(const FamilySpec& spec);

}  // namespace fjscale
