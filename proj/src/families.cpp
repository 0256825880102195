#include "fjscale/families.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace fjscale {

namespace {

using Coord = std::vector<int>;

struct Names {
  FamilyKind kind;
  const char* name;
};

constexpr Names kNames[] = {
    {FamilyKind::tandem, "tandem"},
    {FamilyKind::series_parallel, "series_parallel"},
    {FamilyKind::tandem_component, "tandem_component"},
    {FamilyKind::ladder, "ladder"},
    {FamilyKind::lattice, "lattice"},
    {FamilyKind::hexagon, "hexagon"},
    {FamilyKind::tetrahedron, "tetrahedron"},
    {FamilyKind::sierpinski, "sierpinski"},
    {FamilyKind::binary_tree, "binary_tree"},
    {FamilyKind::cycle, "cycle"},
    {FamilyKind::complete_plus_tandem, "complete_plus_tandem"},
    {FamilyKind::tandem_plus_tree, "tandem_plus_tree"},
};

// Collects undirected edges between coordinates, then assigns ids in
// lexicographic coordinate order.
class Builder {
 public:
  void node(const Coord& c) { nodes_.insert(c); }
  void edge(const Coord& a, const Coord& b) {
    nodes_.insert(a);
    nodes_.insert(b);
    if (a < b) {
      edges_.emplace(a, b);
    } else if (b < a) {
      edges_.emplace(b, a);
    }
  }

  FamilyLayout finish(std::string name, int buffer_size) const {
    std::map<Coord, NodeId> id;
    std::vector<Coord> coords(nodes_.begin(), nodes_.end());
    for (std::size_t k = 0; k < coords.size(); ++k) id.emplace(coords[k], static_cast<NodeId>(k));
    std::vector<Arc> arcs;
    arcs.reserve(edges_.size());
    for (const auto& [a, b] : edges_) arcs.push_back({id.at(a), id.at(b)});
    std::sort(arcs.begin(), arcs.end());
    return {Network(std::move(name), static_cast<int>(coords.size()), std::move(arcs), buffer_size),
            std::move(coords)};
  }

 private:
  std::set<Coord> nodes_;
  std::set<std::pair<Coord, Coord>> edges_;
};

long long ipow(long long base, int exp) {
  long long r = 1;
  for (int k = 0; k < exp; ++k) r *= base;
  return r;
}

void build_tandem(Builder& g, int i) {
  g.node({0});
  for (int k = 0; k < i; ++k) g.edge({k}, {k + 1});
}

void build_series_parallel(Builder& g, int i) {
  for (int k = 0; k < i; ++k) {
    const Coord join{2 * k, 0}, next{2 * k + 2, 0};
    const Coord upper{2 * k + 1, 0}, lower{2 * k + 1, 1};
    g.edge(join, upper);
    g.edge(join, lower);
    g.edge(upper, next);
    g.edge(lower, next);
  }
}

void build_tandem_component(Builder& g, int i) {
  for (int k = 0; k < i; ++k) {
    const Coord x{2 * k, 0}, y{2 * k, 1}, z{2 * k + 1, 0};
    g.edge(x, y);
    g.edge(x, z);
    g.edge(y, z);
    if (k + 1 < i) g.edge(z, {2 * k + 2, 0});
  }
}

void build_ladder(Builder& g, int i) {
  for (int x = 0; x < i; ++x) {
    g.edge({x, 0}, {x, 1});
    if (x + 1 < i) {
      g.edge({x, 0}, {x + 1, 0});
      g.edge({x, 1}, {x + 1, 1});
    }
  }
}

void build_lattice(Builder& g, int i, int d) {
  const long long total = ipow(i, d);
  Coord c(d, 0);
  for (long long n = 0; n < total; ++n) {
    long long rest = n;
    for (int t = d - 1; t >= 0; --t) {
      c[t] = static_cast<int>(rest % i);
      rest /= i;
    }
    g.node(c);
    for (int t = 0; t < d; ++t) {
      if (c[t] + 1 < i) {
        Coord next = c;
        ++next[t];
        g.edge(c, next);
      }
    }
  }
}

// Honeycomb patch of hexagonal cells (axial q, r with |q|, |r|, |q+r| < i).
// Vertices live on an integer grid: cell centre (2q + r, 3r) plus one of six
// offsets.
void build_hexagon(Builder& g, int i) {
  static constexpr int kOffsets[6][2] = {{1, 1}, {0, 2}, {-1, 1}, {-1, -1}, {0, -2}, {1, -1}};
  for (int q = -(i - 1); q <= i - 1; ++q) {
    for (int r = -(i - 1); r <= i - 1; ++r) {
      if (std::abs(q + r) > i - 1) continue;
      const int cx = 2 * q + r, cy = 3 * r;
      for (int k = 0; k < 6; ++k) {
        const int* a = kOffsets[k];
        const int* b = kOffsets[(k + 1) % 6];
        g.edge({cx + a[0], cy + a[1]}, {cx + b[0], cy + b[1]});
      }
    }
  }
}

void build_tetrahedron(Builder& g, int i) {
  static constexpr int kSteps[6][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1},
                                       {1, -1, 0}, {1, 0, -1}, {0, 1, -1}};
  for (int a = 0; a <= i; ++a) {
    for (int b = 0; a + b <= i; ++b) {
      for (int c = 0; a + b + c <= i; ++c) {
        g.node({a, b, c});
        for (const auto& s : kSteps) {
          const int na = a + s[0], nb = b + s[1], nc = c + s[2];
          if (na < 0 || nb < 0 || nc < 0 || na + nb + nc > i) continue;
          g.edge({a, b, c}, {na, nb, nc});
        }
      }
    }
  }
}

void build_sierpinski(Builder& g, int level, int ox, int oy) {
  if (level == 1) {
    g.edge({ox, oy}, {ox + 1, oy});
    g.edge({ox, oy}, {ox, oy + 1});
    g.edge({ox + 1, oy}, {ox, oy + 1});
    return;
  }
  const int half = 1 << (level - 2);
  build_sierpinski(g, level - 1, ox, oy);
  build_sierpinski(g, level - 1, ox + half, oy);
  build_sierpinski(g, level - 1, ox, oy + half);
}

// Layer d holds 2^d nodes (d, j); layer 0 is the root.
void build_binary_tree(Builder& g, int layers, int first_layer, const Coord& root) {
  g.node(root);
  for (int d = 1; d <= layers; ++d) {
    for (int j = 0; j < (1 << d); ++j) {
      const Coord parent = d == 1 ? root : Coord{first_layer + d - 1, j / 2};
      g.edge(parent, {first_layer + d, j});
    }
  }
}

void build_cycle(Builder& g, int i) {
  const Coord s{0, 0}, t{i + 1, 0};
  for (int side : {1, -1}) {
    g.edge(s, {1, side});
    for (int k = 1; k < i; ++k) g.edge({k, side}, {k + 1, side});
    g.edge({i, side}, t);
  }
}

void build_complete_plus_tandem(Builder& g, int i, int clique) {
  for (int a = 0; a < clique; ++a)
    for (int b = a + 1; b < clique; ++b) g.edge({0, a}, {0, b});
  g.edge({0, clique - 1}, {1, 1});
  for (int k = 1; k < i; ++k) g.edge({1, k}, {1, k + 1});
}

void build_tandem_plus_tree(Builder& g, int i) {
  const int length = 1 << i;
  for (int k = 0; k < length; ++k) g.edge({0, k}, {0, k + 1});
  if (i % 2 == 0) build_binary_tree(g, i, 0, {0, length});
}

int index_limit(const FamilySpec& spec) {
  switch (spec.kind) {
    case FamilyKind::binary_tree:
    case FamilyKind::tandem_plus_tree:
      return 24;
    case FamilyKind::sierpinski:
      return 16;
    default:
      return 1 << 20;
  }
}

}  // namespace

std::string to_string(FamilyKind kind) {
  for (const auto& n : kNames)
    if (n.kind == kind) return n.name;
  return "unknown";
}

FamilyKind family_kind_from_string(std::string_view name) {
  for (const auto& n : kNames)
    if (name == n.name) return n.kind;
  throw std::invalid_argument("unknown family kind '" + std::string(name) + "'");
}

const std::vector<FamilyKind>& all_family_kinds() {
  static const std::vector<FamilyKind> kinds = [] {
    std::vector<FamilyKind> out;
    for (const auto& n : kNames) out.push_back(n.kind);
    return out;
  }();
  return kinds;
}

void check_spec(const FamilySpec& spec) {
  if (spec.index < 1) throw std::invalid_argument("family index must be >= 1");
  if (spec.buffer_size < 1) throw std::invalid_argument("buffer size must be >= 1");
  if (spec.kind == FamilyKind::lattice && spec.lattice_dim < 1)
    throw std::invalid_argument("lattice dimension must be >= 1");
  if (spec.kind == FamilyKind::complete_plus_tandem && spec.clique_size < 2)
    throw std::invalid_argument("clique size must be >= 2");
  if (spec.index > index_limit(spec))
    throw std::invalid_argument("index " + std::to_string(spec.index) + " too large for " +
                                to_string(spec.kind));
  if (spec.kind == FamilyKind::lattice && ipow(spec.index, spec.lattice_dim) > (1LL << 26))
    throw std::invalid_argument("lattice too large");
  if (spec.kind == FamilyKind::ladder && spec.index < 1)
    throw std::invalid_argument("ladder needs at least one rung");
}

std::string family_label(const FamilySpec& spec) {
  std::string out = to_string(spec.kind);
  if (spec.kind == FamilyKind::lattice) out += "(" + std::to_string(spec.lattice_dim) + ")";
  if (spec.kind == FamilyKind::complete_plus_tandem) out += "(" + std::to_string(spec.clique_size) + ")";
  return out + "_" + std::to_string(spec.index);
}

FamilyLayout generate_layout(const FamilySpec& spec) {
  check_spec(spec);
  const int i = spec.index;
  Builder g;
  switch (spec.kind) {
    case FamilyKind::tandem: build_tandem(g, i); break;
    case FamilyKind::series_parallel: build_series_parallel(g, i); break;
    case FamilyKind::tandem_component: build_tandem_component(g, i); break;
    case FamilyKind::ladder: build_ladder(g, i); break;
    case FamilyKind::lattice: build_lattice(g, i, spec.lattice_dim); break;
    case FamilyKind::hexagon: build_hexagon(g, i); break;
    case FamilyKind::tetrahedron: build_tetrahedron(g, i); break;
    case FamilyKind::sierpinski: build_sierpinski(g, i, 0, 0); break;
    case FamilyKind::binary_tree: build_binary_tree(g, i, 0, {0, 0}); break;
    case FamilyKind::cycle: build_cycle(g, i); break;
    case FamilyKind::complete_plus_tandem: build_complete_plus_tandem(g, i, spec.clique_size); break;
    case FamilyKind::tandem_plus_tree: build_tandem_plus_tree(g, i); break;
  }
  return g.finish(family_label(spec), spec.buffer_size);
}

Network generate(const FamilySpec& spec) { return generate_layout(spec).network; }

GroundTruth ground_truth(const FamilySpec& spec) {
  check_spec(spec);
  const long long i = spec.index;
  GroundTruth gt;
  switch (spec.kind) {
    case FamilyKind::tandem:
      gt = {i + 1, i, 1, 1, 1, 2};
      break;
    case FamilyKind::series_parallel:
      gt = {3 * i + 1, 2 * i, 1, 1, 2, 4};
      break;
    case FamilyKind::tandem_component:
      gt = {3 * i, 2 * i - 1, 1, 1, 2, 3};
      break;
    case FamilyKind::ladder:
      gt = {2 * i, i, 1, 1, 2, 3};
      break;
    case FamilyKind::lattice: {
      const int d = spec.lattice_dim;
      gt = {ipow(i, d), d * (i - 1), double(d), double(d), 1, 2 * d};
      break;
    }
    case FamilyKind::hexagon:
      gt = {6 * i * i, 4 * i - 1, 2, 2, 6, 3, "published; lambda measured for i <= 12"};
      return gt;
    case FamilyKind::tetrahedron:
      gt = {(i + 1) * (i + 2) * (i + 3) / 6, i, 3, 3, 1, 12};
      break;
    case FamilyKind::sierpinski:
      gt = {(3 * ipow(3, spec.index - 1) + 3) / 2, ipow(2, spec.index - 1), std::log2(3.0), 2, 1, 4};
      break;
    case FamilyKind::binary_tree:
      gt = {ipow(2, spec.index + 1) - 1, i, kInfiniteDimension, kInfiniteDimension, 0, 3};
      break;
    case FamilyKind::cycle:
      gt = {2 * i + 2, i + 1, 1, 1, 2, 2};
      break;
    case FamilyKind::complete_plus_tandem: {
      const int c = spec.clique_size;
      gt = {c + i, i + 1, 1, 1, c, std::max(c, 2)};
      break;
    }
    case FamilyKind::tandem_plus_tree: {
      const long long len = ipow(2, spec.index);
      const bool tree = spec.index % 2 == 0;
      gt = {len + 1 + (tree ? 2 * len - 2 : 0), len + (tree ? i : 0), kInfiniteDimension,
            kInfiniteDimension, 0, 3};
      break;
    }
  }
  gt.source = "published";
  return gt;
}

}  // namespace fjscale
