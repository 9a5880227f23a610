#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace anderson {

/// Dense vertex handle in [0, Graph::size()).
using VertexId = std::uint32_t;

/// clean_radius() value for vertices of graphs that are not truncations.
inline constexpr int kUnboundedRadius = std::numeric_limits<int>::max();

struct GraphLimits {
  std::size_t max_vertices = 4'000'000;
};

/// Immutable, connected, loop-free simple graph.
///
/// Infinite graphs are stored as finite truncations. Each vertex carries a
/// `complete` flag: true when every neighbor it has in the infinite graph is
/// present. Quantities evaluated inside a ball whose vertices are all
/// complete coincide with their infinite-graph values.
class Graph {
 public:
  /// Validates symmetry, absence of loops and duplicates, and connectivity.
  /// Neighbor lists are sorted on construction.
  Graph(std::string family, std::vector<long> params,
        std::vector<std::vector<VertexId>> adjacency,
        std::vector<std::string> labels, std::vector<bool> complete);

  /// Finite graph given by an edge list; every vertex is complete.
  static Graph from_edges(std::size_t vertex_count,
                          std::span<const std::pair<VertexId, VertexId>> edges,
                          std::vector<std::string> labels = {},
                          std::string family = "custom");

  std::size_t size() const noexcept { return offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }

  std::span<const VertexId> neighbors(VertexId x) const {
    return {targets_.data() + offsets_[x], targets_.data() + offsets_[x + 1]};
  }
  std::size_t degree(VertexId x) const { return offsets_[x + 1] - offsets_[x]; }
  std::size_t max_degree() const noexcept { return max_degree_; }
  bool adjacent(VertexId x, VertexId y) const;

  const std::string& label(VertexId x) const { return labels_[x]; }
  std::optional<VertexId> find(std::string_view label) const;

  bool complete(VertexId x) const { return complete_[x]; }
  bool all_complete() const noexcept { return all_complete_; }

  /// Largest R such that every vertex at distance < R from x is complete;
  /// spheres S_x(n) and SAW counts c_x(n) are exact for n <= R.
  int clean_radius(VertexId x) const;

  /// BFS distances from x to every vertex.
  std::vector<int> distances_from(VertexId x) const;

  const std::string& family() const noexcept { return family_; }
  const std::vector<long>& params() const noexcept { return params_; }

 private:
  std::string family_;
  std::vector<long> params_;
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> targets_;
  std::vector<std::string> labels_;
  std::vector<bool> complete_;
  std::unordered_map<std::string, VertexId> by_label_;
  std::size_t max_degree_ = 0;
  bool all_complete_ = true;
};

/// Box {v in Z^d : |v|_inf <= radius} with nearest-neighbor edges.
/// Vertices are ordered lexicographically; labels read "(x1,...,xd)".
/// Boundary-clean vertices: |v|_inf < radius.
Graph build_lattice_box(int dimension, int radius, const GraphLimits& limits = {});

/// Offspring count of a vertex in generation g of the logarithmic tree:
/// log2(g) when g = 2^k with k >= 1, else 1.
int log_tree_offspring(long generation);

/// Rooted tree with log_tree_offspring(g) children per generation-g vertex,
/// truncated after max_generation. Labels read "g<generation>.<index>"; the
/// root is "g0.0". Vertices of the last generation are not complete.
Graph build_log_tree(int max_generation, const GraphLimits& limits = {});

/// Box of Z^2 of the given radius with nearest-neighbor edges plus, for each
/// n >= 3, edges from (2^n, 0) to every vertex at l1-distance n, added only
/// when that whole sphere lies inside the box.
Graph build_hub_lattice(int radius, const GraphLimits& limits = {});

/// Finite path 0 - 1 - ... - (n-1); all vertices complete.
Graph build_path(int vertex_count);

/// Finite cycle of n >= 3 vertices; all vertices complete.
Graph build_cycle(int vertex_count);

/// Rooted tree with `branching` children per vertex, truncated at `depth`.
Graph build_regular_tree(int branching, int depth, const GraphLimits& limits = {});

/// BFS shortest-path length.
int graph_distance(const Graph& g, VertexId x, VertexId y);

struct Sphere {
  std::vector<VertexId> vertices;  // sorted
  bool clean = true;               // equals the infinite-graph sphere
};

/// S_y(n) = {x : d(x, y) = n}.
Sphere sphere(const Graph& g, VertexId y, int n);

/// Sizes |S_y(0)|, ..., |S_y(n_max)|.
std::vector<std::size_t> sphere_sizes(const Graph& g, VertexId y, int n_max);

// Line-oriented text format:
//   graph <family> <params...>
//   v <id> <label>
//   e <id1> <id2>        (id1 < id2)
void write_graph(std::ostream& out, const Graph& g);

/// Known families are rebuilt from the header and checked against the body,
/// which restores their completeness flags. Unknown families load as finite
/// graphs.
Graph read_graph(std::istream& in);

/// Builds a graph by family name ("lattice", "logtree", "hublattice",
/// "path", "cycle", "tree") and its numeric parameters.
Graph build_family(std::string_view family, std::span<const long> params,
                   const GraphLimits& limits = {});

}  // namespace anderson
