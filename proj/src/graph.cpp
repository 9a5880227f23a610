#include "anderson/graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "anderson/errors.hpp"

namespace anderson {

namespace {

void check_budget(double vertex_count, const GraphLimits& limits, const char* family) {
  if (vertex_count > static_cast<double>(limits.max_vertices)) {
    std::ostringstream msg;
    msg << family << ": " << vertex_count << " vertices exceed the budget of "
        << limits.max_vertices;
    throw BudgetExceeded(msg.str(), -1);
  }
}

std::string coordinate_label(std::span<const int> coords) {
  std::string s = "(";
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(coords[i]);
  }
  s += ')';
  return s;
}

}  // namespace

Graph::Graph(std::string family, std::vector<long> params,
             std::vector<std::vector<VertexId>> adjacency,
             std::vector<std::string> labels, std::vector<bool> complete)
    : family_(std::move(family)),
      params_(std::move(params)),
      labels_(std::move(labels)),
      complete_(std::move(complete)) {
  const std::size_t n = adjacency.size();
  if (n == 0) throw std::invalid_argument("graph must have at least one vertex");
  if (labels_.empty()) {
    labels_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
  }
  if (complete_.empty()) complete_.assign(n, true);
  if (labels_.size() != n || complete_.size() != n)
    throw std::invalid_argument("graph: label/completeness size mismatch");

  offsets_.assign(n + 1, 0);
  for (std::size_t x = 0; x < n; ++x) {
    auto& nb = adjacency[x];
    std::sort(nb.begin(), nb.end());
    if (std::adjacent_find(nb.begin(), nb.end()) != nb.end())
      throw std::invalid_argument("graph: duplicate edge at vertex " + std::to_string(x));
    for (VertexId y : nb) {
      if (y >= n) throw std::invalid_argument("graph: neighbor index out of range");
      if (y == x) throw std::invalid_argument("graph: loop at vertex " + std::to_string(x));
    }
    offsets_[x + 1] = offsets_[x] + nb.size();
    max_degree_ = std::max(max_degree_, nb.size());
  }
  targets_.reserve(offsets_[n]);
  for (auto& nb : adjacency) targets_.insert(targets_.end(), nb.begin(), nb.end());

  for (VertexId x = 0; x < n; ++x)
    for (VertexId y : neighbors(x))
      if (!adjacent(y, x))
        throw std::invalid_argument("graph: asymmetric edge " + std::to_string(x) + "-" +
                                    std::to_string(y));

  const auto dist = distances_from(0);
  if (std::find(dist.begin(), dist.end(), -1) != dist.end())
    throw std::invalid_argument("graph: not connected");

  by_label_.reserve(n);
  for (VertexId x = 0; x < n; ++x)
    if (!by_label_.emplace(labels_[x], x).second)
      throw std::invalid_argument("graph: duplicate label " + labels_[x]);
  all_complete_ = std::all_of(complete_.begin(), complete_.end(), [](bool b) { return b; });
}

Graph Graph::from_edges(std::size_t vertex_count,
                        std::span<const std::pair<VertexId, VertexId>> edges,
                        std::vector<std::string> labels, std::string family) {
  std::vector<std::vector<VertexId>> adj(vertex_count);
  for (auto [a, b] : edges) {
    if (a >= vertex_count || b >= vertex_count)
      throw std::invalid_argument("from_edges: vertex out of range");
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return Graph(std::move(family), {static_cast<long>(vertex_count)}, std::move(adj),
               std::move(labels), {});
}

bool Graph::adjacent(VertexId x, VertexId y) const {
  auto nb = neighbors(x);
  return std::binary_search(nb.begin(), nb.end(), y);
}

std::optional<VertexId> Graph::find(std::string_view label) const {
  auto it = by_label_.find(std::string(label));
  if (it == by_label_.end()) return std::nullopt;
  return it->second;
}

std::vector<int> Graph::distances_from(VertexId x) const {
  std::vector<int> dist(size(), -1);
  std::vector<VertexId> queue;
  queue.reserve(size());
  dist[x] = 0;
  queue.push_back(x);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId u = queue[head];
    for (VertexId v : neighbors(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

int Graph::clean_radius(VertexId x) const {
  if (all_complete_) return kUnboundedRadius;
  const auto dist = distances_from(x);
  int r = kUnboundedRadius;
  for (VertexId v = 0; v < size(); ++v)
    if (!complete_[v]) r = std::min(r, dist[v]);
  return r;
}

Graph build_lattice_box(int dimension, int radius, const GraphLimits& limits) {
  if (dimension < 1) throw std::invalid_argument("lattice: dimension must be >= 1");
  if (radius < 0) throw std::invalid_argument("lattice: radius must be >= 0");
  const long side = 2L * radius + 1;
  double total = 1;
  for (int i = 0; i < dimension; ++i) total *= static_cast<double>(side);
  check_budget(total, limits, "lattice");
  const std::size_t n = static_cast<std::size_t>(total);

  // Mixed-radix index, last coordinate fastest.
  std::vector<long> stride(dimension, 1);
  for (int i = dimension - 2; i >= 0; --i) stride[i] = stride[i + 1] * side;

  std::vector<std::vector<VertexId>> adj(n);
  std::vector<std::string> labels(n);
  std::vector<bool> complete(n);
  std::vector<int> coords(dimension);
  for (std::size_t idx = 0; idx < n; ++idx) {
    long rem = static_cast<long>(idx);
    bool interior = true;
    for (int i = 0; i < dimension; ++i) {
      coords[i] = static_cast<int>(rem / stride[i]) - radius;
      rem %= stride[i];
      if (std::abs(coords[i]) == radius) interior = false;
    }
    labels[idx] = coordinate_label(coords);
    complete[idx] = interior;
    auto& nb = adj[idx];
    for (int i = 0; i < dimension; ++i) {
      if (coords[i] > -radius) nb.push_back(static_cast<VertexId>(idx - stride[i]));
      if (coords[i] < radius) nb.push_back(static_cast<VertexId>(idx + stride[i]));
    }
  }
  return Graph("lattice", {dimension, radius}, std::move(adj), std::move(labels),
               std::move(complete));
}

int log_tree_offspring(long generation) {
  if (generation >= 2 && (generation & (generation - 1)) == 0) {
    int k = 0;
    while ((1L << k) < generation) ++k;
    return k;
  }
  return 1;
}

Graph build_log_tree(int max_generation, const GraphLimits& limits) {
  if (max_generation < 1) throw std::invalid_argument("logtree: max_generation must be >= 1");
  double total = 1, width = 1;
  for (int g = 0; g < max_generation; ++g) {
    width *= log_tree_offspring(g);
    total += width;
  }
  check_budget(total, limits, "logtree");

  std::vector<std::vector<VertexId>> adj(1);
  std::vector<std::string> labels{"g0.0"};
  std::vector<bool> complete;
  std::vector<VertexId> current{0};
  for (int g = 0; g < max_generation; ++g) {
    const int kids = log_tree_offspring(g);
    std::vector<VertexId> next;
    next.reserve(current.size() * kids);
    for (VertexId parent : current) {
      for (int c = 0; c < kids; ++c) {
        const auto child = static_cast<VertexId>(adj.size());
        labels.push_back("g" + std::to_string(g + 1) + "." + std::to_string(next.size()));
        adj.emplace_back(std::vector<VertexId>{parent});
        adj[parent].push_back(child);
        next.push_back(child);
      }
    }
    current = std::move(next);
  }
  complete.assign(adj.size(), true);
  for (VertexId leaf : current) complete[leaf] = false;
  return Graph("logtree", {max_generation}, std::move(adj), std::move(labels),
               std::move(complete));
}

Graph build_hub_lattice(int radius, const GraphLimits& limits) {
  if (radius < 1) throw std::invalid_argument("hublattice: radius must be >= 1");
  const long side = 2L * radius + 1;
  check_budget(static_cast<double>(side) * static_cast<double>(side), limits, "hublattice");
  const auto index = [&](long x, long y) {
    return static_cast<VertexId>((x + radius) * side + (y + radius));
  };
  const auto inside = [&](long x, long y) {
    return std::abs(x) <= radius && std::abs(y) <= radius;
  };
  // Hub (2^n, 0) is wired only when its whole l1-sphere of radius n fits.
  const auto hub_present = [&](int n) { return (1L << n) + n <= radius; };

  const std::size_t n = static_cast<std::size_t>(side * side);
  std::vector<std::vector<VertexId>> adj(n);
  std::vector<std::string> labels(n);
  std::vector<bool> complete(n);
  for (long x = -radius; x <= radius; ++x) {
    for (long y = -radius; y <= radius; ++y) {
      const VertexId v = index(x, y);
      const int c[2] = {static_cast<int>(x), static_cast<int>(y)};
      labels[v] = coordinate_label(c);
      if (x > -radius) adj[v].push_back(index(x - 1, y));
      if (x < radius) adj[v].push_back(index(x + 1, y));
      if (y > -radius) adj[v].push_back(index(x, y - 1));
      if (y < radius) adj[v].push_back(index(x, y + 1));

      bool ok = std::abs(x) < radius && std::abs(y) < radius;
      const long l1 = std::abs(x) + std::abs(y);
      for (int k = 3; k < 62 && (1L << k) <= l1 + k; ++k) {
        const long hx = 1L << k;
        if ((x == hx && y == 0) || std::abs(x - hx) + std::abs(y) == k)
          ok = ok && hub_present(k);
      }
      complete[v] = ok;
    }
  }
  for (int k = 3; hub_present(k); ++k) {
    const long hx = 1L << k;
    const VertexId hub = index(hx, 0);
    for (long dx = -k; dx <= k; ++dx) {
      const long rest = k - std::abs(dx);
      for (long dy : {-rest, rest}) {
        if (!inside(hx + dx, dy)) throw std::logic_error("hub sphere escapes box");
        const VertexId t = index(hx + dx, dy);
        adj[hub].push_back(t);
        adj[t].push_back(hub);
        if (rest == 0) break;
      }
    }
  }
  return Graph("hublattice", {radius}, std::move(adj), std::move(labels), std::move(complete));
}

Graph build_path(int vertex_count) {
  if (vertex_count < 1) throw std::invalid_argument("path: need at least one vertex");
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (int i = 0; i + 1 < vertex_count; ++i)
    edges.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(i + 1));
  return Graph::from_edges(vertex_count, edges, {}, "path");
}

Graph build_cycle(int vertex_count) {
  if (vertex_count < 3) throw std::invalid_argument("cycle: need at least three vertices");
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (int i = 0; i < vertex_count; ++i)
    edges.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>((i + 1) % vertex_count));
  return Graph::from_edges(vertex_count, edges, {}, "cycle");
}

Graph build_regular_tree(int branching, int depth, const GraphLimits& limits) {
  if (branching < 1 || depth < 1) throw std::invalid_argument("tree: branching, depth >= 1");
  double total = 1, width = 1;
  for (int d = 0; d < depth; ++d) total += (width *= branching);
  check_budget(total, limits, "tree");
  std::vector<std::vector<VertexId>> adj(1);
  std::vector<std::string> labels{"g0.0"};
  std::vector<VertexId> current{0};
  for (int d = 0; d < depth; ++d) {
    std::vector<VertexId> next;
    for (VertexId parent : current) {
      for (int c = 0; c < branching; ++c) {
        const auto child = static_cast<VertexId>(adj.size());
        labels.push_back("g" + std::to_string(d + 1) + "." + std::to_string(next.size()));
        adj.emplace_back(std::vector<VertexId>{parent});
        adj[parent].push_back(child);
        next.push_back(child);
      }
    }
    current = std::move(next);
  }
  std::vector<bool> complete(adj.size(), true);
  for (VertexId leaf : current) complete[leaf] = false;
  return Graph("tree", {branching, depth}, std::move(adj), std::move(labels),
               std::move(complete));
}

int graph_distance(const Graph& g, VertexId x, VertexId y) {
  if (x == y) return 0;
  std::vector<int> dist(g.size(), -1);
  std::deque<VertexId> queue{x};
  dist[x] = 0;
  while (!queue.empty()) {
    const VertexId u = queue.front();
    queue.pop_front();
    for (VertexId v : g.neighbors(u)) {
      if (dist[v] >= 0) continue;
      dist[v] = dist[u] + 1;
      if (v == y) return dist[v];
      queue.push_back(v);
    }
  }
  throw std::logic_error("graph_distance: disconnected graph");
}

Sphere sphere(const Graph& g, VertexId y, int n) {
  if (n < 0) throw std::invalid_argument("sphere: negative radius");
  const auto dist = g.distances_from(y);
  Sphere s;
  for (VertexId v = 0; v < g.size(); ++v)
    if (dist[v] == n) s.vertices.push_back(v);
  s.clean = n <= g.clean_radius(y);
  return s;
}

std::vector<std::size_t> sphere_sizes(const Graph& g, VertexId y, int n_max) {
  const auto dist = g.distances_from(y);
  std::vector<std::size_t> sizes(static_cast<std::size_t>(n_max) + 1, 0);
  for (int d : dist)
    if (d <= n_max) ++sizes[d];
  return sizes;
}

Graph build_family(std::string_view family, std::span<const long> params,
                   const GraphLimits& limits) {
  const auto need = [&](std::size_t k) {
    if (params.size() != k)
      throw std::invalid_argument(std::string(family) + ": expected " + std::to_string(k) +
                                  " parameter(s)");
  };
  const auto p = [&](std::size_t i) { return static_cast<int>(params[i]); };
  if (family == "lattice") {
    need(2);
    return build_lattice_box(p(0), p(1), limits);
  }
  if (family == "logtree") {
    need(1);
    return build_log_tree(p(0), limits);
  }
  if (family == "hublattice") {
    need(1);
    return build_hub_lattice(p(0), limits);
  }
  if (family == "path") {
    need(1);
    return build_path(p(0));
  }
  if (family == "cycle") {
    need(1);
    return build_cycle(p(0));
  }
  if (family == "tree") {
    need(2);
    return build_regular_tree(p(0), p(1), limits);
  }
  throw std::invalid_argument("unknown graph family '" + std::string(family) + "'");
}

}  // namespace anderson
