#include <doctest.h>

#include <cmath>
#include <random>

#include "anderson/errors.hpp"
#include "anderson/graph.hpp"
#include "anderson/saw.hpp"
#include "oracles.hpp"

using namespace anderson;

namespace {

std::vector<std::uint64_t> adjacency_oracle(const Graph& g, VertexId x, int n) {
  std::function<std::vector<VertexId>(const VertexId&)> nb = [&](const VertexId& v) {
    auto s = g.neighbors(v);
    // Reverse order: a different traversal from the library's.
    return std::vector<VertexId>(s.rbegin(), s.rend());
  };
  return oracle::saw_counts<VertexId>(x, n, nb);
}

// Random connected graph: a random spanning tree plus extra edges.
Graph random_graph(std::mt19937& rng, int n, int extra) {
  std::set<std::pair<VertexId, VertexId>> edges;
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> parent(0, v - 1);
    edges.insert({static_cast<VertexId>(parent(rng)), static_cast<VertexId>(v)});
  }
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int k = 0; k < extra; ++k) {
    int a = pick(rng), b = pick(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    edges.insert({static_cast<VertexId>(a), static_cast<VertexId>(b)});
  }
  std::vector<std::pair<VertexId, VertexId>> list(edges.begin(), edges.end());
  return Graph::from_edges(static_cast<std::size_t>(n), list);
}

}  // namespace

TEST_CASE("chain interior vertex has two walks of every length") {
  const Graph g = build_lattice_box(1, 10);
  const SawTable t = count_saws(g, *g.find("(0)"), 9);
  CHECK(t.counts[0] == 1);
  for (int n = 1; n <= 9; ++n) CHECK(t.counts[n] == 2);
  CHECK(t.clean_radius == 9);  // capped at n_max
  CHECK(t.clean(9));
}

TEST_CASE("Z^2 interior counts") {
  const Graph g = build_lattice_box(2, 8);
  const SawTable t = count_saws(g, *g.find("(0,0)"), 6);
  const std::vector<std::uint64_t> expect_prefix = {1, 4, 12, 36, 100};
  for (int n = 0; n <= 4; ++n) CHECK(t.counts[n] == expect_prefix[n]);

  std::function<std::vector<oracle::P2>(const oracle::P2&)> nb = [](const oracle::P2& p) {
    return oracle::z2_neighbors(p, 8);
  };
  CHECK(t.counts == oracle::saw_counts<oracle::P2>({0, 0}, 6, nb));
}

TEST_CASE("log tree root") {
  const Graph g = build_log_tree(12);
  const SawTable t = count_saws(g, 0, 8);
  CHECK(t.counts[4] == 1);
  CHECK(t.counts[5] == 2);
}

TEST_CASE("count_saws agrees with the oracle on small random graphs") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 6 + trial % 25;
    const Graph g = random_graph(rng, n, n / 2 + trial % 7);
    for (VertexId x : {VertexId{0}, static_cast<VertexId>(n - 1)}) {
      const SawTable t = count_saws(g, x, 8);
      CHECK(t.counts == adjacency_oracle(g, x, 8));
      CHECK(t.counts[1] == g.degree(x));
      for (int k = 0; k < 8; ++k) CHECK(t.counts[k + 1] <= t.counts[k] * g.max_degree());
    }
  }
  const Graph c4 = build_cycle(4);
  CHECK(count_saws(c4, 0, 5).counts == std::vector<std::uint64_t>{1, 2, 2, 2, 0, 0});
}

TEST_CASE("thread count does not change counts") {
  const Graph g = build_hub_lattice(14);
  const VertexId x = *g.find("(5,0)");
  SawOptions one, many;
  many.threads = 4;
  CHECK(count_saws(g, x, 7, one).counts == count_saws(g, x, 7, many).counts);
}

TEST_CASE("counts grow under subgraph inclusion") {
  const Graph small = build_lattice_box(2, 5), big = build_lattice_box(2, 7);
  const SawTable a = count_saws(small, *small.find("(1,1)"), 6);
  const SawTable b = count_saws(big, *big.find("(1,1)"), 6);
  for (int n = 0; n <= 6; ++n) {
    CHECK(a.counts[n] <= b.counts[n]);
    if (a.clean(n)) CHECK(a.counts[n] == b.counts[n]);
  }
}

TEST_CASE("budget exhaustion reports the last completed length") {
  const Graph g = build_lattice_box(2, 10);
  SawOptions opt;
  opt.budget = 2000;
  try {
    count_saws(g, *g.find("(0,0)"), 10, opt);
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    // Lengths <= n cost sum_{k=1..n} c(k) extensions: 1216 through n = 6,
    // 3388 through n = 7.
    CHECK(e.last_completed() == 6);
  }
}

TEST_CASE("connective estimates") {
  const Graph chain = build_lattice_box(1, 12);
  const auto mu = connective_estimate(count_saws(chain, *chain.find("(0)"), 10));
  for (const auto& p : mu) CHECK(p.mu == doctest::Approx(std::pow(2.0, 1.0 / p.n)));

  const Graph z2 = build_lattice_box(2, 6);
  const auto m2 = connective_estimate(count_saws(z2, *z2.find("(0,0)"), 4));
  CHECK(m2.back().n == 4);
  CHECK(m2.back().mu == doctest::Approx(std::pow(100.0, 0.25)));

  const Graph path = build_path(10);
  for (const auto& p : connective_estimate(count_saws(path, 0, 6))) CHECK(p.mu == 1.0);

  CHECK_THROWS(connective_estimate(count_saws(z2, *z2.find("(6,6)"), 4)));
}
