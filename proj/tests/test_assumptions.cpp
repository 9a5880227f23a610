#include <doctest.h>

#include <cmath>

#include "anderson/errors.hpp"
#include "anderson/graph.hpp"
#include "anderson/saw.hpp"

using namespace anderson;

TEST_CASE("assumption 1 on the chain matches the geometric series") {
  const int R = 8;
  const Graph g = build_lattice_box(1, 2 * R + 1);
  const VertexId y = *g.find("(0)");
  const AssumptionReport r = assumption1_partial_sum(g, y, 0.5, R);
  double expect = 1;
  for (int n = 1; n <= R; ++n) {
    expect += 4 * std::pow(0.5, n);  // two vertices at distance n, two walks each
    CHECK(r.partial_sums[n] == doctest::Approx(expect).epsilon(1e-14));
  }
  CHECK(r.verdict == Verdict::converging);
  for (std::size_t n = 1; n < r.partial_sums.size(); ++n)
    CHECK(r.partial_sums[n] >= r.partial_sums[n - 1]);
}

TEST_CASE("assumption 1 on Z^2") {
  const int R = 5;
  const Graph g = build_lattice_box(2, 2 * R);
  const VertexId y = *g.find("(0,0)");
  const Assumption1Series series(g, y, R);
  // Translation invariance: shell n holds |S(n)| = 4n vertices with c(n) walks each.
  const std::vector<double> c = {1, 4, 12, 36, 100, 284};
  CHECK(series.shell_counts()[0] == 1);
  for (int n = 1; n <= R; ++n) CHECK(series.shell_counts()[n] == 4 * n * c[n]);
  CHECK(series.evaluate(0.9).verdict == Verdict::diverging);
  CHECK(series.evaluate(0.1).verdict == Verdict::converging);

  // Monotone in alpha and in the radius.
  const auto lo = series.evaluate(0.2), hi = series.evaluate(0.25);
  for (int n = 0; n <= R; ++n) CHECK(lo.partial_sums[n] <= hi.partial_sums[n]);
  CHECK(assumption1_partial_sum(g, y, 0.2, 3).partial_sums.back() <= lo.partial_sums.back());

  CHECK(assumption1_partial_sum(g, y, 1e-9, R).partial_sums.back() ==
        doctest::Approx(1.0).epsilon(1e-7));
  CHECK_THROWS_AS(assumption1_partial_sum(g, y, 0.2, R + 3), OutsideCleanRegion);
  CHECK_THROWS_AS(assumption1_partial_sum(g, y, 1.0, R), std::invalid_argument);
}

TEST_CASE("assumption 2 examples") {
  const Graph chain = build_lattice_box(1, 20);
  const VertexId c0 = *chain.find("(0)");
  CHECK(assumption2_partial_sum(chain, c0, c0, 0, 1e-9, 6).partial_sums.back() ==
        doctest::Approx(1.0).epsilon(1e-4));
  CHECK(assumption2_partial_sum(chain, c0, c0, 0, 0.25, 6).verdict == Verdict::converging);

  const Graph z2 = build_lattice_box(2, 10);
  const VertexId o = *z2.find("(0,0)");
  const auto r = assumption2_partial_sum(z2, o, o, 2, 0.9, 3);
  CHECK(r.verdict == Verdict::diverging);
  for (std::size_t n = 1; n < r.partial_sums.size(); ++n)
    CHECK(r.partial_sums[n] >= r.partial_sums[n - 1]);
}

TEST_CASE("critical parameters") {
  const Graph chain = build_lattice_box(1, 20);
  const double a_chain =
      critical_parameter_estimate(chain, *chain.find("(0)"), CriticalParameter::alpha, 8);
  CHECK(a_chain >= 0.99);
  CHECK(a_chain < 1.0);

  const Graph tree = build_log_tree(40);
  const double a_tree = critical_parameter_estimate(tree, 0, CriticalParameter::alpha, 16);
  CHECK(a_tree >= 0.95);

  const Graph z2 = build_lattice_box(2, 12);
  const VertexId o = *z2.find("(0,0)");
  const double a_z2 = critical_parameter_estimate(z2, o, CriticalParameter::alpha, 6);
  const auto mu = connective_estimate(count_saws(z2, o, 6));
  CHECK(std::abs(a_z2 * mu.back().mu - 1.0) < 0.15);
}

TEST_CASE("sphere growth classification") {
  const Graph z2 = build_lattice_box(2, 12);
  CHECK(sphere_growth_classify(z2, *z2.find("(0,0)"), 10).growth == GrowthClass::polynomial);
  const Graph bin = build_regular_tree(2, 12);
  CHECK(sphere_growth_classify(bin, 0, 10).growth == GrowthClass::exponential);
  const Graph chain = build_lattice_box(1, 12);
  CHECK(sphere_growth_classify(chain, *chain.find("(0)"), 10).growth == GrowthClass::polynomial);
  CHECK_THROWS_AS(sphere_growth_classify(z2, *z2.find("(0,0)"), 3), std::invalid_argument);
  const Graph small = build_lattice_box(2, 3);
  CHECK_THROWS_AS(sphere_growth_classify(small, *small.find("(0,0)"), 4), OutsideCleanRegion);
  const Graph path = build_path(12);
  CHECK_THROWS(sphere_growth_classify(path, 0, 8));
}

TEST_CASE("ratio verdicts") {
  CHECK(ratio_verdict({1, 0.5, 0.25, 0.125, 0.0625}, {}) == Verdict::converging);
  CHECK(ratio_verdict({1, 2, 4, 8, 16}, {}) == Verdict::diverging);
  CHECK(ratio_verdict({1, 1, 1, 1, 1}, {}) == Verdict::inconclusive);
  CHECK(ratio_verdict({1, 0.5, 2, 0.5, 2}, {}) == Verdict::inconclusive);
}
