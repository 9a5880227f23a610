#include <doctest.h>

#include <cmath>
#include <memory>

#include "anderson/graph.hpp"
#include "anderson/hamiltonian.hpp"

using namespace anderson;

namespace {

std::shared_ptr<const FiniteVolume> share(FiniteVolume v) {
  return std::make_shared<const FiniteVolume>(std::move(v));
}

}  // namespace

TEST_CASE("sample_potential") {
  const Graph g = build_path(1000);
  const FiniteVolume fv = FiniteVolume::whole(g);
  DisorderModel m;
  m.master_seed = 99;
  std::vector<double> all;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const auto w = sample_potential(m, fv, t);
    for (double x : w) {
      CHECK(x >= -1.0);
      CHECK(x <= 1.0);
    }
    all.insert(all.end(), w.begin(), w.end());
  }
  REQUIRE(all.size() == 100000);
  double mean = 0;
  for (double x : all) mean += x;
  mean /= all.size();
  CHECK(std::abs(mean) < 3 * std::sqrt(1.0 / 3.0 / all.size()));

  double num = 0, den = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    den += (all[i] - mean) * (all[i] - mean);
    if (i + 1 < all.size()) num += (all[i] - mean) * (all[i + 1] - mean);
  }
  CHECK(std::abs(num / den) < 0.05);

  CHECK(sample_potential(m, fv, 5) == sample_potential(m, fv, 5));
  CHECK(sample_potential(m, fv, 5) != sample_potential(m, fv, 6));

  // A vertex sees the same value in every volume containing it.
  const FiniteVolume sub(g, {400, 17, 3});
  const auto ws = sample_potential(m, sub, 2), wf = sample_potential(m, fv, 2);
  CHECK(ws[0] == wf[400]);
  CHECK(ws[1] == wf[17]);
}

TEST_CASE("assemble examples") {
  const Graph g = build_path(9);
  const auto one = share(FiniteVolume(g, {4}));
  const double w1[] = {0.3};
  const auto h1 = assemble(g, one, w1, 2.5);
  CHECK(h1.dense()(0, 0) == 2 + 2.5 * 0.3);

  const auto two = share(FiniteVolume(g, {4, 5}));
  const double w2[] = {0.3, -0.7};
  const Eigen::MatrixXd h2 = assemble(g, two, w2, 2.0).dense();
  CHECK(h2(0, 0) == 2 + 2.0 * 0.3);
  CHECK(h2(1, 1) == 2 - 2.0 * 0.7);
  CHECK(h2(0, 1) == -1);
  CHECK(h2(1, 0) == -1);

  const Graph box = build_lattice_box(2, 4);
  const auto whole = share(FiniteVolume::whole(box));
  const std::vector<double> zero(whole->size(), 0.0);
  const Eigen::MatrixXd h0 = assemble(box, whole, zero, 1.0).dense();
  CHECK((h0 - h0.transpose()).cwiseAbs().maxCoeff() == 0.0);
  for (std::size_t i = 0; i < whole->size(); ++i) {
    const VertexId x = whole->vertex(i);
    CHECK(h0.row(i).sum() == 0.0);  // every neighbor of a box vertex lies in the box
    CHECK(h0(i, i) == static_cast<double>(box.degree(x)));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h0);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10);

  // Restriction to a ball keeps the full valence on its boundary.
  const auto ball = share(FiniteVolume::ball(box, *box.find("(0,0)"), 2));
  const std::vector<double> zb(ball->size(), 0.0);
  const Eigen::MatrixXd hb = assemble(box, ball, zb, 1.0).dense();
  const std::size_t edge = ball->index(*box.find("(2,0)"));
  CHECK(hb(edge, edge) == 4.0);
  CHECK(hb.row(edge).sum() == 3.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eb(hb);
  CHECK(eb.eigenvalues().minCoeff() >= -1e-10);

  const double bad[] = {0.0};
  CHECK_THROWS_AS(assemble(g, two, bad, 1.0), std::invalid_argument);
}

TEST_CASE("depleted operator and hopping difference") {
  const Graph g = build_lattice_box(2, 3);
  const FiniteVolume base = FiniteVolume::whole(g);
  DisorderModel m;
  const auto omega = sample_potential(m, base, 0);

  const auto all = share(base.with_depletion(base.vertices()));
  const auto full = assemble(g, all, omega, 1.5), same = assemble_depleted(g, all, omega, 1.5);
  CHECK((full.dense() - same.dense()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(hopping_difference(full, same).nonZeros() == 0);

  const VertexId x = *g.find("(0,1)");
  const VertexId single[] = {x};
  const auto one = share(base.with_depletion(single));
  const auto h = assemble(g, one, omega, 1.5), hd = assemble_depleted(g, one, omega, 1.5);
  const Eigen::MatrixXd d = hd.dense();
  const std::size_t ix = one->index(x);
  CHECK(d(ix, ix) == h.dense()(ix, ix));
  CHECK(d.row(ix).cwiseAbs().sum() == std::abs(d(ix, ix)));
  const SparseMatrix t = hopping_difference(h, hd);
  CHECK(t.nonZeros() == 2 * static_cast<long>(g.degree(x)));
  const Eigen::MatrixXd td(t);
  CHECK(td.cwiseAbs().maxCoeff() == 1.0);
  CHECK((h.dense() - (hd.dense() - td)).cwiseAbs().maxCoeff() == 0.0);

  // Middle of a three-vertex line: two in-volume neighbors give 4 entries.
  const FiniteVolume line(g, {*g.find("(0,0)"), *g.find("(1,0)"), *g.find("(2,0)")});
  const VertexId mid[] = {*g.find("(1,0)")};
  const auto lv = share(line.with_depletion(mid));
  const std::vector<double> w3(3, 0.1);
  CHECK(hopping_difference(assemble(g, lv, w3, 1), assemble_depleted(g, lv, w3, 1)).nonZeros() == 4);

  // Block structure under the (Lambda, rest) ordering.
  std::vector<VertexId> lam;
  for (VertexId v : base.vertices())
    if (g.label(v).find("(-") == 0) lam.push_back(v);
  const auto dv = share(base.with_depletion(lam));
  const Eigen::MatrixXd db = assemble_depleted(g, dv, omega, 1.0).dense();
  for (std::size_t i = 0; i < dv->size(); ++i)
    for (std::size_t j = 0; j < dv->size(); ++j)
      if (dv->in_depletion(dv->vertex(i)) != dv->in_depletion(dv->vertex(j)))
        CHECK(db(i, j) == 0.0);

  const VertexId outside[] = {static_cast<VertexId>(g.size() + 5)};
  CHECK_THROWS(base.with_depletion(outside));
  CHECK_THROWS_AS(assemble_depleted(g, share(base), omega, 1.0), std::invalid_argument);
  const auto other = assemble(g, all, std::vector<double>(omega.size(), 0.0), 1.5);
  CHECK_THROWS_AS(hopping_difference(other, same), std::invalid_argument);
}

TEST_CASE("disorder validation") {
  DisorderModel m;
  m.lambda = 0;
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  m.lambda = 1;
  m.density = {1.0, -1.0};
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  UniformDensity u;
  CHECK(u.sup_norm() == 0.5);
  CHECK(u.l1_norm() == 1.0);
}
