// Acceptance suite: one PASS/FAIL line per criterion, with timings.
//
//   acceptance [--only N[,N...]] [--expected-fail N[,N...]]
//
// Exit status is 0 when every failing criterion is listed in --expected-fail.
// Listed criteria still run and still print FAIL; the flag only affects the
// exit status, so a known, documented failure does not hide the others.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "anderson/dynamics.hpp"
#include "anderson/graph.hpp"
#include "anderson/hamiltonian.hpp"
#include "anderson/moments.hpp"
#include "anderson/resolvent.hpp"
#include "anderson/saw.hpp"
#include "oracles.hpp"

using namespace anderson;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::shared_ptr<const FiniteVolume> share(FiniteVolume v) {
  return std::make_shared<const FiniteVolume>(std::move(v));
}

Graph random_connected_graph(std::mt19937& rng, int n, int extra) {
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
  const std::vector<std::pair<VertexId, VertexId>> list(edges.begin(), edges.end());
  return Graph::from_edges(static_cast<std::size_t>(n), list);
}

std::vector<double> uniform_omega(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> w(n);
  for (auto& x : w) x = u(rng);
  return w;
}

Complex random_z(std::mt19937& rng) {
  std::uniform_real_distribution<double> re(-2, 6), im(0.05, 1.0);
  std::bernoulli_distribution flip;
  return {re(rng), flip(rng) ? im(rng) : -im(rng)};
}

// ---------------------------------------------------------------------------

Outcome saw_oracle_equivalence() {
  using oracle::P2;
  bool ok = true;
  int checked = 0;
  auto compare = [&](const std::vector<std::uint64_t>& got, const std::vector<std::uint64_t>& want) {
    ok = ok && got == want;
    ++checked;
  };

  const Graph chain = build_lattice_box(1, 20);
  const auto chain_nb = [](const VertexId& v) {
    std::vector<VertexId> out;
    if (v > 0) out.push_back(v - 1);
    if (v < 40) out.push_back(v + 1);
    return out;
  };
  for (int x : {-20, -3, 0, 11}) {
    const VertexId id = *chain.find("(" + std::to_string(x) + ")");
    const auto want = oracle::saw_counts<VertexId>(static_cast<VertexId>(x + 20), 12,
                                                   std::function<std::vector<VertexId>(const VertexId&)>(chain_nb));
    compare(count_saws(chain, id, 12).counts, want);
  }

  const Graph c4 = build_cycle(4);
  const std::function<std::vector<VertexId>(const VertexId&)> c4_nb = [](const VertexId& v) {
    return std::vector<VertexId>{(v + 1) % 4, (v + 3) % 4};
  };
  compare(count_saws(c4, 0, 6).counts, oracle::saw_counts<VertexId>(0, 6, c4_nb));

  const Graph z2 = build_lattice_box(2, 8);
  const std::function<std::vector<P2>(const P2&)> z2_nb = [](const P2& p) {
    return oracle::z2_neighbors(p, 8);
  };
  for (P2 p : {P2{0, 0}, P2{1, -2}, P2{-2, 1}}) {
    const std::string label = "(" + std::to_string(p.first) + "," + std::to_string(p.second) + ")";
    compare(count_saws(z2, *z2.find(label), 6).counts, oracle::saw_counts<P2>(p, 6, z2_nb));
  }

  // Log tree: spherically symmetric, so any vertex of a generation is
  // equivalent; compare the first vertex of each generation.
  const Graph tree = build_log_tree(20);
  const oracle::LogTree ot = oracle::log_tree(20);
  const std::function<std::vector<int>(const int&)> tree_nb = [&](const int& v) { return ot.adj[v]; };
  const auto gen = tree.distances_from(0);
  for (int g = 0; g <= 12; ++g) {
    VertexId lib = 0;
    while (gen[lib] != g) ++lib;
    int ref = 0;
    while (ot.generation[ref] != g) ++ref;
    compare(count_saws(tree, lib, 8).counts, oracle::saw_counts<int>(ref, 8, tree_nb));
  }

  const Graph hub = build_hub_lattice(20);
  const std::function<std::vector<P2>(const P2&)> hub_nb = [](const P2& p) {
    return oracle::hub_neighbors(p, 20);
  };
  for (P2 p : {P2{0, 0}, P2{8, 0}, P2{5, 1}, P2{16, 0}, P2{12, 3}}) {
    const std::string label = "(" + std::to_string(p.first) + "," + std::to_string(p.second) + ")";
    compare(count_saws(hub, *hub.find(label), 6).counts, oracle::saw_counts<P2>(p, 6, hub_nb));
  }
  return {ok, std::to_string(checked) + " origins compared exactly"};
}

Outcome z2_counts() {
  const Graph z2 = build_lattice_box(2, 8);
  const auto t = count_saws(z2, *z2.find("(0,0)"), 4);
  const std::vector<std::uint64_t> want = {1, 4, 12, 36, 100};
  std::ostringstream s;
  for (int n = 1; n <= 4; ++n) s << (n > 1 ? "," : "") << t.counts[n];
  return {t.counts == want, "c(1..4) = " + s.str()};
}

Outcome spectral_averaging() {
  const UniformDensity u;
  const auto base = spectral_averaging_check(u, 0.5, Complex(0, 0));
  bool ok = std::abs(base.lhs - 2.0) <= 1e-6 && std::abs(base.rhs - 2 * std::sqrt(2.0)) <= 1e-12 &&
            base.lhs <= base.rhs;
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> s(0.02, 0.98), re(-3, 3), im(-1, 1);
  double worst = -1e300;
  for (int i = 0; i < 100; ++i) {
    const auto r = spectral_averaging_check(u, s(rng), Complex(re(rng), i % 2 ? im(rng) : 0.0));
    worst = std::max(worst, r.lhs / r.rhs);
    ok = ok && r.lhs <= r.rhs;
  }
  return {ok, "lhs(0) = " + fmt("%.9f", base.lhs) + ", max lhs/rhs over 100 samples " +
                  fmt("%.4f", worst)};
}

Outcome constants() {
  const auto b = theorem1_bound(0.5, 4.0, 0.5, 0, 1);
  const bool ok = std::abs(b.C - std::sqrt(2.0)) <= 1e-12 && std::abs(b.C_prime - 4.0) <= 1e-12;
  return {ok, "C = " + fmt("%.15f", b.C) + ", C' = " + fmt("%.15f", b.C_prime)};
}

Outcome saw_expansion() {
  std::mt19937 rng(55);
  double worst = 0;
  int done = 0;
  while (done < 20) {
    const int n = 8 + done % 5 * 8;  // 8..40 vertices
    const Graph g = random_connected_graph(rng, n, n / 3);
    const auto fv = share(FiniteVolume::whole(g));
    std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
    const VertexId x = pick(rng);
    const auto dist = g.distances_from(x);
    std::vector<VertexId> targets;
    for (VertexId y = 0; y < g.size(); ++y)
      if (dist[y] >= 1 && dist[y] <= 4) targets.push_back(y);
    if (targets.empty()) continue;
    const VertexId y = targets[std::uniform_int_distribution<std::size_t>(0, targets.size() - 1)(rng)];
    std::uniform_real_distribution<double> lam(0.5, 5);
    const auto r = saw_expansion_check(g, fv, uniform_omega(rng, fv->size()), lam(rng), random_z(rng), x, y);
    worst = std::max(worst, r.relative_deviation);
    ++done;
  }
  return {worst <= 1e-9, "max relative deviation " + fmt("%.2e", worst) + " over 20 instances"};
}

Outcome resolvent_identity() {
  std::mt19937 rng(66);
  double worst = 0, cross = 0;
  for (int i = 0; i < 50; ++i) {
    Graph g = i % 2 ? build_lattice_box(2, 2 + i % 5)  // up to 121 vertices
                    : random_connected_graph(rng, 20 + 3 * i, 10 + i);
    const auto base = FiniteVolume::whole(g);
    std::bernoulli_distribution in(0.3);
    std::vector<VertexId> lambda_set;
    for (VertexId v = 0; v < g.size(); ++v)
      if (in(rng)) lambda_set.push_back(v);
    if (lambda_set.empty()) lambda_set.push_back(0);
    const auto fv = share(base.with_depletion(lambda_set));
    std::uniform_real_distribution<double> lam(0.5, 5);
    const auto r = resolvent_identity_check(g, fv, uniform_omega(rng, fv->size()), lam(rng), random_z(rng));
    worst = std::max(worst, r.max_deviation);
    cross = std::max(cross, r.cross_block_max);
  }
  return {worst <= 1e-9 && cross <= 1e-9,
          "max deviation " + fmt("%.2e", worst) + ", cross-block " + fmt("%.2e", cross)};
}

Outcome rank_one() {
  std::mt19937 rng(77);
  double worst = 0, affine = 0;
  for (int i = 0; i < 20; ++i) {
    const Graph g = random_connected_graph(rng, 10 + 2 * i, 6 + i);
    const auto fv = share(FiniteVolume::whole(g));
    std::uniform_real_distribution<double> lam(0.5, 5);
    const VertexId x = std::uniform_int_distribution<VertexId>(0, static_cast<VertexId>(g.size() - 1))(rng);
    const auto r = rank_one_structure_check(g, fv, uniform_omega(rng, fv->size()), lam(rng), random_z(rng), x);
    worst = std::max(worst, r.slope_deviation);
    affine = std::max(affine, r.affine_residual);
  }
  return {worst <= 1e-8, "max |slope - lambda| " + fmt("%.2e", worst) + ", affine residual " +
                             fmt("%.2e", affine)};
}

struct BoundRun {
  std::vector<BoundReport> reports;
  std::string detail;
};

std::vector<BoundReport> bound_reports(const Graph& g, VertexId x, int d_max, MomentKind kind) {
  const auto fv = share(FiniteVolume::whole(g));
  DisorderModel m;
  m.lambda = 10;
  m.master_seed = 2024;
  SpectralParams sp;
  sp.z = Complex(1.0, 0.5);
  MonteCarloOptions opt;
  opt.trials = 2000;
  return verify_bounds(g, fv, m, sp, x, d_max, kind, opt, 2.33);
}

std::string margins(const std::vector<BoundReport>& reps) {
  double worst = 0;
  for (const auto& r : reps)
    worst = std::max(worst, (r.estimate.mean + r.k * r.estimate.std_error) / r.bound_value);
  return "max (mean + 2.33 stderr) / bound = " + fmt("%.3g", worst);
}

Outcome theorem1_mc(std::vector<double>& fingerprint) {
  const Graph chain = build_path(201);
  const auto a = bound_reports(chain, 100, 5, MomentKind::fractional);
  const Graph box = build_lattice_box(2, 7);
  const auto b = bound_reports(box, *box.find("(0,0)"), 3, MomentKind::fractional);
  bool ok = a.size() == 6 && b.size() == 4;
  for (const auto& r : a) ok = ok && r.passed;
  for (const auto& r : b) ok = ok && r.passed;
  for (const auto* set : {&a, &b})
    for (const auto& r : *set) {
      fingerprint.push_back(r.estimate.mean);
      fingerprint.push_back(r.estimate.std_error);
    }
  return {ok, "chain d<=5: " + margins(a) + "; 15x15 box d<=3: " + margins(b)};
}

Outcome second_moment_mc(std::vector<double>& fingerprint) {
  const Graph chain = build_path(201);
  const auto a = bound_reports(chain, 100, 3, MomentKind::second);
  bool ok = a.size() == 4;
  for (const auto& r : a) {
    ok = ok && r.passed;
    fingerprint.push_back(r.estimate.mean);
    fingerprint.push_back(r.estimate.std_error);
  }
  return {ok, margins(a)};
}

Outcome stone_half() {
  const Eigen::MatrixXd h = Eigen::Vector2d(0, 1).asDiagonal();
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(2);
  psi[0] = 1.0;
  const auto pts = stone_variant_check(eig(h), [](double) { return 1.0; }, 0.0, 0.5, psi,
                                       {1e-1, 1e-2, 1e-3, 1e-4});
  bool decreasing = true;
  for (std::size_t i = 1; i < pts.size(); ++i) decreasing = decreasing && pts[i].error < pts[i - 1].error;
  const bool ok = std::abs(pts.back().lhs - 0.5) <= 1e-2 && decreasing;
  return {ok, "lhs(1e-4) = " + fmt("%.6f", pts.back().lhs) + ", errors " + fmt("%.1e", pts[0].error) +
                  " -> " + fmt("%.1e", pts.back().error)};
}

Outcome graf() {
  int held = 0, total = 0;
  double worst = -1e300, worst_small = -1e300;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const auto inst = random_graf_instance(20, 1.0, 1, i);
    const auto ed = eig(inst.h);
    const auto pts = graf_inequality_check(ed, inst.projection, inst.a, inst.b, inst.psi,
                                           {0.1, 0.01}, 0, 1e-3);
    for (const auto& p : pts) {
      held += p.holds;
      ++total;
      worst = std::max(worst, p.lhs - p.rhs);
    }
    // Diagnostic only: the gap closes as eps -> 0.
    const auto small = graf_inequality_check(ed, inst.projection, inst.a, inst.b, inst.psi, {1e-3});
    worst_small = std::max(worst_small, small[0].lhs - small[0].rhs);
  }
  return {held == total, std::to_string(held) + "/" + std::to_string(total) +
                             " (instance, eps) pairs hold; max lhs - rhs = " + fmt("%.2e", worst) +
                             " (at eps 1e-3: " + fmt("%.2e", worst_small) + ")"};
}

double median_supremum(double lambda) {
  const Graph chain = build_path(400);
  const auto fv = share(FiniteVolume::whole(chain));
  DisorderModel m;
  m.lambda = lambda;
  m.master_seed = 12;
  const VertexId o = 200;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(400);
  psi[o] = 1.0;
  // Full spectral interval: Gershgorin bounds of every realization.
  const double a = -lambda - 1, b = 4 + lambda + 1;
  const auto reps = dynamical_scan(chain, fv, m, a, b, o, 1.0, psi, log_time_grid(0.1, 200, 64), 20);
  std::vector<double> sup;
  for (const auto& r : reps) sup.push_back(r.supremum);
  return median(sup);
}

Outcome dynamical_contrast(std::vector<double>& fingerprint) {
  const double weak = median_supremum(0.1), strong = median_supremum(10);
  fingerprint.push_back(weak);
  fingerprint.push_back(strong);
  const double ratio = weak / strong;
  return {ratio >= 10, "median sup " + fmt("%.4g", weak) + " (lambda 0.1) vs " + fmt("%.4g", strong) +
                           " (lambda 10), ratio " + fmt("%.4g", ratio)};
}

Outcome assumption_sanity() {
  const Graph chain = build_lattice_box(1, 20);
  const double a_chain = critical_parameter_estimate(chain, *chain.find("(0)"), CriticalParameter::alpha, 8);

  // Truncation radius r needs a box of radius 2r for the clean ball.
  const int r = 7;
  const Graph z2 = build_lattice_box(2, 2 * r);
  const VertexId o = *z2.find("(0,0)");
  const double a_z2 = critical_parameter_estimate(z2, o, CriticalParameter::alpha, r);
  const double mu = connective_estimate(count_saws(z2, o, r)).back().mu;
  const double rel = std::abs(a_z2 * mu - 1.0);

  // Shell terms jump whenever a new hub sphere enters the ball, so the ratio
  // test needs several shells past the (16,0) hub.
  const Graph hub = build_hub_lattice(80);
  const auto hub_rep = assumption1_partial_sum(hub, *hub.find("(0,0)"), 0.2, 14);
  const Graph tree = build_log_tree(40);
  const auto tree_rep = assumption1_partial_sum(tree, 0, 0.2, 16);

  const bool ok = a_chain >= 0.99 && rel <= 0.15 && hub_rep.verdict == Verdict::converging &&
                  tree_rep.verdict == Verdict::converging;
  return {ok, "chain " + fmt("%.4f", a_chain) + "; Z^2 " + fmt("%.4f", a_z2) + " vs 1/mu " +
                  fmt("%.4f", 1 / mu) + " (" + fmt("%.1f", 100 * rel) + "%); hub " +
                  std::string(to_string(hub_rep.verdict)) + " (sum " + fmt("%.3f", hub_rep.partial_sums.back()) +
                  "), log tree " +
                  std::string(to_string(tree_rep.verdict))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only, expected_fail;
  app.add_option("--only", only, "Run only these criteria")->delimiter(',');
  app.add_option("--expected-fail", expected_fail, "Criteria whose failure is documented")
      ->delimiter(',');
  CLI11_PARSE(app, argc, argv);
  const std::set<int> selected(only.begin(), only.end());
  const std::set<int> allowed(expected_fail.begin(), expected_fail.end());

  std::vector<double> fp8, fp9, fp12;
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"SAW oracle equivalence", saw_oracle_equivalence},
      {"Z^2 interior SAW counts", z2_counts},
      {"spectral averaging", spectral_averaging},
      {"bound constants", constants},
      {"SAW expansion identity", saw_expansion},
      {"resolvent identity", resolvent_identity},
      {"rank-one structure", rank_one},
      {"fractional-moment bound (MC)", [&] { return theorem1_mc(fp8); }},
      {"second-moment bound (MC)", [&] { return second_moment_mc(fp9); }},
      {"Stone variant 1/2 factor", stone_half},
      {"Graf inequality at finite eps", graf},
      {"dynamical contrast", [&] { return dynamical_contrast(fp12); }},
      {"assumption checker sanity", assumption_sanity},
      {"determinism", [&] {
         std::vector<double> again8, again9, again12;
         bool reran = false;
         if (!fp8.empty()) { theorem1_mc(again8); reran = true; }
         if (!fp9.empty()) { second_moment_mc(again9); reran = true; }
         if (!fp12.empty()) { dynamical_contrast(again12); reran = true; }
         if (!reran) return Outcome{false, "run together with criteria 8, 9 or 12"};
         const bool same = again8 == fp8 && again9 == fp9 && again12 == fp12;
         return Outcome{same, std::to_string(fp8.size() + fp9.size() + fp12.size()) +
                                  " values reproduced bit for bit"};
       }},
  };

  int failed_unexpected = 0, failed = 0;
  double total = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    total += secs;
    if (!out.passed) {
      ++failed;
      if (!allowed.count(id)) ++failed_unexpected;
    }
    std::printf("%s  %2d  %-32s %s  [%.1f s]%s\n", out.passed ? "PASS" : "FAIL", id,
                criteria[i].first.c_str(), out.detail.c_str(), secs,
                !out.passed && allowed.count(id) ? "  (expected failure)" : "");
    std::fflush(stdout);
  }
  std::printf("%d failed (%d unexpected), %.1f s total\n", failed, failed_unexpected, total);
  return failed_unexpected ? 1 : 0;
}
