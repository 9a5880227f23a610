// Command-line front end: every subcommand builds a flat config and hands it
// to the experiment runner, so flags and config files share one code path.

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "anderson/config.hpp"
#include "anderson/errors.hpp"
#include "anderson/experiment.hpp"
#include "anderson/graph.hpp"
#include "anderson/report.hpp"

namespace {

using anderson::Config;

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericFailure = 3;

// Flag value -> config key; empty strings are left out of the config.
struct Binding {
  std::map<std::string, std::string> values;
  std::string& operator[](const std::string& key) { return values[key]; }
};

struct GraphFlags {
  std::string file, family, dim = "2";
  std::vector<std::string> params;

  void attach(CLI::App* app) {
    app->add_option("--graph", file, "Graph file written by 'graph build'");
    app->add_option("--family", family, "Graph family: lattice, logtree, hublattice, path, cycle, tree");
    app->add_option("--param", params, "Family parameter (repeatable)");
    app->add_option("--dim", dim, "Lattice dimension (lattice family)")->capture_default_str();
  }

  void apply(Config& c) const {
    if (!file.empty()) {
      c.set("graph.file", file);
      return;
    }
    if (family.empty()) throw anderson::ConfigError("either --graph or --family is required", "graph.family");
    c.set("graph.family", family);
    std::vector<std::string> p = params;
    if (family == "lattice" && p.size() == 1) p.insert(p.begin(), dim);
    std::string joined;
    for (const auto& x : p) joined += (joined.empty() ? "" : ",") + x;
    if (!joined.empty()) c.set("graph.params", joined);
  }
};

Config to_config(const std::string& experiment, const GraphFlags* graph, const Binding& b) {
  Config c;
  c.set("experiment", experiment);
  if (graph) graph->apply(c);
  for (const auto& [k, v] : b.values)
    if (!v.empty()) c.set(k, v);
  return c;
}

int emit(const anderson::RunRecord& r, const std::string& out) {
  if (out.empty()) {
    std::cout << anderson::to_csv(r);
  } else {
    anderson::write_record(r, out);
    std::cerr << "wrote " << out << ".csv and " << out << ".json (run " << r.run_id << ")\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anderson model on graphs: SAW counts, fractional moments, dynamics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ANDERSON_VERSION));

  std::string out;
  Binding b;
  GraphFlags gf;

  // graph build
  auto* graph = app.add_subcommand("graph", "Graph utilities");
  auto* gbuild = graph->add_subcommand("build", "Build a graph family and write it to a file");
  gbuild->add_option("--family", gf.family, "lattice | logtree | hublattice | path | cycle | tree")->required();
  gbuild->add_option("--param", gf.params, "Family parameter (repeatable)")->required();
  gbuild->add_option("--dim", gf.dim, "Lattice dimension")->capture_default_str();
  std::string graph_out;
  gbuild->add_option("--out", graph_out, "Output file")->required();
  graph->require_subcommand(1);

  // saw count / saw assumption
  auto* saw = app.add_subcommand("saw", "Self-avoiding walks and geometric assumptions");
  saw->require_subcommand(1);
  auto* scount = saw->add_subcommand("count", "Exact SAW counts c_x(n)");
  gf.attach(scount);
  scount->add_option("--origin", b["saw.origin"], "Origin vertex (id or label)");
  scount->add_option("--nmax", b["saw.n_max"], "Largest walk length");
  scount->add_option("--budget", b["saw.budget"], "Step budget");
  scount->add_option("--threads", b["threads"], "Worker threads (0 = all cores)");
  scount->add_option("--out", out, "Output prefix for CSV/JSON (default: CSV to stdout)");

  auto* sassume = saw->add_subcommand("assumption", "Truncated partial sums of the geometric series");
  gf.attach(sassume);
  sassume->add_option("--which", b["assumption.which"], "1 or 2")->check(CLI::IsMember({"1", "2"}));
  sassume->add_option("--alpha", b["assumption.alpha"], "alpha in (0,1)");
  sassume->add_option("--beta", b["assumption.beta"], "beta in (0,1)");
  sassume->add_option("--p", b["assumption.p"], "Polynomial weight");
  sassume->add_option("--origin", b["assumption.o"], "Vertex o (assumption 2)");
  sassume->add_option("--y", b["assumption.y"], "Vertex y");
  sassume->add_option("--radius", b["assumption.radius"], "Truncation radius");
  std::string critical;
  sassume->add_flag("--critical", critical, "Also estimate the critical parameter");
  sassume->add_option("--threads", b["threads"], "Worker threads");
  sassume->add_option("--out", out, "Output prefix");

  // moments estimate / bounds verify
  auto disorder = [&](CLI::App* sub) {
    sub->add_option("--lambda", b["lambda"], "Disorder strength");
    sub->add_option("--rho-a", b["density.a"], "Lower end of the uniform density");
    sub->add_option("--rho-b", b["density.b"], "Upper end of the uniform density");
    sub->add_option("--seed", b["seed"], "Master seed");
    sub->add_option("--trials", b["trials"], "Disorder trials");
    sub->add_option("--threads", b["threads"], "Worker threads");
    sub->add_option("--out", out, "Output prefix");
  };
  auto spectral = [&](CLI::App* sub) {
    sub->add_option("--s", b["spectral.s"], "Moment order s in (0,1)");
    sub->add_option("--z-re", b["spectral.z_re"], "Re z");
    sub->add_option("--z-im", b["spectral.z_im"], "Im z (non-zero)");
    sub->add_option("--radius", b["volume.radius"], "Restrict to the ball of this radius around x");
  };
  auto* moments = app.add_subcommand("moments", "Monte Carlo Green-function moments");
  moments->require_subcommand(1);
  auto* mest = moments->add_subcommand("estimate", "E|G(z;x,y)|^s or |Im z| E|G|^2");
  gf.attach(mest);
  disorder(mest);
  spectral(mest);
  mest->add_option("--x", b["moments.x"], "Vertex x");
  mest->add_option("--y", b["moments.y"], "Vertex y");
  mest->add_option("--kind", b["moments.kind"], "fractional | second");

  auto* bounds = app.add_subcommand("bounds", "One-sided checks of the moment bounds");
  bounds->require_subcommand(1);
  auto* bver = bounds->add_subcommand("verify", "mean + k stderr against C' C^d c_x(d)");
  gf.attach(bver);
  disorder(bver);
  spectral(bver);
  bver->add_option("--x", b["bounds.x"], "Vertex x");
  bver->add_option("--dmax", b["bounds.d_max"], "Largest distance");
  bver->add_option("--kind", b["bounds.kind"], "fractional | second");
  bver->add_option("--k", b["bounds.k"], "Standard errors added to the mean");

  // dynamics scan
  auto* dyn = app.add_subcommand("dynamics", "Exact-diagonalization dynamics");
  dyn->require_subcommand(1);
  auto* dscan = dyn->add_subcommand("scan", "Position moments of e^{-itH} P_(a,b) delta_o");
  gf.attach(dscan);
  disorder(dscan);
  std::vector<std::string> interval;
  dscan->add_option("--interval", interval, "Energy interval a b")->expected(2);
  dscan->add_option("--p", b["dynamics.p"], "Moment power p >= 0");
  dscan->add_option("--origin", b["dynamics.origin"], "Vertex o (initial state delta_o)");
  dscan->add_option("--tmin", b["dynamics.tmin"], "First grid time");
  dscan->add_option("--tmax", b["dynamics.tmax"], "Last grid time");
  dscan->add_option("--points", b["dynamics.points"], "Log-spaced grid points");

  // lemmas check
  auto* lem = app.add_subcommand("lemmas", "Quadrature checks of the spectral lemmas");
  lem->require_subcommand(1);
  auto* lcheck = lem->add_subcommand("check", "approx | stone | graf");
  lcheck->add_option("--which", b["lemmas.which"], "approx | stone | graf")
      ->required()
      ->check(CLI::IsMember({"approx", "stone", "graf"}));
  lcheck->add_option("--a", b["lemmas.a"], "Point a, or left end of the interval");
  lcheck->add_option("--b", b["lemmas.b"], "Right end of the interval");
  lcheck->add_option("--jump", b["lemmas.jump"], "Jump of the step function (approx)");
  lcheck->add_option("--eps", b["lemmas.epsilons"], "Comma-separated epsilons");
  lcheck->add_option("--diag", b["lemmas.diag"], "Comma-separated diagonal of H (stone)");
  lcheck->add_option("--index", b["lemmas.index"], "Basis vector psi (stone)");
  lcheck->add_option("--size", b["lemmas.size"], "Instance size (graf)");
  lcheck->add_option("--lambda", b["lemmas.lambda"], "Disorder of the instances (graf)");
  lcheck->add_option("--instances", b["lemmas.instances"], "Number of instances (graf)");
  lcheck->add_option("--seed", b["seed"], "Seed (graf)");
  lcheck->add_option("--out", out, "Output prefix");

  // report / run
  auto* rep = app.add_subcommand("report", "Summarize a JSON run record");
  std::string record_path;
  rep->add_option("record", record_path, "Run record (.json)")->required();
  auto* runc = app.add_subcommand("run", "Run an experiment from a config file");
  std::string config_path;
  runc->add_option("--config", config_path, "key = value config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (gbuild->parsed()) {
      Config c;
      gf.apply(c);
      const anderson::Graph g = anderson::graph_from_config(c);
      std::ofstream f(graph_out);
      if (!f) throw anderson::ConfigError("cannot write " + graph_out, "out");
      anderson::write_graph(f, g);
      std::cerr << "wrote " << graph_out << " (" << g.size() << " vertices, " << g.edge_count()
                << " edges)\n";
      return kOk;
    }
    if (!interval.empty()) {
      b["dynamics.a"] = interval[0];
      b["dynamics.b"] = interval[1];
    }
    if (!critical.empty() && critical != "0") b["assumption.critical"] = "true";
    if (scount->parsed()) return emit(anderson::run_experiment(to_config("saw", &gf, b)), out);
    if (sassume->parsed()) return emit(anderson::run_experiment(to_config("assumption", &gf, b)), out);
    if (mest->parsed()) return emit(anderson::run_experiment(to_config("moments", &gf, b)), out);
    if (bver->parsed()) return emit(anderson::run_experiment(to_config("bounds", &gf, b)), out);
    if (dscan->parsed()) return emit(anderson::run_experiment(to_config("dynamics", &gf, b)), out);
    if (lcheck->parsed()) return emit(anderson::run_experiment(to_config("lemmas", nullptr, b)), out);
    if (rep->parsed()) {
      std::cout << anderson::report(anderson::read_record(record_path));
      return kOk;
    }
    if (runc->parsed()) {
      const anderson::RunRecord r = anderson::run(config_path);
      if (!r.config.has("output")) std::cout << anderson::to_csv(r);
      return kOk;
    }
  } catch (const anderson::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const anderson::NumericFailure& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumericFailure;
  } catch (const anderson::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << " (last completed " << e.last_completed() << ")\n";
    return kNumericFailure;
  } catch (const anderson::OutsideCleanRegion& e) {
    std::cerr << "outside clean region: " << e.what() << "\n";
    return kNumericFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kOk;
}
