#include "anderson/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "anderson/dynamics.hpp"
#include "anderson/errors.hpp"
#include "anderson/moments.hpp"
#include "anderson/parallel.hpp"
#include "anderson/saw.hpp"

#ifndef ANDERSON_VERSION
#define ANDERSON_VERSION "0.0.0"
#endif

namespace anderson {

namespace {

using nlohmann::json;

const std::set<std::string> kCommon = {"experiment", "output", "threads", "seed",
                                       "graph.file", "graph.family", "graph.params"};
const std::set<std::string> kDisorder = {"lambda", "density.a", "density.b"};
const std::set<std::string> kSpectral = {"spectral.s", "spectral.z_re", "spectral.z_im"};

std::set<std::string> keys(std::initializer_list<const std::set<std::string>*> groups,
                           std::initializer_list<std::string> extra) {
  std::set<std::string> out;
  for (const auto* g : groups) out.insert(g->begin(), g->end());
  out.insert(extra.begin(), extra.end());
  return out;
}

std::string id_text(std::uint64_t v) { return std::to_string(v); }

DisorderModel disorder_from(const Config& c) {
  DisorderModel m;
  m.lambda = c.get_double("lambda", 1.0);
  m.density.a = c.get_double("density.a", -1.0);
  m.density.b = c.get_double("density.b", 1.0);
  m.master_seed = static_cast<std::uint64_t>(c.get_long("seed", 0));
  m.validate();
  return m;
}

SpectralParams spectral_from(const Config& c) {
  SpectralParams sp;
  sp.s = c.get_double("spectral.s", 0.5);
  sp.z = Complex(c.get_double("spectral.z_re", 0.0), c.get_double("spectral.z_im", 1.0));
  sp.validate();
  return sp;
}

std::size_t positive_count(const Config& c, const std::string& key, long fallback) {
  const long v = c.get_long(key, fallback);
  if (v <= 0) throw ConfigError("key '" + key + "' must be positive", key);
  return static_cast<std::size_t>(v);
}

unsigned threads_from(const Config& c) {
  const long t = c.get_long("threads", 0);
  if (t < 0) throw ConfigError("key 'threads' must be >= 0", "threads");
  return resolve_threads(static_cast<unsigned>(t));
}

// Natural origin of each family: the lattice origin, the tree root, the
// middle of a path.
VertexId default_center(const Graph& g) {
  const auto& fam = g.family();
  if (fam == "lattice" || fam == "hublattice") {
    const long dim = fam == "lattice" ? g.params().at(0) : 2;
    std::string label = "(";
    for (long i = 0; i < dim; ++i) label += i ? ",0" : "0";
    label += ")";
    if (auto v = g.find(label)) return *v;
  }
  if (fam == "path") return static_cast<VertexId>((g.size() - 1) / 2);
  return 0;
}

VertexId vertex_from(const Config& c, const Graph& g, const std::string& key, VertexId fallback) {
  if (!c.has(key)) return fallback;
  try {
    return resolve_vertex(g, c.get(key));
  } catch (const std::out_of_range& e) {
    throw ConfigError("key '" + key + "': " + e.what(), key);
  }
}

std::shared_ptr<const FiniteVolume> volume_from(const Config& c, const Graph& g, VertexId center) {
  if (!c.has("volume.radius")) return std::make_shared<const FiniteVolume>(FiniteVolume::whole(g));
  const long r = c.get_long("volume.radius");
  if (r < 0) throw ConfigError("key 'volume.radius' must be >= 0", "volume.radius");
  return std::make_shared<const FiniteVolume>(FiniteVolume::ball(g, center, static_cast<int>(r)));
}

MomentKind kind_from(const Config& c, const std::string& key) {
  const std::string k = c.get(key, "fractional");
  if (k == "fractional") return MomentKind::fractional;
  if (k == "second") return MomentKind::second;
  throw ConfigError("key '" + key + "' must be 'fractional' or 'second'", key);
}

// --------------------------------------------------------------------------

void run_saw(const Config& c, RunRecord& r) {
  c.require_known(keys({&kCommon}, {"saw.origin", "saw.n_max", "saw.budget"}));
  const Graph g = graph_from_config(c);
  const VertexId x = vertex_from(c, g, "saw.origin", default_center(g));
  SawOptions opt;
  opt.budget = static_cast<std::uint64_t>(c.get_long("saw.budget", 100'000'000));
  opt.threads = threads_from(c);
  const SawTable t = count_saws(g, x, static_cast<int>(c.get_long("saw.n_max", 6)), opt);
  r.columns = {"n", "c_n", "clean"};
  for (int n = 0; n <= t.n_max(); ++n)
    r.rows.push_back({std::to_string(n), id_text(t.counts[n]), t.clean(n) ? "1" : "0"});
  r.summary["origin"] = x;
  r.summary["origin_label"] = g.label(x);
  r.summary["clean_radius"] = t.clean_radius == kUnboundedRadius ? -1 : t.clean_radius;
  json mu = json::array();
  for (const auto& p : connective_estimate(t)) mu.push_back({{"n", p.n}, {"mu", p.mu}});
  r.summary["connective"] = mu;
}

void run_assumption(const Config& c, RunRecord& r) {
  c.require_known(keys({&kCommon}, {"assumption.which", "assumption.alpha", "assumption.beta",
                                    "assumption.p", "assumption.o", "assumption.y",
                                    "assumption.radius", "assumption.critical"}));
  const Graph g = graph_from_config(c);
  const VertexId y = vertex_from(c, g, "assumption.y", default_center(g));
  const int radius = static_cast<int>(c.get_long("assumption.radius", 6));
  const long which = c.get_long("assumption.which", 1);
  SawOptions opt;
  opt.threads = threads_from(c);
  AssumptionReport rep;
  if (which == 1) {
    rep = assumption1_partial_sum(g, y, c.get_double("assumption.alpha", 0.2), radius, {}, opt);
  } else if (which == 2) {
    const VertexId o = vertex_from(c, g, "assumption.o", y);
    rep = assumption2_partial_sum(g, o, y, c.get_double("assumption.p", 1.0),
                                  c.get_double("assumption.beta", 0.2), radius, {}, opt);
  } else {
    throw ConfigError("key 'assumption.which' must be 1 or 2", "assumption.which");
  }
  r.columns = {"R", "partial_sum", "shell_ratio", "verdict"};
  for (std::size_t R = 0; R < rep.partial_sums.size(); ++R)
    r.rows.push_back({std::to_string(R), format_double(rep.partial_sums[R]),
                      R == 0 ? "" : format_double(rep.shell_ratios[R]),
                      std::string(to_string(rep.verdict))});
  r.summary["which"] = rep.which;
  r.summary["heuristic"] = "ratio test over the last 3 shells, tolerance 0.02";
  r.summary["parameter"] = rep.parameter;
  r.summary["verdict"] = std::string(to_string(rep.verdict));
  r.summary["estimated_critical"] = rep.estimated_critical;
  if (c.get("assumption.critical", "false") == "true") {
    const auto which_param = which == 1 ? CriticalParameter::alpha : CriticalParameter::beta;
    r.summary["critical_estimate"] =
        critical_parameter_estimate(g, y, which_param, radius, {}, opt);
  }
}

void run_moments(const Config& c, RunRecord& r) {
  c.require_known(keys({&kCommon, &kDisorder, &kSpectral},
                       {"trials", "volume.radius", "moments.x", "moments.y", "moments.kind"}));
  const Graph g = graph_from_config(c);
  const DisorderModel m = disorder_from(c);
  const SpectralParams sp = spectral_from(c);
  const VertexId x = vertex_from(c, g, "moments.x", default_center(g));
  const VertexId y = vertex_from(c, g, "moments.y", x);
  const auto fv = volume_from(c, g, x);
  MonteCarloOptions opt{positive_count(c, "trials", 1000), threads_from(c)};
  const MomentKind kind = kind_from(c, "moments.kind");
  const MomentEstimate e = kind == MomentKind::fractional
                               ? fractional_moment_mc(g, fv, m, sp, x, y, opt)
                               : second_moment_mc(g, fv, m, sp, x, y, opt);
  r.columns = {"run_id", "x", "y", "d", "s", "lambda", "z_re", "z_im",
               "trials", "mean", "stderr", "clean"};
  r.rows.push_back({r.run_id, id_text(x), id_text(y), std::to_string(e.d), format_double(sp.s),
                    format_double(m.lambda), format_double(sp.z.real()),
                    format_double(sp.z.imag()), id_text(e.trials), format_double(e.mean),
                    format_double(e.std_error), e.clean ? "1" : "0"});
  r.summary["kind"] = kind == MomentKind::fractional ? "fractional" : "second";
  r.summary["mean"] = e.mean;
  r.summary["stderr"] = e.std_error;
}

void run_bounds(const Config& c, RunRecord& r) {
  c.require_known(keys({&kCommon, &kDisorder, &kSpectral},
                       {"trials", "volume.radius", "bounds.x", "bounds.d_max", "bounds.kind",
                        "bounds.k", "bounds.large_disorder"}));
  const Graph g = graph_from_config(c);
  const DisorderModel m = disorder_from(c);
  const SpectralParams sp = spectral_from(c);
  const VertexId x = vertex_from(c, g, "bounds.x", default_center(g));
  const auto fv = volume_from(c, g, x);
  MonteCarloOptions opt{positive_count(c, "trials", 1000), threads_from(c)};
  const MomentKind kind = kind_from(c, "bounds.kind");
  const double k = c.get_double("bounds.k", 2.33);
  const auto reports = verify_bounds(g, fv, m, sp, x, static_cast<int>(c.get_long("bounds.d_max", 5)),
                                     kind, opt, k);
  r.columns = {"run_id", "x", "y", "d", "c_xd", "s", "lambda", "z_re", "z_im", "trials",
               "mean", "stderr", "C", "C_prime", "bound", "passed"};
  bool all = true;
  for (const auto& b : reports) {
    all = all && b.passed;
    r.rows.push_back({r.run_id, id_text(b.estimate.x), id_text(b.estimate.y), std::to_string(b.d),
                      id_text(b.c_xd), format_double(sp.s), format_double(m.lambda),
                      format_double(sp.z.real()), format_double(sp.z.imag()),
                      id_text(b.estimate.trials), format_double(b.estimate.mean),
                      format_double(b.estimate.std_error), format_double(b.C),
                      format_double(b.C_prime), format_double(b.bound_value),
                      b.passed ? "1" : "0"});
  }
  r.summary["kind"] = kind == MomentKind::fractional ? "fractional" : "second";
  r.summary["diagonal"] = "full-graph valence m(x) + lambda omega_x";
  r.summary["confidence"] = "one-sided normal, mean + k stderr";
  r.summary["k"] = k;
  r.summary["all_passed"] = all;
  if (!reports.empty()) {
    if (c.get("bounds.large_disorder", "false") == "true" && !(reports.front().C < 1.0))
      throw ConfigError("large-disorder mode declared but C = " + format_double(reports.front().C) +
                            " is not below 1",
                        "bounds.large_disorder");
    r.summary["C"] = reports.front().C;
    r.summary["C_prime"] = reports.front().C_prime;
    r.summary["C_below_one"] = reports.front().C < 1.0;
  }
}

void run_dynamics(const Config& c, RunRecord& r) {
  c.require_known(keys({&kCommon, &kDisorder},
                       {"trials", "dynamics.origin", "dynamics.p", "dynamics.a", "dynamics.b",
                        "dynamics.tmin", "dynamics.tmax", "dynamics.points"}));
  const Graph g = graph_from_config(c);
  const DisorderModel m = disorder_from(c);
  const VertexId o = vertex_from(c, g, "dynamics.origin", default_center(g));
  const auto fv = std::make_shared<const FiniteVolume>(FiniteVolume::whole(g));
  // Default interval: a Gershgorin enclosure of the whole spectrum.
  const double deg = static_cast<double>(g.max_degree());
  const double a = c.get_double("dynamics.a", m.lambda * m.density.a - 1.0);
  const double b = c.get_double("dynamics.b", 2 * deg + m.lambda * m.density.b + 1.0);
  const auto times = log_time_grid(c.get_double("dynamics.tmin", 0.1),
                                   c.get_double("dynamics.tmax", 200.0),
                                   positive_count(c, "dynamics.points", 64));
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(fv->size()));
  psi[static_cast<Eigen::Index>(fv->index(o))] = 1.0;
  DynamicsOptions opt;
  opt.threads = threads_from(c);
  const double p = c.get_double("dynamics.p", 1.0);
  const auto reports =
      dynamical_scan(g, fv, m, a, b, o, p, psi, times, positive_count(c, "trials", 20), opt);
  r.columns = {"trial", "t", "moment"};
  std::vector<double> sups;
  json per_trial = json::array();
  for (const auto& rep : reports) {
    for (std::size_t k = 0; k < rep.times.size(); ++k)
      r.rows.push_back({id_text(rep.trial), format_double(rep.times[k]),
                        format_double(rep.moments[k])});
    sups.push_back(rep.supremum);
    per_trial.push_back({{"trial", rep.trial},
                         {"supremum", rep.supremum},
                         {"boundary_mass", rep.boundary_mass},
                         {"boundary_flag", rep.boundary_flag}});
  }
  r.summary["origin"] = o;
  r.summary["p"] = p;
  r.summary["interval"] = {a, b};
  r.summary["median_supremum"] = median(sups);
  r.summary["max_supremum"] = *std::max_element(sups.begin(), sups.end());
  r.summary["boundary_flags"] =
      std::count_if(reports.begin(), reports.end(), [](const auto& x) { return x.boundary_flag; });
  r.summary["trials"] = per_trial;
}

void run_lemmas(const Config& c, RunRecord& r) {
  c.require_known(keys({&kCommon}, {"lemmas.which", "lemmas.a", "lemmas.b", "lemmas.jump",
                                    "lemmas.epsilons", "lemmas.diag", "lemmas.index",
                                    "lemmas.size", "lemmas.lambda", "lemmas.instances",
                                    "lemmas.horizon"}));
  const std::string which = c.get("lemmas.which");
  if (which == "approx") {
    const auto eps = c.has("lemmas.epsilons") ? c.get_doubles("lemmas.epsilons")
                                              : std::vector<double>{1e-1, 1e-2, 1e-3, 1e-4};
    const auto pts = approx_identity_check(PiecewiseFunction::step(c.get_double("lemmas.jump", 0)),
                                           c.get_double("lemmas.a", 0), eps);
    r.columns = {"eps", "value", "limit", "error"};
    for (const auto& p : pts)
      r.rows.push_back({format_double(p.epsilon), format_double(p.value), format_double(p.limit),
                        format_double(p.error)});
  } else if (which == "stone") {
    const auto eps = c.has("lemmas.epsilons") ? c.get_doubles("lemmas.epsilons")
                                              : std::vector<double>{1e-1, 1e-2, 1e-3, 1e-4};
    const auto diag = c.has("lemmas.diag") ? c.get_doubles("lemmas.diag")
                                           : std::vector<double>{0.0, 1.0};
    const Eigen::MatrixXd h = Eigen::Map<const Eigen::VectorXd>(
        diag.data(), static_cast<Eigen::Index>(diag.size())).asDiagonal();
    const long idx = c.get_long("lemmas.index", 0);
    if (idx < 0 || idx >= static_cast<long>(diag.size()))
      throw ConfigError("key 'lemmas.index' out of range", "lemmas.index");
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(h.rows());
    psi[idx] = 1.0;
    const auto pts = stone_variant_check(eig(h), [](double) { return 1.0; },
                                         c.get_double("lemmas.a", 0.0),
                                         c.get_double("lemmas.b", 0.5), psi, eps);
    r.columns = {"eps", "lhs", "target", "error"};
    for (const auto& p : pts)
      r.rows.push_back({format_double(p.epsilon), format_double(p.lhs), format_double(p.target),
                        format_double(p.error)});
  } else if (which == "graf") {
    const auto eps = c.has("lemmas.epsilons") ? c.get_doubles("lemmas.epsilons")
                                              : std::vector<double>{0.1, 0.01};
    const int n = static_cast<int>(c.get_long("lemmas.size", 20));
    const double lambda = c.get_double("lemmas.lambda", 1.0);
    const auto count = positive_count(c, "lemmas.instances", 10);
    const auto seed = static_cast<std::uint64_t>(c.get_long("seed", 0));
    r.columns = {"instance", "eps", "lhs", "lhs_tail", "rhs", "holds"};
    long held = 0, total = 0;
    for (std::size_t i = 0; i < count; ++i) {
      const GrafInstance inst = random_graf_instance(n, lambda, seed, i);
      const auto pts = graf_inequality_check(eig(inst.h), inst.projection, inst.a, inst.b,
                                             inst.psi, eps, c.get_double("lemmas.horizon", 0));
      for (const auto& p : pts) {
        held += p.holds;
        ++total;
        r.rows.push_back({id_text(i), format_double(p.epsilon), format_double(p.lhs),
                          format_double(p.lhs_tail), format_double(p.rhs), p.holds ? "1" : "0"});
      }
    }
    r.summary["held"] = held;
    r.summary["checked"] = total;
  } else {
    throw ConfigError("key 'lemmas.which' must be approx, stone or graf", "lemmas.which");
  }
  r.summary["which"] = which;
}

std::string utc_stamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

void atomic_write(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, p) : std::string("nan");
}

VertexId resolve_vertex(const Graph& g, const std::string& ref) {
  if (!ref.empty() && std::all_of(ref.begin(), ref.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
    const unsigned long v = std::stoul(ref);
    if (v >= g.size()) throw std::out_of_range("vertex id " + ref + " out of range");
    return static_cast<VertexId>(v);
  }
  if (auto v = g.find(ref)) return *v;
  throw std::out_of_range("no vertex labelled '" + ref + "'");
}

Graph graph_from_config(const Config& c) {
  if (c.has("graph.file")) {
    std::ifstream in(c.get("graph.file"));
    if (!in) throw ConfigError("cannot open graph file " + c.get("graph.file"), "graph.file");
    return read_graph(in);
  }
  const std::string family = c.get("graph.family");
  const auto params = c.has("graph.params") ? c.get_longs("graph.params") : std::vector<long>{};
  try {
    return build_family(family, params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), "graph.family");
  }
}

RunRecord run_experiment(const Config& config) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord r;
  r.config = config;
  r.config_hash = config.hash();
  r.run_id = utc_stamp() + "-" + r.config_hash;
  r.version = ANDERSON_VERSION;
  r.experiment = config.get("experiment");
  if (r.experiment == "saw") run_saw(config, r);
  else if (r.experiment == "assumption") run_assumption(config, r);
  else if (r.experiment == "moments") run_moments(config, r);
  else if (r.experiment == "bounds") run_bounds(config, r);
  else if (r.experiment == "dynamics") run_dynamics(config, r);
  else if (r.experiment == "lemmas") run_lemmas(config, r);
  else throw ConfigError("unknown experiment '" + r.experiment + "'", "experiment");
  r.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

RunRecord run(const std::string& config_path) {
  const Config config = Config::load(config_path);
  RunRecord r = run_experiment(config);
  if (config.has("output")) write_record(r, config.get("output"));
  return r;
}

std::string to_csv(const RunRecord& r) {
  std::ostringstream out;
  for (std::size_t i = 0; i < r.columns.size(); ++i) out << (i ? "," : "") << r.columns[i];
  out << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  return out.str();
}

nlohmann::json to_json(const RunRecord& r) {
  json j;
  j["run_id"] = r.run_id;
  j["config_hash"] = r.config_hash;
  j["version"] = r.version;
  j["experiment"] = r.experiment;
  j["config"] = r.config.values();
  j["columns"] = r.columns;
  j["rows"] = r.rows;
  j["summary"] = r.summary;
  j["duration_seconds"] = r.duration_seconds;
  return j;
}

RunRecord record_from_json(const nlohmann::json& j) {
  RunRecord r;
  try {
    r.run_id = j.at("run_id").get<std::string>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.version = j.at("version").get<std::string>();
    r.experiment = j.at("experiment").get<std::string>();
    for (const auto& [k, v] : j.at("config").items()) r.config.set(k, v.get<std::string>());
    r.columns = j.at("columns").get<std::vector<std::string>>();
    r.rows = j.at("rows").get<std::vector<std::vector<std::string>>>();
    r.summary = j.value("summary", json::object());
    r.duration_seconds = j.value("duration_seconds", 0.0);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed run record: ") + e.what());
  }
  for (const auto& row : r.rows)
    if (row.size() != r.columns.size())
      throw std::runtime_error("malformed run record: row width does not match columns");
  return r;
}

RunRecord read_record(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open run record " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed run record: ") + e.what());
  }
  return record_from_json(j);
}

void write_record(const RunRecord& record, const std::string& prefix) {
  atomic_write(prefix + ".csv", to_csv(record));
  atomic_write(prefix + ".json", to_json(record).dump(2) + "\n");
}

}  // namespace anderson
