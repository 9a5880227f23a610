#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "anderson/config.hpp"
#include "anderson/graph.hpp"

namespace anderson {

/// Result of one experiment: a CSV-shaped table plus a JSON summary.
struct RunRecord {
  std::string run_id;       // UTC timestamp + "-" + config hash
  std::string config_hash;
  std::string version;
  std::string experiment;
  Config config;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  nlohmann::json summary = nlohmann::json::object();
  double duration_seconds = 0;
};

/// Experiments and the keys each accepts (beyond the common ones).
/// Common: experiment, output, threads, seed, graph.file | graph.family + graph.params.
///   saw:        saw.origin, saw.n_max, saw.budget
///   assumption: assumption.which, assumption.alpha, assumption.beta, assumption.p,
///               assumption.o, assumption.y, assumption.radius, assumption.critical
///   moments:    <disorder>, <spectral>, trials, volume.radius, moments.x, moments.y,
///               moments.kind
///   bounds:     <disorder>, <spectral>, trials, volume.radius, bounds.x, bounds.d_max,
///               bounds.kind, bounds.k, bounds.large_disorder (asserts C < 1)
///   dynamics:   <disorder>, trials, dynamics.origin, dynamics.p, dynamics.a,
///               dynamics.b, dynamics.tmin, dynamics.tmax, dynamics.points
///   lemmas:     lemmas.which and per-check keys
/// <disorder> = lambda, density.a, density.b;
/// <spectral> = spectral.s, spectral.z_re, spectral.z_im.
RunRecord run_experiment(const Config& config);

/// Loads, validates and runs a config file; writes <output>.csv and
/// <output>.json atomically when the `output` key is set.
RunRecord run(const std::string& config_path);

/// Writes <prefix>.csv and <prefix>.json through temporary files and renames.
void write_record(const RunRecord& record, const std::string& prefix);

std::string to_csv(const RunRecord& record);
nlohmann::json to_json(const RunRecord& record);
RunRecord record_from_json(const nlohmann::json& j);
RunRecord read_record(const std::string& path);

/// Shortest round-trip decimal text of x.
std::string format_double(double x);

/// Graph from `graph.file` or from `graph.family` + `graph.params`.
Graph graph_from_config(const Config& config);

/// Vertex given by numeric id or by label.
VertexId resolve_vertex(const Graph& g, const std::string& ref);

}  // namespace anderson
