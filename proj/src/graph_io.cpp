#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "anderson/graph.hpp"

namespace anderson {

void write_graph(std::ostream& out, const Graph& g) {
  out << "graph " << g.family();
  for (long p : g.params()) out << ' ' << p;
  out << '\n';
  for (VertexId x = 0; x < g.size(); ++x) out << "v " << x << ' ' << g.label(x) << '\n';
  for (VertexId x = 0; x < g.size(); ++x)
    for (VertexId y : g.neighbors(x))
      if (x < y) out << "e " << x << ' ' << y << '\n';
}

Graph read_graph(std::istream& in) {
  std::string line;
  int line_no = 0;
  const auto fail = [&](const std::string& why) {
    throw std::runtime_error("graph file line " + std::to_string(line_no) + ": " + why);
  };

  std::string family;
  std::vector<long> params;
  std::vector<std::string> labels;
  std::vector<std::pair<VertexId, VertexId>> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "graph") {
      if (!family.empty()) fail("duplicate header");
      ls >> family;
      for (long p; ls >> p;) params.push_back(p);
      if (family.empty()) fail("missing family");
    } else if (tag == "v") {
      std::size_t id;
      std::string label;
      if (!(ls >> id >> label)) fail("malformed vertex line");
      if (id != labels.size()) fail("vertex ids must be dense and ascending");
      labels.push_back(label);
    } else if (tag == "e") {
      VertexId a, b;
      if (!(ls >> a >> b)) fail("malformed edge line");
      if (a >= b) fail("edge ids must satisfy id1 < id2");
      edges.emplace_back(a, b);
    } else {
      fail("unknown record '" + tag + "'");
    }
  }
  if (family.empty()) throw std::runtime_error("graph file: missing header");

  Graph body = Graph::from_edges(labels.size(), edges, labels, family);
  static constexpr std::string_view kKnown[] = {"lattice", "logtree", "hublattice",
                                                "path",    "cycle",   "tree"};
  if (std::find(std::begin(kKnown), std::end(kKnown), family) == std::end(kKnown)) return body;

  Graph rebuilt = build_family(family, params);
  bool same = rebuilt.size() == body.size() && rebuilt.edge_count() == body.edge_count();
  for (VertexId x = 0; same && x < body.size(); ++x) {
    auto a = rebuilt.neighbors(x), b = body.neighbors(x);
    same = rebuilt.label(x) == body.label(x) && std::equal(a.begin(), a.end(), b.begin(), b.end());
  }
  if (!same) throw std::runtime_error("graph file body does not match its header");
  return rebuilt;
}

}  // namespace anderson
