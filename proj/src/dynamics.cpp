#include "anderson/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

#include "anderson/errors.hpp"
#include "anderson/parallel.hpp"

namespace anderson {

namespace {

constexpr std::size_t kMaxDense = 3000;

double endpoint_slack(const EigenDecomposition& ed) {
  return 1e-12 * std::max(1.0, ed.operator_norm);
}

// 1 inside the open interval, 1 on an endpoint only when closed, 0 outside.
double membership(double e, double a, double b, double slack, bool closed) {
  const bool on_a = std::abs(e - a) <= slack, on_b = std::abs(e - b) <= slack;
  if (on_a || on_b) return closed ? 1.0 : 0.0;
  return (e > a && e < b) ? 1.0 : 0.0;
}

}  // namespace

EigenDecomposition eig(const Eigen::MatrixXd& h) {
  if (h.rows() != h.cols() || h.rows() == 0) throw std::invalid_argument("eig: need a square matrix");
  if (static_cast<std::size_t>(h.rows()) > kMaxDense)
    throw std::invalid_argument("eig: dense diagonalization limited to 3000 vertices");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw NumericFailure("eig: eigensolver did not converge");
  EigenDecomposition ed;
  ed.eigenvalues = solver.eigenvalues();
  ed.eigenvectors = solver.eigenvectors();
  ed.operator_norm = ed.eigenvalues.cwiseAbs().maxCoeff();
  const Eigen::MatrixXd r = h * ed.eigenvectors - ed.eigenvectors * ed.eigenvalues.asDiagonal();
  ed.max_residual = r.colwise().norm().maxCoeff();
  const auto n = h.rows();
  ed.orthonormality_error =
      (ed.eigenvectors.transpose() * ed.eigenvectors - Eigen::MatrixXd::Identity(n, n))
          .cwiseAbs()
          .maxCoeff();
  if (!(ed.max_residual <= 1e-8 * ed.operator_norm) && ed.max_residual > 0)
    throw NumericFailure("eig: residual " + std::to_string(ed.max_residual), -1, ed.max_residual);
  if (!(ed.orthonormality_error <= 1e-9))
    throw NumericFailure("eig: eigenvectors not orthonormal", -1, ed.orthonormality_error);
  return ed;
}

EigenDecomposition eig(const HamiltonianMatrix& h) {
  EigenDecomposition ed = eig(h.dense());
  ed.volume = h.volume;
  return ed;
}

Eigen::MatrixXd spectral_projection(const EigenDecomposition& ed, double a, double b,
                                    bool closed) {
  if (!(a < b)) throw std::invalid_argument("spectral_projection: need a < b");
  const auto n = static_cast<Eigen::Index>(ed.size());
  Eigen::VectorXd w(n);
  const double slack = endpoint_slack(ed);
  for (Eigen::Index j = 0; j < n; ++j) w[j] = membership(ed.eigenvalues[j], a, b, slack, closed);
  return ed.eigenvectors * w.asDiagonal() * ed.eigenvectors.transpose();
}

Eigen::VectorXcd projected_coefficients(const EigenDecomposition& ed, double a, double b,
                                        bool closed, const Eigen::VectorXcd& psi) {
  if (!(a < b)) throw std::invalid_argument("projected_coefficients: need a < b");
  Eigen::VectorXcd c = ed.eigenvectors.transpose().cast<Complex>() * psi;
  const double slack = endpoint_slack(ed);
  for (Eigen::Index j = 0; j < c.size(); ++j)
    c[j] *= membership(ed.eigenvalues[j], a, b, slack, closed);
  return c;
}

Eigen::VectorXcd evolve(const EigenDecomposition& ed, const Eigen::VectorXcd& psi, double t) {
  if (psi.size() != static_cast<Eigen::Index>(ed.size()))
    throw std::invalid_argument("evolve: state has the wrong dimension");
  Eigen::VectorXcd c = ed.eigenvectors.transpose().cast<Complex>() * psi;
  for (Eigen::Index j = 0; j < c.size(); ++j) c[j] *= std::polar(1.0, -ed.eigenvalues[j] * t);
  return ed.eigenvectors.cast<Complex>() * c;
}

double position_moment(const Graph& g, const FiniteVolume& fv, VertexId o, double p,
                       const Eigen::VectorXcd& psi) {
  if (!(p >= 0)) throw std::invalid_argument("position_moment: p must be >= 0");
  if (psi.size() != static_cast<Eigen::Index>(fv.size()))
    throw std::invalid_argument("position_moment: state has the wrong dimension");
  const auto dist = g.distances_from(o);
  double sum = 0;
  for (std::size_t i = 0; i < fv.size(); ++i) {
    const double d = dist[fv.vertex(i)];
    const double w = p == 0 ? 1.0 : std::pow(d, p);
    sum += w * w * std::norm(psi[static_cast<Eigen::Index>(i)]);
  }
  return std::sqrt(sum);
}

std::vector<VertexId> volume_boundary(const Graph& g, const FiniteVolume& fv) {
  std::vector<VertexId> out;
  for (VertexId v : fv.vertices()) {
    bool edge = !g.complete(v) || (g.all_complete() && g.degree(v) < g.max_degree());
    for (VertexId w : g.neighbors(v))
      if (!fv.contains(w)) edge = true;
    if (edge) out.push_back(v);
  }
  return out;
}

std::vector<double> log_time_grid(double t_min, double t_max, std::size_t n) {
  if (!(t_min > 0 && t_max > t_min) || n < 2)
    throw std::invalid_argument("log_time_grid: need 0 < t_min < t_max and n >= 2");
  std::vector<double> t(n);
  const double step = std::log(t_max / t_min) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) t[i] = t_min * std::exp(step * static_cast<double>(i));
  t.back() = t_max;
  return t;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty sequence");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<DynamicsReport> dynamical_scan(const Graph& g, std::shared_ptr<const FiniteVolume> fv,
                                           const DisorderModel& m, double a, double b,
                                           VertexId o, double p, const Eigen::VectorXcd& psi,
                                           const std::vector<double>& times, std::size_t trials,
                                           const DynamicsOptions& options) {
  m.validate();
  if (!fv) throw std::invalid_argument("dynamical_scan: null volume");
  if (!(a < b)) throw std::invalid_argument("dynamical_scan: need a < b");
  if (!(p >= 0)) throw std::invalid_argument("dynamical_scan: p must be >= 0");
  if (times.empty()) throw std::invalid_argument("dynamical_scan: empty time grid");
  if (psi.size() != static_cast<Eigen::Index>(fv->size()))
    throw std::invalid_argument("dynamical_scan: state has the wrong dimension");
  fv->index(o);

  // Distance of every volume vertex to the boundary, by multi-source BFS.
  const auto boundary = volume_boundary(g, *fv);
  std::vector<int> to_edge(g.size(), -1);
  std::deque<VertexId> queue;
  for (VertexId v : boundary) {
    to_edge[v] = 0;
    queue.push_back(v);
  }
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    for (VertexId w : g.neighbors(v))
      if (fv->contains(w) && to_edge[w] < 0) {
        to_edge[w] = to_edge[v] + 1;
        queue.push_back(w);
      }
  }
  const auto dist = g.distances_from(o);
  if (!boundary.empty()) {
    const int radius = to_edge[o];
    for (std::size_t i = 0; i < fv->size(); ++i)
      if (psi[static_cast<Eigen::Index>(i)] != Complex(0) && 2 * dist[fv->vertex(i)] > radius)
        throw std::invalid_argument(
            "dynamical_scan: psi must be supported within half the boundary distance of o");
  }

  const auto n = static_cast<Eigen::Index>(fv->size());
  Eigen::VectorXd weight(n), band(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const VertexId v = fv->vertex(static_cast<std::size_t>(i));
    weight[i] = p == 0 ? 1.0 : std::pow(static_cast<double>(dist[v]), p);
    band[i] = (to_edge[v] >= 0 && to_edge[v] <= options.boundary_band) ? 1.0 : 0.0;
  }

  std::vector<DynamicsReport> reports(trials);
  parallel_for(trials, resolve_threads(options.threads), [&](std::size_t t, unsigned) {
    EigenDecomposition ed;
    try {
      const auto omega = sample_potential(m, *fv, t);
      ed = eig(assemble(g, fv, omega, m.lambda));
    } catch (const NumericFailure& e) {
      throw NumericFailure(std::string(e.what()) + " (trial " + std::to_string(t) + ")",
                           static_cast<long>(t), e.residual());
    }
    const Eigen::VectorXcd c = projected_coefficients(ed, a, b, false, psi);
    const double norm0 = c.norm();
    const Eigen::MatrixXcd v = ed.eigenvectors.cast<Complex>();
    DynamicsReport& r = reports[t];
    r.trial = t;
    r.o = o;
    r.p = p;
    r.a = a;
    r.b = b;
    r.times = times;
    r.moments.resize(times.size());
    Eigen::VectorXcd phase(n);
    for (std::size_t k = 0; k < times.size(); ++k) {
      for (Eigen::Index j = 0; j < n; ++j)
        phase[j] = c[j] * std::polar(1.0, -ed.eigenvalues[j] * times[k]);
      const Eigen::VectorXcd state = v * phase;
      const Eigen::VectorXd prob = state.cwiseAbs2();
      r.norm_error = std::max(r.norm_error, std::abs(std::sqrt(prob.sum()) - norm0));
      r.moments[k] = std::sqrt(prob.dot(weight.cwiseAbs2()));
      r.supremum = std::max(r.supremum, r.moments[k]);
      r.boundary_mass = std::max(r.boundary_mass, prob.dot(band));
    }
    r.boundary_flag = r.boundary_mass > options.boundary_threshold;
    if (!(r.norm_error <= 1e-9))
      throw NumericFailure("dynamical_scan: evolution lost unitarity (trial " +
                               std::to_string(t) + ")",
                           static_cast<long>(t), r.norm_error);
  });
  return reports;
}

}  // namespace anderson
