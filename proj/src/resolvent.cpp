#include "anderson/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "anderson/errors.hpp"

namespace anderson {

void SpectralParams::validate() const {
  if (z.imag() == 0.0) throw std::invalid_argument("spectral parameter z must have Im z != 0");
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("moment order s must lie in (0,1)");
}

ResolventSolver::ResolventSolver(const HamiltonianMatrix& h, Complex z, double residual_tolerance)
    : z_(z), tolerance_(residual_tolerance) {
  if (z.imag() == 0.0) throw std::invalid_argument("resolvent: Im z must be non-zero");
  load(h);
  lu_.analyzePattern(shifted_);
  lu_.factorize(shifted_);
  if (lu_.info() != Eigen::Success) throw NumericFailure("resolvent: sparse LU failed");
}

void ResolventSolver::load(const HamiltonianMatrix& h) {
  volume_ = h.volume;
  const auto n = static_cast<Eigen::Index>(h.dimension());
  ComplexSparse shift(n, n);
  shift.setIdentity();
  shifted_ = h.matrix.cast<Complex>() - z_ * shift;
  shifted_.makeCompressed();
}

void ResolventSolver::refactorize(const HamiltonianMatrix& h) {
  load(h);
  lu_.factorize(shifted_);
  if (lu_.info() != Eigen::Success) throw NumericFailure("resolvent: sparse LU failed");
}

Eigen::VectorXcd ResolventSolver::solve(const Eigen::VectorXcd& rhs) const {
  Eigen::VectorXcd u = lu_.solve(rhs);
  const double scale = std::max(rhs.norm(), 1e-300);
  const double residual = (shifted_ * u - rhs).norm() / scale;
  if (!(residual <= tolerance_))
    throw NumericFailure("resolvent: residual " + std::to_string(residual) +
                             " exceeds tolerance",
                         -1, residual);
  return u;
}

Eigen::VectorXcd ResolventSolver::column(VertexId y) const {
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(volume_->size()));
  rhs[static_cast<Eigen::Index>(volume_->index(y))] = 1.0;
  return solve(rhs);
}

Complex ResolventSolver::entry(VertexId x, VertexId y) const {
  return column(y)[static_cast<Eigen::Index>(volume_->index(x))];
}

Complex green_entry(const HamiltonianMatrix& h, Complex z, VertexId x, VertexId y) {
  return ResolventSolver(h, z).entry(x, y);
}

Eigen::MatrixXcd dense_resolvent(const HamiltonianMatrix& h, Complex z) {
  ResolventSolver solver(h, z);
  const auto n = static_cast<Eigen::Index>(h.dimension());
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) g.col(j) = solver.column(h.volume->vertex(j));
  return g;
}

ResolventIdentityResult resolvent_identity_check(const Graph& g,
                                                 std::shared_ptr<const FiniteVolume> fv,
                                                 std::span<const double> omega, double lambda,
                                                 Complex z) {
  if (!fv || !fv->depleted())
    throw std::invalid_argument("resolvent_identity_check: volume needs a depletion set");
  if (fv->size() > 200)
    throw std::invalid_argument("resolvent_identity_check: at most 200 vertices");
  const HamiltonianMatrix full = assemble(g, fv, omega, lambda);
  const HamiltonianMatrix dep = assemble_depleted(g, fv, omega, lambda);
  const Eigen::MatrixXd t = Eigen::MatrixXd(hopping_difference(full, dep));
  const Eigen::MatrixXcd gf = dense_resolvent(full, z);
  const Eigen::MatrixXcd gd = dense_resolvent(dep, z);

  ResolventIdentityResult r;
  r.max_deviation = (gf - gd - gf * t.cast<Complex>() * gd).cwiseAbs().maxCoeff();
  for (std::size_t i = 0; i < fv->size(); ++i)
    for (std::size_t j = 0; j < fv->size(); ++j)
      if (fv->in_depletion(fv->vertex(i)) && !fv->in_depletion(fv->vertex(j)))
        r.cross_block_max = std::max(r.cross_block_max, std::abs(gd(i, j)));
  return r;
}

namespace {

// Entry (row, col) of (H_S - z)^{-1} where S is the active subset of the dense
// operator `shifted` = H - z; row/col are positions in the full volume.
Complex restricted_entry(const Eigen::MatrixXcd& shifted, const std::vector<char>& active,
                         std::size_t row, std::size_t col) {
  std::vector<Eigen::Index> keep;
  Eigen::Index r = -1, c = -1;
  for (std::size_t i = 0; i < active.size(); ++i) {
    if (!active[i]) continue;
    if (i == row) r = static_cast<Eigen::Index>(keep.size());
    if (i == col) c = static_cast<Eigen::Index>(keep.size());
    keep.push_back(static_cast<Eigen::Index>(i));
  }
  if (r < 0 || c < 0) throw std::logic_error("restricted_entry: index outside active set");
  const auto m = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXcd sub(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) sub(i, j) = shifted(keep[i], keep[j]);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(m);
  rhs[c] = 1.0;
  const Eigen::VectorXcd u = sub.partialPivLu().solve(rhs);
  const double residual = (sub * u - rhs).norm();
  if (!(residual <= 1e-10)) throw NumericFailure("saw expansion: dense solve residual", -1, residual);
  return u[r];
}

}  // namespace

SawExpansionResult saw_expansion_check(const Graph& g, std::shared_ptr<const FiniteVolume> fv,
                                       std::span<const double> omega, double lambda, Complex z,
                                       VertexId x, VertexId y, std::uint64_t walk_budget) {
  if (!fv) throw std::invalid_argument("saw_expansion_check: null volume");
  if (x == y) throw std::invalid_argument("saw_expansion_check: requires x != y");
  if (fv->size() > 50) throw std::invalid_argument("saw_expansion_check: at most 50 vertices");
  const int l = graph_distance(g, x, y);
  if (l > 5) throw std::invalid_argument("saw_expansion_check: requires d(x,y) <= 5");

  const HamiltonianMatrix h = assemble(g, fv, omega, lambda);
  const auto n = static_cast<Eigen::Index>(fv->size());
  const Eigen::MatrixXcd shifted =
      h.dense().cast<Complex>() - z * Eigen::MatrixXcd::Identity(n, n);
  const std::size_t iy = fv->index(y);

  SawExpansionResult out;
  out.length = l;
  std::vector<char> active(fv->size(), 1);
  std::function<Complex(std::size_t, int)> expand = [&](std::size_t cur, int step) -> Complex {
    if (step == l) {
      if (++out.walks > walk_budget)
        throw BudgetExceeded("saw_expansion_check: walk budget exceeded", -1);
      return restricted_entry(shifted, active, cur, iy);
    }
    const Complex diag = restricted_entry(shifted, active, cur, cur);
    active[cur] = 0;
    Complex sum = 0.0;
    for (VertexId k : g.neighbors(fv->vertex(cur))) {
      if (!fv->contains(k)) continue;
      const std::size_t ik = fv->index(k);
      if (active[ik]) sum += expand(ik, step + 1);
    }
    active[cur] = 1;
    return diag * sum;
  };
  out.expansion = expand(fv->index(x), 0);
  out.direct = restricted_entry(shifted, active, fv->index(x), iy);
  const double scale = std::abs(out.direct);
  out.relative_deviation = std::abs(out.expansion - out.direct) / (scale > 0 ? scale : 1.0);
  return out;
}

RankOneResult rank_one_structure_check(const Graph& g, std::shared_ptr<const FiniteVolume> fv,
                                       std::span<const double> omega, double lambda, Complex z,
                                       VertexId x) {
  if (!fv) throw std::invalid_argument("rank_one_structure_check: null volume");
  const std::size_t ix = fv->index(x);
  std::vector<double> w(omega.begin(), omega.end());
  const double base = w[ix];
  const double samples[3] = {base - 0.75, base, base + 0.5};

  HamiltonianMatrix h = assemble(g, fv, w, lambda);
  ResolventSolver solver(h, z);
  Complex inv[3];
  RankOneResult r;
  for (int k = 0; k < 3; ++k) {
    h.matrix.coeffRef(static_cast<Eigen::Index>(ix), static_cast<Eigen::Index>(ix)) =
        static_cast<double>(g.degree(x)) + lambda * samples[k];
    solver.refactorize(h);
    const Complex gxx = solver.entry(x, x);
    inv[k] = 1.0 / gxx;
    if (std::abs(gxx) < 1e-300 || !std::isfinite(std::abs(inv[k]))) r.degenerate = true;
  }
  r.slope = (inv[2] - inv[0]) / (samples[2] - samples[0]);
  r.slope_deviation = std::abs(r.slope - lambda);
  const Complex predicted = inv[0] + r.slope * (samples[1] - samples[0]);
  r.affine_residual = std::abs(inv[1] - predicted) / std::abs(inv[1]);
  Complex betas[3];
  for (int k = 0; k < 3; ++k) betas[k] = samples[k] - inv[k] / lambda;
  r.beta = betas[1];
  for (int k = 0; k < 3; ++k) r.beta_spread = std::max(r.beta_spread, std::abs(betas[k] - r.beta));
  return r;
}

}  // namespace anderson
