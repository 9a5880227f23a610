#include "anderson/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>

#include "anderson/errors.hpp"
#include "anderson/parallel.hpp"
#include "anderson/saw.hpp"

namespace anderson {

double averaging_constant(double s) {
  return std::pow(2.0, s) * std::pow(s, -s) / (1.0 - s);
}

Theorem1Bound theorem1_bound(double s, double lambda, double rho_sup, int d, double c_xd) {
  if (!(s > 0 && s < 1)) throw std::invalid_argument("theorem1_bound: s must lie in (0,1)");
  if (!(lambda > 0) || !(rho_sup > 0))
    throw std::invalid_argument("theorem1_bound: lambda and |rho|_inf must be positive");
  if (d < 0 || !(c_xd >= 1)) throw std::invalid_argument("theorem1_bound: need d >= 0, c >= 1");
  Theorem1Bound b;
  b.C = std::pow(lambda, -s) * std::pow(rho_sup, s) * averaging_constant(s);
  b.C_prime = std::pow(2.0, s + 1.0) * b.C;
  b.bound = b.C_prime * std::pow(b.C, d) * c_xd;
  return b;
}

double large_disorder_threshold(double s, double critical) {
  if (!(critical > 0 && critical <= 1))
    throw std::invalid_argument("large_disorder_threshold: critical parameter must be in (0,1]");
  return std::pow(averaging_constant(s) / critical, 1.0 / s);
}

std::pair<double, double> mean_and_stderr(const std::vector<double>& values) {
  const auto n = static_cast<double>(values.size());
  if (values.size() < 2) throw std::invalid_argument("mean_and_stderr: need at least 2 samples");
  double sum = 0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

Eigen::MatrixXd sample_green_magnitudes(const Graph& g, std::shared_ptr<const FiniteVolume> fv,
                                        const DisorderModel& m, Complex z, VertexId x,
                                        const std::vector<VertexId>& targets,
                                        const MonteCarloOptions& options) {
  m.validate();
  if (z.imag() == 0.0) throw std::invalid_argument("Monte Carlo: Im z must be non-zero");
  const std::size_t trials = options.trials;
  const unsigned threads = resolve_threads(options.threads);
  std::vector<std::size_t> rows;
  for (VertexId y : targets) rows.push_back(fv->index(y));
  fv->index(x);  // throws if x is outside the volume

  Eigen::MatrixXd out(static_cast<Eigen::Index>(trials), static_cast<Eigen::Index>(targets.size()));
  std::vector<std::optional<ResolventSolver>> solvers(threads);
  parallel_for(trials, threads, [&](std::size_t t, unsigned w) {
    try {
      const auto omega = sample_potential(m, *fv, t);
      const HamiltonianMatrix h = assemble(g, fv, omega, m.lambda);
      auto& solver = solvers[w];
      if (!solver) {
        solver.emplace(h, z);
      } else {
        solver->refactorize(h);
      }
      // (H - z)^{-1} is complex symmetric, so column x holds G(z; x, y) for all y.
      const Eigen::VectorXcd col = solver->column(x);
      for (std::size_t j = 0; j < rows.size(); ++j)
        out(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) =
            std::abs(col[static_cast<Eigen::Index>(rows[j])]);
    } catch (const NumericFailure& e) {
      throw NumericFailure(std::string(e.what()) + " (trial " + std::to_string(t) + ")",
                           static_cast<long>(t), e.residual());
    }
  });
  return out;
}

namespace {

MomentEstimate estimate(const Graph& g, std::shared_ptr<const FiniteVolume> fv,
                        const DisorderModel& m, const SpectralParams& sp, VertexId x, VertexId y,
                        const MonteCarloOptions& options, MomentKind kind) {
  sp.validate();
  if (options.trials < 100) throw std::invalid_argument("Monte Carlo: need at least 100 trials");
  const Eigen::MatrixXd mags = sample_green_magnitudes(g, fv, m, sp.z, x, {y}, options);
  std::vector<double> values(options.trials);
  const double im = std::abs(sp.z.imag());
  for (std::size_t t = 0; t < options.trials; ++t) {
    const double a = mags(static_cast<Eigen::Index>(t), 0);
    values[t] = kind == MomentKind::fractional ? std::pow(a, sp.s) : im * a * a;
  }
  MomentEstimate e;
  e.x = x;
  e.y = y;
  e.d = graph_distance(g, x, y);
  e.order = kind == MomentKind::fractional ? sp.s : 2.0;
  std::tie(e.mean, e.std_error) = mean_and_stderr(values);
  e.trials = options.trials;
  e.z = sp.z;
  e.clean = e.d <= g.clean_radius(x);
  return e;
}

}  // namespace

MomentEstimate fractional_moment_mc(const Graph& g, std::shared_ptr<const FiniteVolume> fv,
                                    const DisorderModel& m, const SpectralParams& sp, VertexId x,
                                    VertexId y, const MonteCarloOptions& options) {
  return estimate(g, std::move(fv), m, sp, x, y, options, MomentKind::fractional);
}

MomentEstimate second_moment_mc(const Graph& g, std::shared_ptr<const FiniteVolume> fv,
                                const DisorderModel& m, const SpectralParams& sp, VertexId x,
                                VertexId y, const MonteCarloOptions& options) {
  return estimate(g, std::move(fv), m, sp, x, y, options, MomentKind::second);
}

std::vector<BoundReport> verify_bounds(const Graph& g, std::shared_ptr<const FiniteVolume> fv,
                                       const DisorderModel& m, const SpectralParams& sp,
                                       VertexId x, int d_max, MomentKind kind,
                                       const MonteCarloOptions& options, double k) {
  sp.validate();
  m.validate();
  if (d_max < 0) throw std::invalid_argument("verify_bounds: d_max must be >= 0");
  if (options.trials < 100) throw std::invalid_argument("Monte Carlo: need at least 100 trials");
  const auto dist = g.distances_from(x);
  std::vector<VertexId> targets(d_max + 1);
  for (int d = 0; d <= d_max; ++d) {
    std::optional<VertexId> best;
    for (VertexId v : fv->vertices())
      if (dist[v] == d && (!best || v < *best)) best = v;
    if (!best)
      throw std::invalid_argument("verify_bounds: no vertex at distance " + std::to_string(d));
    targets[d] = *best;
  }
  const SawTable saws = count_saws(g, x, d_max);
  const Eigen::MatrixXd mags = sample_green_magnitudes(g, fv, m, sp.z, x, targets, options);
  const double im = std::abs(sp.z.imag());
  const double rho = m.density.sup_norm();
  const double prefactor =
      kind == MomentKind::fractional ? 1.0 : std::max(1.0, std::numbers::pi * rho);

  std::vector<BoundReport> reports;
  std::vector<double> values(options.trials);
  for (int d = 0; d <= d_max; ++d) {
    for (std::size_t t = 0; t < options.trials; ++t) {
      const double a = mags(static_cast<Eigen::Index>(t), d);
      values[t] = kind == MomentKind::fractional ? std::pow(a, sp.s) : im * a * a;
    }
    BoundReport r;
    r.estimate.x = x;
    r.estimate.y = targets[d];
    r.estimate.d = d;
    r.estimate.order = kind == MomentKind::fractional ? sp.s : 2.0;
    std::tie(r.estimate.mean, r.estimate.std_error) = mean_and_stderr(values);
    r.estimate.trials = options.trials;
    r.estimate.z = sp.z;
    r.estimate.clean = saws.clean(d);
    const Theorem1Bound b =
        theorem1_bound(sp.s, m.lambda, rho, d, static_cast<double>(saws.counts[d]));
    r.C = b.C;
    r.C_prime = b.C_prime;
    r.d = d;
    r.c_xd = saws.counts[d];
    r.k = k;
    r.bound_value = prefactor * b.bound;
    r.passed = r.estimate.mean + k * r.estimate.std_error <= r.bound_value;
    reports.push_back(r);
  }
  return reports;
}

}  // namespace anderson
