#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "anderson/dynamics.hpp"
#include "anderson/errors.hpp"

namespace anderson {

namespace {

constexpr double kPi = std::numbers::pi;

// Adaptive Gauss-Kronrod over consecutive breakpoints; throws when the summed
// error estimate exceeds rel * max(1, |total|).
template <class F>
double integrate_pieces(F&& f, const std::vector<double>& points, double rel, const char* what) {
  double total = 0, error = 0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i + 1] > points[i])) continue;
    // Each piece is mapped onto [0,1]: Boost reports the error estimate in
    // the units of its internal [-1,1] variable, which overstates it by the
    // inverse half-width on short pieces.
    const double lo = points[i], width = points[i + 1] - points[i];
    auto unit = [&](double t) { return width * f(lo + width * t); };
    double err = 0;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(unit, 0.0, 1.0, 12,
                                                                           1e-12, &err);
    error += err;
  }
  if (!(error <= rel * std::max(1.0, std::abs(total))))
    throw NumericFailure(std::string(what) + ": quadrature error " + std::to_string(error), -1,
                         error);
  return total;
}

// Breakpoints on [a,b] that resolve Lorentzian peaks of width eps at every
// eigenvalue: E_j and E_j +- eps 10^k for k = -1, 0, 1, ... up to the interval size.
std::vector<double> energy_breakpoints(const EigenDecomposition& ed, double a, double b,
                                       double eps) {
  std::vector<double> pts{a, b};
  const double span = b - a;
  for (Eigen::Index j = 0; j < ed.eigenvalues.size(); ++j) {
    const double e = ed.eigenvalues[j];
    pts.push_back(e);
    for (double h = 0.1 * eps; h < span; h *= 10) {
      pts.push_back(e - h);
      pts.push_back(e + h);
    }
  }
  std::vector<double> kept;
  for (double x : pts)
    if (x >= a && x <= b) kept.push_back(x);
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  return kept;
}

Eigen::MatrixXd dense_of(const EigenDecomposition& ed) {
  return ed.eigenvectors * ed.eigenvalues.asDiagonal() * ed.eigenvectors.transpose();
}

// (H - w)^{-1} psi by dense LU with a residual check.
Eigen::VectorXcd shifted_solve(const Eigen::MatrixXd& h, Complex w, const Eigen::VectorXcd& psi) {
  const auto n = h.rows();
  const Eigen::MatrixXcd m = h.cast<Complex>() - w * Eigen::MatrixXcd::Identity(n, n);
  const Eigen::VectorXcd u = m.partialPivLu().solve(psi);
  const double residual = (m * u - psi).norm() / std::max(psi.norm(), 1e-300);
  if (!(residual <= 1e-9)) throw NumericFailure("dense resolvent solve residual", -1, residual);
  return u;
}

}  // namespace

PiecewiseFunction PiecewiseFunction::step(double lo) {
  return {[lo](double e) { return e >= lo ? 1.0 : 0.0; }, {lo}};
}

PiecewiseFunction PiecewiseFunction::constant(double c) {
  return {[c](double) { return c; }, {}};
}

std::vector<ApproxIdentityPoint> approx_identity_check(const PiecewiseFunction& f, double a,
                                                       const std::vector<double>& epsilons) {
  if (!f.f) throw std::invalid_argument("approx_identity_check: empty function");
  // One-sided limits, probed just off a.
  const double probe = 1e-9 * std::max(1.0, std::abs(a));
  const double limit = 0.5 * (f.f(a - probe) + f.f(a + probe));
  std::vector<ApproxIdentityPoint> out;
  for (double eps : epsilons) {
    if (!(eps > 0)) throw std::invalid_argument("approx_identity_check: eps must be positive");
    // E = a + eps tan(theta) turns the kernel into d(theta)/pi on (-pi/2, pi/2).
    std::vector<double> cuts{-kPi / 2, kPi / 2};
    for (double j : f.jumps) cuts.push_back(std::atan((j - a) / eps));
    // The far tails |E - a| >> eps are squeezed against +-pi/2; cut at
    // decades of |E - a| / eps so a smooth f stays resolved there.
    for (double h = 1; h < 1e16; h *= 10) {
      cuts.push_back(std::atan(h));
      cuts.push_back(-std::atan(h));
    }
    std::sort(cuts.begin(), cuts.end());
    auto g = [&](double theta) { return f.f(a + eps * std::tan(theta)) / kPi; };
    ApproxIdentityPoint p;
    p.epsilon = eps;
    p.value = integrate_pieces(g, cuts, 1e-10, "approx_identity_check");
    p.limit = limit;
    p.error = std::abs(p.value - limit);
    out.push_back(p);
  }
  return out;
}

std::vector<StonePoint> stone_variant_check(const EigenDecomposition& ed,
                                            const std::function<double(double)>& f, double a,
                                            double b, const Eigen::VectorXcd& psi,
                                            const std::vector<double>& epsilons) {
  if (!(a < b)) throw std::invalid_argument("stone_variant_check: need a < b");
  if (psi.size() != static_cast<Eigen::Index>(ed.size()))
    throw std::invalid_argument("stone_variant_check: state has the wrong dimension");
  const Eigen::MatrixXd h = dense_of(ed);

  const Eigen::VectorXcd open = projected_coefficients(ed, a, b, false, psi);
  const Eigen::VectorXcd closed = projected_coefficients(ed, a, b, true, psi);
  double target = 0;
  for (Eigen::Index j = 0; j < open.size(); ++j)
    target += 0.5 * f(ed.eigenvalues[j]) * (std::norm(open[j]) + std::norm(closed[j]));

  std::vector<StonePoint> out;
  for (double eps : epsilons) {
    if (!(eps > 0)) throw std::invalid_argument("stone_variant_check: eps must be positive");
    auto integrand = [&](double e) {
      return eps / kPi * f(e) * shifted_solve(h, Complex(e, -eps), psi).squaredNorm();
    };
    StonePoint p;
    p.epsilon = eps;
    p.lhs = integrate_pieces(integrand, energy_breakpoints(ed, a, b, eps), 1e-9,
                             "stone_variant_check");
    p.target = target;
    p.error = std::abs(p.lhs - target);
    out.push_back(p);
  }
  return out;
}

std::vector<GrafPoint> graf_inequality_check(const EigenDecomposition& ed,
                                             const Eigen::MatrixXd& projection, double a,
                                             double b, const Eigen::VectorXcd& psi,
                                             const std::vector<double>& epsilons,
                                             double time_horizon, double tolerance) {
  if (!(a < b)) throw std::invalid_argument("graf_inequality_check: need a < b");
  const auto n = static_cast<Eigen::Index>(ed.size());
  if (psi.size() != n || projection.rows() != n || projection.cols() != n)
    throw std::invalid_argument("graf_inequality_check: dimension mismatch");
  if ((projection * projection - projection).cwiseAbs().maxCoeff() > 1e-9 ||
      (projection - projection.transpose()).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("graf_inequality_check: P is not an orthogonal projection");

  const Eigen::MatrixXd h = dense_of(ed);
  const Eigen::VectorXcd c = projected_coefficients(ed, a, b, false, psi);
  const Eigen::MatrixXcd pv = (projection * ed.eigenvectors).cast<Complex>();
  double lo = ed.eigenvalues.maxCoeff(), hi = ed.eigenvalues.minCoeff();
  for (Eigen::Index j = 0; j < n; ++j)
    if (c[j] != Complex(0)) {
      lo = std::min(lo, ed.eigenvalues[j]);
      hi = std::max(hi, ed.eigenvalues[j]);
    }
  const double spread = std::max(hi - lo, 0.0);

  std::vector<GrafPoint> out;
  for (double eps : epsilons) {
    if (!(eps > 0)) throw std::invalid_argument("graf_inequality_check: eps must be positive");
    GrafPoint p;
    p.epsilon = eps;
    p.horizon = time_horizon > 0 ? time_horizon : 20.0 / eps;

    // Left side: 20-point Gauss-Legendre panels no longer than a quarter of
    // the fastest beat period 2 pi / spread, nor than the decay scale 1/(2 eps).
    const double width = std::min(0.5 * kPi / std::max(spread, 1e-6), 0.5 / eps);
    const auto panels = static_cast<std::size_t>(std::ceil(p.horizon / width));
    const double step = p.horizon / static_cast<double>(panels);
    Eigen::VectorXcd phase(n);
    auto g = [&](double s) {
      for (Eigen::Index j = 0; j < n; ++j) phase[j] = c[j] * std::polar(1.0, -ed.eigenvalues[j] * s);
      return 2 * eps * std::exp(-2 * eps * s) * (pv * phase).squaredNorm();
    };
    double lhs = 0;
    for (std::size_t k = 0; k < panels; ++k)
      lhs += boost::math::quadrature::gauss<double, 20>::integrate(
          g, step * static_cast<double>(k), step * static_cast<double>(k + 1));
    p.lhs = lhs;
    p.lhs_tail = std::exp(-2 * eps * p.horizon) * c.squaredNorm();

    // Right side: energy quadrature of the resolvent applied to the full psi.
    auto integrand = [&](double e) {
      return eps / kPi * (projection * shifted_solve(h, Complex(e, eps), psi)).squaredNorm();
    };
    p.rhs = integrate_pieces(integrand, energy_breakpoints(ed, a, b, eps), 1e-9,
                             "graf_inequality_check");
    p.holds = p.lhs <= p.rhs + tolerance;
    out.push_back(p);
  }
  return out;
}

}  // namespace anderson

namespace anderson {

GrafInstance random_graf_instance(int n, double lambda, std::uint64_t seed, std::uint64_t index) {
  if (n < 4) throw std::invalid_argument("random_graf_instance: need n >= 4");
  GrafInstance inst;
  inst.h = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double w = 2 * counter_uniform(seed, index, static_cast<std::uint64_t>(i)) - 1;
    inst.h(i, i) = 2 + lambda * w;
    if (i + 1 < n) inst.h(i, i + 1) = inst.h(i + 1, i) = -1;
  }
  inst.projection = Eigen::MatrixXd::Zero(n, n);
  for (int i = n / 2; i < n; ++i) inst.projection(i, i) = 1;

  // Gaussian entries by Box-Muller on the same counter stream.
  inst.psi.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::uint64_t>(n + 2 * i);
    const double u = 1 - counter_uniform(seed, index, k);
    const double v = counter_uniform(seed, index, k + 1);
    inst.psi[i] = std::sqrt(-2 * std::log(u)) * std::cos(2 * kPi * v);
  }
  inst.psi /= inst.psi.norm();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(inst.h, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd e = solver.eigenvalues();
  int first = 0, second = 1;
  auto gap = [&](int j) { return e[j + 1] - e[j]; };
  if (gap(second) > gap(first)) std::swap(first, second);
  for (int j = 2; j + 1 < n; ++j) {
    if (gap(j) > gap(first)) {
      second = first;
      first = j;
    } else if (gap(j) > gap(second)) {
      second = j;
    }
  }
  const int lo = std::min(first, second), hi = std::max(first, second);
  inst.a = 0.5 * (e[lo] + e[lo + 1]);
  inst.b = 0.5 * (e[hi] + e[hi + 1]);
  return inst;
}

}  // namespace anderson
