#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "anderson/graph.hpp"
#include "anderson/hamiltonian.hpp"
#include "anderson/resolvent.hpp"

namespace anderson {

/// Constants of the fractional-moment bound
///   E|G(z;x,y)|^s <= C' C^d c_x(d),
///   C = lambda^{-s} |rho|_inf^s 2^s s^{-s} / (1 - s),  C' = 2^{s+1} C.
struct Theorem1Bound {
  double C = 0;
  double C_prime = 0;
  double bound = 0;  // C' C^d c_x(d)
};

Theorem1Bound theorem1_bound(double s, double lambda, double rho_sup, int d, double c_xd);

/// Single-site spectral-averaging constant 2^s s^{-s} / (1 - s).
double averaging_constant(double s);

/// Smallest lambda / |rho|_inf for which the localization theorems apply with
/// critical geometric parameter `critical` (alpha* or beta*). Above it C < critical.
double large_disorder_threshold(double s, double critical);

struct MomentEstimate {
  VertexId x = 0;
  VertexId y = 0;
  int d = 0;
  double order = 0;   // s, or 2 for the second moment
  double mean = 0;
  double std_error = 0;
  std::size_t trials = 0;
  Complex z{};
  bool clean = true;  // d(x,y) within the boundary-clean radius of x
};

enum class MomentKind { fractional, second };

struct BoundReport {
  MomentEstimate estimate;
  double bound_value = 0;
  double C = 0;
  double C_prime = 0;
  int d = 0;
  std::uint64_t c_xd = 0;
  double k = 2.33;
  bool passed = false;  // mean + k * stderr <= bound_value
};

struct MonteCarloOptions {
  std::size_t trials = 1000;
  unsigned threads = 1;  // 0 = all cores
};

/// |G(z; x, y_j)| for every trial (rows) and target (columns), one sparse
/// solve per trial. Deterministic in (master_seed, trial).
Eigen::MatrixXd sample_green_magnitudes(const Graph& g, std::shared_ptr<const FiniteVolume> fv,
                                        const DisorderModel& m, Complex z, VertexId x,
                                        const std::vector<VertexId>& targets,
                                        const MonteCarloOptions& options);

/// Mean and standard error of |G(z;x,y)|^s over independent disorder trials.
MomentEstimate fractional_moment_mc(const Graph& g, std::shared_ptr<const FiniteVolume> fv,
                                    const DisorderModel& m, const SpectralParams& sp, VertexId x,
                                    VertexId y, const MonteCarloOptions& options);

/// Mean and standard error of |Im z| |G(z;x,y)|^2.
MomentEstimate second_moment_mc(const Graph& g, std::shared_ptr<const FiniteVolume> fv,
                                const DisorderModel& m, const SpectralParams& sp, VertexId x,
                                VertexId y, const MonteCarloOptions& options);

/// Sample mean and standard error, summed in index order.
std::pair<double, double> mean_and_stderr(const std::vector<double>& values);

/// One-sided bound verification for x and one target per distance
/// d = 0..d_max (the lowest-numbered vertex of the volume at that distance).
/// Fractional: E|G|^s against C' C^d c_x(d). Second: |Im z| E|G|^2 against
/// max{1, pi |rho|_inf} C' C^d c_x(d).
std::vector<BoundReport> verify_bounds(const Graph& g, std::shared_ptr<const FiniteVolume> fv,
                                       const DisorderModel& m, const SpectralParams& sp,
                                       VertexId x, int d_max, MomentKind kind,
                                       const MonteCarloOptions& options, double k = 2.33);

struct SpectralAveragingResult {
  double lhs = 0;  // integral of |xi - beta|^{-s} g(xi)
  double rhs = 0;  // |g|_inf^s |g|_1^{1-s} 2^s s^{-s} / (1 - s)
};

/// Quadrature of the left side for a uniform density; the integrand is split
/// at Re beta so the integrable singularity sits at an endpoint.
SpectralAveragingResult spectral_averaging_check(const UniformDensity& density, double s,
                                                 Complex beta);

}  // namespace anderson
