#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "anderson/graph.hpp"
#include "anderson/hamiltonian.hpp"
#include "anderson/resolvent.hpp"

namespace anderson {

/// Full symmetric eigendecomposition H = V diag(E) V^T with ascending E.
struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;               // orthonormal columns
  std::shared_ptr<const FiniteVolume> volume; // null for a bare matrix
  double operator_norm = 0;                   // max |E_j|
  double max_residual = 0;                    // max_j |H v_j - E_j v_j|
  double orthonormality_error = 0;            // max |V^T V - I|

  std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

/// Dense diagonalization for |Gamma| <= 3000. Throws NumericFailure on
/// solver failure, a residual above 1e-8 |H|, or orthonormality worse than 1e-9.
EigenDecomposition eig(const HamiltonianMatrix& h);
EigenDecomposition eig(const Eigen::MatrixXd& h);

/// Sum of v_j v_j^T over E_j in (a,b), or [a,b] when `closed`. Eigenvalues
/// within 1e-12 max(1,|H|) of an endpoint count as lying on it.
Eigen::MatrixXd spectral_projection(const EigenDecomposition& ed, double a, double b,
                                    bool closed);

/// Eigenbasis coefficients <v_j, psi> with the projection onto (a,b) or [a,b] applied.
Eigen::VectorXcd projected_coefficients(const EigenDecomposition& ed, double a, double b,
                                        bool closed, const Eigen::VectorXcd& psi);

/// e^{-itH} psi.
Eigen::VectorXcd evolve(const EigenDecomposition& ed, const Eigen::VectorXcd& psi, double t);

/// || |X_o|^p psi || = (sum_x d(o,x)^{2p} |psi(x)|^2)^{1/2}, psi in volume order.
/// d^0 is taken as 1, so p = 0 gives ||psi||.
double position_moment(const Graph& g, const FiniteVolume& fv, VertexId o, double p,
                       const Eigen::VectorXcd& psi);

/// Vertices of the volume that touch its edge: a graph neighbor outside the
/// volume, an incomplete vertex, or (on finite graphs) a vertex of reduced degree.
std::vector<VertexId> volume_boundary(const Graph& g, const FiniteVolume& fv);

/// n log-spaced points in [t_min, t_max].
std::vector<double> log_time_grid(double t_min = 0.1, double t_max = 200.0, std::size_t n = 64);

struct DynamicsReport {
  std::size_t trial = 0;
  VertexId o = 0;
  double p = 0;
  double a = 0, b = 0;
  std::vector<double> times;
  std::vector<double> moments;   // || |X_o|^p e^{-itH} P_(a,b) psi || per time
  double supremum = 0;           // maximum over the grid
  double boundary_mass = 0;      // largest mass within 5 sites of the boundary
  bool boundary_flag = false;    // boundary_mass > 1e-6
  double norm_error = 0;         // max | ||psi_t|| - ||P psi|| |
};

struct DynamicsOptions {
  unsigned threads = 1;
  int boundary_band = 5;
  double boundary_threshold = 1e-6;
};

/// One exact diagonalization per disorder trial. psi must be supported
/// within half the distance from o to the volume boundary.
std::vector<DynamicsReport> dynamical_scan(const Graph& g, std::shared_ptr<const FiniteVolume> fv,
                                           const DisorderModel& m, double a, double b,
                                           VertexId o, double p, const Eigen::VectorXcd& psi,
                                           const std::vector<double>& times, std::size_t trials,
                                           const DynamicsOptions& options = {});

double median(std::vector<double> values);

// ---------------------------------------------------------------------------
// Quadrature checks of the approximate-identity and Stone-type formulas.

/// Bounded function with finitely many jump points listed in `jumps`.
struct PiecewiseFunction {
  std::function<double(double)> f;
  std::vector<double> jumps;
  /// Indicator of [lo, inf).
  static PiecewiseFunction step(double lo);
  static PiecewiseFunction constant(double c);
};

struct ApproxIdentityPoint {
  double epsilon = 0;
  double value = 0;   // (eps/pi) int f(E) / ((a-E)^2 + eps^2) dE
  double limit = 0;   // (f(a-) + f(a+)) / 2
  double error = 0;   // |value - limit|
};

/// Quadrature after E = a + eps tan(theta), split at the images of the jumps.
std::vector<ApproxIdentityPoint> approx_identity_check(const PiecewiseFunction& f, double a,
                                                       const std::vector<double>& epsilons);

struct StonePoint {
  double epsilon = 0;
  double lhs = 0;     // (eps/pi) int_a^b f(E) ||(H - E + i eps)^{-1} psi||^2 dE
  double target = 0;  // <psi, f(H) (P_(a,b) + P_[a,b]) psi> / 2
  double error = 0;
};

/// Energy quadrature with one dense solve per node; the target comes from
/// the eigendecomposition.
std::vector<StonePoint> stone_variant_check(const EigenDecomposition& ed,
                                            const std::function<double(double)>& f, double a,
                                            double b, const Eigen::VectorXcd& psi,
                                            const std::vector<double>& epsilons);

struct GrafPoint {
  double epsilon = 0;
  double horizon = 0;
  double lhs = 0;        // 2 eps int_0^T e^{-2 eps s} ||P e^{-iHs} P_(a,b) psi||^2 ds
  double lhs_tail = 0;   // bound on the omitted part beyond T
  double rhs = 0;        // (eps/pi) int_a^b ||P (H - E - i eps)^{-1} psi||^2 dE
  bool holds = false;    // lhs <= rhs + tolerance
};

/// Time quadrature on the left, energy quadrature on the right. A horizon
/// <= 0 selects T = 20 / eps, which leaves a tail below e^{-40} ||psi||^2.
std::vector<GrafPoint> graf_inequality_check(const EigenDecomposition& ed,
                                             const Eigen::MatrixXd& projection, double a,
                                             double b, const Eigen::VectorXcd& psi,
                                             const std::vector<double>& epsilons,
                                             double time_horizon = 0, double tolerance = 1e-3);

}  // namespace anderson

namespace anderson {

/// Random test problem for the Graf-type inequality: an n-site Anderson
/// chain with potential strength lambda, P the projection onto sites
/// n/2..n-1, a unit random vector psi, and (a,b) with both endpoints at the
/// midpoints of the two widest spectral gaps.
struct GrafInstance {
  Eigen::MatrixXd h;
  Eigen::MatrixXd projection;
  Eigen::VectorXcd psi;
  double a = 0, b = 0;
};

GrafInstance random_graf_instance(int n, double lambda, std::uint64_t seed, std::uint64_t index);

}  // namespace anderson
