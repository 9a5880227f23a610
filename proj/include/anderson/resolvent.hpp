#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "anderson/graph.hpp"
#include "anderson/hamiltonian.hpp"

namespace anderson {

using Complex = std::complex<double>;
using ComplexSparse = Eigen::SparseMatrix<Complex>;

struct SpectralParams {
  Complex z{0.0, 1.0};
  double s = 0.5;

  /// Throws std::invalid_argument unless Im z != 0 and 0 < s < 1.
  void validate() const;
};

/// Direct sparse LU of H - z. The symbolic analysis is kept across
/// refactorize() calls on matrices with the same sparsity pattern, so one
/// solver serves every disorder trial of a volume. Every solve is followed by
/// a residual check.
class ResolventSolver {
 public:
  ResolventSolver(const HamiltonianMatrix& h, Complex z, double residual_tolerance = 1e-10);

  /// New numeric factorization; the pattern of `h` must match the first one.
  void refactorize(const HamiltonianMatrix& h);

  /// u = (H - z)^{-1} rhs. Throws NumericFailure when the relative residual
  /// exceeds the tolerance.
  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;

  /// Column G(z; ., y) indexed by volume position.
  Eigen::VectorXcd column(VertexId y) const;

  Complex entry(VertexId x, VertexId y) const;

  Complex z() const { return z_; }
  const FiniteVolume& volume() const { return *volume_; }

 private:
  void load(const HamiltonianMatrix& h);

  Complex z_;
  double tolerance_;
  std::shared_ptr<const FiniteVolume> volume_;
  ComplexSparse shifted_;
  Eigen::SparseLU<ComplexSparse, Eigen::COLAMDOrdering<int>> lu_;
};

/// G(z; x, y) = <delta_x, (H - z)^{-1} delta_y>.
Complex green_entry(const HamiltonianMatrix& h, Complex z, VertexId x, VertexId y);

/// (H - z)^{-1} as a dense matrix via column solves; for small volumes.
Eigen::MatrixXcd dense_resolvent(const HamiltonianMatrix& h, Complex z);

struct ResolventIdentityResult {
  double max_deviation = 0;     // max |G - G^Lambda - G T G^Lambda|
  double cross_block_max = 0;   // max |G^Lambda(x,y)|, x in Lambda, y outside
};

/// Checks G_Gamma = G^Lambda + G_Gamma T G^Lambda entrywise. The volume must
/// carry a depletion set and have at most 200 vertices.
ResolventIdentityResult resolvent_identity_check(const Graph& g,
                                                 std::shared_ptr<const FiniteVolume> fv,
                                                 std::span<const double> omega, double lambda,
                                                 Complex z);

struct SawExpansionResult {
  Complex direct{};
  Complex expansion{};
  double relative_deviation = 0;
  std::uint64_t walks = 0;  // self-avoiding walks of length d(x,y) inside Gamma
  int length = 0;
};

/// Iterates the single-site removal identity d(x,y) times:
///   G_Gamma(x,y) = sum over walks w of length l = d(x,y) in Gamma of
///     prod_{i<l} G_{Gamma_i}(w_i, w_i) * G_{Gamma_l}(w_l, y),
/// with Gamma_i = Gamma \ {w_0, ..., w_{i-1}}, and compares with a direct
/// solve. Requires x != y, d(x,y) <= 5 and |Gamma| <= 50.
SawExpansionResult saw_expansion_check(const Graph& g, std::shared_ptr<const FiniteVolume> fv,
                                       std::span<const double> omega, double lambda, Complex z,
                                       VertexId x, VertexId y,
                                       std::uint64_t walk_budget = 1'000'000);

struct RankOneResult {
  Complex slope{};            // fitted d(1/G)/d(omega_x)
  double slope_deviation = 0; // |slope - lambda|
  double affine_residual = 0; // middle-point miss of the affine fit, relative to |1/G|
  Complex beta{};             // G(z;x,x) = lambda^{-1} / (omega_x - beta)
  double beta_spread = 0;     // variation of beta across the three omega_x values
  bool degenerate = false;    // G numerically zero at some sample
};

/// Re-solves G(z;x,x) at three values of omega_x (others fixed) and fits
/// 1/G as an affine function of omega_x.
RankOneResult rank_one_structure_check(const Graph& g, std::shared_ptr<const FiniteVolume> fv,
                                       std::span<const double> omega, double lambda, Complex z,
                                       VertexId x);

}  // namespace anderson
