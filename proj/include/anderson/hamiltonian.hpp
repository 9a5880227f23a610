#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "anderson/graph.hpp"

namespace anderson {

/// Uniform single-site density on [a, b].
struct UniformDensity {
  double a = -1.0;
  double b = 1.0;

  double sup_norm() const { return 1.0 / (b - a); }
  double l1_norm() const { return 1.0; }
  double pdf(double t) const { return (t >= a && t <= b) ? sup_norm() : 0.0; }
};

struct DisorderModel {
  double lambda = 1.0;
  UniformDensity density{};
  std::uint64_t master_seed = 0;

  /// Throws std::invalid_argument unless lambda > 0 and a < b.
  void validate() const;
};

/// Ordered vertex subset Gamma of a graph with an optional depletion set
/// Lambda. Shared read-only between the matrices assembled on it.
class FiniteVolume {
 public:
  FiniteVolume(const Graph& g, std::vector<VertexId> gamma);

  static FiniteVolume whole(const Graph& g);
  /// Vertices within graph distance `radius` of `center`, in vertex order.
  static FiniteVolume ball(const Graph& g, VertexId center, int radius);

  /// Copy with depletion set Lambda; throws std::invalid_argument unless
  /// Lambda is a non-empty subset of Gamma.
  FiniteVolume with_depletion(std::span<const VertexId> lambda_set) const;

  std::size_t size() const { return gamma_.size(); }
  const std::vector<VertexId>& vertices() const { return gamma_; }
  VertexId vertex(std::size_t i) const { return gamma_[i]; }
  bool contains(VertexId v) const { return v < index_.size() && index_[v] >= 0; }
  /// Dense index of v in Gamma; throws std::out_of_range if v is not in Gamma.
  std::size_t index(VertexId v) const;

  bool depleted() const { return !depletion_.empty(); }
  bool in_depletion(VertexId v) const { return depleted() && depletion_[index(v)]; }
  std::vector<VertexId> depletion_set() const;

  /// Gamma with the given vertices removed (no depletion set).
  FiniteVolume without(std::span<const VertexId> removed) const;

 private:
  std::vector<VertexId> gamma_;
  std::vector<std::int64_t> index_;  // graph vertex -> position, -1 outside
  std::vector<char> depletion_;      // per position, empty when not depleted
};

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Real symmetric finite-volume operator H_Gamma (or H_Gamma^Lambda) in the
/// basis ordered by the volume.
struct HamiltonianMatrix {
  std::shared_ptr<const FiniteVolume> volume;
  SparseMatrix matrix;
  double lambda = 0;
  bool depleted = false;

  std::size_t dimension() const { return static_cast<std::size_t>(matrix.rows()); }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix); }
};

/// i.i.d. draws omega_x for every vertex of Gamma. Each value is a pure
/// function of (master_seed, trial, graph vertex id), so the same vertex sees
/// the same value in every volume and the result does not depend on
/// evaluation order.
std::vector<double> sample_potential(const DisorderModel& m, const FiniteVolume& fv,
                                     std::uint64_t trial);

/// Uniform [0,1) variate of the counter-based stream.
double counter_uniform(std::uint64_t seed, std::uint64_t trial, std::uint64_t counter);

/// H_Gamma = P_Gamma (-Delta + lambda V) P_Gamma^*: diagonal m(x) + lambda omega_x
/// with the full-graph valence m(x), -1 on edges inside Gamma. Any depletion
/// set on the volume is ignored here.
HamiltonianMatrix assemble(const Graph& g, std::shared_ptr<const FiniteVolume> fv,
                           std::span<const double> omega, double lambda);

/// As assemble, with the hopping terms between Lambda and Gamma \ Lambda removed.
HamiltonianMatrix assemble_depleted(const Graph& g, std::shared_ptr<const FiniteVolume> fv,
                                    std::span<const double> omega, double lambda);

/// T = Delta_Gamma - Delta_Gamma^Lambda, equal to H^Lambda - H: +1 on every cut edge.
SparseMatrix hopping_difference(const HamiltonianMatrix& full, const HamiltonianMatrix& depleted);

}  // namespace anderson
