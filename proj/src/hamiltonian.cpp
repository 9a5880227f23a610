#include "anderson/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace anderson {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

HamiltonianMatrix build(const Graph& g, std::shared_ptr<const FiniteVolume> fv,
                        std::span<const double> omega, double lambda, bool deplete) {
  if (!fv) throw std::invalid_argument("assemble: null volume");
  if (omega.size() != fv->size())
    throw std::invalid_argument("assemble: omega has " + std::to_string(omega.size()) +
                                " entries for a volume of " + std::to_string(fv->size()));
  if (deplete && !fv->depleted())
    throw std::invalid_argument("assemble_depleted: volume has no depletion set");

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(fv->size() * 5);
  for (std::size_t i = 0; i < fv->size(); ++i) {
    const VertexId x = fv->vertex(i);
    entries.emplace_back(i, i, static_cast<double>(g.degree(x)) + lambda * omega[i]);
    const bool x_in = deplete && fv->in_depletion(x);
    for (VertexId y : g.neighbors(x)) {
      if (!fv->contains(y)) continue;
      if (deplete && fv->in_depletion(y) != x_in) continue;
      entries.emplace_back(i, fv->index(y), -1.0);
    }
  }
  HamiltonianMatrix h;
  h.matrix.resize(fv->size(), fv->size());
  h.matrix.setFromTriplets(entries.begin(), entries.end());
  h.matrix.makeCompressed();
  h.volume = std::move(fv);
  h.lambda = lambda;
  h.depleted = deplete;
  return h;
}

}  // namespace

void DisorderModel::validate() const {
  if (!(lambda > 0)) throw std::invalid_argument("disorder: lambda must be positive");
  if (!(density.a < density.b)) throw std::invalid_argument("disorder: density needs a < b");
}

FiniteVolume::FiniteVolume(const Graph& g, std::vector<VertexId> gamma)
    : gamma_(std::move(gamma)), index_(g.size(), -1) {
  if (gamma_.empty()) throw std::invalid_argument("finite volume must be non-empty");
  for (std::size_t i = 0; i < gamma_.size(); ++i) {
    const VertexId v = gamma_[i];
    if (v >= g.size()) throw std::out_of_range("finite volume: vertex out of range");
    if (index_[v] >= 0) throw std::invalid_argument("finite volume: repeated vertex");
    index_[v] = static_cast<std::int64_t>(i);
  }
}

FiniteVolume FiniteVolume::whole(const Graph& g) {
  std::vector<VertexId> all(g.size());
  for (VertexId v = 0; v < g.size(); ++v) all[v] = v;
  return FiniteVolume(g, std::move(all));
}

FiniteVolume FiniteVolume::ball(const Graph& g, VertexId center, int radius) {
  const auto dist = g.distances_from(center);
  std::vector<VertexId> inside;
  for (VertexId v = 0; v < g.size(); ++v)
    if (dist[v] <= radius) inside.push_back(v);
  return FiniteVolume(g, std::move(inside));
}

std::size_t FiniteVolume::index(VertexId v) const {
  if (!contains(v)) throw std::out_of_range("vertex " + std::to_string(v) + " is not in the volume");
  return static_cast<std::size_t>(index_[v]);
}

FiniteVolume FiniteVolume::with_depletion(std::span<const VertexId> lambda_set) const {
  if (lambda_set.empty()) throw std::invalid_argument("depletion set must be non-empty");
  FiniteVolume out = *this;
  out.depletion_.assign(gamma_.size(), 0);
  for (VertexId v : lambda_set) {
    if (!contains(v))
      throw std::invalid_argument("depletion set is not a subset of the volume (vertex " +
                                  std::to_string(v) + ")");
    out.depletion_[index(v)] = 1;
  }
  return out;
}

std::vector<VertexId> FiniteVolume::depletion_set() const {
  std::vector<VertexId> out;
  for (std::size_t i = 0; i < depletion_.size(); ++i)
    if (depletion_[i]) out.push_back(gamma_[i]);
  return out;
}

FiniteVolume FiniteVolume::without(std::span<const VertexId> removed) const {
  FiniteVolume out = *this;
  out.depletion_.clear();
  std::vector<char> drop(gamma_.size(), 0);
  for (VertexId v : removed)
    if (contains(v)) drop[index(v)] = 1;
  out.gamma_.clear();
  std::fill(out.index_.begin(), out.index_.end(), -1);
  for (std::size_t i = 0; i < gamma_.size(); ++i) {
    if (drop[i]) continue;
    out.index_[gamma_[i]] = static_cast<std::int64_t>(out.gamma_.size());
    out.gamma_.push_back(gamma_[i]);
  }
  if (out.gamma_.empty()) throw std::invalid_argument("finite volume: nothing left after removal");
  return out;
}

double counter_uniform(std::uint64_t seed, std::uint64_t trial, std::uint64_t counter) {
  std::uint64_t h = mix64(seed + kGolden);
  h = mix64(h ^ (trial * kGolden + 0x632be59bd9b4e019ULL));
  h = mix64(h ^ (counter * kGolden + 0x8cb92ba72f3d8dd7ULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::vector<double> sample_potential(const DisorderModel& m, const FiniteVolume& fv,
                                     std::uint64_t trial) {
  const double a = m.density.a, width = m.density.b - m.density.a;
  std::vector<double> omega(fv.size());
  for (std::size_t i = 0; i < fv.size(); ++i)
    omega[i] = a + width * counter_uniform(m.master_seed, trial, fv.vertex(i));
  return omega;
}

HamiltonianMatrix assemble(const Graph& g, std::shared_ptr<const FiniteVolume> fv,
                           std::span<const double> omega, double lambda) {
  return build(g, std::move(fv), omega, lambda, false);
}

HamiltonianMatrix assemble_depleted(const Graph& g, std::shared_ptr<const FiniteVolume> fv,
                                    std::span<const double> omega, double lambda) {
  return build(g, std::move(fv), omega, lambda, true);
}

SparseMatrix hopping_difference(const HamiltonianMatrix& full, const HamiltonianMatrix& depleted) {
  if (!full.volume || !depleted.volume ||
      full.volume->vertices() != depleted.volume->vertices())
    throw std::invalid_argument("hopping_difference: mismatched volumes");
  if ((Eigen::VectorXd(full.matrix.diagonal()) - Eigen::VectorXd(depleted.matrix.diagonal()))
          .cwiseAbs()
          .maxCoeff() != 0.0)
    throw std::invalid_argument("hopping_difference: matrices use different potentials");
  SparseMatrix t = depleted.matrix - full.matrix;
  t.prune(0.0);
  return t;
}

}  // namespace anderson
