#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "anderson/errors.hpp"
#include "anderson/saw.hpp"

namespace anderson {

namespace {

constexpr std::uint64_t kBudgetChunk = 4096;

// Counts walks of length 1..n_max starting with the step origin -> first.
class BranchEnumerator {
 public:
  BranchEnumerator(const Graph& g, int n_max, std::atomic<std::uint64_t>& spent,
                   std::uint64_t budget)
      : g_(g), n_max_(n_max), visited_(g.size(), 0), counts_(n_max + 1, 0),
        spent_(spent), budget_(budget) {}

  // Returns false once the shared budget is exhausted.
  bool run(VertexId origin, VertexId first) {
    visited_[origin] = 1;
    if (!step()) return false;
    counts_[1] += 1;
    if (n_max_ == 1) {
      visited_[origin] = 0;
      return true;
    }
    struct Frame {
      VertexId vertex;
      std::size_t next;
    };
    std::vector<Frame> stack;
    stack.reserve(n_max_);
    visited_[first] = 1;
    stack.push_back({first, 0});
    bool ok = true;
    while (!stack.empty() && ok) {
      Frame& top = stack.back();
      const auto nb = g_.neighbors(top.vertex);
      if (top.next == nb.size()) {
        visited_[top.vertex] = 0;
        stack.pop_back();
        continue;
      }
      const VertexId v = nb[top.next++];
      if (visited_[v]) continue;
      if (!step()) {
        ok = false;
        break;
      }
      const int depth = static_cast<int>(stack.size()) + 1;
      ++counts_[depth];
      if (depth < n_max_) {
        visited_[v] = 1;
        stack.push_back({v, 0});
      }
    }
    for (const Frame& f : stack) visited_[f.vertex] = 0;
    visited_[origin] = 0;
    return ok;
  }

  bool finish() { return flush(); }
  const std::vector<std::uint64_t>& counts() const { return counts_; }

 private:
  bool step() {
    if (++local_ < kBudgetChunk) return true;
    return flush();
  }
  bool flush() {
    const std::uint64_t total = spent_.fetch_add(local_) + local_;
    local_ = 0;
    return total <= budget_;
  }

  const Graph& g_;
  int n_max_;
  std::vector<char> visited_;
  std::vector<std::uint64_t> counts_;
  std::atomic<std::uint64_t>& spent_;
  std::uint64_t budget_;
  std::uint64_t local_ = 0;
};

// Returns false when the budget ran out before all lengths <= n_max were counted.
bool enumerate(const Graph& g, VertexId x, int n_max, const SawOptions& options,
               std::vector<std::uint64_t>& counts) {
  counts.assign(n_max + 1, 0);
  counts[0] = 1;
  if (n_max == 0) return true;
  const auto first_steps = g.neighbors(x);
  std::atomic<std::uint64_t> spent{0};
  const unsigned workers =
      std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(first_steps.size())));

  std::vector<BranchEnumerator> enumerators;
  enumerators.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) enumerators.emplace_back(g, n_max, spent, options.budget);
  std::vector<char> ok(workers, 1);

  const auto work = [&](unsigned w) {
    for (std::size_t b = w; b < first_steps.size(); b += workers) {
      if (!enumerators[w].run(x, first_steps[b])) {
        ok[w] = 0;
        return;
      }
    }
    if (!enumerators[w].finish()) ok[w] = 0;
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  if (std::find(ok.begin(), ok.end(), 0) != ok.end()) return false;
  for (const auto& e : enumerators)
    for (int n = 1; n <= n_max; ++n) counts[n] += e.counts()[n];
  return true;
}

}  // namespace

SawTable count_saws(const Graph& g, VertexId x, int n_max, const SawOptions& options) {
  if (n_max < 0) throw std::invalid_argument("count_saws: n_max must be >= 0");
  if (x >= g.size()) throw std::out_of_range("count_saws: origin out of range");
  SawTable table;
  table.origin = x;
  table.clean_radius = std::min(n_max, g.clean_radius(x));
  if (enumerate(g, x, n_max, options, table.counts)) return table;

  // Out of budget: find the last length that fits on its own.
  long last = 0;
  std::vector<std::uint64_t> scratch;
  for (int n = 1; n < n_max; ++n) {
    if (!enumerate(g, x, n, options, scratch)) break;
    last = n;
  }
  throw BudgetExceeded("count_saws: budget of " + std::to_string(options.budget) +
                           " walk extensions exceeded; last completed length " +
                           std::to_string(last),
                       last);
}

std::vector<ConnectivePoint> connective_estimate(const SawTable& table) {
  const int top = std::min(table.clean_radius, table.n_max());
  if (top < 2) throw std::invalid_argument("connective_estimate: need clean counts up to n >= 2");
  std::vector<ConnectivePoint> out;
  out.reserve(top);
  for (int n = 1; n <= top; ++n)
    out.push_back({n, std::pow(static_cast<double>(table.counts[n]), 1.0 / n)});
  return out;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::converging: return "converging";
    case Verdict::diverging: return "diverging";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string_view to_string(GrowthClass c) {
  switch (c) {
    case GrowthClass::polynomial: return "polynomial";
    case GrowthClass::exponential: return "exponential";
    case GrowthClass::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

GrowthFit sphere_growth_classify(const Graph& g, VertexId y, int radius) {
  if (radius < 4) throw std::invalid_argument("sphere_growth_classify: radius must be >= 4");
  if (g.clean_radius(y) < radius)
    throw OutsideCleanRegion("sphere_growth_classify: spheres beyond the clean radius " +
                             std::to_string(g.clean_radius(y)));
  const auto sizes = sphere_sizes(g, y, radius);
  if (std::all_of(sizes.begin() + 1, sizes.end(), [](std::size_t s) { return s <= 1; }))
    throw std::domain_error("sphere_growth_classify: degenerate spheres (all sizes <= 1)");

  // Ordinary least squares of ly against each regressor; returns (slope, rss).
  const auto fit = [&](auto regressor) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int m = radius;
    for (int n = 1; n <= radius; ++n) {
      const double u = regressor(n), v = std::log(static_cast<double>(sizes[n]));
      sx += u, sy += v, sxx += u * u, sxy += u * v;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / m;
    double rss = 0;
    for (int n = 1; n <= radius; ++n) {
      const double r = std::log(static_cast<double>(sizes[n])) - icpt - slope * regressor(n);
      rss += r * r;
    }
    return std::pair{slope, rss};
  };
  const auto [degree, rp] = fit([](int n) { return std::log(static_cast<double>(n)); });
  const auto [rate, re] = fit([](int n) { return static_cast<double>(n); });

  GrowthFit out{GrowthClass::inconclusive, rp, re, degree, rate};
  constexpr double kExact = 1e-20;
  if (std::max(rp, re) <= kExact) {
    // Both models exact only for constant spheres, a degree-zero polynomial.
    out.growth = GrowthClass::polynomial;
  } else if (std::abs(rp - re) <= 0.1 * std::max(rp, re)) {
    out.growth = GrowthClass::inconclusive;
  } else {
    out.growth = rp < re ? GrowthClass::polynomial : GrowthClass::exponential;
  }
  return out;
}

}  // namespace anderson
