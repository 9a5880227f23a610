#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <limits>
#include <stdexcept>

#include "anderson/errors.hpp"
#include "anderson/saw.hpp"

namespace anderson {

namespace {

void require_clean(const Graph& g, VertexId v, int needed, const char* what) {
  if (g.clean_radius(v) < needed)
    throw OutsideCleanRegion(std::string(what) + ": vertex " + g.label(v) + " needs clean radius " +
                             std::to_string(needed) + " but has " +
                             std::to_string(g.clean_radius(v)));
}

void check_open_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0))
    throw std::invalid_argument(std::string(name) + " must lie in (0,1)");
}

AssumptionReport finish_report(int which, double parameter, double p,
                               std::vector<double> shell_terms, const RatioTest& test) {
  AssumptionReport r;
  r.which = which;
  r.parameter = parameter;
  r.p = p;
  r.truncation_radius = static_cast<int>(shell_terms.size()) - 1;
  r.partial_sums.resize(shell_terms.size());
  r.shell_ratios.assign(shell_terms.size(), 0.0);
  double acc = 0;
  for (std::size_t n = 0; n < shell_terms.size(); ++n) {
    acc += shell_terms[n];
    r.partial_sums[n] = acc;
    if (n > 0) {
      const double prev = shell_terms[n - 1], cur = shell_terms[n];
      r.shell_ratios[n] = prev > 0 ? cur / prev
                                   : (cur > 0 ? std::numeric_limits<double>::infinity() : 0.0);
    }
  }
  r.verdict = ratio_verdict(shell_terms, test);
  const double last = r.shell_ratios.back();
  r.estimated_critical = (r.truncation_radius > 0 && last > 0 && std::isfinite(last))
                             ? parameter / last
                             : std::numeric_limits<double>::quiet_NaN();
  r.shell_terms = std::move(shell_terms);
  return r;
}

}  // namespace

Verdict ratio_verdict(const std::vector<double>& shell_terms, const RatioTest& test) {
  const int shells = static_cast<int>(shell_terms.size());
  if (test.window < 1 || shells < test.window + 1) return Verdict::inconclusive;
  bool below = true, above = true;
  for (int n = shells - test.window; n < shells; ++n) {
    const double prev = shell_terms[n - 1], cur = shell_terms[n];
    const double ratio =
        prev > 0 ? cur / prev : (cur > 0 ? std::numeric_limits<double>::infinity() : 0.0);
    below = below && ratio <= 1.0 - test.tolerance;
    above = above && ratio >= 1.0 + test.tolerance;
  }
  if (below) return Verdict::converging;
  if (above) return Verdict::diverging;
  return Verdict::inconclusive;
}

Assumption1Series::Assumption1Series(const Graph& g, VertexId y, int radius,
                                     const SawOptions& options) {
  if (radius < 0) throw std::invalid_argument("assumption 1: radius must be >= 0");
  require_clean(g, y, radius, "assumption 1");
  const auto dist = g.distances_from(y);
  shell_counts_.assign(radius + 1, 0.0);
  for (VertexId k = 0; k < g.size(); ++k) {
    const int d = dist[k];
    if (d > radius) continue;
    require_clean(g, k, d, "assumption 1");
    shell_counts_[d] += static_cast<double>(count_saws(g, k, d, options).counts[d]);
  }
}

AssumptionReport Assumption1Series::evaluate(double alpha, const RatioTest& test) const {
  std::vector<double> terms(shell_counts_.size());
  for (std::size_t n = 0; n < terms.size(); ++n)
    terms[n] = std::pow(alpha, static_cast<double>(n)) * shell_counts_[n];
  return finish_report(1, alpha, 0.0, std::move(terms), test);
}

Assumption2Series::Assumption2Series(const Graph& g, VertexId o, VertexId y, int radius,
                                     const SawOptions& options)
    : radius_(radius) {
  if (radius < 0) throw std::invalid_argument("assumption 2: radius must be >= 0");
  const auto dist_o = g.distances_from(o);
  const auto dist_y = g.distances_from(y);
  require_clean(g, o, radius, "assumption 2");

  std::vector<VertexId> ball;
  for (VertexId v = 0; v < g.size(); ++v)
    if (dist_o[v] <= radius) ball.push_back(v);

  // Per-vertex distances to the ball and SAW tables long enough for both roles.
  std::vector<std::vector<int>> dist_ball(ball.size());
  std::vector<std::vector<std::uint64_t>> counts(ball.size());
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const auto full = g.distances_from(ball[i]);
    int reach = dist_y[ball[i]];
    dist_ball[i].resize(ball.size());
    for (std::size_t j = 0; j < ball.size(); ++j) {
      dist_ball[i][j] = full[ball[j]];
      reach = std::max(reach, full[ball[j]]);
    }
    require_clean(g, ball[i], reach, "assumption 2");
    counts[i] = count_saws(g, ball[i], reach, options).counts;
  }

  terms_.reserve(ball.size() * ball.size());
  for (std::size_t i = 0; i < ball.size(); ++i) {
    for (std::size_t j = 0; j < ball.size(); ++j) {
      const int dxk = dist_ball[i][j];
      const int dky = dist_y[ball[j]];
      const double cc = static_cast<double>(counts[i][dxk]) * static_cast<double>(counts[j][dky]);
      terms_.push_back({std::max(dist_o[ball[i]], dist_o[ball[j]]), dxk + dky, dist_o[ball[i]],
                        std::sqrt(cc)});
    }
  }
}

AssumptionReport Assumption2Series::evaluate(double p, double beta, const RatioTest& test) const {
  if (p < 0) throw std::invalid_argument("assumption 2: p must be >= 0");
  std::vector<double> shells(radius_ + 1, 0.0);
  for (const Term& t : terms_)
    shells[t.shell] += std::pow(static_cast<double>(t.distance_o), p) *
                       std::pow(beta, 0.5 * t.exponent) * t.root_count;
  return finish_report(2, beta, p, std::move(shells), test);
}

AssumptionReport assumption1_partial_sum(const Graph& g, VertexId y, double alpha, int radius,
                                         const RatioTest& test, const SawOptions& options) {
  check_open_unit(alpha, "alpha");
  return Assumption1Series(g, y, radius, options).evaluate(alpha, test);
}

AssumptionReport assumption2_partial_sum(const Graph& g, VertexId o, VertexId y, double p,
                                         double beta, int radius, const RatioTest& test,
                                         const SawOptions& options) {
  check_open_unit(beta, "beta");
  return Assumption2Series(g, o, y, radius, options).evaluate(p, beta, test);
}

double critical_parameter_estimate(const Graph& g, VertexId y, CriticalParameter which,
                                   int radius, const RatioTest& test, const SawOptions& options,
                                   double width) {
  std::function<Verdict(double)> verdict;
  if (which == CriticalParameter::alpha) {
    auto series = std::make_shared<Assumption1Series>(g, y, radius, options);
    verdict = [series, test](double a) { return series->evaluate(a, test).verdict; };
  } else {
    auto series = std::make_shared<Assumption2Series>(g, y, y, radius, options);
    verdict = [series, test](double b) {
      Verdict worst = Verdict::converging;
      for (double p : {0.0, 1.0, 2.0}) {
        const Verdict v = series->evaluate(p, b, test).verdict;
        if (v == Verdict::diverging) return v;
        if (v == Verdict::inconclusive) worst = v;
      }
      return worst;
    };
  }

  const Verdict low = verdict(1e-3), high = verdict(1.0 - 1e-3);
  if (low == Verdict::inconclusive && high == Verdict::inconclusive)
    throw NumericFailure("critical_parameter_estimate: inconclusive verdicts at both ends");
  if (low == Verdict::diverging)
    throw NumericFailure("critical_parameter_estimate: diverging already at the lower end");

  double lo = 0.0, hi = 1.0;
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    (verdict(mid) == Verdict::diverging ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace anderson
