#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "anderson/graph.hpp"

namespace anderson {

struct SawOptions {
  /// Maximum number of walk extensions (single steps) explored.
  std::uint64_t budget = 100'000'000;
  /// Worker threads; first-step branches are distributed across them.
  unsigned threads = 1;
};

/// Exact self-avoiding walk counts c_x(0..n_max) from one origin.
struct SawTable {
  VertexId origin = 0;
  std::vector<std::uint64_t> counts;  // counts[n] = c_x(n)
  int clean_radius = 0;               // counts[n] exact for n <= clean_radius

  int n_max() const { return static_cast<int>(counts.size()) - 1; }
  bool clean(int n) const { return n <= clean_radius; }
};

/// Depth-first enumeration with a visited set. Throws BudgetExceeded whose
/// last_completed() is the largest length whose count finished in budget.
SawTable count_saws(const Graph& g, VertexId x, int n_max, const SawOptions& options = {});

struct ConnectivePoint {
  int n;
  double mu;  // c(n)^(1/n)
};

/// c(n)^(1/n) for every clean n >= 1. Requires clean data up to n = 2.
std::vector<ConnectivePoint> connective_estimate(const SawTable& table);

enum class Verdict { converging, diverging, inconclusive };
std::string_view to_string(Verdict v);

/// Finite-data ratio test over the last `window` shells. Heuristic: the
/// series is infinite, only its first shells are computed.
struct RatioTest {
  int window = 3;
  double tolerance = 0.02;
};

struct AssumptionReport {
  int which = 1;                        // 1 or 2
  double parameter = 0;                 // alpha or beta
  double p = 0;                         // polynomial weight (assumption 2)
  int truncation_radius = 0;
  std::vector<double> shell_terms;      // contribution of shell R
  std::vector<double> partial_sums;     // partial_sums[R] = sum of shells 0..R
  std::vector<double> shell_ratios;     // shell_terms[R] / shell_terms[R-1]; index 0 unused
  Verdict verdict = Verdict::inconclusive;
  double estimated_critical = 0;        // parameter at which the last ratio equals 1
};

/// Classify shell terms with the ratio test.
Verdict ratio_verdict(const std::vector<double>& shell_terms, const RatioTest& test);

/// Precomputed shell data for sum_k alpha^d(k,y) c_k(d(k,y)); shell n holds
/// A(n) = sum over k in S_y(n) of c_k(n), so shell term n is alpha^n A(n).
class Assumption1Series {
 public:
  /// Throws OutsideCleanRegion if some c_k(d(k,y)) with d(k,y) <= radius is
  /// not boundary-clean.
  Assumption1Series(const Graph& g, VertexId y, int radius, const SawOptions& options = {});

  AssumptionReport evaluate(double alpha, const RatioTest& test = {}) const;
  int radius() const { return static_cast<int>(shell_counts_.size()) - 1; }
  const std::vector<double>& shell_counts() const { return shell_counts_; }

 private:
  std::vector<double> shell_counts_;
};

/// Precomputed terms of the double series
///   sum_{x,k} d(o,x)^p (beta^{d(x,k)+d(k,y)} c_x(d(x,k)) c_k(d(k,y)))^{1/2}
/// over x, k in the ball B_o(radius). A pair belongs to shell
/// max(d(o,x), d(o,k)), so partial sum R runs over B_o(R) x B_o(R).
class Assumption2Series {
 public:
  Assumption2Series(const Graph& g, VertexId o, VertexId y, int radius,
                    const SawOptions& options = {});

  AssumptionReport evaluate(double p, double beta, const RatioTest& test = {}) const;
  int radius() const { return radius_; }

 private:
  struct Term {
    int shell;
    int exponent;       // d(x,k) + d(k,y)
    int distance_o;     // d(o,x)
    double root_count;  // sqrt(c_x(d(x,k)) c_k(d(k,y)))
  };
  std::vector<Term> terms_;
  int radius_;
};

AssumptionReport assumption1_partial_sum(const Graph& g, VertexId y, double alpha, int radius,
                                         const RatioTest& test = {},
                                         const SawOptions& options = {});

AssumptionReport assumption2_partial_sum(const Graph& g, VertexId o, VertexId y, double p,
                                         double beta, int radius, const RatioTest& test = {},
                                         const SawOptions& options = {});

enum class CriticalParameter { alpha, beta };

/// Bisection on (0,1) with "verdict is not diverging" as the predicate;
/// returns the midpoint of the final bracket (width <= `width`). For beta
/// the predicate must hold at p = 0, 1, 2 with o = y.
double critical_parameter_estimate(const Graph& g, VertexId y, CriticalParameter which,
                                   int radius, const RatioTest& test = {},
                                   const SawOptions& options = {}, double width = 1e-3);

enum class GrowthClass { polynomial, exponential, inconclusive };
std::string_view to_string(GrowthClass c);

struct GrowthFit {
  GrowthClass growth = GrowthClass::inconclusive;
  double polynomial_residual = 0;   // fit of log|S(n)| against log n
  double exponential_residual = 0;  // fit of log|S(n)| against n
  double polynomial_degree = 0;
  double exponential_rate = 0;      // log of the fitted base
};

/// Least-squares comparison of power-law and exponential sphere growth for
/// n = 1..radius; results within 10% of each other are inconclusive.
GrowthFit sphere_growth_classify(const Graph& g, VertexId y, int radius);

}  // namespace anderson
