#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "anderson/errors.hpp"
#include "anderson/moments.hpp"

namespace anderson {

SpectralAveragingResult spectral_averaging_check(const UniformDensity& density, double s,
                                                 Complex beta) {
  if (!(s > 0 && s < 1)) throw std::invalid_argument("spectral averaging: s must lie in (0,1)");
  if (!(density.a < density.b)) throw std::invalid_argument("spectral averaging: need a < b");
  const double a = density.a, b = density.b;
  const double re = beta.real(), im = std::abs(beta.imag());
  const double c = std::clamp(re, a, b);
  const double height = density.sup_norm();

  // The singularity, if any, sits at c. Each piece gets the distance to c from
  // the quadrature's complement argument, which stays accurate near c.
  boost::math::quadrature::tanh_sinh<double> ts;
  double total = 0, error = 0;
  auto piece = [&](double lo, double hi, bool left) {
    if (!(hi > lo)) return;
    auto f = [&](double x, double xc) {
      double u;  // distance from x to c
      if (left) u = xc > 0 ? xc : c - x;
      else u = xc < 0 ? -xc : x - c;
      const double offset = left ? (c - re) - u : (c - re) + u;
      const double r = std::hypot(offset, im);
      return r > 0 ? std::pow(r, -s) * height : 0.0;
    };
    double err = 0, l1 = 0;
    total += ts.integrate(f, lo, hi, 1e-13, &err, &l1);
    error += err;
  };
  piece(a, c, true);
  piece(c, b, false);
  if (!(error <= 1e-9 * std::max(1.0, total)))
    throw NumericFailure("spectral averaging: quadrature error " + std::to_string(error));

  SpectralAveragingResult r;
  r.lhs = total;
  r.rhs = std::pow(density.sup_norm(), s) * std::pow(density.l1_norm(), 1 - s) *
          averaging_constant(s);
  return r;
}

}  // namespace anderson
