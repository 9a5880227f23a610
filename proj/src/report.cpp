#include "anderson/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace anderson {

namespace {

long column(const RunRecord& r, const std::string& name) {
  for (std::size_t i = 0; i < r.columns.size(); ++i)
    if (r.columns[i] == name) return static_cast<long>(i);
  throw std::runtime_error("run record has no column '" + name + "'");
}

std::string line(const char* fmt, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

}  // namespace

DecayFit decay_fit(const RunRecord& r, double tolerance) {
  const long cd = column(r, "d"), cm = column(r, "mean"), cc = column(r, "C");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  DecayFit fit;
  for (const auto& row : r.rows) {
    const double d = std::stod(row[cd]), mean = std::stod(row[cm]);
    fit.log_C = std::log(std::stod(row[cc]));
    if (!(mean > 0)) continue;
    const double y = std::log(mean);
    sx += d;
    sy += y;
    sxx += d * d;
    sxy += d * y;
    ++n;
  }
  const double den = n * sxx - sx * sx;
  if (n < 2 || den == 0) throw std::invalid_argument("decay fit needs two distances");
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.within = fit.slope <= fit.log_C + tolerance;
  return fit;
}

std::string report(const RunRecord& r) {
  std::ostringstream out;
  out << "run " << r.run_id << "  experiment " << r.experiment << "  version " << r.version
      << "\n";
  if (r.rows.empty()) {
    out << "no rows\n";
    return out.str();
  }
  if (r.experiment == "bounds") {
    const long cd = column(r, "d"), cm = column(r, "mean"), cs = column(r, "stderr"),
               cb = column(r, "bound"), cp = column(r, "passed"), cc = column(r, "c_xd");
    out << "   d        c_xd            mean          stderr           bound  result\n";
    for (const auto& row : r.rows) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "%4s %11s %15.6e %15.6e %15.6e  %s\n", row[cd].c_str(),
                    row[cc].c_str(), std::stod(row[cm]), std::stod(row[cs]), std::stod(row[cb]),
                    row[cp] == "1" ? "PASS" : "FAIL");
      out << buf;
    }
    try {
      const DecayFit fit = decay_fit(r);
      out << line("decay fit: slope %.4f vs log C %.4f", fit.slope, fit.log_C)
          << (fit.within ? "  (within tolerance)\n" : "  (above log C + tolerance)\n");
    } catch (const std::invalid_argument&) {
      out << "decay fit: not enough distances\n";
    }
  } else if (r.experiment == "assumption") {
    out << "verdict: " << r.summary.value("verdict", std::string("?"))
        << line("  parameter %.4f  ratio-implied critical %.4f\n",
                r.summary.value("parameter", 0.0), r.summary.value("estimated_critical", 0.0));
    if (r.summary.contains("critical_estimate"))
      out << line("critical parameter estimate %.4f\n", r.summary["critical_estimate"].get<double>());
  } else if (r.experiment == "dynamics") {
    out << line("median grid-supremum %.6g  max %.6g", r.summary.value("median_supremum", 0.0),
                r.summary.value("max_supremum", 0.0))
        << "  boundary-flagged trials " << r.summary.value("boundary_flags", 0) << "\n";
  } else {
    for (std::size_t i = 0; i < r.columns.size(); ++i) out << (i ? "," : "") << r.columns[i];
    out << "\n";
    for (const auto& row : r.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace anderson
