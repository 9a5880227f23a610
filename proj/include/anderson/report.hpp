#pragma once

#include <string>

#include "anderson/experiment.hpp"

namespace anderson {

struct DecayFit {
  double slope = 0;      // least-squares slope of log(mean) against d
  double intercept = 0;
  double log_C = 0;
  bool within = false;   // slope <= log C + tolerance
};

/// Fit over the rows of a bounds record; throws std::invalid_argument when
/// fewer than two distances carry a positive mean.
DecayFit decay_fit(const RunRecord& record, double tolerance = 0.1);

/// Human-readable summary: bound table with PASS/FAIL per distance and the
/// decay fit for bounds records, verdicts for assumption records, the
/// suprema for dynamics records, and "no rows" for an empty record.
std::string report(const RunRecord& record);

}  // namespace anderson
