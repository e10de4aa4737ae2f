#pragma once

#include <string>
#include <vector>

#include "isoperim/certificate.hpp"
#include "isoperim/report.hpp"

namespace isoperim {

struct SuiteOptions {
  SubdivisionOptions subdivision;
  Rational w = Rational(29, 32);
  // Claim ids to run; empty means all registered claims.
  std::vector<std::string> claims;
  bool analytic = true;
};

struct SuiteResult {
  Report report;
  std::vector<Certificate> certificates;
};

// Report item for one claim run.
ReportItem claim_item(const Certificate& cert);

// Runs the selected claims and, if requested, the analytic cases, the lemma
// certifications, the cited-result scans and the coverage matrix.
SuiteResult verify_all(const SuiteOptions& options);

// Fingerprint entries (w, ladder, depth limit, jobs) for a report.
void fingerprint(Report& report, const SuiteOptions& options);

}  // namespace isoperim
