#pragma once

// Certificates: the leaf decomposition behind a verified claim, in the
// canonical (pre-order) order of the bisection tree. The text form stores
// every double as a C99 hexadecimal literal so that it round-trips exactly.

#include <optional>
#include <string>
#include <vector>

#include "isoperim/claims.hpp"
#include "isoperim/subdivision.hpp"

namespace isoperim {

enum class CertificateStatus { verified, inconclusive };

struct Certificate {
  std::string claim_id;
  Rational w;
  std::vector<int> ladder;
  Rational threshold;
  int max_depth = 0;
  int max_depth_reached = 0;
  CertificateStatus status = CertificateStatus::inconclusive;
  Box region;
  std::vector<Leaf> leaves;
  std::optional<Box> offending;

  // Run statistics; not serialized.
  double min_bound = 0.0;
  std::size_t evaluations = 0;
  double seconds = 0.0;

  bool verified() const { return status == CertificateStatus::verified; }
};

Certificate verify_claim(const ClaimSpec& claim, const ParamsLadder& params, const Rational& w,
                         const SubdivisionOptions& options);
Certificate verify_claim(const ClaimSpec& claim, const Rational& w, const SubdivisionOptions& options);

std::string serialize(const Certificate& cert);
// Throws ParseError with a diagnostic on malformed input.
Certificate parse_certificate(const std::string& text);

struct CheckResult {
  bool ok = false;
  std::string reason;
  explicit operator bool() const { return ok; }
};

// Re-derives the bisection tree from the registered region, requires the
// leaves to be exactly its leaves in pre-order, and recomputes every leaf
// bound at its recorded precision. Throws LookupError for an unknown claim.
CheckResult check_certificate(const Certificate& cert, int jobs = 1);

std::string hex_double(double x);
// Parses a hexadecimal (or decimal) double literal; throws ParseError.
double parse_double(const std::string& text);

}  // namespace isoperim
