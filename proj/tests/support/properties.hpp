#pragma once

// Randomized property checks shared by the unit tests and the acceptance
// binary. Every check is seeded, so a failure reproduces exactly.

#include <cstdint>
#include <string>
#include <vector>

#include "isoperim/claims.hpp"
#include "isoperim/gaussian_profile.hpp"
#include "isoperim/interval.hpp"

namespace isoperim::testing {

struct PropertyOutcome {
  std::string name;
  long trials = 0;
  long violations = 0;
  // First violation (or a summary when there is none).
  std::string detail;

  bool ok() const { return violations == 0; }
};

// Names of the operations exercised by containment_trials.
const std::vector<std::string>& containment_ops();

// For Y outer, X nested inside Y and a point x in X: op(X) is a subset of
// op(Y), and a 256-bit enclosure of op(x) lies inside the 64-bit op(X).
PropertyOutcome containment_trials(const std::string& op, int trials, std::uint64_t seed = 1);

// Central second differences of J at `points` abscissae in [1/5, 19/20]
// times J agree with -gamma, and so does the enclosure J * J''.
PropertyOutcome jj_second_derivative(int points, const BellmanParams& p);

// B_w is continuous at 1/4 and 1/2: the two adjacent pieces agree there and
// B over tiny intervals around each breakpoint is tiny.
PropertyOutcome breakpoint_continuity(const BellmanParams& p);

// The expression a claim's bound function underestimates, at a point.
Interval true_expression(const std::string& claim_id, double x, double y, const BellmanParams& p);

// Random dyadic sub-boxes of the claim region, random points inside: the true
// expression at the point never lies below the box's bound.
PropertyOutcome bound_soundness(const ClaimSpec& claim, int trials, std::uint64_t seed = 1);

// Fraction of bisections whose children both have bound >= parent bound
// (minus 1e-12). `trials` counts splits; `violations` counts non-improving
// ones.
PropertyOutcome monotone_refinement(const ClaimSpec& claim, int splits, std::uint64_t seed = 1);

}  // namespace isoperim::testing
