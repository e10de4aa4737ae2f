#pragma once

// Registry of the partition-certified inequalities. Regions and thresholds
// live in a plain-text manifest (claims_manifest()) so they can be diffed
// against the source by eye; bound functions are looked up by name.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "isoperim/rational.hpp"
#include "isoperim/subdivision.hpp"

namespace isoperim {

struct ClaimSpec {
  std::string id;
  int dim = 1;
  // Exact region, one [lo, hi] per coordinate.
  std::vector<std::pair<Rational, Rational>> region;
  Rational threshold;
  std::string bound_name;
  std::string reference;
  BoundFn bound;

  Box box() const;
};

// The manifest text the registry is built from.
const std::string& claims_manifest();

// Parses a manifest; throws ParseError on malformed lines, LookupError on an
// unknown bound function.
std::vector<ClaimSpec> parse_manifest(const std::string& text);

const std::vector<ClaimSpec>& registered_claims();
// Throws LookupError listing the registered ids.
const ClaimSpec& find_claim(const std::string& id);
std::string registry_listing();

// The tight lower bounds, by manifest name. Throws LookupError.
BoundFn bound_function(const std::string& name);

}  // namespace isoperim
