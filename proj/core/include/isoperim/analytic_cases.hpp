#pragma once

// The steps of the two-point and Poincare arguments that are not partition
// claims: finitely many point evaluations, a few sign certifications of
// closed forms over the ranges where they are used, and (clearly marked)
// non-rigorous scans standing in for results cited from prior work.

#include <optional>
#include <string>
#include <vector>

#include "isoperim/gaussian_profile.hpp"
#include "isoperim/interval.hpp"
#include "isoperim/rational.hpp"
#include "isoperim/report.hpp"

namespace isoperim {

enum class Relation { greater, less };

// "expression(points) relation bound", passed only if the enclosure clears the
// bound strictly.
struct PointCheck {
  std::string label;
  std::string expression;
  std::vector<Rational> points;
  Relation relation = Relation::greater;
  Rational bound;
  Interval result;
  bool passed = false;

  static PointCheck make(std::string label, std::string expression, std::vector<Rational> points, Relation rel,
                         Rational bound, Interval result);
  // Distance by which the relation holds (negative if it fails).
  double margin() const;
  ReportItem item() const;
};

// Closed forms used by the checks, exposed for tests.
Interval case_j_constant(const BellmanParams& p);
Interval f_ljq(const Interval& y, const BellmanParams& p);     // G_LJQ(0, y)
Interval f_ljq_d1(const Interval& y, const BellmanParams& p);
Interval f_ljq_d2(const Interval& y, const BellmanParams& p);
Interval g_ljq(const Interval& x, const Interval& y, const BellmanParams& p);
Interval lj_slope_bound(const Rational& l_at, const Rational& j_at, const BellmanParams& p);
Interval g_p1(const Interval& x, const BellmanParams& p);
Interval g_p1_d1(const Interval& x, const BellmanParams& p);

Report verify_case_J(const BellmanParams& p);
Report verify_case_LJQ_boundary(const BellmanParams& p);
Report verify_case_LJ_II(const BellmanParams& p);
Report verify_case_QJQ_support(const BellmanParams& p);
// Case I of the Poincare argument rests on the lower bound for J near 1. If
// j_lower_bound_certified is empty that bound is verified here; if it is
// false the case is reported as contingent.
Report verify_case_P_I(const BellmanParams& p, std::optional<bool> j_lower_bound_certified = std::nullopt);

// Non-rigorous dense scans for the cited facts.
Report scan_cited_facts(const BellmanParams& p);

// One item per case of the two-point and Poincare arguments: passes when
// every supporting item in `combined` is present and passed or cited.
Report coverage_matrix(const Report& combined);

}  // namespace isoperim
