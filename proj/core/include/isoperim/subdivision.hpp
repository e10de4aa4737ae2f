#pragma once

// Recursive dyadic partitioning. A box is accepted when the lower endpoint of
// the bound function's enclosure over it exceeds the threshold; otherwise it
// is bisected along its wider side (ties go to the first coordinate). A box
// that can no longer be split is re-evaluated up the precision ladder before
// the run is declared inconclusive.

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "isoperim/gaussian_profile.hpp"
#include "isoperim/interval.hpp"
#include "isoperim/rational.hpp"

namespace isoperim {

struct Box {
  int dim = 1;
  std::array<double, 2> lo{};
  std::array<double, 2> hi{};

  static Box line(double lo, double hi);
  static Box rect(double xlo, double xhi, double ylo, double yhi);

  // Coordinate ranges and endpoints as intervals at the working precision.
  Interval coord(int axis) const;
  Interval lower(int axis) const;
  Interval upper(int axis) const;

  friend bool operator==(const Box&, const Box&) = default;
};

std::string to_string(const Box& b);

// Bound function: interval whose lower endpoint underestimates the target
// expression on the whole box.
using BoundFn = std::function<Interval(const Box&, const BellmanParams&)>;

struct SubdivisionOptions {
  // Maximum number of bisections along any one axis.
  int max_depth = 60;
  std::vector<int> ladder = {64, 128, 256, 512};
  int jobs = 1;
};

struct Leaf {
  Box box;
  // Certified lower bound, rounded down to double.
  double bound_lo = 0.0;
  int precision = 0;
};

struct SubdivisionResult {
  bool verified = false;
  // Leaves in canonical order: pre-order of the bisection tree.
  std::vector<Leaf> leaves;
  int max_depth_reached = 0;
  std::optional<Box> offending;
  double min_bound = 0.0;
  std::size_t evaluations = 0;
};

// Bisection rule shared by the verifier and the certificate checker. Returns
// nullopt if the chosen axis already has max_depth splits or no double lies
// strictly inside it.
struct Split {
  int axis = 0;
  Box left;
  Box right;
};
std::optional<Split> split_box(const Box& b, const std::array<int, 2>& depth, int max_depth);

// BellmanParams for each rung of a precision ladder, computed at
// max(128, rung) bits.
class ParamsLadder {
 public:
  ParamsLadder(const Rational& w, const std::vector<int>& ladder);
  const BellmanParams& at(int precision) const;

 private:
  std::map<int, std::shared_ptr<const BellmanParams>> by_precision_;
};

struct Evaluation {
  bool certified = false;
  double bound_lo = 0.0;
};

// One evaluation of fn on box at the given precision; library errors count as
// "not certified".
Evaluation evaluate_box(const BoundFn& fn, const Box& box, const Rational& threshold, const BellmanParams& params,
                        int precision);

SubdivisionResult subdivide(const Box& region, const BoundFn& fn, const Rational& threshold, const ParamsLadder& params,
                            const SubdivisionOptions& options);

// Convenience overload building the parameter ladder from w.
SubdivisionResult subdivide(const Box& region, const BoundFn& fn, const Rational& threshold, const Rational& w,
                            const SubdivisionOptions& options);

// Runs body(i) for i in [0, n) on up to `jobs` threads.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body);

}  // namespace isoperim
