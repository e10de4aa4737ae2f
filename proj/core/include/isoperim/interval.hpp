#pragma once

// Closed intervals with MPFR endpoints and outward (directed) rounding.
//
// Every operation returns an interval at the thread's working precision whose
// lower endpoint is rounded toward -inf and upper endpoint toward +inf, so the
// exact image of the inputs is always contained in the result.

#include <mpfr.h>

#include <string>
#include <utility>

#include "isoperim/rational.hpp"

namespace isoperim {

// Significand bits of the working binary format.
class Precision {
 public:
  static constexpr int kMinBits = 24;

  constexpr Precision() = default;
  explicit Precision(int bits);

  constexpr int bits() const { return bits_; }
  friend constexpr bool operator==(Precision, Precision) = default;
  friend constexpr auto operator<=>(Precision, Precision) = default;

 private:
  int bits_ = 64;
};

// Working precision of the calling thread (default 64 bits).
Precision working_precision();

// Sets the working precision for the lifetime of the scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(Precision p);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  Precision saved_;
};

class Interval {
 public:
  // [0, 0]
  Interval();
  // Degenerate interval around x, rounded outward to the working precision.
  explicit Interval(double x);
  Interval(double lo, double hi);
  // Encloses the exact rational q.
  explicit Interval(const Rational& q);
  Interval(const Rational& lo, const Rational& hi);

  // Encloses the value of an exact literal ("29/32", "0.01", "1e-6").
  static Interval from_literal(std::string_view literal);
  // [lo, hi] from raw MPFR endpoints, rounded outward.
  static Interval from_endpoints(mpfr_srcptr lo, mpfr_srcptr hi);
  static Interval hull(const Interval& a, const Interval& b);

  Interval(const Interval& other);
  Interval(Interval&& other) noexcept;
  Interval& operator=(const Interval& other);
  Interval& operator=(Interval&& other) noexcept;
  ~Interval();

  mpfr_srcptr lo() const { return lo_; }
  mpfr_srcptr hi() const { return hi_; }
  // Endpoints rounded outward to double.
  double lo_double() const;
  double hi_double() const;
  double mid_double() const;
  // Upper bound on hi - lo.
  double width() const;

  Interval lower_point() const;
  Interval upper_point() const;

  bool is_point() const;
  bool contains(double x) const;
  bool contains(const Rational& q) const;
  // true iff other is a subset of *this.
  bool contains(const Interval& other) const;
  bool overlaps(const Interval& other) const;

  Interval& operator+=(const Interval& b);
  Interval& operator-=(const Interval& b);
  Interval& operator*=(const Interval& b);
  Interval& operator/=(const Interval& b);

  friend Interval operator-(const Interval& a);
  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator/(const Interval& a, const Interval& b);

  // Multiplication by 2^k is exact up to precision loss of the endpoints.
  Interval scaled_pow2(long k) const;

  // Direct endpoint access for callers implementing new monotone kernels.
  mpfr_ptr lo_mut() { return lo_; }
  mpfr_ptr hi_mut() { return hi_; }

 private:
  struct Uninit {};
  Interval(Uninit, mpfr_prec_t prec);

  mpfr_t lo_;
  mpfr_t hi_;
};

Interval operator+(const Interval& a, double b);
Interval operator-(const Interval& a, double b);
Interval operator-(double a, const Interval& b);
Interval operator*(const Interval& a, double b);
Interval operator*(double a, const Interval& b);
Interval operator/(const Interval& a, double b);
Interval operator/(double a, const Interval& b);

enum class ElementaryFn { sqrt, ln, log2, exp, square };

Interval sqr(const Interval& a);
Interval sqrt(const Interval& a);
Interval log(const Interval& a);
Interval log2(const Interval& a);
Interval exp(const Interval& a);
Interval abs(const Interval& a);
Interval min(const Interval& a, const Interval& b);
Interval max(const Interval& a, const Interval& b);
Interval apply(ElementaryFn f, const Interval& a);

using MpfrUnary = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);
// Image of a under a function that is increasing (decreasing) on a.
Interval apply_increasing(MpfrUnary f, const Interval& a);
Interval apply_decreasing(MpfrUnary f, const Interval& a);

// True only if every point of a is strictly greater (less) than t.
bool certainly_gt(const Interval& a, const Rational& t);
bool certainly_lt(const Interval& a, const Rational& t);
bool certainly_gt(const Interval& a, double t);
bool certainly_lt(const Interval& a, double t);
// Compares endpoints against an exact rational.
int compare(mpfr_srcptr x, const Rational& t);

// Splits at the working-precision midpoint. Throws CannotSplitError when a is
// degenerate or no representable point lies strictly inside.
std::pair<Interval, Interval> bisect(const Interval& a);

// Cached enclosures of constants at the working precision.
namespace constants {
const Interval& sqrt2();
const Interval& sqrt2_minus_1();
const Interval& inv_sqrt2();
const Interval& inv_sqrt_2pi();
const Interval& ln2();
const Interval& pi();
}  // namespace constants

// "[lo, hi]" with the given number of significant decimal digits, each
// endpoint rounded outward.
std::string to_string(const Interval& a, int digits = 17);
std::string format_endpoint(mpfr_srcptr x, mpfr_rnd_t rnd, int digits = 17);

}  // namespace isoperim
