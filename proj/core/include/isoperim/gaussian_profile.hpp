#pragma once

// Certified enclosures of the standard normal CDF and quantile, the Gaussian
// isoperimetric profile I = phi o Phi^{-1}, and the rescaled profile
//
//   J_w(x) = I((1 - x) / w) / (2 I(1 / (2w))),
//
// which is the right-hand piece of the Bellman function. J_w solves
// J * J'' = -gamma with gamma = (4 w^2 I(1/(2w))^2)^{-1}, increases on
// [1 - w, x1] and decreases on [x1, 1] where x1 = 1 - w/2.

#include "isoperim/interval.hpp"
#include "isoperim/rational.hpp"
#include "isoperim/report.hpp"

namespace isoperim {

// Quantiles (and hence nontrivial upper bounds of I) are served only for
// arguments in [kQuantileFloor, 1 - kQuantileFloor].
inline constexpr double kQuantileFloor = 0x1p-20;

Interval norm_pdf(const Interval& t);
Interval norm_cdf(const Interval& t);
Interval norm_cdf(const Interval& t, Precision prec);

// Throws OutOfRangeError unless x is inside [2^-20, 1 - 2^-20].
Interval norm_quantile(const Interval& x);
Interval norm_quantile(const Interval& x, Precision prec);

// I over x in [0, 1]. Lower endpoints below 2^-20 (or above 1 - 2^-20) are
// clamped to 0; an upper bound that would need I at such an argument throws
// OutOfRangeError.
Interval profile_I(const Interval& x);
Interval profile_I(const Interval& x, Precision prec);

// The parameter w and the constants every J evaluation depends on. Built once
// (at 128 bits unless asked otherwise) and shared read-only afterwards.
struct BellmanParams {
  Rational w;
  int precision = 128;
  Interval w_iv;
  Interval inv_w;
  Interval x1;                // 1 - w/2
  Interval i_at_half_inv_w;   // I(1/(2w))
  Interval gamma;             // (4 w^2 I(1/(2w))^2)^{-1}
  Interval j_scale;           // 1 / (2 I(1/(2w)))
  Interval jprime_scale;      // 1 / (2 w I(1/(2w)))
  Interval j_at_x1;           // J(x1) = I(1/2) j_scale
  Rational domain_lo;         // 1 - w, left end of J's natural domain

  // Throws DomainError unless 1/2 < w <= 1.
  static BellmanParams make(const Rational& w, Precision prec = Precision(128));
  // w = 29/32.
  static const BellmanParams& defaults();
};

Rational default_w();

// Enclosure of J over x in [1 - w, 1] using the monotone structure: lower end
// from min(J(x.lo), J(x.hi)), upper end from J(x.hi), J(x.lo) or J(x1). J(1) is
// exactly 0. Where (1 - x)/w drops below 2^-20 the lower bound is 0 and the
// upper bound is the monotone cap I(2^-20) * j_scale.
Interval j_value(const Interval& x, const BellmanParams& p);

// J' = Phi^{-1}((1 - x)/w) / (2 w I(1/(2w))), strictly decreasing.
Interval j_deriv(const Interval& x, const BellmanParams& p);
// |J'| with the sign change at x1.
Interval j_deriv_abs(const Interval& x, const BellmanParams& p);
// J'' = -gamma / J.
Interval j_second_deriv(const Interval& x, const BellmanParams& p);
// J'''' = -gamma (gamma + 2 J'^2) / J^3.
Interval j_fourth_deriv(const Interval& x, const BellmanParams& p);
// ((J')^2)'' = 2 gamma (gamma + J'^2) / J^2.
Interval j_prime_sq_second_deriv(const Interval& x, const BellmanParams& p);

// epsilon(x) = (1/2) log log(w/x) / log(w/x) + log(2 sqrt(pi)) / log(w/x), the
// relative loss in the asymptotic lower bound for I near 0.
Interval lower_bound_epsilon(const Interval& x, const BellmanParams& p);

// Certifies J(1 - x) > x sqrt(log(w/x)) for x in (0, 1/64]: the constant
// (sqrt2/(2w)) I(1/(2w))^{-1} (1 - epsilon(1/64)) exceeds 1 and epsilon is
// increasing on (0, 1/64].
Report verify_j_lower_bound(const BellmanParams& p);

}  // namespace isoperim
