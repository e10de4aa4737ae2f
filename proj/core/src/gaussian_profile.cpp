#include "isoperim/gaussian_profile.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "isoperim/errors.hpp"
#include "isoperim/subdivision.hpp"

namespace isoperim {

namespace {

// RAII holder for a scratch MPFR variable.
class Scratch {
 public:
  explicit Scratch(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Scratch() { mpfr_clear(v_); }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
  mpfr_ptr get() { return v_; }
  operator mpfr_ptr() { return v_; }

 private:
  mpfr_t v_;
};

bool below_floor(mpfr_srcptr p) { return mpfr_cmp_d(p, kQuantileFloor) < 0; }
bool above_ceiling(mpfr_srcptr p) { return mpfr_cmp_d(p, 1.0 - kQuantileFloor) > 0; }

// Newton iteration for Phi(t) = p at a few guard bits above the working
// precision, seeded from the double-precision quantile. p must be in
// [2^-20, 1/2).
void newton_quantile(mpfr_ptr t, mpfr_srcptr p) {
  const mpfr_prec_t prec = mpfr_get_prec(t);
  const double seed = boost::math::quantile(boost::math::normal_distribution<double>(), mpfr_get_d(p, MPFR_RNDN));
  mpfr_set_d(t, seed, MPFR_RNDN);

  Scratch s(prec), cdf(prec), pdf(prec), step(prec), c(prec);
  mpfr_const_pi(c, MPFR_RNDN);
  mpfr_mul_2ui(c, c, 1, MPFR_RNDN);
  mpfr_rec_sqrt(c, c, MPFR_RNDN);  // 1/sqrt(2 pi)
  for (int iter = 0; iter < 40; ++iter) {
    mpfr_sqrt_ui(s, 2, MPFR_RNDN);
    mpfr_div(s, t, s, MPFR_RNDN);
    mpfr_neg(s, s, MPFR_RNDN);
    mpfr_erfc(cdf, s, MPFR_RNDN);
    mpfr_div_2ui(cdf, cdf, 1, MPFR_RNDN);
    mpfr_sub(cdf, cdf, p, MPFR_RNDN);
    mpfr_sqr(pdf, t, MPFR_RNDN);
    mpfr_div_2ui(pdf, pdf, 1, MPFR_RNDN);
    mpfr_neg(pdf, pdf, MPFR_RNDN);
    mpfr_exp(pdf, pdf, MPFR_RNDN);
    mpfr_mul(pdf, pdf, c, MPFR_RNDN);
    mpfr_div(step, cdf, pdf, MPFR_RNDN);
    mpfr_sub(t, t, step, MPFR_RNDN);
    if (mpfr_zero_p(step.get()) || mpfr_get_exp(step.get()) < mpfr_get_exp(t) - static_cast<mpfr_exp_t>(prec) + 4) break;
  }
}

// Verified enclosure of Phi^{-1}(p) for a single point p in [2^-20, 1/2).
Interval quantile_lower_half(mpfr_srcptr p) {
  const mpfr_prec_t wp = working_precision().bits();
  Scratch t(wp + 16);
  newton_quantile(t, p);

  Scratch cand(wp), delta(wp);
  Interval lo_end, hi_end;
  bool have_lo = false, have_hi = false;
  // Initial half-width: a few ulps of t at the working precision.
  const mpfr_exp_t scale = mpfr_zero_p(t.get()) ? -static_cast<mpfr_exp_t>(wp) : mpfr_get_exp(t.get());
  mpfr_set_ui_2exp(delta, 1, scale - static_cast<mpfr_exp_t>(wp) + 3, MPFR_RNDU);
  for (int attempt = 0; attempt < 64 && !(have_lo && have_hi); ++attempt) {
    if (!have_lo) {
      mpfr_sub(cand, t, delta, MPFR_RNDD);
      Interval point = Interval::from_endpoints(cand, cand);
      if (mpfr_lessequal_p(norm_cdf(point).hi(), p)) {
        lo_end = std::move(point);
        have_lo = true;
      }
    }
    if (!have_hi) {
      mpfr_add(cand, t, delta, MPFR_RNDU);
      Interval point = Interval::from_endpoints(cand, cand);
      if (mpfr_greaterequal_p(norm_cdf(point).lo(), p)) {
        hi_end = std::move(point);
        have_hi = true;
      }
    }
    mpfr_mul_2ui(delta, delta, 4, MPFR_RNDU);
  }
  if (!have_lo || !have_hi) throw OutOfRangeError("quantile bracketing did not converge");
  return Interval::from_endpoints(lo_end.lo(), hi_end.hi());
}

// Verified enclosure of Phi^{-1}(p) for a point p in [2^-20, 1 - 2^-20].
Interval quantile_point(mpfr_srcptr p) {
  const int half = mpfr_cmp_d(p, 0.5);
  if (half == 0) return Interval();
  if (half < 0) return quantile_lower_half(p);
  // Phi^{-1}(p) = -Phi^{-1}(1 - p); 1 - p is exact for p in [1/2, 1).
  Scratch q(std::max<mpfr_prec_t>(mpfr_get_prec(p), working_precision().bits()));
  if (mpfr_ui_sub(q, 1, p, MPFR_RNDN) != 0) throw DomainError("inexact reflection in quantile");
  return -quantile_lower_half(q);
}

void check_quantile_range(const Interval& x) {
  if (below_floor(x.lo()) || above_ceiling(x.hi())) {
    throw OutOfRangeError("quantile requested outside [2^-20, 1 - 2^-20]");
  }
}

Interval profile_point(mpfr_srcptr a) {
  const Interval t = quantile_point(a);
  return norm_pdf(t);
}

}  // namespace

Interval norm_pdf(const Interval& t) {
  const Interval half_sq = sqr(t).scaled_pow2(-1);
  return exp(-half_sq) * constants::inv_sqrt_2pi();
}

Interval norm_cdf(const Interval& t) {
  // Phi(t) = erfc(-t / sqrt 2) / 2, and erfc is decreasing.
  const Interval s = -(t * constants::inv_sqrt2());
  return apply_decreasing(mpfr_erfc, s).scaled_pow2(-1);
}

Interval norm_cdf(const Interval& t, Precision prec) {
  PrecisionScope scope(prec);
  return norm_cdf(t);
}

Interval norm_quantile(const Interval& x) {
  check_quantile_range(x);
  if (x.is_point()) return quantile_point(x.lo());
  const Interval lo = quantile_point(x.lo());
  const Interval hi = quantile_point(x.hi());
  return Interval::from_endpoints(lo.lo(), hi.hi());
}

Interval norm_quantile(const Interval& x, Precision prec) {
  PrecisionScope scope(prec);
  return norm_quantile(x);
}

Interval profile_I(const Interval& x) {
  if (mpfr_sgn(x.lo()) < 0 || mpfr_cmp_ui(x.hi(), 1) > 0) throw DomainError("profile_I requires x in [0, 1]");

  auto servable = [](mpfr_srcptr a) { return !below_floor(a) && !above_ceiling(a); };
  auto is_end = [](mpfr_srcptr a) { return mpfr_zero_p(a) || mpfr_cmp_ui(a, 1) == 0; };

  if (x.is_point()) {
    if (is_end(x.lo())) return Interval();
    if (!servable(x.lo())) throw OutOfRangeError("profile_I upper bound needs an argument below 2^-20");
    return profile_point(x.lo());
  }

  // I is concave with its maximum at 1/2, so the minimum over x sits at an
  // endpoint and the maximum at an endpoint or at 1/2.
  std::optional<Interval> at_lo, at_hi;
  auto value_at = [&](mpfr_srcptr a, std::optional<Interval>& slot) -> const Interval* {
    if (is_end(a) || !servable(a)) return nullptr;
    if (!slot) slot = profile_point(a);
    return &*slot;
  };

  Interval zero;
  const Interval* vlo = value_at(x.lo(), at_lo);
  const Interval* vhi = value_at(x.hi(), at_hi);
  mpfr_srcptr lower = (vlo == nullptr || vhi == nullptr) ? zero.lo()
                      : mpfr_lessequal_p(vlo->lo(), vhi->lo()) ? vlo->lo()
                                                               : vhi->lo();

  mpfr_srcptr upper = nullptr;
  const Interval& peak = constants::inv_sqrt_2pi();
  if (mpfr_cmp_d(x.hi(), 0.5) <= 0) {
    if (mpfr_zero_p(x.hi())) return Interval();
    if (vhi == nullptr) throw OutOfRangeError("profile_I upper bound needs an argument below 2^-20");
    upper = vhi->hi();
  } else if (mpfr_cmp_d(x.lo(), 0.5) >= 0) {
    if (vlo == nullptr) {
      if (mpfr_cmp_ui(x.lo(), 1) == 0) return Interval();
      throw OutOfRangeError("profile_I upper bound needs an argument above 1 - 2^-20");
    }
    upper = vlo->hi();
  } else {
    upper = peak.hi();
  }
  return Interval::from_endpoints(lower, upper);
}

Interval profile_I(const Interval& x, Precision prec) {
  PrecisionScope scope(prec);
  return profile_I(x);
}

// --- BellmanParams ----------------------------------------------------------

Rational default_w() { return Rational(29, 32); }

BellmanParams BellmanParams::make(const Rational& w, Precision prec) {
  if (!(w > Rational(1, 2) && w <= 1)) throw DomainError("w must satisfy 1/2 < w <= 1, got " + to_string(w));
  PrecisionScope scope(prec);
  BellmanParams p;
  p.w = w;
  p.precision = prec.bits();
  p.w_iv = Interval(w);
  p.inv_w = Interval(Rational(1) / w);
  p.x1 = Interval(Rational(1) - w / 2);
  p.domain_lo = Rational(1) - w;
  p.i_at_half_inv_w = profile_I(Interval(Rational(1) / (2 * w)));
  const Interval two_w_i = Interval(2.0) * p.w_iv * p.i_at_half_inv_w;
  p.gamma = Interval(1.0) / sqr(two_w_i);
  p.j_scale = Interval(1.0) / (Interval(2.0) * p.i_at_half_inv_w);
  p.jprime_scale = Interval(1.0) / two_w_i;
  p.j_at_x1 = constants::inv_sqrt_2pi() * p.j_scale;
  return p;
}

const BellmanParams& BellmanParams::defaults() {
  static const BellmanParams params = make(default_w());
  return params;
}

// --- J and its derivatives --------------------------------------------------

namespace {

void check_j_domain(const Interval& x, const BellmanParams& p) {
  if (compare(x.lo(), p.domain_lo) < 0 || mpfr_cmp_ui(x.hi(), 1) > 0) {
    throw DomainError("J is defined on [1 - w, 1]");
  }
}

Interval profile_argument(const Interval& x, const BellmanParams& p) { return (Interval(1.0) - x) * p.inv_w; }

Interval j_point(mpfr_srcptr a, const BellmanParams& p) {
  if (mpfr_cmp_ui(a, 1) == 0) return Interval();
  const Interval t = profile_argument(Interval::from_endpoints(a, a), p);
  if (below_floor(t.hi())) {
    // I increases on [0, 1/2], so I(t) <= I(2^-20) here.
    const Interval cap = profile_I(Interval(kQuantileFloor)) * p.j_scale;
    return Interval::from_endpoints(Interval().lo(), cap.hi());
  }
  return profile_I(t) * p.j_scale;
}

Interval jprime_point(mpfr_srcptr a, const BellmanParams& p) {
  return j_deriv(Interval::from_endpoints(a, a), p);
}

}  // namespace

Interval j_value(const Interval& x, const BellmanParams& p) {
  check_j_domain(x, p);
  if (x.is_point()) return j_point(x.lo(), p);
  const Interval a = j_point(x.lo(), p);
  const Interval b = j_point(x.hi(), p);
  mpfr_srcptr lower = mpfr_lessequal_p(a.lo(), b.lo()) ? a.lo() : b.lo();
  mpfr_srcptr upper;
  if (mpfr_less_p(x.hi(), p.x1.lo())) {
    upper = b.hi();
  } else if (mpfr_greater_p(x.lo(), p.x1.hi())) {
    upper = a.hi();
  } else {
    upper = p.j_at_x1.hi();
  }
  return Interval::from_endpoints(lower, upper);
}

Interval j_deriv(const Interval& x, const BellmanParams& p) {
  check_j_domain(x, p);
  const Interval t = profile_argument(x, p);
  return norm_quantile(t) * p.jprime_scale;
}

Interval j_deriv_abs(const Interval& x, const BellmanParams& p) {
  check_j_domain(x, p);
  const Interval da = jprime_point(x.lo(), p);
  const Interval db = x.is_point() ? da : jprime_point(x.hi(), p);
  Interval lower;
  if (mpfr_less_p(x.hi(), p.x1.lo())) {
    lower = db;
  } else if (mpfr_greater_p(x.lo(), p.x1.hi())) {
    lower = -da;
  }
  const Interval upper = max(abs(da), abs(db));
  if (mpfr_sgn(lower.lo()) < 0) return Interval::from_endpoints(Interval().lo(), upper.hi());
  return Interval::from_endpoints(lower.lo(), upper.hi());
}

Interval j_second_deriv(const Interval& x, const BellmanParams& p) { return -(p.gamma / j_value(x, p)); }

Interval j_fourth_deriv(const Interval& x, const BellmanParams& p) {
  const Interval j = j_value(x, p);
  const Interval d = j_deriv(x, p);
  return -(p.gamma * (p.gamma + Interval(2.0) * sqr(d))) / (j * sqr(j));
}

Interval j_prime_sq_second_deriv(const Interval& x, const BellmanParams& p) {
  const Interval j = j_value(x, p);
  const Interval d = j_deriv(x, p);
  return Interval(2.0) * p.gamma * (p.gamma + sqr(d)) / sqr(j);
}

Interval lower_bound_epsilon(const Interval& x, const BellmanParams& p) {
  const Interval u = log(p.w_iv / x);
  const Interval c = log(Interval(2.0) * sqrt(constants::pi()));
  return (log(u) / u).scaled_pow2(-1) + c / u;
}

// --- the lower bound J(1 - x) > x sqrt(log(w/x)) -----------------------------

Report verify_j_lower_bound(const BellmanParams& p) {
  PrecisionScope scope{Precision(std::max(128, p.precision))};
  Report report;
  report.suite = "J lower bound near 1";
  report.fingerprint.emplace_back("w", to_string(p.w));

  const Rational x_max(1, 64);

  {
    // The cited lower bound for I holds on (0, 1/5]; it is applied at x/w.
    const bool ok = x_max / p.w <= Rational(1, 5);
    report.add({"jlb.profile-bound-range", ok ? Status::pass : Status::fail,
                "(1/64)/w = " + to_string(Rational(x_max / p.w)) + " <= 1/5"});
  }

  const Interval eps = lower_bound_epsilon(Interval(x_max), p);
  {
    const bool ok = certainly_lt(eps, Rational(1));
    report.add({"jlb.epsilon(1/64)<1", ok ? Status::pass : Status::fail, "epsilon(1/64) in " + to_string(eps, 12),
                1.0 - eps.hi_double()});
  }
  {
    const Interval k = constants::sqrt2() * p.jprime_scale * (Interval(1.0) - eps);
    const bool ok = certainly_gt(k, Rational(1));
    report.add({"jlb.constant>1", ok ? Status::pass : Status::fail,
                "(sqrt2/(2w)) I(1/(2w))^-1 (1 - epsilon(1/64)) in " + to_string(k, 12), k.lo_double() - 1.0});
  }
  {
    // d(epsilon)/dx = (log(u)/2 + log(2 sqrt(pi)) - 1/2) / (u^2 x) with u = log(w/x);
    // certify the numerator (and u) positive on [2^-40, 1/64].
    const BoundFn numerator = [](const Box& b, const BellmanParams& q) {
      const Interval u = log(q.w_iv / b.coord(0));
      if (mpfr_sgn(u.lo()) <= 0) throw DomainError("u must be positive");
      const Interval c = log(Interval(2.0) * sqrt(constants::pi()));
      return log(u).scaled_pow2(-1) + c - Interval(0.5);
    };
    SubdivisionOptions opt;
    opt.max_depth = 40;
    opt.ladder = {std::max(128, p.precision)};
    const auto res = subdivide(Box::line(0x1p-40, 1.0 / 64), numerator, Rational(0), p.w, opt);
    ReportItem item{"jlb.epsilon-increasing-grid", res.verified ? Status::pass : Status::fail,
                    "derivative numerator > 0 on [2^-40, 1/64], " + std::to_string(res.leaves.size()) + " leaves"};
    if (res.verified) item.margin = res.min_bound;
    item.depth = res.max_depth_reached;
    report.add(item);
  }
  {
    // Below 2^-40, u >= log(w 2^40) > e, where (log u)/u and 1/u both decrease.
    const Interval u_tail = log(p.w_iv * Interval(0x1p40));
    const Interval e = exp(Interval(1.0));
    const bool ok = mpfr_greater_p(u_tail.lo(), e.hi());
    report.add({"jlb.epsilon-increasing-tail", ok ? Status::pass : Status::fail,
                "log(w 2^40) in " + to_string(u_tail, 10) + " > e", u_tail.lo_double() - e.hi_double()});
  }
  return report;
}

}  // namespace isoperim
