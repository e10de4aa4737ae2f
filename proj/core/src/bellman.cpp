#include "isoperim/bellman.hpp"

#include <optional>

#include "isoperim/errors.hpp"
#include "isoperim/subdivision.hpp"

namespace isoperim {

// --- Q(sqrt 2) arithmetic ----------------------------------------------------

Interval QuadSurd::to_interval() const {
  if (b == 0) return Interval(a);
  return Interval(a) + Interval(b) * constants::sqrt2();
}

QuadSurd operator+(const QuadSurd& x, const QuadSurd& y) { return {x.a + y.a, x.b + y.b}; }
QuadSurd operator-(const QuadSurd& x, const QuadSurd& y) { return {x.a - y.a, x.b - y.b}; }
QuadSurd operator*(const QuadSurd& x, const QuadSurd& y) {
  return {x.a * y.a + 2 * x.b * y.b, x.a * y.b + x.b * y.a};
}
QuadSurd operator*(const Rational& k, const QuadSurd& x) { return {k * x.a, k * x.b}; }

const QCoeffs& QCoeffs::exact() {
  // (2/3) x (1 - x) (4 sqrt2 - 3 + (12 - 8 sqrt2) x), expanded.
  static const QCoeffs q{{Rational(-2), Rational(8, 3)}, {Rational(10), Rational(-8)}, {Rational(-8), Rational(16, 3)}};
  return q;
}

QuadSurd QCoeffs::at(const Rational& x) const {
  const QuadSurd xs{x, 0};
  return ((c3 * xs + c2) * xs + c1) * xs;
}

namespace {

// Interval coefficients of Q, Q', Q'' at the working precision.
struct QIntervals {
  int bits = 0;
  Interval c1, c2, c3;
  Interval d1_1, d1_2;  // Q' = c1 + d1_1 x + d1_2 x^2
  Interval d2_0, d2_1;  // Q'' = d2_0 + d2_1 x
};

const QIntervals& q_intervals() {
  thread_local QIntervals cache;
  const int bits = working_precision().bits();
  if (cache.bits != bits) {
    const QCoeffs& q = QCoeffs::exact();
    cache.c1 = q.c1.to_interval();
    cache.c2 = q.c2.to_interval();
    cache.c3 = q.c3.to_interval();
    cache.d1_1 = (Rational(2) * q.c2).to_interval();
    cache.d1_2 = (Rational(3) * q.c3).to_interval();
    cache.d2_0 = (Rational(2) * q.c2).to_interval();
    cache.d2_1 = (Rational(6) * q.c3).to_interval();
    cache.bits = bits;
  }
  return cache;
}

Interval point(mpfr_srcptr a) { return Interval::from_endpoints(a, a); }

// log2(1/x) for x in (0, 1], clamped at 0 (rounding near 1 can dip below).
Interval log2_inv(const Interval& x) {
  Interval s = -log2(x);
  if (mpfr_sgn(s.lo()) < 0) s = Interval::from_endpoints(Interval().lo(), s.hi());
  if (mpfr_sgn(s.hi()) < 0) s = Interval();
  return s;
}

Interval L_point(mpfr_srcptr a) {
  if (mpfr_zero_p(a)) return Interval();
  const Interval x = point(a);
  return x * sqrt(log2_inv(x));
}

void check_unit(const Interval& x, const char* what) {
  if (mpfr_sgn(x.lo()) < 0 || mpfr_cmp_ui(x.hi(), 1) > 0) throw DomainError(std::string(what) + " requires x in [0, 1]");
}

// log2(1/x) for the derivatives, which need it bounded away from 0.
Interval derivative_s(const Interval& x) {
  if (mpfr_sgn(x.lo()) <= 0 || mpfr_cmp_ui(x.hi(), 1) >= 0) {
    throw DomainError("derivatives of L require 0 < x < 1");
  }
  const Interval s = -log2(x);
  if (mpfr_sgn(s.lo()) <= 0) throw DomainError("derivatives of L require 0 < x < 1");
  return s;
}

std::optional<Interval> clip(const Interval& x, const Rational& a, const Rational& b) {
  const Interval ia(a), ib(b);
  mpfr_srcptr lo = mpfr_greater_p(x.lo(), ia.lo()) ? x.lo() : ia.lo();
  mpfr_srcptr hi = mpfr_less_p(x.hi(), ib.hi()) ? x.hi() : ib.hi();
  if (mpfr_greater_p(lo, hi)) return std::nullopt;
  return Interval::from_endpoints(lo, hi);
}

}  // namespace

// --- L -----------------------------------------------------------------------

Interval L_value(const Interval& x) {
  check_unit(x, "L");
  if (x.is_point()) return L_point(x.lo());
  // L increases on [0, e^-1/2] and decreases after; 3/5 < e^-1/2 < 61/100.
  const Interval a = L_point(x.lo());
  const Interval b = L_point(x.hi());
  if (compare(x.hi(), Rational(3, 5)) <= 0) return Interval::from_endpoints(a.lo(), b.hi());
  if (compare(x.lo(), Rational(61, 100)) >= 0) return Interval::from_endpoints(b.lo(), a.hi());
  const Interval peak = exp(Interval(-0.5)) * sqrt(Interval(1.0) / (Interval(2.0) * constants::ln2()));
  mpfr_srcptr lower = mpfr_lessequal_p(a.lo(), b.lo()) ? a.lo() : b.lo();
  return Interval::from_endpoints(lower, peak.hi());
}

Interval L_d1(const Interval& x) {
  const Interval rs = sqrt(derivative_s(x));
  return rs - Interval(1.0) / (Interval(2.0) * constants::ln2() * rs);
}

Interval L_d2(const Interval& x) {
  const Interval s = derivative_s(x);
  const Interval rs = sqrt(s);
  const Interval& ln2 = constants::ln2();
  return -(Interval(1.0) / (Interval(2.0) * x * ln2 * rs)) - Interval(1.0) / (Interval(4.0) * x * sqr(ln2) * s * rs);
}

Interval L_d3(const Interval& x) {
  const Interval s = derivative_s(x);
  const Interval rs = sqrt(s);
  const Interval& ln2 = constants::ln2();
  const Interval first = Interval(1.0) / (Interval(2.0) * ln2 * rs);
  const Interval second = Interval(3.0) / (Interval(8.0) * ln2 * sqr(ln2) * sqr(s) * rs);
  return (first - second) / sqr(x);
}

// --- Q -----------------------------------------------------------------------

Interval Q_value(const Interval& x) {
  const QIntervals& q = q_intervals();
  return ((q.c3 * x + q.c2) * x + q.c1) * x;
}

Interval Q_d1(const Interval& x) {
  const QIntervals& q = q_intervals();
  return (q.d1_2 * x + q.d1_1) * x + q.c1;
}

Interval Q_d2(const Interval& x) {
  const QIntervals& q = q_intervals();
  return q.d2_1 * x + q.d2_0;
}

// --- B and G -----------------------------------------------------------------

Interval B_value(const Interval& x, const BellmanParams& p) {
  check_unit(x, "B");
  std::optional<Interval> out;
  auto take = [&](const Interval& v) { out = out ? Interval::hull(*out, v) : v; };
  if (auto piece = clip(x, Rational(0), Rational(1, 4))) take(L_value(*piece));
  if (auto piece = clip(x, Rational(1, 4), Rational(1, 2))) take(Q_value(*piece));
  if (auto piece = clip(x, Rational(1, 2), Rational(1))) take(j_value(*piece, p));
  return *out;
}

namespace {

Interval two_point_tail(const Interval& x, const Interval& y, const BellmanParams& p) {
  return B_value(x, p) - Interval(2.0) * B_value((x + y).scaled_pow2(-1), p);
}

}  // namespace

Interval G1_value(const Interval& x, const Interval& y, const BellmanParams& p) {
  return sqrt(sqr(y - x) + sqr(B_value(y, p))) + two_point_tail(x, y, p);
}

Interval G2_value(const Interval& x, const Interval& y, const BellmanParams& p) {
  return (y - x) + constants::sqrt2_minus_1() * B_value(y, p) + two_point_tail(x, y, p);
}

Interval G_value(const Interval& x, const Interval& y, const BellmanParams& p) {
  return max(G1_value(x, y, p), G2_value(x, y, p));
}

// --- lemmas ------------------------------------------------------------------

namespace {

ReportItem sign_item(const std::string& id, const std::string& what, const Box& region, const BoundFn& fn) {
  SubdivisionOptions opt;
  opt.max_depth = 60;
  opt.ladder = {64, 128};
  const auto res = subdivide(region, fn, Rational(0), default_w(), opt);
  ReportItem item{id, res.verified ? Status::pass : Status::fail,
                  what + " on " + to_string(region) + ", " + std::to_string(res.leaves.size()) + " leaves"};
  if (res.verified) item.margin = res.min_bound;
  item.depth = res.max_depth_reached;
  if (res.offending) item.detail += ", stuck at " + to_string(*res.offending);
  return item;
}

}  // namespace

Report certify_lemma_Q() {
  Report report;
  report.suite = "Q is increasing and concave";
  const Box region = Box::line(0.0, 33.0 / 64);
  report.add(sign_item("lemma-Q.first-derivative", "Q' > 0", region,
                       [](const Box& b, const BellmanParams&) { return Q_d1(b.coord(0)); }));
  report.add(sign_item("lemma-Q.second-derivative", "Q'' < 0", region,
                       [](const Box& b, const BellmanParams&) { return -Q_d2(b.coord(0)); }));
  return report;
}

Report certify_lemma_L() {
  Report report;
  report.suite = "L is concave";
  report.add(sign_item("lemma-L.second-derivative", "L'' < 0", Box::line(0x1p-30, 0.5),
                       [](const Box& b, const BellmanParams&) { return -L_d2(b.coord(0)); }));
  report.add({"lemma-L.tail", Status::cited,
              "L'' < 0 on (0, 2^-30): both terms of L'' are negative there; not partitioned"});
  return report;
}

}  // namespace isoperim
