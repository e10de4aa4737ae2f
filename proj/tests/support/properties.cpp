#include "properties.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "isoperim/bellman.hpp"
#include "isoperim/errors.hpp"
#include "isoperim/subdivision.hpp"

namespace isoperim::testing {

namespace {

struct Op {
  double lo, hi;  // sampling domain
  int arity;
  std::function<Interval(const Interval&, const Interval&)> fn;
  // Domain of the second operand, when different.
  double lo2 = 0, hi2 = 0;
};

const std::map<std::string, Op>& ops() {
  static const std::map<std::string, Op> table = [] {
    const BellmanParams& p = BellmanParams::defaults();
    std::map<std::string, Op> t;
    t["add"] = {-8, 8, 2, [](const Interval& a, const Interval& b) { return a + b; }};
    t["sub"] = {-8, 8, 2, [](const Interval& a, const Interval& b) { return a - b; }};
    t["mul"] = {-8, 8, 2, [](const Interval& a, const Interval& b) { return a * b; }};
    t["div"] = {-8, 8, 2, [](const Interval& a, const Interval& b) { return a / b; }, 0.125, 8};
    t["min"] = {-8, 8, 2, [](const Interval& a, const Interval& b) { return min(a, b); }};
    t["max"] = {-8, 8, 2, [](const Interval& a, const Interval& b) { return max(a, b); }};
    t["sqr"] = {-8, 8, 1, [](const Interval& a, const Interval&) { return sqr(a); }};
    t["abs"] = {-8, 8, 1, [](const Interval& a, const Interval&) { return abs(a); }};
    t["exp"] = {-8, 8, 1, [](const Interval& a, const Interval&) { return exp(a); }};
    t["sqrt"] = {0, 100, 1, [](const Interval& a, const Interval&) { return sqrt(a); }};
    t["log"] = {1e-6, 100, 1, [](const Interval& a, const Interval&) { return log(a); }};
    t["log2"] = {1e-6, 100, 1, [](const Interval& a, const Interval&) { return log2(a); }};
    t["Phi"] = {-8, 8, 1, [](const Interval& a, const Interval&) { return norm_cdf(a); }};
    t["quantile"] = {1e-5, 1 - 1e-5, 1, [](const Interval& a, const Interval&) { return norm_quantile(a); }};
    t["I"] = {1e-5, 1 - 1e-5, 1, [](const Interval& a, const Interval&) { return profile_I(a); }};
    t["J"] = {0.1, 0.999, 1, [&p](const Interval& a, const Interval&) { return j_value(a, p); }};
    return t;
  }();
  return table;
}

struct Nested {
  double outer_lo, inner_lo, point, inner_hi, outer_hi;
};

Nested nested(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  double v[5];
  for (double& x : v) x = u(rng);
  std::sort(v, v + 5);
  return {v[0], v[1], v[2], v[3], v[4]};
}

std::string show(const Interval& a) { return to_string(a, 20); }

}  // namespace

const std::vector<std::string>& containment_ops() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [k, _] : ops()) out.push_back(k);
    return out;
  }();
  return names;
}

PropertyOutcome containment_trials(const std::string& name, int trials, std::uint64_t seed) {
  const Op& op = ops().at(name);
  PropertyOutcome out{"containment." + name, 0, 0, {}};
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const Nested a = nested(rng, op.lo, op.hi);
    const Nested b = op.lo2 < op.hi2 ? nested(rng, op.lo2, op.hi2) : nested(rng, op.lo, op.hi);
    Interval fy, fx, fp;
    {
      PrecisionScope s{Precision(64)};
      const Interval y1(a.outer_lo, a.outer_hi), y2(b.outer_lo, b.outer_hi);
      const Interval x1(a.inner_lo, a.inner_hi), x2(b.inner_lo, b.inner_hi);
      fy = op.fn(y1, y2);
      fx = op.fn(x1, x2);
    }
    {
      PrecisionScope s{Precision(256)};
      fp = op.fn(Interval(a.point), Interval(b.point));
    }
    ++out.trials;
    if (!fy.contains(fx) || !fx.contains(fp)) {
      if (out.violations++ == 0) {
        std::ostringstream os;
        os << std::hexfloat << "X=[" << a.inner_lo << "," << a.inner_hi << "] x=" << a.point << ": f(Y)=" << show(fy)
           << " f(X)=" << show(fx) << " f(x)=" << show(fp);
        out.detail = os.str();
      }
    }
  }
  if (out.ok()) out.detail = std::to_string(out.trials) + " nested trials";
  return out;
}

PropertyOutcome jj_second_derivative(int points, const BellmanParams& p) {
  PrecisionScope s{Precision(128)};
  PropertyOutcome out{"J*J''=-gamma", 0, 0, {}};
  const Interval h(0x1p-20);
  double worst = 0;
  for (int k = 0; k < points; ++k) {
    const double x = 0.2 + 0.75 * k / std::max(1, points - 1);
    const Interval xi(x);
    const Interval jx = j_value(xi, p);
    const Interval fd = (j_value(xi + h, p) - Interval(2.0) * jx + j_value(xi - h, p)) / sqr(h);
    const Interval prod = jx * fd;
    const double rel = std::fabs(prod.mid_double() + p.gamma.mid_double()) / p.gamma.mid_double();
    worst = std::max(worst, rel);
    const Interval encl = jx * j_second_deriv(xi, p);
    ++out.trials;
    if (rel > 1e-8 || !encl.overlaps(-p.gamma)) {
      if (out.violations++ == 0) {
        out.detail = "x=" + std::to_string(x) + ": J*fd=" + show(prod) + " J*J''=" + show(encl);
      }
    }
  }
  if (out.ok()) {
    std::ostringstream os;
    os << out.trials << " points, worst relative finite-difference error " << worst;
    out.detail = os.str();
  }
  return out;
}

PropertyOutcome breakpoint_continuity(const BellmanParams& p) {
  PropertyOutcome out{"B-breakpoint-continuity", 0, 0, {}};
  auto check = [&](bool ok, const std::string& what) {
    ++out.trials;
    if (!ok && out.violations++ == 0) out.detail = what;
  };
  const Interval quarter(Rational(1, 4)), half(Rational(1, 2));
  check(L_value(quarter).overlaps(Q_value(quarter)), "L(1/4) != Q(1/4)");
  check(Q_value(half).overlaps(j_value(half, p)), "Q(1/2) != J(1/2)");
  for (double bp : {0.25, 0.5}) {
    for (int k : {20, 30, 40}) {
      const double e = std::ldexp(1.0, -k);
      const Interval around = B_value(Interval(bp - e, bp + e), p);
      // B is Lipschitz near the breakpoints with constant below 2.
      check(around.width() < 4 * e + 1e-15, "B varies too much across " + std::to_string(bp));
      const Interval left = B_value(Interval(bp - e), p), right = B_value(Interval(bp + e), p);
      check(std::fabs(left.mid_double() - right.mid_double()) < 4 * e, "jump at " + std::to_string(bp));
    }
  }
  if (out.ok()) out.detail = "L/Q at 1/4 and Q/J at 1/2 agree; no jump down to 2^-40";
  return out;
}

Interval true_expression(const std::string& id, double xd, double yd, const BellmanParams& p) {
  const Interval x(xd), y(yd), two(2.0);
  const Interval r = constants::sqrt2_minus_1();
  auto mid = [](const Interval& a, const Interval& b) { return (a + b).scaled_pow2(-1); };
  if (id == "LJQ1") {
    const Interval jy = j_value(y, p);
    return max(sqrt(sqr(y - x) + sqr(jy)), (y - x) + r * jy) + L_value(x) - two * Q_value(mid(x, y));
  }
  if (id == "LJQ2") {
    const Interval s(Rational(1, 16));
    return x - s + r * j_value(x, p) + L_value(s) - two * Q_value(mid(s, x));
  }
  if (id == "LJ1") {
    return two * x - Interval(0.5) + r * j_value(two * x - Interval(0.25), p) + L_value(Interval(0.25)) -
           two * j_value(x, p);
  }
  if (id == "QJQ1") {
    const Interval m = mid(x, y);
    return y - x + j_value(y, p) * j_deriv(y, p) - (two * Q_value(m) - Q_value(x)) * Q_d1(m);
  }
  if (id == "QJQ2") {
    return sqr(y - x) + sqr(j_value(y, p)) - sqr(two * Q_value(mid(x, y)) - Q_value(x));
  }
  if (id == "QJ1") {
    const Interval m = mid(x, y);
    const Interval f = two * j_value(m, p) - Q_value(x);
    return y - x + f * j_deriv(m, p) - f * Q_d1(x);
  }
  if (id == "QJ2") {
    return sqrt(sqr(y - x) + sqr(j_value(y, p))) + Q_value(x) - two * j_value(mid(x, y), p);
  }
  const Interval one(1.0);
  if (id == "P1") return (L_value(x) + j_value(one - x, p)).scaled_pow2(-1) - two * x * (one - x);
  if (id == "P2") return (j_deriv(one - x, p) - Q_d1(x)).scaled_pow2(-1) - Interval(4.0) * x + two;
  throw LookupError("no true expression for claim " + id);
}

namespace {

// Random dyadic cell of the region, at most `max_depth` halvings per axis.
Box random_cell(const Box& region, std::mt19937_64& rng, int max_depth) {
  Box b = region;
  for (int axis = 0; axis < region.dim; ++axis) {
    const int d = std::uniform_int_distribution<int>(0, max_depth)(rng);
    const std::uint64_t idx = std::uniform_int_distribution<std::uint64_t>(0, (std::uint64_t{1} << d) - 1)(rng);
    const double step = std::ldexp(region.hi[axis] - region.lo[axis], -d);
    b.lo[axis] = region.lo[axis] + step * static_cast<double>(idx);
    b.hi[axis] = b.lo[axis] + step;
  }
  return b;
}

double random_in(double lo, double hi, std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

PropertyOutcome bound_soundness(const ClaimSpec& claim, int trials, std::uint64_t seed) {
  const BellmanParams& p = BellmanParams::defaults();
  PropertyOutcome out{"soundness." + claim.id, 0, 0, {}};
  std::mt19937_64 rng(seed);
  long skipped = 0;
  const Box region = claim.box();
  for (int t = 0; t < trials; ++t) {
    const Box cell = random_cell(region, rng, 14);
    const double x = random_in(cell.lo[0], cell.hi[0], rng);
    const double y = cell.dim == 2 ? random_in(cell.lo[1], cell.hi[1], rng) : 0.0;
    ++out.trials;
    Interval bound;
    try {
      PrecisionScope s{Precision(64)};
      bound = claim.bound(cell, p);
    } catch (const Error&) {
      ++skipped;  // the subdivider treats this as "not certified"
      continue;
    }
    std::string problem;
    try {
      PrecisionScope s{Precision(128)};
      const Interval truth = true_expression(claim.id, x, y, p);
      if (mpfr_less_p(truth.hi(), bound.lo())) problem = "true value " + show(truth) + " below bound " + show(bound);
    } catch (const Error& e) {
      problem = std::string("true expression threw: ") + e.what();
    }
    if (!problem.empty() && out.violations++ == 0) {
      std::ostringstream os;
      os << std::hexfloat << to_string(cell) << " at (" << x << ", " << y << "): " << problem;
      out.detail = os.str();
    }
  }
  if (out.ok()) {
    out.detail = std::to_string(out.trials) + " point-in-box trials, " + std::to_string(skipped) + " boxes too wide to bound";
  }
  return out;
}

PropertyOutcome monotone_refinement(const ClaimSpec& claim, int splits, std::uint64_t seed) {
  const BellmanParams& p = BellmanParams::defaults();
  PropertyOutcome out{"refinement." + claim.id, 0, 0, {}};
  std::mt19937_64 rng(seed);
  const Box region = claim.box();
  PrecisionScope s{Precision(64)};
  int attempts = 0;
  while (out.trials < splits && attempts++ < 20 * splits) {
    const Box cell = random_cell(region, rng, 12);
    const auto split = split_box(cell, {0, 0}, 60);
    if (!split) continue;
    try {
      const double parent = claim.bound(cell, p).lo_double();
      const double left = claim.bound(split->left, p).lo_double();
      const double right = claim.bound(split->right, p).lo_double();
      ++out.trials;
      if (std::min(left, right) < parent - 1e-12) ++out.violations;
    } catch (const Error&) {
      continue;
    }
  }
  out.detail = std::to_string(out.trials - out.violations) + "/" + std::to_string(out.trials) + " splits improve the bound";
  return out;
}

}  // namespace isoperim::testing
