#include "isoperim/claims.hpp"

#include <map>
#include <sstream>

#include "isoperim/bellman.hpp"
#include "isoperim/errors.hpp"

namespace isoperim {

namespace {

// id  dim  region (lo hi per axis)  threshold  bound  reference
const std::string kManifest = R"(# Two-point inequality, near the L/J/Q corner.
LJQ1  2  1/16 1/4   1/2 3/4    1e-6  h_LJQ_1  G[B_w](x,y) on the L-J-Q rectangle
LJQ2  1  1/2 3/4               1e-4  h_LJQ_2  G_LJQ(1/16, y)
LJ1   1  1/2 5/8               0.01  h_LJ_1   h_LJ(c - 1/4, c)
QJQ1  2  1/4 1/2   1/2 33/64   1e-5  h_QJQ_1  y-derivative of the QJQ expression, halved
QJQ2  2  1/4 1/2   33/64 3/4   1e-7  h_QJQ_2  (y-x)^2 + J(y)^2 - (2Q((x+y)/2) - Q(x))^2
QJ1   2  1/4 1/2   1/2 5/8     1e-5  h_QJ_1   -(1/2) x-derivative of g_QJ
QJ2   2  1/4 1/2   5/8 1       1e-7  h_QJ_2   sqrt((y-x)^2 + J(y)^2) + Q(x) - 2J((x+y)/2)
# Poincare inequality.
P1    1  1/64 1/4              1e-4  h_P_1    G_P(x)
P2    1  1/4 1/2               1e-4  h_P_2    -G_P'(x)
)";

// Endpoints of a box coordinate as point intervals.
Interval lo_of(const Box& b, int axis) { return b.lower(axis); }
Interval hi_of(const Box& b, int axis) { return b.upper(axis); }

Interval lower_point(const Interval& v) { return v.lower_point(); }
Interval upper_point(const Interval& v) { return v.upper_point(); }

Interval half_sum(const Interval& a, const Interval& b) { return (a + b).scaled_pow2(-1); }

// Range [a.lo, b.hi] spanned by two point enclosures.
Interval span(const Interval& a, const Interval& b) { return Interval::from_endpoints(a.lo(), b.hi()); }

Rational x1_of(const BellmanParams& p) { return Rational(1) - p.w / 2; }

Interval h_ljq_1(const Box& b, const BellmanParams& p) {
  const Interval xl = lo_of(b, 0), xh = hi_of(b, 0), yl = lo_of(b, 1), yh = hi_of(b, 1);
  const Interval j_lo = lower_point(j_value(b.coord(1), p));
  const Interval gap = yl - xh;
  const Interval head = max(sqrt(sqr(gap) + sqr(j_lo)), gap + constants::sqrt2_minus_1() * j_lo);
  return head + L_value(xl) - Interval(2.0) * Q_value(half_sum(xh, yh));
}

Interval h_ljq_2(const Box& b, const BellmanParams& p) {
  const Interval yl = lo_of(b, 0), yh = hi_of(b, 0);
  const Interval sixteenth(Rational(1, 16));
  const Interval j_lo = lower_point(j_value(b.coord(0), p));
  return yl - sixteenth + constants::sqrt2_minus_1() * j_lo + L_value(sixteenth) -
         Interval(2.0) * Q_value(Interval(Rational(1, 32)) + yh.scaled_pow2(-1));
}

Interval h_lj_1(const Box& b, const BellmanParams& p) {
  const Interval cl = lo_of(b, 0), ch = hi_of(b, 0);
  const Interval quarter(Rational(1, 4));
  const Interval u = span(Interval(2.0) * cl - quarter, Interval(2.0) * ch - quarter);
  const Interval j_lo = lower_point(j_value(u, p));
  const Interval j_hi = upper_point(j_value(b.coord(0), p));
  return Interval(2.0) * cl - Interval(0.5) + constants::sqrt2_minus_1() * j_lo + L_value(quarter) -
         Interval(2.0) * j_hi;
}

Interval h_qjq_1(const Box& b, const BellmanParams& p) {
  const Interval xl = lo_of(b, 0), xh = hi_of(b, 0), yl = lo_of(b, 1), yh = hi_of(b, 1);
  const Interval jj = j_value(yh, p) * j_deriv(yh, p);
  const Interval factor = Interval(2.0) * Q_value(half_sum(xl, yh)) - Q_value(xl);
  return yl - xh + jj - factor * Q_d1(half_sum(xl, yl));
}

Interval h_qjq_2(const Box& b, const BellmanParams& p) {
  const Interval xl = lo_of(b, 0), xh = hi_of(b, 0), yl = lo_of(b, 1), yh = hi_of(b, 1);
  const Interval j_lo = lower_point(j_value(b.coord(1), p));
  const Interval factor = Interval(2.0) * Q_value(half_sum(xl, yh)) - Q_value(xl);
  return sqr(yl - xh) + sqr(j_lo) - sqr(factor);
}

Interval h_qj_1(const Box& b, const BellmanParams& p) {
  const Interval xl = lo_of(b, 0), xh = hi_of(b, 0), yl = lo_of(b, 1), yh = hi_of(b, 1);
  const Interval m_lo = half_sum(xl, yl), m_hi = half_sum(xh, yh);
  const Interval m = span(m_lo, m_hi);
  const Interval jm = j_value(m, p);
  const Interval j_lo = lower_point(jm), j_hi = upper_point(jm);
  const Interval two(2.0);
  // m_hi is the exact midpoint of two doubles, so the comparison is decided.
  const bool rising = compare(m_hi.hi(), x1_of(p)) < 0;
  Interval out = yl - xh;
  if (rising) {
    out += (two * j_lo - Q_value(xh)) * j_deriv(m_hi, p);
  } else {
    out -= (two * j_hi - Q_value(xl)) * upper_point(j_deriv_abs(m, p));
  }
  out -= (two * j_hi - Q_value(xl)) * Q_d1(xl);
  return out;
}

Interval h_qj_2(const Box& b, const BellmanParams& p) {
  const Interval xl = lo_of(b, 0), xh = hi_of(b, 0), yl = lo_of(b, 1), yh = hi_of(b, 1);
  // J decreases on [5/8, 1]; near y = 1 the lower end of J(yh) is clamped to 0.
  const Interval j_y = lower_point(j_value(yh, p));
  const Interval m = span(half_sum(xl, yl), half_sum(xh, yh));
  const Interval j_hi = upper_point(j_value(m, p));
  return sqrt(sqr(yl - xh) + sqr(j_y)) + Q_value(xl) - Interval(2.0) * j_hi;
}

Interval h_p_1(const Box& b, const BellmanParams& p) {
  const Interval xl = lo_of(b, 0), xh = hi_of(b, 0);
  const Interval one(1.0);
  const Interval j = lower_point(j_value(one - xl, p));
  return (L_value(xl) + j).scaled_pow2(-1) - Interval(2.0) * xh * (one - xl);
}

Interval h_p_2(const Box& b, const BellmanParams& p) {
  const Interval xl = lo_of(b, 0), xh = hi_of(b, 0);
  const Interval one(1.0);
  const Interval jd = lower_point(j_deriv(one - xl, p));
  return (jd - Q_d1(xl)).scaled_pow2(-1) - Interval(4.0) * xh + Interval(2.0);
}

const std::map<std::string, BoundFn>& bound_table() {
  static const std::map<std::string, BoundFn> table{
      {"h_LJQ_1", h_ljq_1}, {"h_LJQ_2", h_ljq_2}, {"h_LJ_1", h_lj_1},  {"h_QJQ_1", h_qjq_1}, {"h_QJQ_2", h_qjq_2},
      {"h_QJ_1", h_qj_1},   {"h_QJ_2", h_qj_2},   {"h_P_1", h_p_1},    {"h_P_2", h_p_2},
  };
  return table;
}

double exact_double(const Rational& q, const std::string& where) {
  const double d = q.get_d();
  if (Rational(d) != q) throw ParseError(where + ": region endpoint " + to_string(q) + " is not a double");
  return d;
}

}  // namespace

Box ClaimSpec::box() const {
  const auto lo = [&](int i) { return exact_double(region[i].first, id); };
  const auto hi = [&](int i) { return exact_double(region[i].second, id); };
  return dim == 1 ? Box::line(lo(0), hi(0)) : Box::rect(lo(0), hi(0), lo(1), hi(1));
}

const std::string& claims_manifest() { return kManifest; }

BoundFn bound_function(const std::string& name) {
  const auto& table = bound_table();
  auto it = table.find(name);
  if (it == table.end()) throw LookupError("unknown bound function: " + name);
  return it->second;
}

std::vector<ClaimSpec> parse_manifest(const std::string& text) {
  std::vector<ClaimSpec> out;
  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream in(line);
    ClaimSpec c;
    std::string tok;
    const std::string where = "manifest line " + std::to_string(lineno);
    if (!(in >> c.id >> c.dim) || (c.dim != 1 && c.dim != 2)) throw ParseError(where + ": expected id and dim");
    for (int i = 0; i < c.dim; ++i) {
      std::string a, b;
      if (!(in >> a >> b)) throw ParseError(where + ": missing region endpoint");
      c.region.emplace_back(parse_rational(a), parse_rational(b));
      if (!(c.region.back().first < c.region.back().second)) throw ParseError(where + ": empty region");
    }
    if (!(in >> tok)) throw ParseError(where + ": missing threshold");
    c.threshold = parse_rational(tok);
    if (c.threshold <= 0) throw ParseError(where + ": threshold must be positive");
    if (!(in >> c.bound_name)) throw ParseError(where + ": missing bound function");
    std::getline(in >> std::ws, c.reference);
    c.bound = bound_function(c.bound_name);
    c.box();  // endpoints must be doubles
    out.push_back(std::move(c));
  }
  return out;
}

const std::vector<ClaimSpec>& registered_claims() {
  static const std::vector<ClaimSpec> claims = parse_manifest(kManifest);
  return claims;
}

const ClaimSpec& find_claim(const std::string& id) {
  for (const auto& c : registered_claims()) {
    if (c.id == id) return c;
  }
  throw LookupError("unknown claim '" + id + "'; registered: " + registry_listing());
}

std::string registry_listing() {
  std::string out;
  for (const auto& c : registered_claims()) {
    if (!out.empty()) out += ", ";
    out += c.id;
  }
  return out;
}

}  // namespace isoperim
