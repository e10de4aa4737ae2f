#include "isoperim/interval.hpp"

#include <cmath>
#include <map>
#include <memory>

#include "isoperim/errors.hpp"

namespace isoperim {

namespace {

thread_local int tls_precision_bits = 64;

mpfr_prec_t wp() { return static_cast<mpfr_prec_t>(tls_precision_bits); }

bool is_nonneg(mpfr_srcptr x) { return mpfr_sgn(x) >= 0; }
bool is_nonpos(mpfr_srcptr x) { return mpfr_sgn(x) <= 0; }

void check_nan(const Interval& r) {
  if (mpfr_nan_p(r.lo()) || mpfr_nan_p(r.hi())) throw DomainError("interval operation produced NaN");
}

}  // namespace

Precision::Precision(int bits) : bits_(bits) {
  if (bits < kMinBits) {
    throw DomainError("precision must be at least " + std::to_string(kMinBits) + " bits");
  }
}

Precision working_precision() { return Precision(tls_precision_bits); }

PrecisionScope::PrecisionScope(Precision p) : saved_(working_precision()) {
  tls_precision_bits = p.bits();
}

PrecisionScope::~PrecisionScope() { tls_precision_bits = saved_.bits(); }

// --- construction -----------------------------------------------------------

Interval::Interval(Uninit, mpfr_prec_t prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
}

Interval::Interval() : Interval(Uninit{}, wp()) {
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(double x) : Interval(x, x) {}

Interval::Interval(double lo, double hi) : Interval(Uninit{}, wp()) {
  if (std::isnan(lo) || std::isnan(hi) || lo > hi) {
    // The delegated-to constructor completed, so the destructor releases lo_/hi_.
    throw DomainError("invalid interval endpoints");
  }
  mpfr_set_d(lo_, lo, MPFR_RNDD);
  mpfr_set_d(hi_, hi, MPFR_RNDU);
}

Interval::Interval(const Rational& q) : Interval(q, q) {}

Interval::Interval(const Rational& lo, const Rational& hi) : Interval(Uninit{}, wp()) {
  if (lo > hi) {
    // The delegated-to constructor completed, so the destructor releases lo_/hi_.
    throw DomainError("invalid interval endpoints");
  }
  mpfr_set_q(lo_, lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, hi.get_mpq_t(), MPFR_RNDU);
}

Interval Interval::from_literal(std::string_view literal) { return Interval(parse_rational(literal)); }

Interval Interval::from_endpoints(mpfr_srcptr lo, mpfr_srcptr hi) {
  if (mpfr_nan_p(lo) || mpfr_nan_p(hi) || mpfr_greater_p(lo, hi)) {
    throw DomainError("invalid interval endpoints");
  }
  Interval r(Uninit{}, wp());
  mpfr_set(r.lo_, lo, MPFR_RNDD);
  mpfr_set(r.hi_, hi, MPFR_RNDU);
  return r;
}

Interval Interval::hull(const Interval& a, const Interval& b) {
  return from_endpoints(mpfr_lessequal_p(a.lo_, b.lo_) ? a.lo_ : b.lo_,
                        mpfr_greaterequal_p(a.hi_, b.hi_) ? a.hi_ : b.hi_);
}

Interval::Interval(const Interval& other) : Interval(Uninit{}, std::max(mpfr_get_prec(other.lo_), mpfr_get_prec(other.hi_))) {
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept : Interval(Uninit{}, MPFR_PREC_MIN) {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

Interval& Interval::operator=(const Interval& other) {
  if (this != &other) {
    mpfr_set_prec(lo_, mpfr_get_prec(other.lo_));
    mpfr_set_prec(hi_, mpfr_get_prec(other.hi_));
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

// --- queries ----------------------------------------------------------------

double Interval::lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }
double Interval::mid_double() const {
  return 0.5 * (mpfr_get_d(lo_, MPFR_RNDN) + mpfr_get_d(hi_, MPFR_RNDN));
}

double Interval::width() const {
  mpfr_t w;
  mpfr_init2(w, 64);
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  const double d = mpfr_get_d(w, MPFR_RNDU);
  mpfr_clear(w);
  return d;
}

Interval Interval::lower_point() const { return from_endpoints(lo_, lo_); }
Interval Interval::upper_point() const { return from_endpoints(hi_, hi_); }

bool Interval::is_point() const { return mpfr_equal_p(lo_, hi_) != 0; }

bool Interval::contains(double x) const {
  return mpfr_cmp_d(lo_, x) <= 0 && mpfr_cmp_d(hi_, x) >= 0;
}

bool Interval::contains(const Rational& q) const {
  return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
}

bool Interval::contains(const Interval& other) const {
  return mpfr_lessequal_p(lo_, other.lo_) && mpfr_greaterequal_p(hi_, other.hi_);
}

bool Interval::overlaps(const Interval& other) const {
  return mpfr_lessequal_p(lo_, other.hi_) && mpfr_lessequal_p(other.lo_, hi_);
}

// --- arithmetic -------------------------------------------------------------

Interval operator-(const Interval& a) {
  Interval r(Interval::Uninit{}, wp());
  mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
  return r;
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval r(Interval::Uninit{}, wp());
  mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  check_nan(r);
  return r;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval r(Interval::Uninit{}, wp());
  mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
  check_nan(r);
  return r;
}

Interval operator*(const Interval& a, const Interval& b) {
  Interval r(Interval::Uninit{}, wp());
  mpfr_srcptr a1 = a.lo_, a2 = a.hi_, b1 = b.lo_, b2 = b.hi_;
  auto set = [&](mpfr_srcptr xl, mpfr_srcptr yl, mpfr_srcptr xh, mpfr_srcptr yh) {
    mpfr_mul(r.lo_, xl, yl, MPFR_RNDD);
    mpfr_mul(r.hi_, xh, yh, MPFR_RNDU);
  };
  if (is_nonneg(a1)) {
    if (is_nonneg(b1)) set(a1, b1, a2, b2);
    else if (is_nonpos(b2)) set(a2, b1, a1, b2);
    else set(a2, b1, a2, b2);
  } else if (is_nonpos(a2)) {
    if (is_nonneg(b1)) set(a1, b2, a2, b1);
    else if (is_nonpos(b2)) set(a2, b2, a1, b1);
    else set(a1, b2, a1, b1);
  } else {
    if (is_nonneg(b1)) set(a1, b2, a2, b2);
    else if (is_nonpos(b2)) set(a2, b1, a1, b1);
    else {
      mpfr_t t;
      mpfr_init2(t, wp());
      mpfr_mul(r.lo_, a1, b2, MPFR_RNDD);
      mpfr_mul(t, a2, b1, MPFR_RNDD);
      mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
      mpfr_mul(r.hi_, a1, b1, MPFR_RNDU);
      mpfr_mul(t, a2, b2, MPFR_RNDU);
      mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
      mpfr_clear(t);
    }
  }
  check_nan(r);
  return r;
}

Interval operator/(const Interval& a, const Interval& b) {
  mpfr_srcptr a1 = a.lo_, a2 = a.hi_, b1 = b.lo_, b2 = b.hi_;
  if (!(mpfr_sgn(b1) > 0 || mpfr_sgn(b2) < 0)) {
    throw DomainError("division by an interval containing zero");
  }
  Interval r(Interval::Uninit{}, wp());
  auto set = [&](mpfr_srcptr xl, mpfr_srcptr yl, mpfr_srcptr xh, mpfr_srcptr yh) {
    mpfr_div(r.lo_, xl, yl, MPFR_RNDD);
    mpfr_div(r.hi_, xh, yh, MPFR_RNDU);
  };
  if (mpfr_sgn(b1) > 0) {
    if (is_nonneg(a1)) set(a1, b2, a2, b1);
    else if (is_nonpos(a2)) set(a1, b1, a2, b2);
    else set(a1, b1, a2, b1);
  } else {
    if (is_nonneg(a1)) set(a2, b2, a1, b1);
    else if (is_nonpos(a2)) set(a2, b1, a1, b2);
    else set(a2, b2, a1, b2);
  }
  check_nan(r);
  return r;
}

Interval& Interval::operator+=(const Interval& b) { return *this = *this + b; }
Interval& Interval::operator-=(const Interval& b) { return *this = *this - b; }
Interval& Interval::operator*=(const Interval& b) { return *this = *this * b; }
Interval& Interval::operator/=(const Interval& b) { return *this = *this / b; }

Interval Interval::scaled_pow2(long k) const {
  Interval r(Uninit{}, wp());
  mpfr_mul_2si(r.lo_, lo_, k, MPFR_RNDD);
  mpfr_mul_2si(r.hi_, hi_, k, MPFR_RNDU);
  return r;
}

Interval operator+(const Interval& a, double b) { return a + Interval(b); }
Interval operator-(const Interval& a, double b) { return a - Interval(b); }
Interval operator-(double a, const Interval& b) { return Interval(a) - b; }
Interval operator*(const Interval& a, double b) { return a * Interval(b); }
Interval operator*(double a, const Interval& b) { return Interval(a) * b; }
Interval operator/(const Interval& a, double b) { return a / Interval(b); }
Interval operator/(double a, const Interval& b) { return Interval(a) / b; }

// --- elementary functions ---------------------------------------------------

Interval apply_increasing(MpfrUnary f, const Interval& a) {
  Interval r;
  f(r.lo_mut(), a.lo(), MPFR_RNDD);
  f(r.hi_mut(), a.hi(), MPFR_RNDU);
  check_nan(r);
  return r;
}

Interval apply_decreasing(MpfrUnary f, const Interval& a) {
  Interval r;
  f(r.lo_mut(), a.hi(), MPFR_RNDD);
  f(r.hi_mut(), a.lo(), MPFR_RNDU);
  check_nan(r);
  return r;
}

Interval sqr(const Interval& a) {
  if (is_nonneg(a.lo())) return apply_increasing(mpfr_sqr, a);
  if (is_nonpos(a.hi())) return apply_decreasing(mpfr_sqr, a);
  Interval r = apply_increasing(mpfr_sqr, a);
  mpfr_t t;
  mpfr_init2(t, wp());
  mpfr_sqr(t, a.lo(), MPFR_RNDU);
  mpfr_max(r.hi_mut(), r.hi(), t, MPFR_RNDU);
  mpfr_set_zero(r.lo_mut(), 1);
  mpfr_clear(t);
  return r;
}

Interval sqrt(const Interval& a) {
  if (mpfr_sgn(a.lo()) < 0) throw DomainError("sqrt of an interval with negative part");
  return apply_increasing(mpfr_sqrt, a);
}

Interval log(const Interval& a) {
  if (mpfr_sgn(a.lo()) <= 0) throw DomainError("log of an interval touching zero");
  return apply_increasing(mpfr_log, a);
}

Interval log2(const Interval& a) {
  if (mpfr_sgn(a.lo()) <= 0) throw DomainError("log2 of an interval touching zero");
  return apply_increasing(mpfr_log2, a);
}

Interval exp(const Interval& a) { return apply_increasing(mpfr_exp, a); }

Interval abs(const Interval& a) {
  if (is_nonneg(a.lo())) return Interval(a);
  if (is_nonpos(a.hi())) return -a;
  Interval r = Interval::from_endpoints(a.hi(), a.hi());
  mpfr_t t;
  mpfr_init2(t, wp());
  mpfr_neg(t, a.lo(), MPFR_RNDU);
  mpfr_max(r.hi_mut(), r.hi(), t, MPFR_RNDU);
  mpfr_set_zero(r.lo_mut(), 1);
  mpfr_clear(t);
  return r;
}

Interval min(const Interval& a, const Interval& b) {
  return Interval::from_endpoints(mpfr_lessequal_p(a.lo(), b.lo()) ? a.lo() : b.lo(),
                                  mpfr_lessequal_p(a.hi(), b.hi()) ? a.hi() : b.hi());
}

Interval max(const Interval& a, const Interval& b) {
  return Interval::from_endpoints(mpfr_greaterequal_p(a.lo(), b.lo()) ? a.lo() : b.lo(),
                                  mpfr_greaterequal_p(a.hi(), b.hi()) ? a.hi() : b.hi());
}

Interval apply(ElementaryFn f, const Interval& a) {
  switch (f) {
    case ElementaryFn::sqrt: return sqrt(a);
    case ElementaryFn::ln: return log(a);
    case ElementaryFn::log2: return log2(a);
    case ElementaryFn::exp: return exp(a);
    case ElementaryFn::square: return sqr(a);
  }
  throw DomainError("unknown elementary function");
}

// --- comparisons ------------------------------------------------------------

int compare(mpfr_srcptr x, const Rational& t) { return mpfr_cmp_q(x, t.get_mpq_t()); }

bool certainly_gt(const Interval& a, const Rational& t) { return compare(a.lo(), t) > 0; }
bool certainly_lt(const Interval& a, const Rational& t) { return compare(a.hi(), t) < 0; }
bool certainly_gt(const Interval& a, double t) { return mpfr_cmp_d(a.lo(), t) > 0; }
bool certainly_lt(const Interval& a, double t) { return mpfr_cmp_d(a.hi(), t) < 0; }

std::pair<Interval, Interval> bisect(const Interval& a) {
  if (a.is_point()) throw CannotSplitError("cannot bisect a degenerate interval");
  mpfr_t mid;
  mpfr_init2(mid, wp());
  mpfr_add(mid, a.lo(), a.hi(), MPFR_RNDN);
  mpfr_div_2ui(mid, mid, 1, MPFR_RNDN);
  const bool inside = mpfr_less_p(a.lo(), mid) && mpfr_less_p(mid, a.hi());
  if (!inside) {
    mpfr_clear(mid);
    throw CannotSplitError("no representable midpoint strictly inside the interval");
  }
  auto halves = std::make_pair(Interval::from_endpoints(a.lo(), mid), Interval::from_endpoints(mid, a.hi()));
  mpfr_clear(mid);
  return halves;
}

// --- constants --------------------------------------------------------------

namespace {

struct ConstantTable {
  Interval sqrt2, sqrt2_minus_1, inv_sqrt2, inv_sqrt_2pi, ln2, pi;
};

ConstantTable make_constants() {
  Interval two(2.0);
  Interval s2 = sqrt(two);
  Interval pi_iv;
  mpfr_const_pi(pi_iv.lo_mut(), MPFR_RNDD);
  mpfr_const_pi(pi_iv.hi_mut(), MPFR_RNDU);
  Interval ln2_iv;
  mpfr_const_log2(ln2_iv.lo_mut(), MPFR_RNDD);
  mpfr_const_log2(ln2_iv.hi_mut(), MPFR_RNDU);
  Interval one(1.0);
  return ConstantTable{s2, s2 - one, one / s2, one / sqrt(two * pi_iv), ln2_iv, pi_iv};
}

const ConstantTable& table() {
  thread_local std::map<int, std::unique_ptr<ConstantTable>> cache;
  auto& slot = cache[tls_precision_bits];
  if (!slot) slot = std::make_unique<ConstantTable>(make_constants());
  return *slot;
}

}  // namespace

namespace constants {
const Interval& sqrt2() { return table().sqrt2; }
const Interval& sqrt2_minus_1() { return table().sqrt2_minus_1; }
const Interval& inv_sqrt2() { return table().inv_sqrt2; }
const Interval& inv_sqrt_2pi() { return table().inv_sqrt_2pi; }
const Interval& ln2() { return table().ln2; }
const Interval& pi() { return table().pi; }
}  // namespace constants

// --- formatting -------------------------------------------------------------

std::string format_endpoint(mpfr_srcptr x, mpfr_rnd_t rnd, int digits) {
  char buf[256];
  const char* fmt = rnd == MPFR_RNDD ? "%.*RDe" : rnd == MPFR_RNDU ? "%.*RUe" : "%.*RNe";
  mpfr_snprintf(buf, sizeof buf, fmt, digits - 1, x);
  return buf;
}

std::string to_string(const Interval& a, int digits) {
  return "[" + format_endpoint(a.lo(), MPFR_RNDD, digits) + ", " + format_endpoint(a.hi(), MPFR_RNDU, digits) + "]";
}

}  // namespace isoperim
