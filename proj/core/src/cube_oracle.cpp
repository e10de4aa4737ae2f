#include "isoperim/cube_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>

#include "isoperim/bellman.hpp"
#include "isoperim/errors.hpp"
#include "isoperim/gaussian_profile.hpp"
#include "isoperim/subdivision.hpp"

namespace isoperim {

namespace {

constexpr double kEqualityTol = 1e-12;
constexpr long double kDeviationFloor = 1e-11L;

void check_dim(int n, int limit, const char* what) {
  if (n < 1 || n > limit) {
    throw DomainError(std::string(what) + ": n must be in [1, " + std::to_string(limit) + "], got " + std::to_string(n));
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

// --- CubeSet -------------------------------------------------------------------

CubeSet::CubeSet(int n) : n_(n) {
  check_dim(n, kMaxCubeDim, "CubeSet");
  words_.assign(std::max<std::uint64_t>(1, points() / 64), 0);
}

CubeSet CubeSet::from_mask(int n, std::uint64_t mask) {
  check_dim(n, 6, "CubeSet::from_mask");
  CubeSet s(n);
  s.words_[0] = n == 6 ? mask : mask & ((std::uint64_t{1} << (1u << n)) - 1);
  return s;
}

CubeSet CubeSet::from_indicator(int n, const std::vector<int>& f) {
  CubeSet s(n);
  if (f.size() != s.points()) throw DomainError("indicator table has the wrong length");
  for (std::uint32_t x = 0; x < s.points(); ++x) {
    if (f[x] != 0) s.insert(x);
  }
  return s;
}

CubeSet CubeSet::subcube(int n, std::uint32_t fixed_mask, std::uint32_t fixed_values) {
  CubeSet s(n);
  for (std::uint32_t x = 0; x < s.points(); ++x) {
    if ((x & fixed_mask) == (fixed_values & fixed_mask)) s.insert(x);
  }
  return s;
}

CubeSet CubeSet::hamming_ball(int n, int r, std::uint32_t center) {
  CubeSet s(n);
  for (std::uint32_t x = 0; x < s.points(); ++x) {
    if (std::popcount(x ^ center) <= r) s.insert(x);
  }
  return s;
}

std::uint64_t CubeSet::count() const {
  std::uint64_t c = 0;
  for (auto w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
  return c;
}

Rational CubeSet::measure() const {
  Rational m(mpz_class(static_cast<unsigned long>(count())), mpz_class(1) << n_);
  m.canonicalize();
  return m;
}

CubeSet CubeSet::complement() const {
  CubeSet c(n_);
  for (std::size_t i = 0; i < words_.size(); ++i) c.words_[i] = ~words_[i];
  if (n_ < 6) c.words_[0] &= (std::uint64_t{1} << (1u << n_)) - 1;
  return c;
}

CubeSet CubeSet::operator|(const CubeSet& other) const {
  if (other.n_ != n_) throw DomainError("union of sets in different dimensions");
  CubeSet u(n_);
  for (std::size_t i = 0; i < words_.size(); ++i) u.words_[i] = words_[i] | other.words_[i];
  return u;
}

std::string CubeSet::hex() const {
  std::string out = "0x";
  const int digits = n_ >= 6 ? 16 : std::max(1, (1 << n_) / 4);
  char buf[20];
  for (std::size_t i = words_.size(); i-- > 0;) {
    std::snprintf(buf, sizeof buf, "%0*llx", digits, static_cast<unsigned long long>(words_[i]));
    out += buf;
  }
  return out;
}

bool is_subcube(const CubeSet& a) {
  const std::uint64_t c = a.count();
  if (c == 0) return false;
  const std::uint32_t full = static_cast<std::uint32_t>(a.points() - 1);
  std::uint32_t all_one = full, all_zero = full;
  for (std::uint32_t x = 0; x < a.points(); ++x) {
    if (!a.contains(x)) continue;
    all_one &= x;
    all_zero &= ~x & full;
  }
  const int fixed = std::popcount(all_one | all_zero);
  return c == (std::uint64_t{1} << (a.n() - fixed));
}

// --- boundary profile ------------------------------------------------------------

BoundaryProfile boundary_profile(const CubeSet& a) {
  BoundaryProfile p;
  p.n = a.n();
  const std::uint64_t total = a.points();
  p.h.assign(total, 0);
  p.h_comp.assign(total, 0);
  for (std::uint32_t x = 0; x < total; ++x) {
    const bool in = a.contains(x);
    int out = 0;
    for (int i = 0; i < p.n; ++i) out += a.contains(x ^ (1u << i)) != in;
    if (in) {
      p.h[x] = static_cast<std::uint8_t>(out);
      ++p.hist[out];
      ++p.size;
      if (out > 0) ++p.boundary_points;
      p.cut_edges += static_cast<std::uint64_t>(out);
    } else {
      p.h_comp[x] = static_cast<std::uint8_t>(out);
      ++p.hist_comp[out];
    }
  }
  return p;
}

namespace {

Rational over_cube(std::uint64_t count, int n) {
  Rational m(mpz_class(static_cast<unsigned long>(count)), mpz_class(1) << n);
  m.canonicalize();
  return m;
}

}  // namespace

Rational BoundaryProfile::measure() const { return over_cube(size, n); }
Rational BoundaryProfile::boundary_measure() const { return over_cube(boundary_points, n); }
Rational BoundaryProfile::edge_cut() const { return over_cube(cut_edges, n); }
Interval BoundaryProfile::sqrt_moment() const { return histogram_sqrt_mean(hist, n); }
Interval BoundaryProfile::sqrt_moment_comp() const { return histogram_sqrt_mean(hist_comp, n); }

Interval histogram_sqrt_mean(const std::array<std::uint64_t, kMaxCubeDim + 1>& hist, int n) {
  Interval sum;
  for (int k = 1; k <= kMaxCubeDim; ++k) {
    if (hist[k] == 0) continue;
    sum += Interval(static_cast<double>(hist[k])) * sqrt(Interval(static_cast<double>(k)));
  }
  return sum.scaled_pow2(-n);
}

// --- main theorem ------------------------------------------------------------------

namespace {

// Right-hand sides by |A| 2^n, computed once per count.
class RhsCache {
 public:
  explicit RhsCache(int n) : n_(n) {}

  const std::pair<std::optional<Interval>, Interval>& at(std::uint64_t count) {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(count);
    if (it != cache_.end()) return it->second;
    const Interval m(over_cube(count, n_));
    std::optional<Interval> l;
    if (over_cube(count, n_) <= Rational(1, 2)) l = L_value(m);
    return cache_.emplace(count, std::make_pair(l, B_value(m, BellmanParams::defaults()))).first->second;
  }

 private:
  int n_;
  std::mutex mutex_;
  std::map<std::uint64_t, std::pair<std::optional<Interval>, Interval>> cache_;
};

struct SetOutcome {
  std::uint64_t count = 0;
  bool has_l = false;
  double slack_l_lo = 0, slack_l_hi = 0;
  double slack_b_lo = 0, slack_b_hi = 0;
  bool subcube = false;
  std::string hex;
};

SetOutcome evaluate_set(const CubeSet& a, RhsCache& rhs) {
  const BoundaryProfile prof = boundary_profile(a);
  const Interval lhs = prof.sqrt_moment();
  const auto& [l, b] = rhs.at(prof.size);
  SetOutcome o;
  o.count = prof.size;
  o.subcube = is_subcube(a);
  if (l) {
    const Interval s = lhs - *l;
    o.has_l = true;
    o.slack_l_lo = s.lo_double();
    o.slack_l_hi = s.hi_double();
  }
  const Interval s = lhs - b;
  o.slack_b_lo = s.lo_double();
  o.slack_b_hi = s.hi_double();
  return o;
}

bool is_equality(double lo, double hi) { return lo > -kEqualityTol && hi < kEqualityTol; }

// Deterministic sample number i: random density, subcube, ball, or union.
CubeSet sample_set(int n, std::uint64_t seed, std::uint64_t i) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + i);
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  auto random_subcube = [&] {
    std::uniform_int_distribution<int> codim(1, n);
    const int k = codim(rng);
    std::vector<int> coords(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) coords[static_cast<std::size_t>(j)] = j;
    std::shuffle(coords.begin(), coords.end(), rng);
    std::uint32_t mask = 0;
    for (int j = 0; j < k; ++j) mask |= 1u << coords[static_cast<std::size_t>(j)];
    return CubeSet::subcube(n, mask, static_cast<std::uint32_t>(rng()) & full);
  };
  switch (i % 4) {
    case 0: {
      CubeSet s(n);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      const double density = unit(rng);
      for (std::uint32_t x = 0; x <= full; ++x) {
        if (unit(rng) < density) s.insert(x);
        if (x == full) break;
      }
      return s;
    }
    case 1:
      return random_subcube();
    case 2: {
      std::uniform_int_distribution<int> radius(0, n);
      return CubeSet::hamming_ball(n, radius(rng), static_cast<std::uint32_t>(rng()) & full);
    }
    default:
      return random_subcube() | random_subcube();
  }
}

}  // namespace

Report check_main_theorem(int n, const CubeCheckOptions& options) {
  check_dim(n, kSampledMax, "check_main_theorem");
  const bool exhaustive = options.sample <= 0;
  if (exhaustive && n > kExhaustiveSets) {
    throw DomainError("exhaustive check limited to n <= " + std::to_string(kExhaustiveSets) + "; use sampling");
  }
  PrecisionScope scope{Precision(std::max(64, working_precision().bits()))};

  const std::uint64_t total = exhaustive ? (std::uint64_t{1} << (1u << n)) : static_cast<std::uint64_t>(options.sample);
  RhsCache rhs(n);
  std::vector<SetOutcome> outcomes(total);
  parallel_for(total, options.jobs, [&](std::size_t i) {
    const CubeSet a = exhaustive ? CubeSet::from_mask(n, i) : sample_set(n, options.seed, i);
    outcomes[i] = evaluate_set(a, rhs);
    if (!exhaustive || outcomes[i].slack_l_lo < -kEqualityTol || outcomes[i].slack_b_lo < -kEqualityTol) {
      outcomes[i].hex = a.hex();
    }
  });

  std::uint64_t l_checked = 0, l_bad = 0, b_bad = 0, eq_sets = 0, eq_non_subcube = 0, subcubes = 0, subcube_missed = 0;
  double min_l = INFINITY, min_b = INFINITY;
  std::size_t arg_l = 0, arg_b = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const SetOutcome& o = outcomes[i];
    if (o.slack_b_lo < min_b) min_b = o.slack_b_lo, arg_b = i;
    if (o.slack_b_lo < -kEqualityTol) ++b_bad;
    if (!o.has_l) continue;
    ++l_checked;
    if (o.slack_l_lo < min_l) min_l = o.slack_l_lo, arg_l = i;
    if (o.slack_l_lo < -kEqualityTol) ++l_bad;
    if (o.count == 0) continue;  // empty set: both sides 0
    const bool eq = is_equality(o.slack_l_lo, o.slack_l_hi);
    if (o.subcube) {
      ++subcubes;
      if (!eq) ++subcube_missed;
    }
    if (eq) {
      ++eq_sets;
      if (!o.subcube) ++eq_non_subcube;
    }
  }

  auto name = [&](std::size_t i) {
    return exhaustive ? CubeSet::from_mask(n, i).hex() : "sample " + std::to_string(i);
  };
  // Counterexamples as n plus hex bitmask.
  auto counterexample = [&](std::size_t i) {
    return "n=" + std::to_string(n) + " A=" + (exhaustive ? CubeSet::from_mask(n, i).hex() : outcomes[i].hex);
  };
  Report r;
  r.suite = "square-root isoperimetry, n = " + std::to_string(n) + (exhaustive ? " (exhaustive)" : " (sampled)");
  r.fingerprint = {{"n", std::to_string(n)},
                   {"mode", exhaustive ? "exhaustive" : "sampled"},
                   {"sets", std::to_string(total)}};
  if (!exhaustive) r.fingerprint.emplace_back("seed", std::to_string(options.seed));

  ReportItem li{"main.L-bound", l_bad == 0 ? Status::pass : Status::fail,
                std::to_string(l_checked) + " sets with |A| <= 1/2, " + std::to_string(l_bad) +
                    " violations; min slack at " + name(arg_l)};
  li.margin = min_l;
  if (l_bad > 0) li.detail += "; counterexample " + counterexample(arg_l);
  r.add(li);
  ReportItem bi{"main.B-bound", b_bad == 0 ? Status::pass : Status::fail,
                std::to_string(total) + " sets, " + std::to_string(b_bad) + " violations; min slack at " + name(arg_b)};
  bi.margin = min_b;
  if (b_bad > 0) bi.detail += "; counterexample " + counterexample(arg_b);
  r.add(bi);
  const bool eq_ok = subcube_missed == 0 && eq_non_subcube == 0;
  r.add({"main.equality-exactly-on-subcubes", eq_ok ? Status::pass : Status::fail,
         std::to_string(eq_sets) + " nonempty equality sets, " + std::to_string(subcubes) + " subcubes with |A| <= 1/2, " +
             std::to_string(subcube_missed) + " subcubes without equality, " + std::to_string(eq_non_subcube) +
             " equality sets that are not subcubes"});
  return r;
}

// --- sharpened classical inequality ------------------------------------------------

Report check_sharpening(int n) {
  check_dim(n, kExhaustiveSets, "check_sharpening");
  PrecisionScope scope{Precision(std::max(64, working_precision().bits()))};
  const std::uint64_t total = std::uint64_t{1} << (1u << n);
  std::uint64_t checked = 0, skipped = 0, bad = 0, eq = 0, subcubes = 0, subcube_missed = 0, eq_non_subcube = 0;
  double min_slack = INFINITY;
  std::uint64_t arg = 0;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    const CubeSet a = CubeSet::from_mask(n, mask);
    const BoundaryProfile prof = boundary_profile(a);
    const Rational m = prof.measure();
    if (prof.size == 0 || m > Rational(1, 2)) {
      ++skipped;
      continue;
    }
    ++checked;
    const Interval mi(m);
    const Interval rhs = Interval(Rational(m * m / prof.boundary_measure())) * log2(Interval(1.0) / mi);
    const Interval slack = Interval(prof.edge_cut()) - rhs;
    if (slack.lo_double() < min_slack) min_slack = slack.lo_double(), arg = mask;
    if (slack.lo_double() < -kEqualityTol) ++bad;
    const bool e = is_equality(slack.lo_double(), slack.hi_double());
    const bool sc = is_subcube(a);
    eq += e;
    subcubes += sc;
    subcube_missed += sc && !e;
    eq_non_subcube += e && !sc;
  }
  Report r;
  r.suite = "sharpened edge isoperimetry, n = " + std::to_string(n);
  ReportItem it{"sharpening.bound", bad == 0 ? Status::pass : Status::fail,
                std::to_string(checked) + " sets with 0 < |A| <= 1/2 (" + std::to_string(skipped) + " skipped), " +
                    std::to_string(bad) + " violations; min slack at " + CubeSet::from_mask(n, arg).hex()};
  it.margin = min_slack;
  r.add(it);
  r.add({"sharpening.equality-on-subcubes", subcube_missed == 0 ? Status::pass : Status::fail,
         std::to_string(subcubes) + " subcubes, " + std::to_string(subcube_missed) + " without equality; " +
             std::to_string(eq) + " equality sets (" + std::to_string(eq_non_subcube) + " not subcubes)"});
  return r;
}

// --- partitions --------------------------------------------------------------------------

Report check_kahn_park(int n) {
  check_dim(n, kExhaustivePartitions, "check_kahn_park");
  PrecisionScope scope{Precision(std::max(64, working_precision().bits()))};
  const std::uint32_t points = 1u << n;
  const std::uint64_t total = std::uint64_t{1} << points;
  const Interval root_n = sqrt(Interval(static_cast<double>(n)));
  std::uint64_t partitions = 0, bad = 0, eq = 0;
  double min_slack = INFINITY;
  std::string arg;
  // For each A of measure 1/2, enumerate B inside the complement; W is the rest.
  for (std::uint64_t a_mask = 0; a_mask < total; ++a_mask) {
    if (static_cast<std::uint32_t>(std::popcount(a_mask)) != points / 2) continue;
    std::vector<std::uint32_t> rest;
    std::vector<int> a_neighbours;
    for (std::uint32_t x = 0; x < points; ++x) {
      if ((a_mask >> x) & 1u) continue;
      int k = 0;
      for (int i = 0; i < n; ++i) k += (a_mask >> (x ^ (1u << i))) & 1u;
      rest.push_back(x);
      a_neighbours.push_back(k);
    }
    const std::uint64_t choices = std::uint64_t{1} << rest.size();
    for (std::uint64_t b_sel = 0; b_sel < choices; ++b_sel) {
      long cut = 0;
      int b_size = 0;
      for (std::size_t j = 0; j < rest.size(); ++j) {
        if ((b_sel >> j) & 1u) cut += a_neighbours[j], ++b_size;
      }
      const double w_size = static_cast<double>(rest.size()) - b_size;
      const Interval lhs = (Interval(static_cast<double>(cut)) + root_n * Interval(w_size)).scaled_pow2(-n);
      const Interval slack = lhs - Interval(0.5);
      ++partitions;
      if (slack.lo_double() < min_slack) {
        min_slack = slack.lo_double();
        std::uint64_t b_mask = 0;
        for (std::size_t j = 0; j < rest.size(); ++j) {
          if ((b_sel >> j) & 1u) b_mask |= std::uint64_t{1} << rest[j];
        }
        char buf[80];
        std::snprintf(buf, sizeof buf, "A=%#llx B=%#llx", static_cast<unsigned long long>(a_mask),
                      static_cast<unsigned long long>(b_mask));
        arg = buf;
      }
      if (slack.lo_double() < -kEqualityTol) ++bad;
      eq += is_equality(slack.lo_double(), slack.hi_double());
    }
  }
  Report r;
  r.suite = "cube partitions, n = " + std::to_string(n);
  ReportItem it{"partition.bound", bad == 0 ? Status::pass : Status::fail,
                std::to_string(partitions) + " partitions with |A| = 1/2, " + std::to_string(bad) + " violations, " +
                    std::to_string(eq) + " equalities; min slack at " + arg};
  it.margin = min_slack;
  r.add(it);
  return r;
}

// --- Poincare ------------------------------------------------------------------------------

Report check_poincare(int n) {
  check_dim(n, kExhaustiveSets, "check_poincare");
  PrecisionScope scope{Precision(std::max(64, working_precision().bits()))};
  const std::uint64_t total = std::uint64_t{1} << (1u << n);
  std::uint64_t bad = 0, identity_bad = 0, eq = 0, eq_unexpected = 0, halves_missed = 0;
  double min_slack = INFINITY;
  std::uint64_t arg = 0;
  std::vector<std::uint64_t> half_cubes;
  for (int i = 0; i < n; ++i) {
    for (std::uint32_t v : {0u, 1u}) {
      std::uint64_t mask = 0;
      for (std::uint32_t x = 0; x < (1u << n); ++x) {
        if (((x >> i) & 1u) == v) mask |= std::uint64_t{1} << x;
      }
      half_cubes.push_back(mask);
    }
  }
  const std::uint64_t full = total - 1;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    const BoundaryProfile prof = boundary_profile(CubeSet::from_mask(n, mask));
    std::array<std::uint64_t, kMaxCubeDim + 1> s_hist{};
    for (std::uint32_t x = 0; x < (1u << n); ++x) ++s_hist[prof.sensitivity(x)];
    // |grad f(x)| = sqrt(s_f(x)) / 2.
    const Interval grad = histogram_sqrt_mean(s_hist, n).scaled_pow2(-1);
    const Interval via_sets = (prof.sqrt_moment() + prof.sqrt_moment_comp()).scaled_pow2(-1);
    if (!grad.overlaps(via_sets)) ++identity_bad;
    const Rational m = prof.measure();
    const Interval slack = grad - Interval(Rational(2 * m * (1 - m)));
    if (slack.lo_double() < min_slack) min_slack = slack.lo_double(), arg = mask;
    if (slack.lo_double() < -kEqualityTol) ++bad;
    const bool half = std::find(half_cubes.begin(), half_cubes.end(), mask) != half_cubes.end();
    const bool constant = mask == 0 || mask == full;
    const bool e = is_equality(slack.lo_double(), slack.hi_double());
    eq += e && !constant;
    if (e && !half && !constant) ++eq_unexpected;
    if (half && !e) ++halves_missed;
  }
  Report r;
  r.suite = "L1 Poincare for Boolean functions, n = " + std::to_string(n);
  ReportItem it{"poincare.bound", bad == 0 ? Status::pass : Status::fail,
                std::to_string(total) + " functions, " + std::to_string(bad) + " violations; min slack at " +
                    CubeSet::from_mask(n, arg).hex()};
  it.margin = min_slack;
  r.add(it);
  r.add({"poincare.equality-exactly-on-half-cubes", eq_unexpected == 0 && halves_missed == 0 ? Status::pass : Status::fail,
         std::to_string(eq) + " non-constant equality cases, " + std::to_string(half_cubes.size()) +
             " half-cube indicators, " + std::to_string(halves_missed) + " missed, " + std::to_string(eq_unexpected) +
             " unexpected"});
  r.add({"poincare.gradient-identity", identity_bad == 0 ? Status::pass : Status::fail,
         "||grad f||_1 = (E sqrt(h_A) + E sqrt(h_{A^c}))/2 on all functions; " + std::to_string(identity_bad) +
             " mismatches"});
  return r;
}

// --- Hamming balls -------------------------------------------------------------------------

BallProfile hamming_ball_profile(long n, long r, const Interval& beta) {
  if (n < 1 || r < 0 || r > n) throw DomainError("hamming_ball_profile needs 0 <= r <= n, n >= 1");
  if (n > 1000000) throw DomainError("hamming_ball_profile supports n <= 10^6");
  PrecisionScope scope{Precision(std::max(128, working_precision().bits()))};
  Interval binom(1.0), sum(1.0);
  for (long k = 0; k < r; ++k) {
    binom = binom * Interval(static_cast<double>(n - k)) / Interval(static_cast<double>(k + 1));
    sum += binom;
  }
  BallProfile out;
  out.measure = sum.scaled_pow2(-n);
  const Interval layer = binom.scaled_pow2(-n);
  out.moment = n == r ? Interval() : layer * exp(beta * log(Interval(static_cast<double>(n - r))));
  if (r < n) {
    const Interval lg = log2(Interval(1.0) / out.measure);
    out.normalized = out.moment / (out.measure * exp(beta * log(lg)));
  }
  return out;
}

Report check_ball_sharpness(const Interval& beta, const std::vector<long>& ns) {
  Report r;
  r.suite = "Hamming balls at r = floor(n/2), beta = " + to_string(beta, 6);
  std::vector<Interval> values;
  for (long n : ns) {
    const BallProfile b = hamming_ball_profile(n, n / 2, beta);
    values.push_back(b.normalized);
    ReportItem it{"ball.n=" + std::to_string(n), Status::pass,
                  "measure " + to_string(b.measure, 8) + ", normalized moment " + to_string(b.normalized, 10)};
    it.margin = b.normalized.mid_double();
    r.add(it);
  }
  bool decreasing = values.size() >= 2;
  for (std::size_t i = 1; i < values.size(); ++i) {
    decreasing = decreasing && mpfr_less_p(values[i].hi(), values[i - 1].lo());
  }
  r.add({"ball.strictly-decreasing", decreasing ? Status::pass : Status::fail,
         "moment / (measure log2(1/measure)^beta) decreases strictly along n"});
  return r;
}

// --- noise operator ---------------------------------------------------------------------------

std::vector<long double> noise_operator(const std::vector<long double>& f, int n, long double rho) {
  check_dim(n, kSampledMax, "noise_operator");
  if (f.size() != (std::size_t{1} << n)) throw DomainError("function table has the wrong length");
  if (rho < -1 || rho > 1) throw DomainError("rho must be in [-1, 1]");
  const long double p = (1 - rho) / 2, q = 1 - p;
  std::vector<long double> g = f;
  for (int i = 0; i < n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t x = 0; x < g.size(); ++x) {
      if (x & bit) continue;
      const long double a = g[x], b = g[x | bit];
      g[x] = q * a + p * b;
      g[x | bit] = p * a + q * b;
    }
  }
  return g;
}

std::vector<int> dictator(int n, int coord) {
  std::vector<int> f(std::size_t{1} << n);
  for (std::size_t x = 0; x < f.size(); ++x) f[x] = ((x >> coord) & 1u) ? -1 : 1;
  return f;
}

std::vector<int> majority(int n) {
  if (n % 2 == 0) throw DomainError("majority needs odd n");
  std::vector<int> f(std::size_t{1} << n);
  for (std::size_t x = 0; x < f.size(); ++x) f[x] = 2 * std::popcount(x) > n ? -1 : 1;
  return f;
}

std::vector<int> random_balanced(int n, std::mt19937_64& rng) {
  std::vector<int> f(std::size_t{1} << n, 1);
  std::fill(f.begin() + static_cast<long>(f.size() / 2), f.end(), -1);
  // Fisher-Yates with our own index draws, so the result does not depend on
  // the standard library's shuffle.
  for (std::size_t i = f.size() - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(f[i], f[j]);
  }
  return f;
}

namespace {

std::array<std::uint64_t, kMaxCubeDim + 1> sensitivity_histogram(const std::vector<int>& f, int n) {
  std::array<std::uint64_t, kMaxCubeDim + 1> hist{};
  for (std::size_t x = 0; x < f.size(); ++x) {
    int s = 0;
    for (int i = 0; i < n; ++i) s += f[x ^ (std::size_t{1} << i)] != f[x];
    ++hist[s];
  }
  return hist;
}

}  // namespace

HellingerTable hellinger_table(const std::vector<int>& f, int n, const std::vector<double>& p_list) {
  PrecisionScope scope{Precision(std::max(64, working_precision().bits()))};
  HellingerTable t;
  t.sqrt_sensitivity = histogram_sqrt_mean(sensitivity_histogram(f, n), n);
  const long double target = static_cast<long double>(t.sqrt_sensitivity.mid_double());
  const std::vector<long double> fl(f.begin(), f.end());
  for (double p : p_list) {
    if (!(p > 0 && p < 0.5)) throw DomainError("noise probabilities must lie in (0, 1/2)");
    const long double lp = p;
    const std::vector<long double> g = noise_operator(fl, n, 1 - 2 * lp);
    long double sum = 0;
    for (long double v : g) sum += std::sqrt(std::max<long double>(0, (1 - v) * (1 + v)));
    const long double mean = sum / static_cast<long double>(g.size());
    HellingerRow row;
    row.p = p;
    row.ratio = mean / (2 * std::sqrt(lp * (1 - lp)));
    row.deviation = std::fabs(row.ratio - target);
    t.rows.push_back(row);
  }
  return t;
}

Report hellinger_lownoise_check(const std::string& label, const std::vector<int>& f, int n,
                                const std::vector<double>& p_list) {
  const HellingerTable t = hellinger_table(f, n, p_list);
  Report r;
  r.suite = "low-noise limit: " + label;
  for (const auto& row : t.rows) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "p = %.0e: ratio %.12Lf, |ratio - E sqrt(s_f)| = %.3Le", row.p, row.ratio,
                  row.deviation);
    r.add({"hellinger." + label + ".p=" + fmt(row.p), Status::pass, buf});
  }
  bool ok = t.rows.size() >= 2;
  std::string detail = "E sqrt(s_f) in " + to_string(t.sqrt_sensitivity, 12) + "; deviation ratios:";
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    const long double prev = t.rows[i - 1].deviation, cur = t.rows[i].deviation;
    // Exact eigenfunctions have zero deviation; in long double the error of
    // 1 - T^2 relative to its size ~4p is about 1e-19 / p, so anything under
    // 1e-11 at p >= 1e-6 is rounding.
    const bool step = cur <= prev / 5 || (prev < kDeviationFloor && cur < kDeviationFloor);
    ok = ok && step;
    detail += " " + (prev > 0 ? fmt(static_cast<double>(prev / std::max(cur, 1e-300L))) : std::string("-"));
  }
  r.add({"hellinger." + label + ".decay", ok ? Status::pass : Status::fail, detail});
  return r;
}

Report check_balanced_sensitivity(int n) {
  check_dim(n, kExhaustiveSets, "check_balanced_sensitivity");
  PrecisionScope scope{Precision(std::max(64, working_precision().bits()))};
  const std::uint32_t points = 1u << n;
  const std::uint64_t total = std::uint64_t{1} << points;
  std::uint64_t balanced = 0, bad = 0;
  double min_value = INFINITY;
  std::uint64_t arg = 0;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    if (static_cast<std::uint32_t>(std::popcount(mask)) != points / 2) continue;
    ++balanced;
    std::vector<int> f(points);
    for (std::uint32_t x = 0; x < points; ++x) f[x] = ((mask >> x) & 1u) ? 1 : -1;
    const Interval v = histogram_sqrt_mean(sensitivity_histogram(f, n), n);
    if (v.lo_double() < min_value) min_value = v.lo_double(), arg = mask;
    if (v.lo_double() < 1.0 - kEqualityTol) ++bad;
  }
  Report r;
  r.suite = "balanced sensitivity, n = " + std::to_string(n);
  ReportItem it{"sensitivity.balanced>=1", bad == 0 ? Status::pass : Status::fail,
                std::to_string(balanced) + " balanced functions, " + std::to_string(bad) + " with E sqrt(s_f) < 1; min at " +
                    CubeSet::from_mask(n, arg).hex()};
  it.margin = min_value - 1.0;
  r.add(it);
  return r;
}

Report check_hellinger(int n, const CubeCheckOptions& options) {
  check_dim(n, kSampledMax, "check_hellinger");
  const std::vector<double> p_list{1e-2, 1e-4, 1e-6};
  Report r;
  r.suite = "low-noise expansion, n = " + std::to_string(n);
  r.fingerprint = {{"n", std::to_string(n)}, {"seed", std::to_string(options.seed)}};
  r.merge(hellinger_lownoise_check("dictator", dictator(n), n, p_list));
  if (n % 2 == 1) r.merge(hellinger_lownoise_check("majority", majority(n), n, p_list));
  const int samples = options.sample > 0 ? options.sample : 10;
  std::mt19937_64 rng(options.seed);
  for (int k = 0; k < samples; ++k) {
    r.merge(hellinger_lownoise_check("random" + std::to_string(k), random_balanced(n, rng), n, p_list));
  }
  if (n <= 3) r.merge(check_balanced_sensitivity(n));
  return r;
}

}  // namespace isoperim
