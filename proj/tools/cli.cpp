#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "isoperim/analytic_cases.hpp"
#include "isoperim/bellman.hpp"
#include "isoperim/certificate.hpp"
#include "isoperim/cube_oracle.hpp"
#include "isoperim/errors.hpp"
#include "isoperim/gaussian_profile.hpp"
#include "isoperim/suite.hpp"

namespace isoperim::cli {

namespace {

// Thrown for anything that should end in exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  int max_depth = 60;
  std::optional<int> precision;
  std::string ladder = "64,128,256,512";
  int jobs = 0;
  std::string w = "29/32";
  std::string report_out;
};

std::vector<int> parse_ladder(const std::string& text) {
  std::vector<int> rungs;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      const int bits = std::stoi(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      rungs.push_back(bits);
    } catch (const std::exception&) {
      throw UsageError("--ladder: '" + part + "' is not an integer");
    }
  }
  if (rungs.empty()) throw UsageError("--ladder: empty");
  for (std::size_t i = 0; i < rungs.size(); ++i) {
    if (rungs[i] < Precision::kMinBits) throw UsageError("--ladder: rungs must be >= 24 bits");
    if (i > 0 && rungs[i] <= rungs[i - 1]) throw UsageError("--ladder: rungs must increase");
  }
  return rungs;
}

Rational parse_w(const std::string& text) {
  Rational w;
  try {
    w = parse_fraction(text);
  } catch (const ParseError& e) {
    throw UsageError("--w takes an exact NUM/DEN rational: " + std::string(e.what()));
  }
  if (w <= Rational(1, 2) || w > 1) throw UsageError("--w must satisfy 1/2 < w <= 1");
  return w;
}

int resolve_jobs(int jobs) {
  if (jobs < 0) throw UsageError("--jobs must be >= 0");
  if (jobs == 0) return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return jobs;
}

int env_precision() {
  const char* env = std::getenv("ISOPERIM_PRECISION");
  if (env == nullptr || *env == '\0') return 64;
  try {
    std::size_t used = 0;
    const int bits = std::stoi(env, &used);
    if (env[used] != '\0') throw std::invalid_argument(env);
    return bits;
  } catch (const std::exception&) {
    throw UsageError(std::string("ISOPERIM_PRECISION: '") + env + "' is not an integer");
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path.string());
  f << text;
  if (!f) throw UsageError("write failed: " + path.string());
}

void emit(const Report& report, const Common& c, std::ostream& out) {
  out << render_text(report);
  if (!c.report_out.empty()) write_file(c.report_out, render_structured(report));
}

void add_common(CLI::App* cmd, Common& c, bool subdivision) {
  if (subdivision) {
    cmd->add_option("--max-depth", c.max_depth, "Bisection depth limit per axis")->check(CLI::PositiveNumber);
    cmd->add_option("--ladder", c.ladder, "Comma-separated precision ladder in bits");
  }
  cmd->add_option("--precision", c.precision, "Working precision in bits");
  cmd->add_option("--jobs", c.jobs, "Worker threads (0 = hardware parallelism)");
  cmd->add_option("--w", c.w, "Parameter w as NUM/DEN");
  cmd->add_option("--report-out", c.report_out, "Write the structured report to this file");
}

// --- verify -------------------------------------------------------------------

struct VerifyArgs {
  std::vector<std::string> claims;
  bool all = false;
  bool skip_analytic = false;
  std::string certificate_out;
};

int cmd_verify(const Common& c, const VerifyArgs& v, std::ostream& out) {
  if (v.claims.empty() == !v.all) throw UsageError("verify needs exactly one of --claim or --all");
  for (const auto& id : v.claims) {
    try {
      find_claim(id);
    } catch (const LookupError& e) {
      throw UsageError(e.what());
    }
  }
  SuiteOptions opts;
  opts.w = parse_w(c.w);
  opts.subdivision.max_depth = c.max_depth;
  opts.subdivision.ladder = parse_ladder(c.ladder);
  opts.subdivision.jobs = resolve_jobs(c.jobs);
  opts.claims = v.claims;
  opts.analytic = v.all && !v.skip_analytic;

  const SuiteResult result = verify_all(opts);
  if (!v.certificate_out.empty()) {
    std::filesystem::create_directories(v.certificate_out);
    for (const auto& cert : result.certificates) {
      write_file(std::filesystem::path(v.certificate_out) / (cert.claim_id + ".cert"), serialize(cert));
    }
  }
  Report report = result.report;
  report.fingerprint.emplace_back("precision", std::to_string(working_precision().bits()));
  emit(report, c, out);
  return report.passed() ? kOk : kFailed;
}

// --- check-certificate ----------------------------------------------------------

int cmd_check(const Common& c, const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot read " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  Certificate cert;
  try {
    cert = parse_certificate(buf.str());
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what());
  }
  CheckResult res;
  try {
    res = check_certificate(cert, resolve_jobs(c.jobs));
  } catch (const LookupError& e) {
    res = {false, e.what()};
  }
  if (res.ok) {
    out << "certificate OK: " << cert.claim_id << ", " << cert.leaves.size() << " leaves\n";
    return kOk;
  }
  err << "certificate REJECTED: " << res.reason << "\n";
  return kFailed;
}

// --- cube -----------------------------------------------------------------------

struct CubeArgs {
  std::optional<int> n;
  std::string theorem;
  int sample = 0;
  std::uint64_t seed = 1;
  std::optional<long> r;
  std::string beta = "3/10";
  std::vector<long> ns{10, 20, 40};
};

int cmd_cube(const Common& c, const CubeArgs& a, std::ostream& out) {
  CubeCheckOptions opts;
  opts.sample = a.sample;
  opts.seed = a.seed;
  opts.jobs = resolve_jobs(c.jobs);
  if (a.sample < 0) throw UsageError("--sample must be >= 0");
  auto need_n = [&]() -> int {
    if (!a.n) throw UsageError("--n is required for --theorem " + a.theorem);
    return *a.n;
  };
  auto exhaustive_only = [&](int limit) {
    const int n = need_n();
    if (a.sample > 0) throw UsageError("--theorem " + a.theorem + " is exhaustive only");
    if (n < 1 || n > limit) {
      throw UsageError("--theorem " + a.theorem + " supports 1 <= n <= " + std::to_string(limit));
    }
    return n;
  };

  Report report;
  if (a.theorem == "main") {
    const int n = need_n();
    if (n < 1 || n > kSampledMax) throw UsageError("--n must be in [1, " + std::to_string(kSampledMax) + "]");
    if (a.sample == 0 && n > kExhaustiveSets) {
      throw UsageError("n = " + std::to_string(n) + " exceeds the exhaustive limit " +
                       std::to_string(kExhaustiveSets) + "; pass --sample K");
    }
    report = check_main_theorem(n, opts);
  } else if (a.theorem == "sharpening") {
    report = check_sharpening(exhaustive_only(kExhaustiveSets));
  } else if (a.theorem == "partition") {
    report = check_kahn_park(exhaustive_only(kExhaustivePartitions));
  } else if (a.theorem == "poincare") {
    report = check_poincare(exhaustive_only(kExhaustiveSets));
  } else if (a.theorem == "hellinger") {
    const int n = need_n();
    if (n < 1 || n > kSampledMax) throw UsageError("--n must be in [1, " + std::to_string(kSampledMax) + "]");
    report = check_hellinger(n, opts);
  } else if (a.theorem == "ball") {
    Interval beta;
    try {
      beta = Interval(parse_rational(a.beta));
    } catch (const ParseError& e) {
      throw UsageError(std::string("--beta: ") + e.what());
    }
    if (!(beta.lo_double() > 0)) throw UsageError("--beta must be positive");
    if (a.r) {
      const int n = need_n();
      if (*a.r < 0 || *a.r >= n) throw UsageError("--r must satisfy 0 <= r < n");
      const BallProfile b = hamming_ball_profile(n, *a.r, beta);
      out << "n = " << n << ", r = " << *a.r << ", beta = " << a.beta << "\n"
          << "measure     " << to_string(b.measure, 17) << "\n"
          << "E h^beta    " << to_string(b.moment, 17) << "\n"
          << "normalized  " << to_string(b.normalized, 17) << "\n";
      return kOk;
    }
    std::vector<long> ns = a.ns;
    if (a.n) ns = {*a.n};
    for (long n : ns) {
      if (n < 2) throw UsageError("ball sizes must be >= 2");
    }
    report = check_ball_sharpness(beta, ns);
  } else {
    throw UsageError("unknown --theorem '" + a.theorem + "'");
  }
  emit(report, c, out);
  return report.passed() ? kOk : kFailed;
}

// --- constants / eval ------------------------------------------------------------

int cmd_constants(const Common& c, std::ostream& out) {
  const BellmanParams p = BellmanParams::make(parse_w(c.w), working_precision());
  const int digits = std::max(17, working_precision().bits() * 3 / 10);
  const QCoeffs q = QCoeffs::exact();
  auto line = [&](const char* name, const Interval& v) { out << name << "  " << to_string(v, digits) << "\n"; };
  out << "w          " << c.w << "\n";
  line("x1        ", p.x1);
  line("I(1/2w)   ", p.i_at_half_inv_w);
  line("gamma     ", p.gamma);
  line("J(x1)     ", p.j_at_x1);
  line("caseJ     ", case_j_constant(p));
  line("c1        ", q.c1.to_interval());
  line("c2        ", q.c2.to_interval());
  line("c3        ", q.c3.to_interval());
  return kOk;
}

struct EvalArgs {
  std::string fn;
  std::string x;
  std::optional<std::string> y;
};

int cmd_eval(const Common& c, const EvalArgs& e, std::ostream& out) {
  const BellmanParams p = BellmanParams::make(parse_w(c.w), working_precision());
  Interval x, y;
  try {
    x = Interval(parse_rational(e.x));
    if (e.y) y = Interval(parse_rational(*e.y));
  } catch (const ParseError& err) {
    throw UsageError(err.what());
  }
  using Unary = std::function<Interval(const Interval&)>;
  using Binary = std::function<Interval(const Interval&, const Interval&)>;
  const std::map<std::string, Unary> unary{
      {"pdf", [](const Interval& t) { return norm_pdf(t); }},
      {"Phi", [](const Interval& t) { return norm_cdf(t); }},
      {"quantile", [](const Interval& t) { return norm_quantile(t); }},
      {"I", [](const Interval& t) { return profile_I(t); }},
      {"J", [&](const Interval& t) { return j_value(t, p); }},
      {"J'", [&](const Interval& t) { return j_deriv(t, p); }},
      {"J''", [&](const Interval& t) { return j_second_deriv(t, p); }},
      {"L", [](const Interval& t) { return L_value(t); }},
      {"L'", [](const Interval& t) { return L_d1(t); }},
      {"L''", [](const Interval& t) { return L_d2(t); }},
      {"L'''", [](const Interval& t) { return L_d3(t); }},
      {"Q", [](const Interval& t) { return Q_value(t); }},
      {"Q'", [](const Interval& t) { return Q_d1(t); }},
      {"Q''", [](const Interval& t) { return Q_d2(t); }},
      {"B", [&](const Interval& t) { return B_value(t, p); }},
  };
  const std::map<std::string, Binary> binary{
      {"G", [&](const Interval& a, const Interval& b) { return G_value(a, b, p); }},
      {"G1", [&](const Interval& a, const Interval& b) { return G1_value(a, b, p); }},
      {"G2", [&](const Interval& a, const Interval& b) { return G2_value(a, b, p); }},
  };
  const int digits = std::max(17, working_precision().bits() * 3 / 10);
  if (auto it = unary.find(e.fn); it != unary.end()) {
    if (e.y) throw UsageError(e.fn + " takes one argument");
    out << e.fn << "(" << e.x << ") in " << to_string(it->second(x), digits) << "\n";
    return kOk;
  }
  if (auto it = binary.find(e.fn); it != binary.end()) {
    if (!e.y) throw UsageError(e.fn + " needs --y");
    out << e.fn << "(" << e.x << ", " << *e.y << ") in " << to_string(it->second(x, y), digits) << "\n";
    return kOk;
  }
  std::string names;
  for (const auto& [k, _] : unary) names += " " + k;
  for (const auto& [k, _] : binary) names += " " + k;
  throw UsageError("unknown function '" + e.fn + "'; known:" + names);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rigorous checks for square-root isoperimetry on the Hamming cube", "isoperim"};
  app.require_subcommand(1);
  Common common;
  VerifyArgs verify;
  CubeArgs cube;
  EvalArgs eval;
  std::string cert_path;

  auto* v = app.add_subcommand("verify", "Certify claims by dyadic subdivision");
  add_common(v, common, true);
  v->add_option("--claim", verify.claims, "Claim id (repeatable)");
  v->add_flag("--all", verify.all, "All claims plus the analytic cases");
  v->add_flag("--skip-analytic", verify.skip_analytic, "With --all: claims only");
  v->add_option("--certificate-out", verify.certificate_out, "Directory for <claim>.cert files");

  auto* chk = app.add_subcommand("check-certificate", "Re-check a certificate file");
  add_common(chk, common, false);
  chk->add_option("path", cert_path, "Certificate file")->required();

  auto* cb = app.add_subcommand("cube", "Exact checks on small Hamming cubes");
  add_common(cb, common, false);
  cb->add_option("--n", cube.n, "Dimension");
  cb->add_option("--theorem", cube.theorem, "main|sharpening|partition|poincare|hellinger|ball")->required();
  cb->add_option("--sample", cube.sample, "Number of sampled sets (main) or random functions (hellinger)");
  cb->add_option("--seed", cube.seed, "Sampling seed");
  cb->add_option("--r", cube.r, "Ball radius (ball with --n: print one profile)");
  cb->add_option("--beta", cube.beta, "Ball exponent");
  cb->add_option("--ns", cube.ns, "Ball dimensions for the sharpness check")->delimiter(',');

  auto* cs = app.add_subcommand("constants", "Print derived constants for w");
  add_common(cs, common, false);

  auto* ev = app.add_subcommand("eval", "Evaluate a named function in interval arithmetic");
  add_common(ev, common, false);
  ev->add_option("fn", eval.fn, "Function name")->required();
  ev->add_option("--x", eval.x, "Argument (exact literal)")->required();
  ev->add_option("--y", eval.y, "Second argument for G, G1, G2");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help(e.get_name() == "--help" && app.get_subcommands().size() == 1
                        ? app.get_subcommands().front()->get_name()
                        : "");
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    const int bits = common.precision ? *common.precision : env_precision();
    if (bits < Precision::kMinBits || bits > 4096) throw UsageError("precision must be in [24, 4096] bits");
    PrecisionScope scope{Precision(bits)};
    if (v->parsed()) return cmd_verify(common, verify, out);
    if (chk->parsed()) return cmd_check(common, cert_path, out, err);
    if (cb->parsed()) return cmd_cube(common, cube, out);
    if (cs->parsed()) return cmd_constants(common, out);
    return cmd_eval(common, eval, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFailed;
  }
}

}  // namespace isoperim::cli
