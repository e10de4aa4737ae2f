// Acceptance suite: one PASS/FAIL line per criterion, then the details.
// Exit status is 0 only if every criterion passes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "isoperim/analytic_cases.hpp"
#include "isoperim/bellman.hpp"
#include "isoperim/certificate.hpp"
#include "isoperim/claims.hpp"
#include "isoperim/cube_oracle.hpp"
#include "isoperim/gaussian_profile.hpp"
#include "isoperim/suite.hpp"
#include "properties.hpp"

using namespace isoperim;

namespace {

struct Outcome {
  bool ok = true;
  std::vector<std::string> notes;

  void require(bool cond, const std::string& note) {
    ok = ok && cond;
    notes.push_back(std::string(cond ? "  ok    " : "  FAIL  ") + note);
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int hardware_jobs() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

std::vector<Certificate> run_claims(int jobs, std::vector<double>* times = nullptr) {
  std::vector<Certificate> out;
  SubdivisionOptions opt;
  opt.jobs = jobs;
  for (const auto& c : registered_claims()) {
    out.push_back(verify_claim(c, default_w(), opt));
    if (times) times->push_back(out.back().seconds);
  }
  return out;
}

Outcome criterion1(std::vector<Certificate>& certs) {
  Outcome o;
  std::vector<double> times;
  certs = run_claims(hardware_jobs(), &times);
  for (std::size_t i = 0; i < certs.size(); ++i) {
    const Certificate& c = certs[i];
    o.require(c.verified() && c.min_bound > c.threshold.get_d() && times[i] < 300.0,
              c.claim_id + ": min bound " + fmt("%.4g", c.min_bound) + " > " + to_string(c.threshold) + ", " +
                  std::to_string(c.leaves.size()) + " leaves, " + fmt("%.2f s", times[i]));
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  const BellmanParams& p = BellmanParams::defaults();
  o.require(compare(p.gamma.lo(), Rational(1945, 1000)) >= 0 && compare(p.gamma.hi(), Rational(1946, 1000)) <= 0 &&
                p.gamma.width() <= 1e-3,
            "gamma in " + to_string(p.gamma, 12));
  const Interval k = case_j_constant(p);
  o.require(compare(k.lo(), Rational(8, 100)) >= 0 && compare(k.hi(), Rational(9, 100)) <= 0,
            "case J constant in " + to_string(k, 12));

  Report r;
  r.merge(verify_case_LJQ_boundary(p));
  r.merge(verify_case_LJ_II(p));
  r.merge(verify_case_QJQ_support(p));
  r.merge(verify_case_P_I(p, verify_j_lower_bound(p).passed()));
  const std::vector<std::string> ids{
      "lj2.g'-bound[1/2]", "lj2.g'-bound[9/16]", "lj2.g'-bound[19/32]", "ljq.f''(1/2)",      "ljq.f''(9/16)",
      "ljq.f''(4/5)",      "ljq.f'(9/16)",       "ljq.f'(15/16)",       "pI.g(1/64)>0.2",    "qjq.J'^2-gamma[1/2]",
      "qjq.J'^2-gamma[3/4]", "qjq.Q'(33/64)>0",  "ljq.G(1/4,3/4)>0.01", "ljq.G(0,1)=0"};
  for (const auto& id : ids) {
    const ReportItem* it = r.find(id);
    o.require(it != nullptr && it->status == Status::pass, id + (it ? ": " + it->detail : ": missing"));
  }
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  CubeCheckOptions opt;
  opt.jobs = hardware_jobs();
  const Report main4 = check_main_theorem(4, opt);
  for (const auto& it : main4.items) o.require(it.status == Status::pass, it.id + ": " + it.detail);
  const ReportItem* eq = main4.find("main.equality-exactly-on-subcubes");
  o.require(eq && eq->detail.rfind("80 nonempty equality sets", 0) == 0, "80 equality sets at n = 4, all subcubes");
  for (int n = 1; n <= 4; ++n) {
    const Report s = check_sharpening(n);
    o.require(s.passed(), "sharpened inequality, n = " + std::to_string(n) + ": " + s.items.front().detail);
  }
  const Report poincare = check_poincare(4);
  for (const auto& it : poincare.items) o.require(it.status == Status::pass, it.id + ": " + it.detail);
  const Report partition = check_kahn_park(3);
  o.require(partition.passed(), "partitions, n = 3: " + partition.items.front().detail);
  const double secs = seconds_since(t0);
  o.require(secs < 600.0, "wall time " + fmt("%.1f s", secs));
  return o;
}

Outcome criterion4(const std::vector<Certificate>& certs) {
  Outcome o;
  std::mt19937_64 rng(2024);
  for (const Certificate& cert : certs) {
    const Certificate back = parse_certificate(serialize(cert));
    const CheckResult good = check_certificate(back, hardware_jobs());
    const std::size_t k = std::uniform_int_distribution<std::size_t>(0, cert.leaves.size() - 1)(rng);
    Certificate edited = back;
    edited.leaves[k].bound_lo = std::nextafter(edited.leaves[k].bound_lo, INFINITY);
    Certificate deleted = back;
    deleted.leaves.erase(deleted.leaves.begin() + static_cast<long>(k));
    const bool edit_caught = !check_certificate(edited, hardware_jobs()).ok;
    const bool delete_caught = !check_certificate(deleted, hardware_jobs()).ok;
    o.require(good.ok && edit_caught && delete_caught,
              cert.claim_id + ": round trip " + (good.ok ? "ok" : "REJECTED (" + good.reason + ")") +
                  ", bound edit at leaf " + std::to_string(k) + (edit_caught ? " caught" : " MISSED") +
                  ", deletion" + (delete_caught ? " caught" : " MISSED"));
  }
  return o;
}

Outcome criterion5(const std::vector<Certificate>& reference) {
  Outcome o;
  const auto one = run_claims(1);
  const auto eight = run_claims(8);
  for (std::size_t i = 0; i < one.size(); ++i) {
    const std::string a = serialize(one[i]);
    o.require(a == serialize(eight[i]) && a == serialize(reference[i]),
              one[i].claim_id + ": jobs 1 and jobs 8 byte-identical (" + std::to_string(a.size()) + " bytes)");
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  for (const auto& op : testing::containment_ops()) {
    const auto res = testing::containment_trials(op, 1000, 7);
    o.require(res.ok() && res.trials == 1000, res.name + ": " + res.detail);
  }
  const auto jj = testing::jj_second_derivative(50, BellmanParams::defaults());
  o.require(jj.ok() && jj.trials == 50, jj.name + ": " + jj.detail);
  const auto bp = testing::breakpoint_continuity(BellmanParams::defaults());
  o.require(bp.ok(), bp.name + ": " + bp.detail);
  for (const auto& c : registered_claims()) {
    const auto res = testing::bound_soundness(c, 100, 11);
    o.require(res.ok() && res.trials == 100, res.name + ": " + res.detail);
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  const std::vector<double> ps{1e-2, 1e-4, 1e-6};
  auto decay_line = [&](const std::string& label, const std::vector<int>& f, int n) {
    const Report r = hellinger_lownoise_check(label, f, n, ps);
    std::string devs;
    for (const auto& row : hellinger_table(f, n, ps).rows) {
      devs += (devs.empty() ? "" : ", ") + fmt("%.3e", static_cast<double>(row.deviation));
    }
    const ReportItem* decay = r.find("hellinger." + label + ".decay");
    o.require(decay && decay->status == Status::pass,
              label + " (n = " + std::to_string(n) + "): deviations " + devs + "; " + (decay ? decay->detail : ""));
  };
  decay_line("majority", majority(3), 3);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 10; ++k) decay_line("random" + std::to_string(k), random_balanced(4, rng), 4);
  const Report bal = check_balanced_sensitivity(3);
  o.require(bal.passed(), "balanced n = 3: " + bal.items.front().detail);
  return o;
}

Outcome criterion8() {
  Outcome o;
  const Report r = check_ball_sharpness(Interval::from_literal("0.3"), {10, 20, 40});
  for (const auto& it : r.items) o.require(it.status == Status::pass, it.id + ": " + it.detail);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* title;
    std::function<Outcome()> run;
  };
  std::vector<Certificate> certs;
  const std::vector<Criterion> criteria{
      {1, "nine-claim certification", [&] { return criterion1(certs); }},
      {2, "constant reproduction", criterion2},
      {3, "exhaustive discrete verification", criterion3},
      {4, "certificate integrity", [&] { return criterion4(certs); }},
      {5, "determinism across worker counts", [&] { return criterion5(certs); }},
      {6, "property suites", criterion6},
      {7, "low-noise expansion", criterion7},
      {8, "Hamming-ball sharpness", criterion8},
  };

  std::vector<std::pair<bool, double>> results;
  std::ostringstream details;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = seconds_since(t0);
    results.emplace_back(o.ok, secs);
    std::printf("criterion %d %-34s %s  (%.1f s)\n", c.number, c.title, o.ok ? "PASS" : "FAIL", secs);
    std::fflush(stdout);
    details << "\n-- criterion " << c.number << ": " << c.title << "\n";
    for (const auto& n : o.notes) details << n << "\n";
  }
  std::cout << details.str();
  bool all = true;
  for (const auto& r : results) all = all && r.first;
  std::cout << "\nacceptance: " << (all ? "PASS" : "FAIL") << "\n";
  return all ? 0 : 1;
}
