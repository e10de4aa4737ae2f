#include "isoperim/suite.hpp"

#include <algorithm>
#include <chrono>

#include "isoperim/analytic_cases.hpp"
#include "isoperim/bellman.hpp"

namespace isoperim {

ReportItem claim_item(const Certificate& cert) {
  ReportItem it;
  it.id = "claim." + cert.claim_id;
  it.status = cert.verified() ? Status::pass : Status::inconclusive;
  it.detail = "> " + to_string(cert.threshold) + ", " + std::to_string(cert.leaves.size()) + " leaves, " +
              std::to_string(cert.evaluations) + " evaluations";
  if (cert.offending) it.detail += ", stuck at " + to_string(*cert.offending);
  if (cert.verified()) it.margin = cert.min_bound - cert.threshold.get_d();
  it.depth = cert.max_depth_reached;
  for (const auto& l : cert.leaves) it.precision = std::max(it.precision, l.precision);
  it.seconds = cert.seconds;
  return it;
}

void fingerprint(Report& report, const SuiteOptions& options) {
  std::string ladder;
  for (int p : options.subdivision.ladder) ladder += (ladder.empty() ? "" : ",") + std::to_string(p);
  report.fingerprint = {{"w", to_string(options.w)},
                        {"ladder", ladder},
                        {"max_depth", std::to_string(options.subdivision.max_depth)},
                        {"jobs", std::to_string(options.subdivision.jobs)}};
}

namespace {

void timed_merge(Report& into, const std::function<Report()>& run) {
  const auto start = std::chrono::steady_clock::now();
  Report part = run();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (auto& item : part.items) {
    if (item.seconds == 0.0) item.seconds = secs / static_cast<double>(part.items.size());
  }
  into.merge(part);
}

}  // namespace

SuiteResult verify_all(const SuiteOptions& options) {
  SuiteResult out;
  out.report.suite = "two-point and Poincare verification";
  fingerprint(out.report, options);

  const ParamsLadder params(options.w, options.subdivision.ladder);
  for (const auto& claim : registered_claims()) {
    if (!options.claims.empty() &&
        std::find(options.claims.begin(), options.claims.end(), claim.id) == options.claims.end()) {
      continue;
    }
    out.certificates.push_back(verify_claim(claim, params, options.w, options.subdivision));
    out.report.add(claim_item(out.certificates.back()));
  }

  if (options.analytic) {
    const BellmanParams p = BellmanParams::make(options.w);
    Report jlb;
    timed_merge(out.report, [&] { return jlb = verify_j_lower_bound(p); });
    timed_merge(out.report, [] { return certify_lemma_Q(); });
    timed_merge(out.report, [] { return certify_lemma_L(); });
    timed_merge(out.report, [&] { return verify_case_J(p); });
    timed_merge(out.report, [&] { return verify_case_LJQ_boundary(p); });
    timed_merge(out.report, [&] { return verify_case_LJ_II(p); });
    timed_merge(out.report, [&] { return verify_case_QJQ_support(p); });
    timed_merge(out.report, [&] { return verify_case_P_I(p, jlb.passed()); });
    timed_merge(out.report, [&] { return scan_cited_facts(p); });
    if (options.claims.empty()) out.report.merge(coverage_matrix(out.report));
  }
  return out;
}

}  // namespace isoperim
