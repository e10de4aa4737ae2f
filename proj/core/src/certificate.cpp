#include "isoperim/certificate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <set>

#include "isoperim/errors.hpp"
#include "json.hpp"

namespace isoperim {

using nlohmann::ordered_json;

std::string hex_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

double parse_double(const std::string& text) {
  if (text.empty()) throw ParseError("empty number");
  char* end = nullptr;
  const double d = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) throw ParseError("malformed number '" + text + "'");
  return d;
}

Certificate verify_claim(const ClaimSpec& claim, const ParamsLadder& params, const Rational& w,
                         const SubdivisionOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  Certificate cert;
  cert.claim_id = claim.id;
  cert.w = w;
  cert.ladder = options.ladder;
  cert.threshold = claim.threshold;
  cert.max_depth = options.max_depth;
  cert.region = claim.box();
  auto res = subdivide(cert.region, claim.bound, claim.threshold, params, options);
  cert.status = res.verified ? CertificateStatus::verified : CertificateStatus::inconclusive;
  cert.max_depth_reached = res.max_depth_reached;
  cert.leaves = std::move(res.leaves);
  cert.offending = res.offending;
  cert.min_bound = res.min_bound;
  cert.evaluations = res.evaluations;
  cert.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return cert;
}

Certificate verify_claim(const ClaimSpec& claim, const Rational& w, const SubdivisionOptions& options) {
  return verify_claim(claim, ParamsLadder(w, options.ladder), w, options);
}

// --- text form ---------------------------------------------------------------

namespace {

ordered_json box_json(const Box& b) {
  ordered_json out = ordered_json::array();
  for (int i = 0; i < b.dim; ++i) out.push_back({hex_double(b.lo[i]), hex_double(b.hi[i])});
  return out;
}

Box box_from_json(const ordered_json& j) {
  if (!j.is_array() || j.empty() || j.size() > 2) throw ParseError("box must be a list of 1 or 2 ranges");
  Box b;
  b.dim = static_cast<int>(j.size());
  for (int i = 0; i < b.dim; ++i) {
    const auto& r = j[i];
    if (!r.is_array() || r.size() != 2) throw ParseError("box range must be [lo, hi]");
    b.lo[i] = parse_double(r[0].get<std::string>());
    b.hi[i] = parse_double(r[1].get<std::string>());
    if (!(b.lo[i] < b.hi[i])) throw ParseError("box range with lo >= hi");
  }
  return b;
}

const char* status_name(CertificateStatus s) { return s == CertificateStatus::verified ? "verified" : "inconclusive"; }

}  // namespace

std::string serialize(const Certificate& cert) {
  ordered_json head;
  head["claim_id"] = cert.claim_id;
  head["w"] = to_string(cert.w);
  head["precision_ladder"] = cert.ladder;
  head["threshold"] = to_string(cert.threshold);
  head["max_depth"] = cert.max_depth;
  head["max_depth_reached"] = cert.max_depth_reached;
  head["status"] = status_name(cert.status);
  head["region"] = box_json(cert.region);
  head["offending"] = cert.offending ? box_json(*cert.offending) : ordered_json(nullptr);

  // One leaf per line keeps large certificates diffable.
  std::string out = head.dump(1);
  out.erase(out.size() - 2);  // drop "\n}"
  out += ",\n \"leaves\": [";
  for (std::size_t i = 0; i < cert.leaves.size(); ++i) {
    const Leaf& l = cert.leaves[i];
    ordered_json j;
    j["box"] = box_json(l.box);
    j["bound_lo"] = hex_double(l.bound_lo);
    j["prec"] = l.precision;
    out += i == 0 ? "\n  " : ",\n  ";
    out += j.dump();
  }
  out += cert.leaves.empty() ? "]\n}\n" : "\n ]\n}\n";
  return out;
}

Certificate parse_certificate(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("certificate is not valid JSON: ") + e.what());
  }
  try {
    Certificate c;
    c.claim_id = doc.at("claim_id").get<std::string>();
    c.w = parse_fraction(doc.at("w").get<std::string>());
    c.ladder = doc.at("precision_ladder").get<std::vector<int>>();
    if (c.ladder.empty()) throw ParseError("empty precision ladder");
    c.threshold = parse_rational(doc.at("threshold").get<std::string>());
    c.max_depth = doc.at("max_depth").get<int>();
    c.max_depth_reached = doc.at("max_depth_reached").get<int>();
    const auto status = doc.at("status").get<std::string>();
    if (status == "verified") {
      c.status = CertificateStatus::verified;
    } else if (status == "inconclusive") {
      c.status = CertificateStatus::inconclusive;
    } else {
      throw ParseError("unknown status '" + status + "'");
    }
    c.region = box_from_json(doc.at("region"));
    if (!doc.at("offending").is_null()) c.offending = box_from_json(doc.at("offending"));
    for (const auto& l : doc.at("leaves")) {
      Leaf leaf;
      leaf.box = box_from_json(l.at("box"));
      leaf.bound_lo = parse_double(l.at("bound_lo").get<std::string>());
      leaf.precision = l.at("prec").get<int>();
      c.leaves.push_back(leaf);
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed certificate: ") + e.what());
  }
}

// --- checker -----------------------------------------------------------------

namespace {

bool inside(const Box& inner, const Box& outer) {
  for (int i = 0; i < outer.dim; ++i) {
    if (inner.lo[i] < outer.lo[i] || inner.hi[i] > outer.hi[i]) return false;
  }
  return true;
}

struct TreeNode {
  Box box;
  std::array<int, 2> depth{0, 0};
};

}  // namespace

CheckResult check_certificate(const Certificate& cert, int jobs) {
  const ClaimSpec& claim = find_claim(cert.claim_id);
  auto fail = [](std::string why) { return CheckResult{false, std::move(why)}; };

  if (!cert.verified()) return fail("certificate status is not verified");
  if (cert.threshold != claim.threshold) {
    return fail("threshold " + to_string(cert.threshold) + " differs from registered " + to_string(claim.threshold));
  }
  if (!(cert.region == claim.box())) return fail("region differs from the registered region");
  if (cert.max_depth < 1) return fail("max_depth must be positive");
  if (cert.leaves.empty()) return fail("no leaves");
  const std::set<int> rungs(cert.ladder.begin(), cert.ladder.end());
  for (int p : rungs) {
    if (p < Precision::kMinBits) return fail("precision below minimum on the ladder");
  }

  // Walk the canonical tree in pre-order, matching leaves as they come.
  std::vector<TreeNode> stack{{cert.region, {0, 0}}};
  std::size_t next = 0;
  int deepest = 0;
  while (!stack.empty()) {
    TreeNode node = stack.back();
    stack.pop_back();
    if (next >= cert.leaves.size()) return fail("tiling gap at " + to_string(node.box));
    const Box& leaf = cert.leaves[next].box;
    if (leaf == node.box) {
      deepest = std::max(deepest, std::max(node.depth[0], node.depth[1]));
      ++next;
      continue;
    }
    if (leaf.dim != node.box.dim || !inside(leaf, node.box)) {
      return fail("tiling gap at " + to_string(node.box) + " (next leaf " + to_string(leaf) + ")");
    }
    auto split = split_box(node.box, node.depth, cert.max_depth);
    if (!split) return fail("leaf " + to_string(leaf) + " is not a node of the bisection tree");
    TreeNode left{split->left, node.depth}, right{split->right, node.depth};
    ++left.depth[split->axis];
    ++right.depth[split->axis];
    stack.push_back(right);
    stack.push_back(left);
  }
  if (next != cert.leaves.size()) return fail("extra leaves after the tiling is complete");
  if (deepest != cert.max_depth_reached) return fail("max_depth_reached does not match the leaves");

  for (const Leaf& l : cert.leaves) {
    if (!rungs.count(l.precision)) return fail("leaf precision " + std::to_string(l.precision) + " not on the ladder");
  }

  const ParamsLadder params(cert.w, std::vector<int>(rungs.begin(), rungs.end()));
  std::vector<char> good(cert.leaves.size(), 0);
  parallel_for(cert.leaves.size(), jobs, [&](std::size_t i) {
    const Leaf& l = cert.leaves[i];
    const auto ev = evaluate_box(claim.bound, l.box, claim.threshold, params.at(l.precision), l.precision);
    // bit-exact comparison of the recomputed bound
    good[i] = ev.certified && std::memcmp(&ev.bound_lo, &l.bound_lo, sizeof(double)) == 0;
  });
  for (std::size_t i = 0; i < good.size(); ++i) {
    if (!good[i]) {
      return fail("leaf " + std::to_string(i) + " " + to_string(cert.leaves[i].box) +
                  ": recomputed bound does not reproduce the recorded one above the threshold");
    }
  }
  return {true, "ok: " + std::to_string(cert.leaves.size()) + " leaves"};
}

}  // namespace isoperim
