#include <cmath>
#include <map>

#include "doctest.h"
#include "isoperim/bellman.hpp"
#include "isoperim/certificate.hpp"
#include "isoperim/claims.hpp"
#include "isoperim/errors.hpp"
#include "properties.hpp"

using namespace isoperim;

namespace {

const Rational kW(29, 32);

// Claims are cheap (about 2 s for all nine), so compute them once per run.
const Certificate& certificate(const std::string& id, int jobs = 1) {
  static std::map<std::pair<std::string, int>, Certificate> cache;
  auto it = cache.find({id, jobs});
  if (it == cache.end()) {
    SubdivisionOptions opt;
    opt.jobs = jobs;
    it = cache.emplace(std::make_pair(id, jobs), verify_claim(find_claim(id), kW, opt)).first;
  }
  return it->second;
}

struct Expected {
  const char* id;
  int dim;
  std::vector<std::pair<Rational, Rational>> region;
  Rational threshold;
};

}  // namespace

TEST_SUITE("partition_verifier") {
  TEST_CASE("registered regions and thresholds") {
    const std::vector<Expected> expected{
        {"LJQ1", 2, {{Rational(1, 16), Rational(1, 4)}, {Rational(1, 2), Rational(3, 4)}}, Rational(1, 1000000)},
        {"LJQ2", 1, {{Rational(1, 2), Rational(3, 4)}}, Rational(1, 10000)},
        {"LJ1", 1, {{Rational(1, 2), Rational(5, 8)}}, Rational(1, 100)},
        {"QJQ1", 2, {{Rational(1, 4), Rational(1, 2)}, {Rational(1, 2), Rational(33, 64)}}, Rational(1, 100000)},
        {"QJQ2", 2, {{Rational(1, 4), Rational(1, 2)}, {Rational(33, 64), Rational(3, 4)}}, Rational(1, 10000000)},
        {"QJ1", 2, {{Rational(1, 4), Rational(1, 2)}, {Rational(1, 2), Rational(5, 8)}}, Rational(1, 100000)},
        {"QJ2", 2, {{Rational(1, 4), Rational(1, 2)}, {Rational(5, 8), Rational(1)}}, Rational(1, 10000000)},
        {"P1", 1, {{Rational(1, 64), Rational(1, 4)}}, Rational(1, 10000)},
        {"P2", 1, {{Rational(1, 4), Rational(1, 2)}}, Rational(1, 10000)},
    };
    REQUIRE(registered_claims().size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      const ClaimSpec& c = registered_claims()[i];
      INFO(c.id);
      CHECK(c.id == expected[i].id);
      CHECK(c.dim == expected[i].dim);
      CHECK(c.region == expected[i].region);
      CHECK(c.threshold == expected[i].threshold);
    }
  }

  TEST_CASE("registry lookups") {
    CHECK(find_claim("QJ2").bound_name == "h_QJ_2");
    CHECK_THROWS_AS(find_claim("NOPE"), LookupError);
    CHECK(registry_listing().find("LJQ1") != std::string::npos);
    CHECK_THROWS_AS(bound_function("h_nope"), LookupError);
    CHECK_THROWS_AS(parse_manifest("LJ1 1 1/2\n"), ParseError);
  }

  TEST_CASE("splitting takes the wider side, ties to x") {
    const Box b = Box::rect(0, 1, 0, 1);
    auto s = split_box(b, {0, 0}, 60);
    REQUIRE(s);
    CHECK(s->axis == 0);
    CHECK(s->left.hi[0] == 0.5);
    s = split_box(Box::rect(0, 0.5, 0, 1), {1, 0}, 60);
    REQUIRE(s);
    CHECK(s->axis == 1);
    CHECK(!split_box(b, {60, 0}, 60));
  }

  TEST_CASE("degenerate claim is verified with a single leaf") {
    const BoundFn fn = [](const Box& b, const BellmanParams&) { return b.coord(0); };
    const auto res = subdivide(Box::line(0, 1), fn, Rational(-1), kW, SubdivisionOptions{});
    CHECK(res.verified);
    CHECK(res.leaves.size() == 1);
  }

  TEST_CASE("raised threshold is inconclusive") {
    ClaimSpec c = find_claim("LJQ1");
    c.threshold = Rational(1, 2);
    SubdivisionOptions opt;
    opt.max_depth = 12;
    const Certificate cert = verify_claim(c, kW, opt);
    CHECK(!cert.verified());
    REQUIRE(cert.offending);
    // G is far below 1/2 at (1/16, 1/2).
    const Interval g = testing::true_expression("LJQ1", 0.0625, 0.5, BellmanParams::defaults());
    CHECK(g.hi_double() < 0.5);
  }

  TEST_CASE("max depth 2 is inconclusive") {
    SubdivisionOptions opt;
    opt.max_depth = 2;
    CHECK(!verify_claim(find_claim("LJ1"), kW, opt).verified());
  }

  TEST_CASE("bound functions at chosen boxes") {
    const BellmanParams& p = BellmanParams::defaults();
    // The whole LJ1 region as one box is not enough.
    CHECK(find_claim("LJ1").bound(Box::line(0.5, 0.625), p).lo_double() < 0.01);
    CHECK(find_claim("QJQ2").bound(Box::rect(0.25, 0.25, 33.0 / 64, 33.0 / 64), p).lo_double() > 0);
    const Interval gp = find_claim("P1").bound(Box::line(0.25, 0.25), p);
    CHECK(gp.lo_double() <= 0.012974380295933881415);
    CHECK(gp.hi_double() >= 0.012974380295933881415);
    CHECK(gp.width() < 1e-12);
  }

  TEST_CASE("all nine claims verify above their thresholds") {
    for (const auto& c : registered_claims()) {
      const Certificate& cert = certificate(c.id);
      INFO(c.id << " min bound " << cert.min_bound);
      CHECK(cert.verified());
      CHECK(cert.min_bound > c.threshold.get_d());
      CHECK(!cert.leaves.empty());
    }
  }

  TEST_CASE("certificates round-trip and check") {
    for (const char* id : {"LJ1", "P2", "QJQ1"}) {
      const Certificate& cert = certificate(id);
      const std::string text = serialize(cert);
      const Certificate back = parse_certificate(text);
      CHECK(serialize(back) == text);
      const CheckResult res = check_certificate(back, 2);
      INFO(res.reason);
      CHECK(res.ok);
    }
  }

  TEST_CASE("tampering is detected") {
    const Certificate& cert = certificate("QJQ1");
    REQUIRE(cert.leaves.size() > 3);

    Certificate raised = cert;
    raised.leaves[1].bound_lo = std::nextafter(raised.leaves[1].bound_lo, 1.0);
    CHECK(!check_certificate(raised).ok);

    Certificate dropped = cert;
    dropped.leaves.erase(dropped.leaves.begin() + 2);
    CHECK(!check_certificate(dropped).ok);

    Certificate moved = cert;
    moved.leaves[0].box.hi[0] = std::nextafter(moved.leaves[0].box.hi[0], 0.0);
    CHECK(!check_certificate(moved).ok);

    Certificate lowered = cert;
    lowered.threshold = Rational(1, 1000000000);
    CHECK(!check_certificate(lowered).ok);

    Certificate demoted = cert;
    demoted.leaves[0].precision = 32;
    CHECK(!check_certificate(demoted).ok);

    Certificate unknown = cert;
    unknown.claim_id = "NOPE";
    CHECK_THROWS_AS(check_certificate(unknown), LookupError);
  }

  TEST_CASE("malformed certificate text") {
    const std::string text = serialize(certificate("LJ1"));
    CHECK_THROWS_AS(parse_certificate(text.substr(0, text.size() / 2)), ParseError);
    CHECK_THROWS_AS(parse_certificate(""), ParseError);
    CHECK_THROWS_AS(parse_certificate("{\"claim\": 3}"), ParseError);
    CHECK(parse_double("0x1.8p-1") == 0.75);
    CHECK(hex_double(0.75) == "0x1.8p-1");
    CHECK_THROWS_AS(parse_double("zz"), ParseError);
  }

  TEST_CASE("certificates do not depend on the number of workers") {
    for (const auto& c : registered_claims()) {
      INFO(c.id);
      CHECK(serialize(certificate(c.id, 1)) == serialize(certificate(c.id, 8)));
    }
  }

  TEST_CASE("bound-function soundness: 100 point-in-box trials each") {
    for (const auto& c : registered_claims()) {
      const auto res = testing::bound_soundness(c, 100, 11);
      INFO(res.name << ": " << res.detail);
      CHECK(res.trials == 100);
      CHECK(res.ok());
    }
  }

  TEST_CASE("refinement improves the bound in at least 95% of splits") {
    for (const auto& c : registered_claims()) {
      const auto res = testing::monotone_refinement(c, 200, 5);
      INFO(res.name << ": " << res.detail);
      REQUIRE(res.trials > 0);
      CHECK(static_cast<double>(res.trials - res.violations) >= 0.95 * static_cast<double>(res.trials));
    }
  }
}
