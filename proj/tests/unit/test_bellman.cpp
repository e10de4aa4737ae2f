#include "doctest.h"
#include "isoperim/bellman.hpp"
#include "isoperim/errors.hpp"
#include "properties.hpp"

using namespace isoperim;

namespace {

// mpmath, 40 digits.
constexpr double kL8 = 0.2165063509461096616909;     // L(1/8)
constexpr double kLp8 = 1.315580622460986707301;     // L'(1/8)
constexpr double kLpp8 = -4.132880775174141181048;   // L''(1/8)
constexpr double kLppp8 = 22.03100851465311973112;   // L'''(1/8)
constexpr double kQ38 = 0.4553458691207961013753;    // Q(3/8)
constexpr double kB34 = 0.4223953699985940006296;    // B(3/4) = J(3/4)
constexpr double kG_quarter = 0.02851528153029293937628;  // G(1/4, 3/4)
constexpr double kG_sixteenth = 0.02137911100573662406666;  // G(1/16, 5/8)

bool near(const Interval& v, double ref, double tol = 1e-14) {
  return v.lo_double() - tol <= ref && ref <= v.hi_double() + tol && v.width() < 1e-13;
}

}  // namespace

TEST_SUITE("bellman") {
  TEST_CASE("Q coefficients are exact and interpolate the nodes") {
    const QCoeffs& q = QCoeffs::exact();
    CHECK(q.c1 == QuadSurd{Rational(-2), Rational(8, 3)});
    CHECK(q.c2 == QuadSurd{Rational(10), Rational(-8)});
    CHECK(q.c3 == QuadSurd{Rational(-8), Rational(16, 3)});
    CHECK(q.at(Rational(0)) == QuadSurd{0, 0});
    CHECK(q.at(Rational(1, 4)) == QuadSurd{0, Rational(1, 4)});  // 2^-3/2
    CHECK(q.at(Rational(1, 2)) == QuadSurd{Rational(1, 2), 0});
    CHECK(q.at(Rational(1)) == QuadSurd{0, 0});
  }

  TEST_CASE("quadratic surds multiply exactly") {
    const QuadSurd a{1, 1}, b{1, -1};
    CHECK(a * b == QuadSurd{-1, 0});
    CHECK(a * a == QuadSurd{3, 2});
    CHECK((a + b) == QuadSurd{2, 0});
    CHECK(Rational(1, 2) * a == QuadSurd{Rational(1, 2), Rational(1, 2)});
  }

  TEST_CASE("L, Q and derivatives against reference values") {
    const Interval e(Rational(1, 8));
    CHECK(near(L_value(e), kL8));
    CHECK(near(L_d1(e), kLp8));
    CHECK(near(L_d2(e), kLpp8, 1e-13));
    CHECK(near(L_d3(e), kLppp8, 1e-12));
    CHECK(L_value(Interval(0.0)).contains(0.0));
    CHECK(L_value(Interval(0.5)).contains(0.5));
    CHECK(near(Q_value(Interval(Rational(3, 8))), kQ38));
    CHECK_THROWS_AS(L_d1(Interval(0.0)), DomainError);
  }

  TEST_CASE("L over an interval straddling its maximum") {
    // L peaks at 2^-1/(2 ln 2) ~ 0.4869 with value e^-1/2 / sqrt(2 ln 2).
    const Interval v = L_value(Interval(0.3, 0.7));
    CHECK(v.hi_double() >= 0.515);
    CHECK(v.lo_double() <= L_value(Interval(0.7)).lo_double());
  }

  TEST_CASE("B and G against reference values") {
    const BellmanParams& p = BellmanParams::defaults();
    CHECK(near(B_value(Interval(0.75), p), kB34));
    CHECK(near(G_value(Interval(0.25), Interval(0.75), p), kG_quarter));
    CHECK(near(G_value(Interval(0.0625), Interval(0.625), p), kG_sixteenth));
    // G vanishes when both points coincide.
    CHECK(G_value(Interval(0.3), Interval(0.3), p).contains(0.0));
  }

  TEST_CASE("B is continuous at its breakpoints") {
    const auto res = testing::breakpoint_continuity(BellmanParams::defaults());
    INFO(res.detail);
    CHECK(res.ok());
  }

  TEST_CASE("lemma certifications") {
    const Report q = certify_lemma_Q();
    INFO(render_text(q));
    CHECK(q.passed());
    const Report l = certify_lemma_L();
    INFO(render_text(l));
    CHECK(l.passed());
    const ReportItem* tail = l.find("lemma-L.tail");
    REQUIRE(tail != nullptr);
    CHECK(tail->status == Status::cited);
  }
}
