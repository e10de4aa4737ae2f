#pragma once

// The piecewise Bellman function
//
//   B_w = L on [0, 1/4],  Q on [1/4, 1/2],  J_w on [1/2, 1],
//
// with L(x) = x sqrt(log2(1/x)), Q the cubic through (0,0), (1/4, 2^-3/2),
// (1/2, 1/2), (1, 0), and the two-point functionals G1, G2, G = max(G1, G2).

#include "isoperim/gaussian_profile.hpp"
#include "isoperim/interval.hpp"
#include "isoperim/rational.hpp"
#include "isoperim/report.hpp"

namespace isoperim {

// a + b sqrt(2) with rational a, b.
struct QuadSurd {
  Rational a;
  Rational b;

  Interval to_interval() const;
  friend bool operator==(const QuadSurd&, const QuadSurd&) = default;
};

QuadSurd operator+(const QuadSurd& x, const QuadSurd& y);
QuadSurd operator-(const QuadSurd& x, const QuadSurd& y);
QuadSurd operator*(const QuadSurd& x, const QuadSurd& y);
QuadSurd operator*(const Rational& k, const QuadSurd& x);

// Q(x) = c1 x + c2 x^2 + c3 x^3.
struct QCoeffs {
  QuadSurd c1;
  QuadSurd c2;
  QuadSurd c3;

  static const QCoeffs& exact();
  // Q evaluated exactly at a rational point.
  QuadSurd at(const Rational& x) const;
};

// L and its derivatives. L(0) = 0; derivatives need x.lo > 0 and x.hi < 1.
Interval L_value(const Interval& x);
Interval L_d1(const Interval& x);
Interval L_d2(const Interval& x);
Interval L_d3(const Interval& x);

// Horner evaluation over the exact coefficients.
Interval Q_value(const Interval& x);
Interval Q_d1(const Interval& x);
Interval Q_d2(const Interval& x);

// Hull of the branch enclosures over the pieces x meets.
Interval B_value(const Interval& x, const BellmanParams& p);

// Direct (non-tight) enclosures over the box x * y.
Interval G1_value(const Interval& x, const Interval& y, const BellmanParams& p);
Interval G2_value(const Interval& x, const Interval& y, const BellmanParams& p);
Interval G_value(const Interval& x, const Interval& y, const BellmanParams& p);

// Q' > 0 and Q'' < 0 on [0, 33/64].
Report certify_lemma_Q();
// L'' < 0 on [2^-30, 1/2]. Below 2^-30 the term -1/(2 x ln2 sqrt(s)) of L''
// dominates; that tail is recorded as an assumption, not certified.
Report certify_lemma_L();

}  // namespace isoperim
