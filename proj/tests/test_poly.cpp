#include <doctest.h>

#include "filtalg/poly.hpp"

using namespace filtalg;
using poly::PiecewisePoly;
using poly::Polynomial;

TEST_CASE("polynomial arithmetic and calculus") {
  Polynomial p({Rational(1), Rational(2)});   // 1 + 2t
  Polynomial q({Rational(0), Rational(1)});   // t
  CHECK((p * q).eval(Rational(3)) == Rational(21));
  CHECK(p.derivative() == Polynomial::constant(2));
  CHECK(p.antiderivative().eval(1) == Rational(2));  // t + t^2 at 1
  CHECK((p - p).is_zero());
}

TEST_CASE("piecewise evaluation and continuity") {
  // t on [0,1], then constant 1 on [1,2]
  PiecewisePoly f({Rational(0), Rational(1), Rational(2)},
                  {Polynomial({Rational(0), Rational(1)}), Polynomial::constant(1)});
  CHECK(f.is_continuous());
  CHECK(f.eval(Rational(1, 2)) == Rational(1, 2));
  CHECK(f.eval(Rational(3, 2)) == 1);
  CHECK_THROWS_AS(f.eval(Rational(3)), OutOfDomain);

  PiecewisePoly g({Rational(0), Rational(1), Rational(2)},
                  {Polynomial::constant(0), Polynomial::constant(1)});
  CHECK(!g.is_continuous());
}

TEST_CASE("piecewise algebra against refinement") {
  PiecewisePoly f({Rational(0), Rational(2)}, {Polynomial({Rational(0), Rational(1)})});
  PiecewisePoly g({Rational(0), Rational(1), Rational(2)},
                  {Polynomial::constant(1), Polynomial::constant(1)});
  auto s = f + g;
  CHECK(s.eval(Rational(1, 2)) == Rational(3, 2));
  CHECK(s.eval(Rational(2)) == 3);
  CHECK((f * g).same_function(f));
}

TEST_CASE("anchored antiderivative is continuous and exact") {
  // derivative 2t on [0,1], 2 on [1,2]
  PiecewisePoly f({Rational(0), Rational(1), Rational(2)},
                  {Polynomial({Rational(0), Rational(2)}), Polynomial::constant(2)});
  PiecewisePoly F = f.antiderivative(Rational(1));
  CHECK(F.is_continuous());
  CHECK(F.eval(1) == 0);
  CHECK(F.eval(0) == -1);       // integral of 2t from 1 to 0
  CHECK(F.eval(2) == 2);        // integral of 2 from 1 to 2
  CHECK(F.derivative().same_function(f));
}
