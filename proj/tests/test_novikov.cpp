#include <doctest.h>

#include <random>

#include "filtalg/novikov.hpp"

using namespace filtalg;
using nov::DiscreteSubmonoid;
using nov::MonoidElem;
using nov::NovikovElement;
using nov::NovikovTerm;

namespace {

NovikovElement mono(long long p, long long q, long long ep, long long eq, long long mu = 0) {
  return NovikovElement::monomial(Rational(p, q), Rational(ep, eq), mu);
}

// random gapped element over the monoid <(1/2,2),(1,0)>, bounded energy
NovikovElement random_gapped(std::mt19937& rng) {
  static const DiscreteSubmonoid G({{Rational(1, 2), 2}, {Rational(1), 0}});
  auto elems = G.below(Rational(3));
  std::uniform_int_distribution<int> nterms(0, 4);
  std::uniform_int_distribution<size_t> pick(0, elems.size() - 1);
  std::uniform_int_distribution<int> coeff(-5, 5);
  std::vector<NovikovTerm> terms;
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    const auto& e = elems[pick(rng)];
    terms.push_back(NovikovTerm{Rational(coeff(rng)), e.energy, e.mu});
  }
  return NovikovElement(std::move(terms));
}

}  // namespace

TEST_CASE("addition examples") {
  CHECK((mono(1, 1, 1, 2) + mono(-1, 1, 1, 2)).is_zero());
  NovikovElement a = mono(2, 1, 0, 1) + mono(3, 1, 0, 1, 2);
  CHECK(a.terms().size() == 2);
  NovikovElement b = (mono(1, 1, 1, 3) + mono(1, 1, 1, 1)) + mono(1, 1, 1, 3);
  CHECK(b == mono(2, 1, 1, 3) + mono(1, 1, 1, 1));
}

TEST_CASE("multiplication examples") {
  NovikovElement lhs = (mono(1, 1, 1, 2) + mono(2, 1, 1, 1)) * mono(3, 1, 1, 4);
  CHECK(lhs == mono(3, 1, 3, 4) + mono(6, 1, 5, 4));
  CHECK(mono(1, 1, 0, 1, 2) * mono(1, 1, 0, 1, -2) == NovikovElement::one());
  CHECK((random_gapped(*[] { static std::mt19937 r(1); return &r; }()) *
         NovikovElement::zero())
            .is_zero());
}

TEST_CASE("valuation") {
  NovikovElement a = mono(3, 1, 1, 2, 4) + mono(5, 1, 2, 1);
  REQUIRE(a.valuation());
  CHECK(*a.valuation() == Rational(1, 2));
  CHECK(!NovikovElement::zero().valuation());
  CHECK(*NovikovElement::one().valuation() == 0);
}

TEST_CASE("truncate") {
  NovikovElement a = mono(1, 1, 1, 2) + mono(1, 1, 2, 1);
  CHECK(a.truncate(1) == mono(1, 1, 1, 2));
  CHECK(a.truncate(0).is_zero());
  CHECK(a.truncate(1).truncate(1) == a.truncate(1));
  CHECK_THROWS_AS(a.truncate(Rational(-1)), InvalidCutLevel);
}

TEST_CASE("ring axioms on randomized gapped elements") {
  std::mt19937 rng(20240817);
  for (int trial = 0; trial < 1000; ++trial) {
    NovikovElement a = random_gapped(rng), b = random_gapped(rng), c = random_gapped(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a + b == b + a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * b == b * a);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * NovikovElement::one() == a);
    CHECK((a + NovikovElement::zero()) == a);
  }
}

TEST_CASE("valuation laws") {
  std::mt19937 rng(7);
  int seen_min = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    NovikovElement a = random_gapped(rng), b = random_gapped(rng);
    if (!a.is_zero() && !b.is_zero()) {
      CHECK(*(a * b).valuation() == *a.valuation() + *b.valuation());
    }
    auto s = a + b;
    if (!a.is_zero() && !b.is_zero() && !s.is_zero()) {
      Rational mn = std::min(*a.valuation(), *b.valuation());
      CHECK(*s.valuation() >= mn);
      if (*a.valuation() != *b.valuation()) {
        CHECK(*s.valuation() == mn);
        ++seen_min;
      }
    }
  }
  CHECK(seen_min > 50);
}

TEST_CASE("truncate is a ring homomorphism onto the quotient") {
  std::mt19937 rng(99);
  const Rational E(3, 2);
  for (int trial = 0; trial < 200; ++trial) {
    NovikovElement a = random_gapped(rng), b = random_gapped(rng);
    CHECK((a * b).truncate(E) == (a.truncate(E) * b.truncate(E)).truncate(E));
    CHECK((a + b).truncate(E) == a.truncate(E) + b.truncate(E));
  }
}

TEST_CASE("invert_unit") {
  NovikovElement a = NovikovElement::scalar(2) + mono(3, 1, 1, 2, 2);
  NovikovElement inv = a.invert_unit(Rational(3));
  CHECK((a * inv).truncate(3) == NovikovElement::one());
  CHECK_THROWS(mono(1, 1, 1, 2).invert_unit(2));
}

TEST_CASE("monoid_below") {
  DiscreteSubmonoid G({{Rational(1), 2}});
  auto below = G.below(Rational(5, 2));
  REQUIRE(below.size() == 3);
  CHECK(below[0] == MonoidElem{Rational(0), 0});
  CHECK(below[1] == MonoidElem{Rational(1), 2});
  CHECK(below[2] == MonoidElem{Rational(2), 4});

  DiscreteSubmonoid trivial;
  CHECK(trivial.below(Rational(100)).size() == 1);

  DiscreteSubmonoid G2({{Rational(1), 0}, {Rational(3, 2), 2}});
  auto b2 = G2.below(Rational(3));
  std::vector<MonoidElem> want{{Rational(0), 0},    {Rational(1), 0},    {Rational(3, 2), 2},
                               {Rational(2), 0},    {Rational(5, 2), 2}, {Rational(3), 0},
                               {Rational(3), 4}};
  CHECK(b2 == want);
}

TEST_CASE("monoid_below is closed under addition within the bound") {
  DiscreteSubmonoid G({{Rational(1, 2), 2}, {Rational(4, 3), 0}});
  const Rational E0(4);
  auto below = G.below(E0);
  for (const auto& x : below)
    for (const auto& y : below) {
      if (x.energy + y.energy > E0) continue;
      MonoidElem s = x + y;
      CHECK(std::find(below.begin(), below.end(), s) != below.end());
    }
}

TEST_CASE("e_min") {
  CHECK(DiscreteSubmonoid({{Rational(1), 2}}).e_min() == 1);
  CHECK(DiscreteSubmonoid().e_min() == 1);
  CHECK(DiscreteSubmonoid({{Rational(3, 2), 0}, {Rational(1), 2}}).e_min() == 1);
}

TEST_CASE("gk_set") {
  using nov::GKPair;
  DiscreteSubmonoid trivial;
  auto a = nov::gk_set(trivial, Rational(2), Rational(1));
  REQUIRE(a.size() == 3);
  for (long long k = 0; k < 3; ++k) {
    CHECK(a[k].beta == nov::beta0());
    CHECK(a[k].k == k);
  }

  auto b = nov::gk_set(trivial, Rational(0), Rational(1));
  REQUIRE(b.size() == 1);
  CHECK(b[0].beta == nov::beta0());
  CHECK(b[0].k == 0);

  DiscreteSubmonoid G({{Rational(1), 0}});
  auto c = nov::gk_set(G, Rational(1), Rational(1));
  REQUIRE(c.size() == 3);
  CHECK(c[0].beta == nov::beta0());
  CHECK(c[0].k == 0);
  CHECK(c[1].beta == nov::beta0());
  CHECK(c[1].k == 1);
  CHECK(c[2].beta == MonoidElem{Rational(1), 0});
  CHECK(c[2].k == 0);

  CHECK_THROWS_AS(nov::gk_set(G, Rational(1), Rational(2)), MinimalEnergyViolation);
}
