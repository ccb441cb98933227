#include <doctest.h>

#include <random>

#include "filtalg/gradecx.hpp"

using namespace filtalg;
using namespace filtalg::gcx;

namespace {

// interval model: x in degree 0, y in degree 1, d0 x = y
CochainComplex interval() {
  auto S = std::make_shared<GradedSpace>(
      std::vector<std::pair<std::string, int>>{{"x", 0}, {"y", 1}});
  GradedMap d(S, S, 1);
  d.set(1, 0, 1);
  return CochainComplex(S, std::move(d));
}

// circle model: a in degree 0, b in degree 1, d0 = 0
CochainComplex circle() {
  auto S = std::make_shared<GradedSpace>(
      std::vector<std::pair<std::string, int>>{{"a", 0}, {"b", 1}});
  return CochainComplex(S, GradedMap(S, S, 1));
}

}  // namespace

TEST_CASE("degree homogeneity is enforced") {
  auto S = std::make_shared<GradedSpace>(
      std::vector<std::pair<std::string, int>>{{"x", 0}, {"y", 1}});
  GradedMap f(S, S, 0);
  CHECK_THROWS_AS(f.set(1, 0, Rational(1)), DegreeError);
  f.set(0, 0, 1);
  CHECK(f.at(0, 0) == 1);
}

TEST_CASE("compose") {
  auto C = interval();
  GradedMap id = GradedMap::identity(C.space());
  CHECK(compose(id, C.d0()) == C.d0());
  CHECK(compose(C.d0(), id) == C.d0());
  CHECK(compose(C.d0(), C.d0()).is_zero());

  auto P = std::make_shared<GradedSpace>(
      std::vector<std::pair<std::string, int>>{{"p", 0}});
  GradedMap two(P, P, 0), three(P, P, 0);
  two.set(0, 0, 2);
  three.set(0, 0, 3);
  CHECK(compose(two, three).at(0, 0) == 6);

  CHECK_THROWS_AS(compose(two, C.d0()), SpaceMismatch);
}

TEST_CASE("solve_primitive on the interval model") {
  auto C = interval();
  Vec y = zero_vec(2);
  y[1] = Rational(5);
  auto res = solve_primitive(C, y);
  REQUIRE(std::holds_alternative<Vec>(res));
  Vec x = std::get<Vec>(res);
  CHECK(C.d0().apply(x) == y);
}

TEST_CASE("solve_primitive detects inexact classes with a certificate") {
  auto C = circle();
  Vec y = zero_vec(2);
  y[1] = Rational(1);
  auto res = solve_primitive(C, y);
  REQUIRE(std::holds_alternative<NotExact>(res));
  const Vec& phi = std::get<NotExact>(res).functional;
  // certificate pairs nontrivially with y ...
  Rational pairing = 0;
  for (size_t i = 0; i < phi.size(); ++i) pairing += phi[i] * y[i];
  CHECK(pairing != 0);
  // ... and vanishes on 100 random coboundaries
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> coeff(-9, 9);
  for (int t = 0; t < 100; ++t) {
    Vec z = zero_vec(2);
    z[0] = coeff(rng);
    Vec dz = C.d0().apply(z);
    Rational p = 0;
    for (size_t i = 0; i < phi.size(); ++i) p += phi[i] * dz[i];
    CHECK(p == 0);
  }
}

TEST_CASE("solve_primitive of zero is zero") {
  auto C = interval();
  auto res = solve_primitive(C, zero_vec(2));
  REQUIRE(std::holds_alternative<Vec>(res));
  CHECK(is_zero(std::get<Vec>(res)));
}

TEST_CASE("solve_primitive rejects inhomogeneous input") {
  auto C = interval();
  Vec y = zero_vec(2);
  y[0] = 1;
  y[1] = 1;
  CHECK_THROWS_AS(solve_primitive(C, y), DegreeError);
}

TEST_CASE("solver is deterministic") {
  // two-dimensional solution space; the pivot rule fixes the output
  auto S = std::make_shared<GradedSpace>(std::vector<std::pair<std::string, int>>{
      {"u", 0}, {"v", 0}, {"w", 1}});
  GradedMap d(S, S, 1);
  d.set(2, 0, 1);
  d.set(2, 1, 1);
  CochainComplex C(S, std::move(d));
  Vec y = zero_vec(3);
  y[2] = Rational(7);
  auto a = solve_primitive(C, y);
  auto b = solve_primitive(C, y);
  REQUIRE(std::holds_alternative<Vec>(a));
  CHECK(std::get<Vec>(a) == std::get<Vec>(b));
  CHECK(C.d0().apply(std::get<Vec>(a)) == y);
}

TEST_CASE("is_cocycle") {
  auto C = interval();
  CHECK(is_cocycle(C, C.d0()));
  CHECK(is_cocycle(C, GradedMap::identity(C.space())));
  GradedMap f(C.space(), C.space(), 0);
  f.set(0, 0, 1);  // x -> x but not y -> y
  CHECK(!is_cocycle(C, f));
}

TEST_CASE("hom complex differential squares to zero and solves") {
  auto A = interval();
  auto B = interval();
  HomComplex H = hom_complex(A, B, 0);
  // D^2 = 0 was checked by the CochainComplex constructor; solve a
  // commutator equation: find f with dB f - f dA = 0 forcing f = any chain
  // map; instead check that D of the identity is zero
  GradedMap id = GradedMap::identity(A.space());
  Vec v = H.from_map(id);
  Vec Dv = H.complex.d0().apply(v);
  CHECK(is_zero(Dv));
}

TEST_CASE("solve_linear certificates") {
  LinearSystem sys;
  sys.add(0, 0, 1);
  sys.add(1, 0, 1);
  sys.add_rhs(0, 1);
  sys.add_rhs(1, 2);  // inconsistent
  auto res = solve_linear(sys);
  REQUIRE(std::holds_alternative<LinearCertificate>(res));
  const auto& cert = std::get<LinearCertificate>(res);
  // c^T A = 0 and c^T b != 0
  Rational dot_a = 0, dot_b = 0;
  for (const auto& [row, v] : cert.rows) {
    dot_a += v * (row == 0 || row == 1 ? Rational(1) : Rational(0));
    dot_b += v * (row == 0 ? Rational(1) : Rational(2));
  }
  CHECK(dot_a == 0);
  CHECK(dot_b != 0);

  LinearSystem ok;
  ok.add(0, 0, 2);
  ok.add_rhs(0, 4);
  auto sol = solve_linear(ok);
  REQUIRE(std::holds_alternative<std::vector<Rational>>(sol));
  CHECK(std::get<std::vector<Rational>>(sol)[0] == 2);
}
