#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "filtalg/trees.hpp"

using namespace filtalg;
using namespace filtalg::trees;
using nov::DiscreteSubmonoid;
using nov::MonoidElem;

namespace {

const DiscreteSubmonoid kTrivial;

// ---- independent oracle: generate all rooted planar shapes, assign all
// decorations, filter stability afterwards -----------------------------

struct Shape {
  std::vector<int> children;  // preorder: children count per vertex, -1 = leaf
};

void oracle_shapes(int leaves, int vertices, std::vector<Shape>& out);

void oracle_forests(int leaves, int vertices, int slots,
                    std::vector<std::vector<Shape>>& out) {
  if (slots == 0) {
    if (leaves == 0 && vertices == 0) out.push_back({});
    return;
  }
  // first slot is a leaf
  if (leaves >= 1) {
    std::vector<std::vector<Shape>> rest;
    oracle_forests(leaves - 1, vertices, slots - 1, rest);
    for (auto& r : rest) {
      std::vector<Shape> f;
      f.push_back(Shape{{-1}});  // leaf marker
      for (auto& x : r) f.push_back(std::move(x));
      out.push_back(std::move(f));
    }
  }
  // first slot is a subtree
  for (int l1 = 0; l1 <= leaves; ++l1)
    for (int v1 = 1; v1 <= vertices; ++v1) {
      std::vector<Shape> heads;
      oracle_shapes(l1, v1, heads);
      if (heads.empty()) continue;
      std::vector<std::vector<Shape>> rest;
      oracle_forests(leaves - l1, vertices - v1, slots - 1, rest);
      for (const auto& h : heads)
        for (const auto& r : rest) {
          std::vector<Shape> f;
          f.push_back(h);
          for (const auto& x : r) f.push_back(x);
          out.push_back(std::move(f));
        }
    }
}

void oracle_shapes(int leaves, int vertices, std::vector<Shape>& out) {
  if (vertices < 1) return;
  for (int m = 0; m <= leaves + vertices - 1; ++m) {
    std::vector<std::vector<Shape>> forests;
    oracle_forests(leaves, vertices - 1, m, forests);
    for (const auto& f : forests) {
      Shape s;
      s.children.push_back(m);
      for (const auto& part : f)
        s.children.insert(s.children.end(), part.children.begin(), part.children.end());
      out.push_back(std::move(s));
    }
  }
}

TreeNode shape_to_node(const Shape& s, size_t& pos, const std::vector<MonoidElem>& decor,
                       size_t& vi) {
  int m = s.children[pos++];
  TreeNode n;
  n.beta = decor[vi++];
  for (int c = 0; c < m; ++c) {
    if (s.children[pos] == -1) {
      ++pos;
      TreeNode leaf;
      leaf.is_leaf = true;
      n.children.push_back(std::move(leaf));
    } else {
      n.children.push_back(shape_to_node(s, pos, decor, vi));
    }
  }
  return n;
}

bool stable_node(const TreeNode& n) {
  if (n.is_leaf) return true;
  if (n.beta.energy == 0 && (!(n.beta == nov::beta0()) || n.children.size() < 2)) return false;
  for (const auto& c : n.children)
    if (!stable_node(c)) return false;
  return true;
}

// arities of the interior vertices of a shape, in preorder
void shape_arities(const Shape& s, std::vector<int>& out) {
  for (int c : s.children)
    if (c >= 0) out.push_back(c);
}

void decorate_rec(const Shape& s, const std::vector<int>& arities,
                  const std::vector<MonoidElem>& elems, std::vector<MonoidElem>& decor,
                  const MonoidElem& remaining, std::set<std::string>& out) {
  size_t vi = decor.size();
  if (vi == arities.size()) {
    if (!(remaining == nov::beta0())) return;
    size_t pos = 0, i = 0;
    TreeNode n = shape_to_node(s, pos, decor, i);
    if (stable_node(n)) out.insert(DecoratedTree(n).code());
    return;
  }
  for (const auto& e : elems) {
    if (e.energy > remaining.energy) break;
    if (e.energy == 0 && arities[vi] < 2) continue;  // unstable branch
    decor.push_back(e);
    decorate_rec(s, arities, elems, decor,
                 MonoidElem{remaining.energy - e.energy, remaining.mu - e.mu}, out);
    decor.pop_back();
  }
}

std::set<std::string> oracle_enumerate(const DiscreteSubmonoid& G, int k,
                                       const MonoidElem& beta) {
  std::set<std::string> out;
  auto elems = G.below(beta.energy);
  // every positive vertex spends at least e_min; unit vertices branch, so
  // they are at most (#endpoints - 1)
  long long npos =
      static_cast<long long>(beta.energy / G.e_min());
  long long max_vertices = npos + std::max<long long>(k + npos - 1, 0);
  for (int v = 1; v <= max_vertices; ++v) {
    std::vector<Shape> shapes;
    oracle_shapes(k, v, shapes);
    for (const auto& s : shapes) {
      std::vector<int> arities;
      shape_arities(s, arities);
      std::vector<MonoidElem> decor;
      decorate_rec(s, arities, elems, decor, beta, out);
    }
  }
  return out;
}

// little Schroeder numbers 1, 1, 3, 11, 45, 197, ...
long long schroeder(int k) {
  std::vector<long long> s{0, 1, 1};
  for (int n = 3; n <= k; ++n)
    s.push_back((3 * (2 * n - 3) * s[n - 1] - (n - 3) * s[n - 2]) / n);
  return s[k];
}

long long catalan(int n) {
  long long c = 1;
  for (int i = 0; i < n; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

bool is_binary(const TreeNode& n) {
  if (n.is_leaf) return true;
  if (n.children.size() != 2) return false;
  for (const auto& c : n.children)
    if (!is_binary(c)) return false;
  return true;
}

}  // namespace

TEST_CASE("undecorated counts match the associahedron face counts") {
  CHECK(enumerate_trees(kTrivial, 2, nov::beta0()).size() == 1);
  CHECK(enumerate_trees(kTrivial, 3, nov::beta0()).size() == 3);
  CHECK(enumerate_trees(kTrivial, 4, nov::beta0()).size() == 11);
  CHECK(enumerate_trees(kTrivial, 5, nov::beta0()).size() == 45);
  CHECK(enumerate_trees(kTrivial, 6, nov::beta0()).size() == 197);
  for (int k = 2; k <= 6; ++k)
    CHECK(static_cast<long long>(enumerate_trees(kTrivial, k, nov::beta0()).size()) ==
          schroeder(k));
  // no stable tree with fewer than 2 inputs at the unit decoration
  CHECK(enumerate_trees(kTrivial, 0, nov::beta0()).empty());
  CHECK(enumerate_trees(kTrivial, 1, nov::beta0()).empty());
}

TEST_CASE("binary counts are Catalan") {
  for (int k = 2; k <= 6; ++k) {
    auto all = enumerate_trees(kTrivial, k, nov::beta0());
    long long binary = std::count_if(
        all.begin(), all.end(), [](const DecoratedTree& t) { return is_binary(t.root()); });
    CHECK(binary == catalan(k - 1));
  }
}

TEST_CASE("enumeration matches the brute-force oracle") {
  for (int k = 2; k <= 6; ++k) {
    auto want = oracle_enumerate(kTrivial, k, nov::beta0());
    std::set<std::string> got;
    for (const auto& t : enumerate_trees(kTrivial, k, nov::beta0())) got.insert(t.code());
    CHECK(!got.empty());
    CHECK(got == want);
  }
  // a single energy-3 generator keeps the vertex bound small up to k = 6
  DiscreteSubmonoid G1({{Rational(3), 2}});
  for (int k = 0; k <= 6; ++k) {
    auto want = oracle_enumerate(G1, k, MonoidElem{Rational(3), 2});
    std::set<std::string> got;
    for (const auto& t : enumerate_trees(G1, k, MonoidElem{Rational(3), 2}))
      got.insert(t.code());
    CHECK(got == want);
  }
  DiscreteSubmonoid G2({{Rational(1), 0}, {Rational(3, 2), 2}});
  for (int k = 0; k <= 3; ++k)
    for (const auto& beta : {MonoidElem{Rational(1), 0}, MonoidElem{Rational(2), 0},
                             MonoidElem{Rational(5, 2), 2}, MonoidElem{Rational(3), 0}}) {
      auto want = oracle_enumerate(G2, k, beta);
      std::set<std::string> got;
      for (const auto& t : enumerate_trees(G2, k, beta)) got.insert(t.code());
      CHECK(got == want);
    }
}

TEST_CASE("corner_codim") {
  CHECK(corner_codim(DecoratedTree::corolla(3)) == 0);
  auto binary3 = graft(DecoratedTree::corolla(2), DecoratedTree::corolla(2), 1);
  CHECK(corner_codim(binary3) == 1);
  auto comb4 = graft(binary3, DecoratedTree::corolla(2), 1);
  CHECK(comb4.num_inputs() == 4);
  CHECK(corner_codim(comb4) == 2);
}

TEST_CASE("graft") {
  auto binary = graft(DecoratedTree::corolla(2), DecoratedTree::corolla(2), 1);
  // left-nested bracket ((xx)x): root child 1 is the inner vertex
  TreeNode leaf;
  leaf.is_leaf = true;
  TreeNode inner;
  inner.children = {leaf, leaf};
  TreeNode want;
  want.children = {inner, leaf};
  CHECK(binary == DecoratedTree(want));

  CHECK_THROWS_AS(graft(binary, DecoratedTree::corolla(2), 3), IndexOutOfRange);

  // codim additivity on random pairs
  std::mt19937 rng(11);
  auto all4 = enumerate_trees(kTrivial, 4, nov::beta0());
  auto all3 = enumerate_trees(kTrivial, 3, nov::beta0());
  std::uniform_int_distribution<size_t> p4(0, all4.size() - 1), p3(0, all3.size() - 1);
  for (int t = 0; t < 20; ++t) {
    const auto& a = all3[p3(rng)];
    const auto& b = all4[p4(rng)];
    std::uniform_int_distribution<int> slot(1, b.num_inputs());
    auto g = graft(a, b, slot(rng));
    CHECK(corner_codim(g) == corner_codim(a) + corner_codim(b) + 1);
    CHECK(g.num_inputs() == a.num_inputs() + b.num_inputs() - 1);
  }

  // operadic associativity instances
  auto c2 = DecoratedTree::corolla(2);
  auto c3 = DecoratedTree::corolla(3);
  // disjoint slots commute after reindexing
  CHECK(graft(c2, graft(c2, c3, 1), 4) == graft(c2, graft(c2, c3, 3), 1));
  // nested slots associate
  CHECK(graft(c2, graft(c2, c3, 1), 1) == graft(graft(c2, c2, 1), c3, 1));
}

TEST_CASE("boundary_terms") {
  // evaluate the cited exponent directly
  CHECK(boundary_sign_exponent(2, 1, 1, 0, 2) == 0);  // eps = 0+2+2+0 = 4
  // dimL parity flip with (i-1) even changes the sign
  CHECK(boundary_sign_exponent(2, 1, 1, 0, 3) == 1);

  auto terms = boundary_terms(kTrivial, 3, nov::beta0(), 2);
  CHECK(terms.size() == 2);
  for (const auto& t : terms) {
    CHECK(t.k1 == 2);
    CHECK(t.k2 == 2);
  }
  // the splitting count equals the number of codimension-1 strata
  CHECK(terms.size() == corner_strata(kTrivial, 3, nov::beta0(), 1).size());

  DiscreteSubmonoid G({{Rational(1), 0}});
  for (int k = 2; k <= 5; ++k) {
    auto b = boundary_terms(G, k, MonoidElem{Rational(1), 0}, 2);
    auto s = corner_strata(G, k, MonoidElem{Rational(1), 0}, 1);
    CHECK(b.size() == s.size());
  }
}

TEST_CASE("corner_strata") {
  auto m0 = corner_strata(kTrivial, 4, nov::beta0(), 0);
  REQUIRE(m0.size() == 1);
  CHECK(m0[0] == DecoratedTree::corolla(4));
  CHECK(corner_strata(kTrivial, 4, nov::beta0(), 1).size() == 5);
  CHECK(corner_strata(kTrivial, 4, nov::beta0(), 2).size() == 5);
}

TEST_CASE("corner_tower_check") {
  auto r = corner_tower_check(kTrivial, 4, nov::beta0(), 1, 1);
  CHECK(r.ok);
  CHECK(r.flagged == 10);  // binomial(2,1) * 5 deepest strata
  CHECK(r.strata == 5);

  auto r0 = corner_tower_check(kTrivial, 4, nov::beta0(), 2, 0);
  CHECK(r0.ok);
  CHECK(r0.flagged == r0.strata);

  auto r3 = corner_tower_check(kTrivial, 5, nov::beta0(), 2, 1);
  CHECK(r3.ok);
  CHECK(r3.flagged == 3 * r3.strata);
}

TEST_CASE("tree_dimension") {
  CHECK(tree_dimension(DecoratedTree::corolla(2), 2) == 2);
  auto binary3 = graft(DecoratedTree::corolla(2), DecoratedTree::corolla(2), 1);
  CHECK(tree_dimension(binary3, 2) == 2);
  // the vertex-sum identity holds on every enumerated tree (the function
  // throws otherwise)
  DiscreteSubmonoid G({{Rational(1), 2}});
  for (int k = 0; k <= 5; ++k)
    for (const auto& beta :
         {nov::beta0(), MonoidElem{Rational(1), 2}, MonoidElem{Rational(2), 4}})
      for (const auto& t : enumerate_trees(G, k, beta))
        for (int dimL : {2, 3}) CHECK_NOTHROW(tree_dimension(t, dimL));
}

TEST_CASE("every positive-codimension tree is a graft in one way per interior edge") {
  auto all = enumerate_trees(kTrivial, 5, nov::beta0());
  std::map<std::string, int> built;
  for (int k1 = 2; k1 <= 4; ++k1) {
    int k2 = 5 + 1 - k1;
    for (const auto& outer : enumerate_trees(kTrivial, k1, nov::beta0()))
      for (const auto& inner : enumerate_trees(kTrivial, k2, nov::beta0()))
        for (int i = 1; i <= k1; ++i) built[graft(inner, outer, i).code()]++;
  }
  for (const auto& t : all) {
    int m = corner_codim(t);
    if (m == 0) continue;
    CHECK(built[t.code()] == m);
  }
}
