#ifndef FILTALG_TREES_HPP
#define FILTALG_TREES_HPP

#include <string>
#include <vector>

#include "filtalg/novikov.hpp"

namespace filtalg::trees {

using nov::DiscreteSubmonoid;
using nov::MonoidElem;

// Rooted planar decorated tree.  A node is either an input leaf or an
// interior vertex with a monoid decoration and a planar list of children;
// the root node is the interior vertex attached to the output leaf.
// Stability: every interior vertex has positive decoration energy or at
// least two children (valency >= 3 counting the parent edge).
struct TreeNode {
  bool is_leaf = false;
  MonoidElem beta;               // interior only
  std::vector<TreeNode> children;  // interior only; may be empty (sprout)

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class DecoratedTree {
 public:
  DecoratedTree() = default;
  explicit DecoratedTree(TreeNode root);  // validates stability

  static DecoratedTree corolla(int k, MonoidElem beta = nov::beta0());

  const TreeNode& root() const { return root_; }
  int num_inputs() const;           // k
  int num_interior_vertices() const;
  MonoidElem total_beta() const;

  // Canonical planar code; equality and dedup are code equality.
  std::string code() const;

  friend bool operator==(const DecoratedTree& a, const DecoratedTree& b) {
    return a.root_ == b.root_;
  }

 private:
  TreeNode root_;
};

// Number of interior edges (the corner codimension of the stratum).
int corner_codim(const DecoratedTree& t);

// Complete duplicate-free list of stable decorated trees with k inputs and
// total decoration beta, in canonical code order.
std::vector<DecoratedTree> enumerate_trees(const DiscreteSubmonoid& G, int k,
                                           const MonoidElem& beta);

// Attach t1's root to the i-th input (1-based, planar order) of t2.
DecoratedTree graft(const DecoratedTree& t1, const DecoratedTree& t2, int i);

// One admissible codimension-1 splitting: the inner factor (k2 inputs,
// beta2) plugged into slot i (1..k1) of the outer factor (k1, beta1).
struct BoundaryTerm {
  MonoidElem beta1;  // outer
  long long k1 = 0;
  MonoidElem beta2;  // inner
  long long k2 = 0;
  long long i = 1;
  int sign = 1;

  friend bool operator==(const BoundaryTerm&, const BoundaryTerm&) = default;
};

// Parity exponent of the boundary orientation:
// (k1-1)(k2-1) + dimL + k1 + (i-1)(1 + (mu(beta2)+k2) dimL).
int boundary_sign_exponent(long long k1, long long k2, long long i, long long mu_beta2,
                           int dimL);

// All admissible splittings of (k, beta) with signs; the list is in
// bijection with the codimension-1 strata.
std::vector<BoundaryTerm> boundary_terms(const DiscreteSubmonoid& G, int k,
                                         const MonoidElem& beta, int dimL);

// Trees with exactly m interior edges.
std::vector<DecoratedTree> corner_strata(const DiscreteSubmonoid& G, int k,
                                         const MonoidElem& beta, int m);

struct TowerCheckResult {
  bool ok = false;
  long long flagged = 0;   // components of the iterated corner
  long long expected = 0;  // binomial(m+l, l) * #corner_strata(m+l)
  long long strata = 0;    // #corner_strata(m+l)
};

// Iterated-corner multiplicity: flagging which l of the m+l interior edges
// degenerate second must produce exactly binomial(m+l, l) copies of every
// codim-(m+l) stratum, and contracting the flagged edges must land in a
// valid codim-m stratum.
TowerCheckResult corner_tower_check(const DiscreteSubmonoid& G, int k, const MonoidElem& beta,
                                    int m, int l);

// Sum over interior vertices of (mu(beta_v) + dimL + k_v - 2) minus
// dimL * #interior edges; checked against
// mu(beta) + dimL + k - 2 - corner_codim(t) before returning.
long long tree_dimension(const DecoratedTree& t, int dimL);

long long binomial(int n, int k);

}  // namespace filtalg::trees

#endif
