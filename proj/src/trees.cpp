#include "filtalg/trees.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "filtalg/errors.hpp"

namespace filtalg::trees {

namespace {

void validate_node(const TreeNode& n) {
  if (n.is_leaf) {
    if (!n.children.empty()) throw Error("DecoratedTree: leaf with children");
    return;
  }
  if (n.beta.energy < 0) throw Error("DecoratedTree: negative decoration energy");
  if (n.beta.energy == 0 && n.beta != nov::beta0())
    throw Error("DecoratedTree: energy-0 decoration must be the unit");
  if (n.beta.energy == 0 && n.children.size() < 2)
    throw Error("DecoratedTree: unstable vertex (unit decoration, valency < 3)");
  for (const auto& c : n.children) validate_node(c);
}

int count_inputs(const TreeNode& n) {
  if (n.is_leaf) return 1;
  int k = 0;
  for (const auto& c : n.children) k += count_inputs(c);
  return k;
}

int count_interior(const TreeNode& n) {
  if (n.is_leaf) return 0;
  int v = 1;
  for (const auto& c : n.children) v += count_interior(c);
  return v;
}

void sum_beta(const TreeNode& n, MonoidElem& acc) {
  if (n.is_leaf) return;
  acc = acc + n.beta;
  for (const auto& c : n.children) sum_beta(c, acc);
}

void encode(const TreeNode& n, std::ostream& os) {
  if (n.is_leaf) {
    os << '*';
    return;
  }
  os << '(';
  for (const auto& c : n.children) encode(c, os);
  os << ')' << '{' << rational_str(n.beta.energy) << ',' << n.beta.mu << '}';
}

}  // namespace

DecoratedTree::DecoratedTree(TreeNode root) : root_(std::move(root)) {
  if (root_.is_leaf) throw Error("DecoratedTree: root must be an interior vertex");
  validate_node(root_);
}

DecoratedTree DecoratedTree::corolla(int k, MonoidElem beta) {
  TreeNode n;
  n.beta = std::move(beta);
  for (int i = 0; i < k; ++i) {
    TreeNode leaf;
    leaf.is_leaf = true;
    n.children.push_back(std::move(leaf));
  }
  return DecoratedTree(std::move(n));
}

int DecoratedTree::num_inputs() const { return count_inputs(root_); }

int DecoratedTree::num_interior_vertices() const { return count_interior(root_); }

MonoidElem DecoratedTree::total_beta() const {
  MonoidElem acc = nov::beta0();
  sum_beta(root_, acc);
  return acc;
}

std::string DecoratedTree::code() const {
  std::ostringstream os;
  encode(root_, os);
  return os.str();
}

int corner_codim(const DecoratedTree& t) { return t.num_interior_vertices() - 1; }

namespace {

// Memoized tree grammar.  A key in progress yields the empty set: a tree
// whose proper subtree repeats the full (k, beta) budget cannot close up
// (the siblings would have to carry zero inputs and zero energy).
struct Enumerator {
  const DiscreteSubmonoid& G;
  std::vector<MonoidElem> monoid;  // all elements with energy <= budget
  std::map<std::pair<int, MonoidElem>, std::optional<std::vector<TreeNode>>> memo;

  bool in_monoid(const MonoidElem& x) const {
    return std::binary_search(monoid.begin(), monoid.end(), x);
  }

  const std::vector<TreeNode>& trees(int k, const MonoidElem& beta) {
    auto key = std::make_pair(k, beta);
    auto it = memo.find(key);
    if (it != memo.end()) {
      static const std::vector<TreeNode> empty;
      return it->second ? *it->second : empty;
    }
    memo[key] = std::nullopt;  // in progress
    std::vector<TreeNode> out;
    for (const auto& beta_root : monoid) {
      if (beta_root.energy > beta.energy) break;
      MonoidElem rest{beta.energy - beta_root.energy, beta.mu - beta_root.mu};
      if (!in_monoid(rest)) continue;
      for (auto& children : child_sequences(k, rest)) {
        if (beta_root.energy == 0 && children.size() < 2) continue;
        TreeNode n;
        n.beta = beta_root;
        n.children = std::move(children);
        out.push_back(std::move(n));
      }
    }
    memo[key] = std::move(out);
    return *memo[key];
  }

  // Ordered child lists consuming exactly k inputs and beta decoration.
  std::vector<std::vector<TreeNode>> child_sequences(int k, const MonoidElem& beta) {
    std::vector<std::vector<TreeNode>> out;
    if (k == 0 && beta == nov::beta0()) out.push_back({});
    // first child a leaf
    if (k >= 1) {
      for (auto& tail : child_sequences(k - 1, beta)) {
        std::vector<TreeNode> seq;
        TreeNode leaf;
        leaf.is_leaf = true;
        seq.push_back(std::move(leaf));
        for (auto& t : tail) seq.push_back(std::move(t));
        out.push_back(std::move(seq));
      }
    }
    // first child an interior subtree with (k1, beta1)
    for (int k1 = 0; k1 <= k; ++k1) {
      for (const auto& beta1 : monoid) {
        if (beta1.energy > beta.energy) break;
        MonoidElem rest{beta.energy - beta1.energy, beta.mu - beta1.mu};
        if (!in_monoid(rest)) continue;
        const auto& heads = trees(k1, beta1);
        if (heads.empty()) continue;
        auto tails = child_sequences(k - k1, rest);
        for (const auto& head : heads)
          for (const auto& tail : tails) {
            std::vector<TreeNode> seq;
            seq.push_back(head);
            for (const auto& t : tail) seq.push_back(t);
            out.push_back(std::move(seq));
          }
      }
    }
    return out;
  }
};

}  // namespace

std::vector<DecoratedTree> enumerate_trees(const DiscreteSubmonoid& G, int k,
                                           const MonoidElem& beta) {
  if (k < 0) throw IndexOutOfRange("enumerate_trees: k < 0");
  Enumerator e{G, G.below(beta.energy), {}};
  if (!e.in_monoid(beta)) return {};
  std::vector<DecoratedTree> out;
  for (const auto& n : e.trees(k, beta)) out.push_back(DecoratedTree(n));
  std::sort(out.begin(), out.end(),
            [](const DecoratedTree& a, const DecoratedTree& b) { return a.code() < b.code(); });
  return out;
}

namespace {

// Replace the i-th leaf (planar order, 1-based) by the given subtree.
bool graft_at(TreeNode& n, int& leaf_counter, int target, const TreeNode& sub) {
  for (auto& c : n.children) {
    if (c.is_leaf) {
      if (++leaf_counter == target) {
        c = sub;
        return true;
      }
    } else if (graft_at(c, leaf_counter, target, sub)) {
      return true;
    }
  }
  return false;
}

}  // namespace

DecoratedTree graft(const DecoratedTree& t1, const DecoratedTree& t2, int i) {
  if (i < 1 || i > t2.num_inputs())
    throw IndexOutOfRange("graft: input index " + std::to_string(i) + " out of 1.." +
                          std::to_string(t2.num_inputs()));
  TreeNode root = t2.root();
  int counter = 0;
  graft_at(root, counter, i, t1.root());
  return DecoratedTree(std::move(root));
}

int boundary_sign_exponent(long long k1, long long k2, long long i, long long mu_beta2,
                           int dimL) {
  long long eps =
      (k1 - 1) * (k2 - 1) + dimL + k1 + (i - 1) * (1 + (mu_beta2 + k2) * dimL);
  return static_cast<int>(((eps % 2) + 2) % 2);
}

namespace {

bool factor_admissible(long long k, const MonoidElem& beta) {
  return beta.energy > 0 || (beta == nov::beta0() && k >= 2);
}

}  // namespace

std::vector<BoundaryTerm> boundary_terms(const DiscreteSubmonoid& G, int k,
                                         const MonoidElem& beta, int dimL) {
  std::vector<BoundaryTerm> out;
  auto monoid = G.below(beta.energy);
  auto in_monoid = [&](const MonoidElem& x) {
    return std::binary_search(monoid.begin(), monoid.end(), x);
  };
  if (!in_monoid(beta)) return out;
  for (const auto& beta2 : monoid) {
    MonoidElem beta1{beta.energy - beta2.energy, beta.mu - beta2.mu};
    if (!in_monoid(beta1)) continue;
    for (long long k2 = 0; k2 <= k; ++k2) {
      long long k1 = k + 1 - k2;
      if (k1 < 1) continue;
      if (!factor_admissible(k1, beta1) || !factor_admissible(k2, beta2)) continue;
      for (long long i = 1; i <= k1; ++i) {
        int eps = boundary_sign_exponent(k1, k2, i, beta2.mu, dimL);
        out.push_back(BoundaryTerm{beta1, k1, beta2, k2, i, eps == 0 ? 1 : -1});
      }
    }
  }
  return out;
}

std::vector<DecoratedTree> corner_strata(const DiscreteSubmonoid& G, int k,
                                         const MonoidElem& beta, int m) {
  if (m < 0) throw IndexOutOfRange("corner_strata: m < 0");
  std::vector<DecoratedTree> out;
  for (auto& t : enumerate_trees(G, k, beta))
    if (corner_codim(t) == m) out.push_back(std::move(t));
  return out;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

namespace {

// Rebuild the tree contracting the interior edges whose DFS preorder ids
// lie in `marked`; the merged vertex keeps the parent's position and the
// decorations add.
TreeNode contract(const TreeNode& n, const std::set<int>& marked, int& edge_id) {
  TreeNode out;
  out.beta = n.beta;
  for (const auto& c : n.children) {
    if (c.is_leaf) {
      out.children.push_back(c);
      continue;
    }
    int id = edge_id++;
    TreeNode sub = contract(c, marked, edge_id);
    if (marked.count(id)) {
      out.beta = out.beta + sub.beta;
      for (auto& gc : sub.children) out.children.push_back(std::move(gc));
    } else {
      out.children.push_back(std::move(sub));
    }
  }
  return out;
}

void subsets_of(int n, int k, int start, std::vector<int>& cur,
                std::vector<std::set<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.emplace_back(cur.begin(), cur.end());
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    subsets_of(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

TowerCheckResult corner_tower_check(const DiscreteSubmonoid& G, int k, const MonoidElem& beta,
                                    int m, int l) {
  TowerCheckResult res;
  auto deep = corner_strata(G, k, beta, m + l);
  res.strata = static_cast<long long>(deep.size());
  res.expected = binomial(m + l, l) * res.strata;
  std::map<std::string, long long> per_tree;
  for (const auto& t : deep) {
    std::vector<std::set<int>> subsets;
    std::vector<int> cur;
    subsets_of(m + l, l, 0, cur, subsets);
    for (const auto& B : subsets) {
      // Contracting the flagged edges must land in a valid codim-m stratum.
      int id = 0;
      DecoratedTree contracted(contract(t.root(), B, id));
      if (corner_codim(contracted) != m || contracted.total_beta() != beta ||
          contracted.num_inputs() != k)
        return res;  // ok stays false
      per_tree[t.code()]++;
      res.flagged++;
    }
  }
  long long want = binomial(m + l, l);
  for (const auto& [code, cnt] : per_tree)
    if (cnt != want) return res;
  res.ok = res.flagged == res.expected;
  return res;
}

long long tree_dimension(const DecoratedTree& t, int dimL) {
  long long sum = 0;
  // preorder walk
  std::vector<const TreeNode*> stack{&t.root()};
  while (!stack.empty()) {
    const TreeNode* n = stack.back();
    stack.pop_back();
    if (n->is_leaf) continue;
    long long kv = static_cast<long long>(n->children.size());
    sum += n->beta.mu + dimL + kv - 2;
    for (const auto& c : n->children) stack.push_back(&c);
  }
  long long codim = corner_codim(t);
  sum -= static_cast<long long>(dimL) * codim;
  MonoidElem beta = t.total_beta();
  long long expected = beta.mu + dimL + t.num_inputs() - 2 - codim;
  if (sum != expected)
    throw Error("tree_dimension: vertex-sum formula disagrees with the closed form");
  return sum;
}

}  // namespace filtalg::trees
