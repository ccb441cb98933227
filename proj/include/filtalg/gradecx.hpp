#ifndef FILTALG_GRADECX_HPP
#define FILTALG_GRADECX_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "filtalg/rational.hpp"

namespace filtalg::gcx {

// Finite graded basis; names unique.
class GradedSpace {
 public:
  GradedSpace() = default;
  explicit GradedSpace(std::vector<std::pair<std::string, int>> basis);

  int dim() const { return static_cast<int>(basis_.size()); }
  const std::string& name(int i) const { return basis_[i].first; }
  int degree(int i) const { return basis_[i].second; }
  const std::vector<std::pair<std::string, int>>& basis() const { return basis_; }
  int index_of(const std::string& name) const;  // throws SpaceMismatch if absent

  friend bool operator==(const GradedSpace&, const GradedSpace&) = default;

 private:
  std::vector<std::pair<std::string, int>> basis_;
};

using SpacePtr = std::shared_ptr<const GradedSpace>;

// Dense rational coordinate vector over a GradedSpace basis.
using Vec = std::vector<Rational>;

bool is_zero(const Vec& v);
Vec zero_vec(int n);

// Sparse rational matrix respecting degrees: an entry (j, i) forces
// deg(target_j) == deg(source_i) + degree.
class GradedMap {
 public:
  GradedMap() = default;
  GradedMap(SpacePtr source, SpacePtr target, int degree);

  static GradedMap identity(SpacePtr space);
  static GradedMap zero(SpacePtr source, SpacePtr target, int degree) {
    return GradedMap(std::move(source), std::move(target), degree);
  }

  const SpacePtr& source() const { return source_; }
  const SpacePtr& target() const { return target_; }
  int degree() const { return degree_; }
  bool is_zero() const { return entries_.empty(); }

  // (row j in target, col i in source) -> value.  Throws DegreeError on a
  // degree-inhomogeneous entry.
  void set(int j, int i, Rational v);
  Rational at(int j, int i) const;
  const std::map<std::pair<int, int>, Rational>& entries() const { return entries_; }

  Vec apply(const Vec& x) const;

  GradedMap operator+(const GradedMap& o) const;
  GradedMap operator-(const GradedMap& o) const;
  GradedMap operator-() const;
  GradedMap scaled(const Rational& c) const;

  friend bool operator==(const GradedMap& a, const GradedMap& b);

 private:
  SpacePtr source_, target_;
  int degree_ = 0;
  std::map<std::pair<int, int>, Rational> entries_;
};

// f o g; degrees add.  Throws SpaceMismatch unless g.target == f.source.
GradedMap compose(const GradedMap& f, const GradedMap& g);

// d0 of degree +1 with d0 o d0 == 0, checked at construction.
class CochainComplex {
 public:
  CochainComplex() = default;
  CochainComplex(SpacePtr space, GradedMap d0);

  const SpacePtr& space() const { return space_; }
  const GradedMap& d0() const { return d0_; }

  friend bool operator==(const CochainComplex&, const CochainComplex&) = default;

 private:
  SpacePtr space_;
  GradedMap d0_;
};

// A cohomology functional certifying y is not exact: phi vanishes on every
// coboundary of the relevant degree but phi(y) != 0.
struct NotExact {
  Vec functional;
};

using PrimitiveResult = std::variant<Vec, NotExact>;

// Solve d0 x = y for homogeneous y of degree d; x has degree d - 1.
// Deterministic: Gaussian elimination with the lexicographically-first
// nonzero pivot.  Throws DegreeError if y is not homogeneous.
PrimitiveResult solve_primitive(const CochainComplex& C, const Vec& y);

// true iff  d0_B o f - (-1)^{sign_degree} f o d0_A == 0.  The default sign
// degree is f.degree().
bool is_cocycle(const CochainComplex& B, const CochainComplex& A, const GradedMap& f);
bool is_cocycle(const CochainComplex& B, const CochainComplex& A, const GradedMap& f,
                int sign_degree);
// Convenience for endomorphism-style checks on a single complex.
bool is_cocycle(const CochainComplex& C, const GradedMap& f);

// The internal-hom complex Hom(A, B).  Basis element (i -> j) carries
// degree deg(B_j) - deg(A_i) + degree_shift, and the differential is
// D(f) = dB o f - (-1)^{|f|} f o dA with |f| the (shifted) hom degree.
// Used by the obstruction solves, where degree_shift is the Maslov offset
// that makes homotopy parities come out right.
struct HomComplex {
  CochainComplex complex;
  SpacePtr A, B;
  // Basis order: (i, j) lexicographic with i over A, j over B.
  int index(int i, int j) const;
  GradedMap to_map(const Vec& coords, int map_degree) const;
  Vec from_map(const GradedMap& f) const;
};

HomComplex hom_complex(const CochainComplex& A, const CochainComplex& B, int degree_shift);

// Generic deterministic sparse linear solve over Q, A x = b, used by the
// joint obstruction systems.  Returns a solution or a left-null certificate
// c with c^T A = 0 and c^T b != 0.
struct LinearSystem {
  int num_rows = 0;
  int num_cols = 0;
  std::map<std::pair<int, int>, Rational> entries;
  std::vector<Rational> rhs;

  void add(int row, int col, const Rational& v);
  void add_rhs(int row, const Rational& v);
};

struct LinearCertificate {
  std::vector<std::pair<int, Rational>> rows;  // sparse left-null combination
};

std::variant<std::vector<Rational>, LinearCertificate> solve_linear(const LinearSystem& sys);

}  // namespace filtalg::gcx

#endif
