#ifndef FILTALG_AINF_HPP
#define FILTALG_AINF_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "filtalg/gradecx.hpp"
#include "filtalg/novikov.hpp"
#include "filtalg/poly.hpp"

namespace filtalg::ainf {

using nov::DiscreteSubmonoid;
using nov::MonoidElem;

using SparseVec = std::map<int, Rational>;
using Tuple = std::vector<int>;
// one operation: values on basis tuples
using RatOp = std::map<Tuple, SparseVec>;
// one t-family of operations
using PolyVec = std::map<int, poly::PiecewisePoly>;
using PolyOp = std::map<Tuple, PolyVec>;

struct GKKey {
  long long k = 0;
  MonoidElem beta;
  friend auto operator<=>(const GKKey&, const GKKey&) = default;
  friend bool operator==(const GKKey&, const GKKey&) = default;
};

// Graded-commutative product table on the underlying space; used for the
// unit-energy part of every structure.
class Product {
 public:
  Product() = default;
  Product(gcx::SpacePtr space, std::map<std::pair<int, int>, SparseVec> table);

  const gcx::SpacePtr& space() const { return space_; }
  const SparseVec* at(int i, int j) const;
  const std::map<std::pair<int, int>, SparseVec>& table() const { return table_; }

  friend bool operator==(const Product& a, const Product& b) {
    return *a.space_ == *b.space_ && a.table_ == b.table_;
  }

 private:
  gcx::SpacePtr space_;
  std::map<std::pair<int, int>, SparseVec> table_;
};

// Filtered operation table on a finite DGA model of the underlying space.
// The unit-energy part is pinned: m_{1,0} is the differential twisted by
// (-1)^{n+1+deg h}, m_{2,0} the product twisted by (-1)^{deg h1 (deg h2+1)},
// every other m_{k,0} vanishes; only E(beta) > 0 operations are stored.
class AinfOperations {
 public:
  AinfOperations() = default;
  AinfOperations(gcx::CochainComplex space, Product product, int dimL, DiscreteSubmonoid monoid,
                 Rational E0, Rational e0);

  const gcx::CochainComplex& space() const { return space_; }
  const Product& product() const { return product_; }
  int dimL() const { return dimL_; }
  const DiscreteSubmonoid& monoid() const { return monoid_; }
  const Rational& E0() const { return E0_; }
  const Rational& e0() const { return e0_; }
  const std::map<GKKey, RatOp>& ops() const { return ops_; }

  void set_op(long long k, const MonoidElem& beta, RatOp op);
  const RatOp* op_at(long long k, const MonoidElem& beta) const;

  friend bool operator==(const AinfOperations&, const AinfOperations&);

 private:
  gcx::CochainComplex space_;
  Product product_;
  int dimL_ = 0;
  DiscreteSubmonoid monoid_;
  Rational E0_, e0_;
  std::map<GKKey, RatOp> ops_;
};

// Evaluate m_{k,beta} (including the pinned unit-energy parts) on a basis
// tuple.
SparseVec evaluate_op(const AinfOperations& A, long long k, const MonoidElem& beta,
                      const Tuple& tuple);

// The signed double-composition defect at (k, beta); the zero map means the
// relation holds there.
RatOp ainf_defect(const AinfOperations& A, long long k, const MonoidElem& beta);

struct AinfReport {
  // (k, beta, witness-tuple description)
  std::vector<std::string> failures;
  bool pass() const { return failures.empty(); }
};

AinfReport check_partial_ainf(const AinfOperations& A, bool parallel = true);

AinfOperations energy_cut(const AinfOperations& A, const Rational& E);

// Piecewise-polynomial pseudo-isotopy: per (k,beta) a t-family m^t and a
// connection family c^t of one lower shifted degree; c vanishes at
// nonpositive decoration energy, the unit-energy m's are constant in t.
class PseudoIsotopy {
 public:
  PseudoIsotopy() = default;
  PseudoIsotopy(gcx::CochainComplex space, Product product, int dimL, DiscreteSubmonoid monoid,
                Rational E0, Rational e0, Rational t_lo, Rational t_hi);

  const gcx::CochainComplex& space() const { return space_; }
  const Product& product() const { return product_; }
  int dimL() const { return dimL_; }
  const DiscreteSubmonoid& monoid() const { return monoid_; }
  const Rational& E0() const { return E0_; }
  const Rational& e0() const { return e0_; }
  const Rational& t_lo() const { return t_lo_; }
  const Rational& t_hi() const { return t_hi_; }
  const std::map<GKKey, PolyOp>& mt() const { return mt_; }
  const std::map<GKKey, PolyOp>& ct() const { return ct_; }

  void set_m(long long k, const MonoidElem& beta, PolyOp op);
  void set_c(long long k, const MonoidElem& beta, PolyOp op);
  const PolyOp* m_at(long long k, const MonoidElem& beta) const;
  const PolyOp* c_at(long long k, const MonoidElem& beta) const;

  friend bool operator==(const PseudoIsotopy&, const PseudoIsotopy&);

 private:
  gcx::CochainComplex space_;
  Product product_;
  int dimL_ = 0;
  DiscreteSubmonoid monoid_;
  Rational E0_, e0_;
  Rational t_lo_, t_hi_;
  std::map<GKKey, PolyOp> mt_, ct_;
};

// Symbolic residual family of the isotopy equation
// d/dt m^t + sum (-1)^* c(.., m(..), ..) - sum m(.., c(..), ..) at (k,beta).
PolyOp isotopy_defect(const PseudoIsotopy& I, long long k, const MonoidElem& beta);

struct IsotopyReport {
  std::vector<std::string> continuity;   // condition: families continuous
  std::vector<std::string> per_t;        // per-t relation failures (sampled)
  std::vector<std::string> ode;          // symbolic residual failures
  std::vector<std::string> vanishing;    // c at nonpositive energy
  bool pass() const {
    return continuity.empty() && per_t.empty() && ode.empty() && vanishing.empty();
  }
};

IsotopyReport check_pseudoisotopy(const PseudoIsotopy& I, bool parallel = true);

AinfOperations restrict_endpoint(const PseudoIsotopy& I, const Rational& t);

PseudoIsotopy energy_cut(const PseudoIsotopy& I, const Rational& E);

// Promotion by exact backward integration from the terminal endpoint: the
// new connection families are zero and each new m^t is the antiderivative
// of known lower terms anchored at m1.
std::pair<AinfOperations, PseudoIsotopy> promote_via_isotopy(const AinfOperations& m0,
                                                             const AinfOperations& m1,
                                                             const PseudoIsotopy& I);

// c = 0 and dm/dt = 0 on [-tau, 0] and [1, 1+tau]; the domain must be
// exactly [-tau, 1+tau].
bool collared_check(const PseudoIsotopy& I, const Rational& tau);

struct AinfLimitResult {
  AinfOperations limit;
  std::vector<bool> certificates;  // energy cut of each promoted stage recovers its input
};

// tower[i] at cut E^i, isotopies[i] from tower[i] to energy_cut(tower[i+1], E^i).
AinfLimitResult homotopy_limit_ainf(const std::vector<AinfOperations>& tower,
                                    const std::vector<PseudoIsotopy>& isotopies);

struct BarSignReport {
  long long configurations = 0;  // codimension-2 configurations examined
  std::vector<std::string> violations;
  bool pass() const { return configurations > 0 && violations.empty(); }
};

// Pairwise cancellation of the double boundary: every codimension-2 tree
// arises from exactly two one-edge degenerations whose total orientation
// signs are opposite.  `drop_k1_term` mutates the sign formula to show the
// audit has teeth.
BarSignReport bar_sign_audit(int dimL, int kmax, bool drop_k1_term = false);

}  // namespace filtalg::ainf

#endif
