#ifndef FILTALG_NOVIKOV_HPP
#define FILTALG_NOVIKOV_HPP

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "filtalg/rational.hpp"

namespace filtalg::nov {

// One monomial c * T^energy * e^{mu/2}.  The e-exponent is stored doubled:
// `mu` is the exponent of e^{1/2}, so integer Maslov data never needs
// half-integer arithmetic.
struct NovikovTerm {
  Rational coeff;
  Rational energy;
  long long mu = 0;

  friend bool operator==(const NovikovTerm&, const NovikovTerm&) = default;
};

// Finite formal sum of Novikov monomials in canonical form: terms strictly
// increasing in (energy, mu), no zero coefficients.
class NovikovElement {
 public:
  NovikovElement() = default;
  explicit NovikovElement(std::vector<NovikovTerm> terms);

  static NovikovElement zero() { return NovikovElement(); }
  static NovikovElement monomial(Rational coeff, Rational energy, long long mu = 0);
  static NovikovElement one() { return monomial(1, 0, 0); }
  // c * T^0 e^0
  static NovikovElement scalar(Rational c) { return monomial(std::move(c), 0, 0); }

  const std::vector<NovikovTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // val(a) = min energy exponent; nullopt encodes +infinity (a = 0).
  std::optional<Rational> valuation() const;

  // Membership in Lambda_0 (all energies >= 0) resp. Lambda_+ (> 0).
  bool in_lambda0() const;
  bool in_lambda_plus() const;

  // Residue modulo T^E: drops every term with energy >= E.  E >= 0.
  NovikovElement truncate(const Rational& cut) const;

  // Multiplicative inverse modulo T^E.  Requires val(*this) == 0; the
  // leading coefficient is then a nonzero rational, so the geometric series
  // terminates below the cut.
  NovikovElement invert_unit(const Rational& cut) const;

  NovikovElement operator-() const;
  friend NovikovElement operator+(const NovikovElement& a, const NovikovElement& b);
  friend NovikovElement operator-(const NovikovElement& a, const NovikovElement& b);
  friend NovikovElement operator*(const NovikovElement& a, const NovikovElement& b);
  friend bool operator==(const NovikovElement&, const NovikovElement&) = default;

  std::string str() const;

 private:
  std::vector<NovikovTerm> terms_;
};

// A monoid element (E, mu) in R_{>=0} x 2Z; also used as the decoration
// "beta" on trees and A-infinity operations.
struct MonoidElem {
  Rational energy;
  long long mu = 0;

  friend bool operator==(const MonoidElem&, const MonoidElem&) = default;
  friend std::strong_ordering operator<=>(const MonoidElem& a, const MonoidElem& b) {
    if (auto c = a.energy.compare(b.energy); c != 0)
      return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    return a.mu <=> b.mu;
  }
  MonoidElem operator+(const MonoidElem& o) const { return {energy + o.energy, mu + o.mu}; }
  std::string str() const;
};

inline MonoidElem beta0() { return MonoidElem{0, 0}; }

// Finitely generated gap monoid G in Q_{>0} x 2Z (plus the unit).  Strictly
// positive generator energies make discreteness and the finiteness of every
// energy sublevel automatic.
class DiscreteSubmonoid {
 public:
  DiscreteSubmonoid() = default;
  explicit DiscreteSubmonoid(std::vector<MonoidElem> generators);

  const std::vector<MonoidElem>& generators() const { return generators_; }

  // All monoid elements with energy <= bound, each once, sorted by
  // (energy, mu).  Always contains (0,0).
  std::vector<MonoidElem> below(const Rational& bound) const;

  bool contains(const MonoidElem& x) const;

  // Minimum positive energy of a monoid element, or 1 when the energy image
  // is {0}.
  Rational e_min() const;

  friend bool operator==(const DiscreteSubmonoid&, const DiscreteSubmonoid&) = default;

 private:
  std::vector<MonoidElem> generators_;
};

// One slot (beta, k) of a partial structure, of level E(beta) + k*e0.
struct GKPair {
  MonoidElem beta;
  long long k = 0;

  friend bool operator==(const GKPair&, const GKPair&) = default;
};

// The admissible (beta, k) pairs with E(beta) + k*e0 <= E0, sorted by
// increasing level with (E(beta), k) lexicographic tie-break -- the
// processing order of every promotion.  Requires 0 < e0 <= e_min(G).
std::vector<GKPair> gk_set(const DiscreteSubmonoid& G, const Rational& E0, const Rational& e0);

}  // namespace filtalg::nov

#endif
