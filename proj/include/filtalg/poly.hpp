#ifndef FILTALG_POLY_HPP
#define FILTALG_POLY_HPP

#include <vector>

#include "filtalg/rational.hpp"

namespace filtalg::poly {

// Dense univariate polynomial over Q; coeffs[i] multiplies t^i, no trailing
// zeros.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs);
  static Polynomial constant(Rational c);

  const std::vector<Rational>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  Rational eval(const Rational& t) const;
  Polynomial derivative() const;
  // Antiderivative with value 0 at t = 0 (exact; coefficients stay rational).
  Polynomial antiderivative() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial scaled(const Rational& c) const;
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

// Piecewise polynomial on [breaks.front(), breaks.back()] with rational
// breakpoints; pieces[i] lives on [breaks[i], breaks[i+1]].
class PiecewisePoly {
 public:
  PiecewisePoly() = default;
  PiecewisePoly(std::vector<Rational> breaks, std::vector<Polynomial> pieces);

  static PiecewisePoly constant(Rational a, Rational b, Rational value);
  static PiecewisePoly zero(Rational a, Rational b) { return constant(a, b, 0); }

  const std::vector<Rational>& breaks() const { return breaks_; }
  const std::vector<Polynomial>& pieces() const { return pieces_; }
  Rational domain_lo() const { return breaks_.front(); }
  Rational domain_hi() const { return breaks_.back(); }

  bool is_zero() const;
  // Continuity across interior breakpoints (piece values agree).
  bool is_continuous() const;

  // Evaluation; throws OutOfDomain outside [lo, hi].  At an interior
  // breakpoint the left piece is used; continuous families do not care.
  Rational eval(const Rational& t) const;

  PiecewisePoly derivative() const;
  // Antiderivative vanishing at the given anchor point of the domain;
  // constants are chained across breakpoints so the result is continuous.
  PiecewisePoly antiderivative(const Rational& anchor) const;

  // Insert extra breakpoints (values unchanged).
  PiecewisePoly refined(const std::vector<Rational>& extra_breaks) const;

  PiecewisePoly operator+(const PiecewisePoly& o) const;
  PiecewisePoly operator-(const PiecewisePoly& o) const;
  PiecewisePoly operator*(const PiecewisePoly& o) const;
  PiecewisePoly operator-() const;
  PiecewisePoly scaled(const Rational& c) const;

  // Structural equality after refinement to a common grid.
  bool same_function(const PiecewisePoly& o) const;

  friend bool operator==(const PiecewisePoly&, const PiecewisePoly&) = default;

 private:
  std::vector<Rational> breaks_;
  std::vector<Polynomial> pieces_;
};

}  // namespace filtalg::poly

#endif
