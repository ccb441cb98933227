#include "filtalg/poly.hpp"

#include <algorithm>

#include "filtalg/errors.hpp"

namespace filtalg::poly {

Polynomial::Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::constant(Rational c) {
  Polynomial p;
  if (c != 0) p.coeffs_.push_back(std::move(c));
  return p;
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational Polynomial::eval(const Rational& t) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Rational> out(coeffs_.size() - 1);
  for (size_t i = 1; i < coeffs_.size(); ++i) out[i - 1] = coeffs_[i] * Rational(i);
  return Polynomial(std::move(out));
}

Polynomial Polynomial::antiderivative() const {
  if (coeffs_.empty()) return {};
  std::vector<Rational> out(coeffs_.size() + 1, Rational(0));
  for (size_t i = 0; i < coeffs_.size(); ++i) out[i + 1] = coeffs_[i] / Rational(i + 1);
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Rational> out(std::max(coeffs_.size(), o.coeffs_.size()), Rational(0));
  for (size_t i = 0; i < coeffs_.size(); ++i) out[i] += coeffs_[i];
  for (size_t i = 0; i < o.coeffs_.size(); ++i) out[i] += o.coeffs_[i];
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (coeffs_.empty() || o.coeffs_.empty()) return {};
  std::vector<Rational> out(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
  for (size_t i = 0; i < coeffs_.size(); ++i)
    for (size_t j = 0; j < o.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * o.coeffs_[j];
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-() const { return scaled(-1); }

Polynomial Polynomial::scaled(const Rational& c) const {
  if (c == 0) return {};
  std::vector<Rational> out = coeffs_;
  for (auto& x : out) x *= c;
  return Polynomial(std::move(out));
}

PiecewisePoly::PiecewisePoly(std::vector<Rational> breaks, std::vector<Polynomial> pieces)
    : breaks_(std::move(breaks)), pieces_(std::move(pieces)) {
  if (breaks_.size() < 2 || pieces_.size() + 1 != breaks_.size())
    throw Error("PiecewisePoly: need n+1 breakpoints for n pieces");
  for (size_t i = 0; i + 1 < breaks_.size(); ++i)
    if (!(breaks_[i] < breaks_[i + 1]))
      throw Error("PiecewisePoly: breakpoints must be strictly increasing");
}

PiecewisePoly PiecewisePoly::constant(Rational a, Rational b, Rational value) {
  return PiecewisePoly({std::move(a), std::move(b)}, {Polynomial::constant(std::move(value))});
}

bool PiecewisePoly::is_zero() const {
  return std::all_of(pieces_.begin(), pieces_.end(),
                     [](const Polynomial& p) { return p.is_zero(); });
}

bool PiecewisePoly::is_continuous() const {
  for (size_t i = 0; i + 1 < pieces_.size(); ++i)
    if (pieces_[i].eval(breaks_[i + 1]) != pieces_[i + 1].eval(breaks_[i + 1])) return false;
  return true;
}

Rational PiecewisePoly::eval(const Rational& t) const {
  if (t < domain_lo() || t > domain_hi())
    throw OutOfDomain("PiecewisePoly::eval: t = " + rational_str(t) + " outside [" +
                      rational_str(domain_lo()) + "," + rational_str(domain_hi()) + "]");
  size_t i = 0;
  while (i + 1 < pieces_.size() && t > breaks_[i + 1]) ++i;
  return pieces_[i].eval(t);
}

PiecewisePoly PiecewisePoly::derivative() const {
  std::vector<Polynomial> out;
  out.reserve(pieces_.size());
  for (const auto& p : pieces_) out.push_back(p.derivative());
  return PiecewisePoly(breaks_, std::move(out));
}

PiecewisePoly PiecewisePoly::antiderivative(const Rational& anchor) const {
  if (anchor < domain_lo() || anchor > domain_hi())
    throw OutOfDomain("PiecewisePoly::antiderivative: anchor outside domain");
  std::vector<Polynomial> prim;
  prim.reserve(pieces_.size());
  for (const auto& p : pieces_) prim.push_back(p.antiderivative());
  // cumulative[i] = integral from breaks_[0] to breaks_[i]
  std::vector<Rational> cumulative(breaks_.size(), Rational(0));
  for (size_t i = 0; i < pieces_.size(); ++i)
    cumulative[i + 1] =
        cumulative[i] + prim[i].eval(breaks_[i + 1]) - prim[i].eval(breaks_[i]);
  size_t ai = 0;
  while (ai + 1 < pieces_.size() && anchor > breaks_[ai + 1]) ++ai;
  Rational at_anchor = cumulative[ai] + prim[ai].eval(anchor) - prim[ai].eval(breaks_[ai]);
  std::vector<Polynomial> out;
  out.reserve(pieces_.size());
  for (size_t i = 0; i < pieces_.size(); ++i) {
    Rational c = cumulative[i] - prim[i].eval(breaks_[i]) - at_anchor;
    out.push_back(prim[i] + Polynomial::constant(c));
  }
  return PiecewisePoly(breaks_, std::move(out));
}

PiecewisePoly PiecewisePoly::refined(const std::vector<Rational>& extra_breaks) const {
  std::vector<Rational> grid = breaks_;
  for (const auto& b : extra_breaks)
    if (b > domain_lo() && b < domain_hi()) grid.push_back(b);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<Polynomial> out;
  out.reserve(grid.size() - 1);
  size_t src = 0;
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    while (src + 1 < pieces_.size() && grid[i] >= breaks_[src + 1]) ++src;
    out.push_back(pieces_[src]);
  }
  return PiecewisePoly(std::move(grid), std::move(out));
}

namespace {

template <class Op>
PiecewisePoly binary(const PiecewisePoly& a, const PiecewisePoly& b, Op op) {
  if (a.domain_lo() != b.domain_lo() || a.domain_hi() != b.domain_hi())
    throw OutOfDomain("PiecewisePoly: domain mismatch");
  PiecewisePoly ar = a.refined(b.breaks());
  PiecewisePoly br = b.refined(a.breaks());
  std::vector<Polynomial> out;
  out.reserve(ar.pieces().size());
  for (size_t i = 0; i < ar.pieces().size(); ++i) out.push_back(op(ar.pieces()[i], br.pieces()[i]));
  return PiecewisePoly(ar.breaks(), std::move(out));
}

}  // namespace

PiecewisePoly PiecewisePoly::operator+(const PiecewisePoly& o) const {
  return binary(*this, o, [](const Polynomial& x, const Polynomial& y) { return x + y; });
}

PiecewisePoly PiecewisePoly::operator-(const PiecewisePoly& o) const {
  return binary(*this, o, [](const Polynomial& x, const Polynomial& y) { return x - y; });
}

PiecewisePoly PiecewisePoly::operator*(const PiecewisePoly& o) const {
  return binary(*this, o, [](const Polynomial& x, const Polynomial& y) { return x * y; });
}

PiecewisePoly PiecewisePoly::operator-() const { return scaled(-1); }

PiecewisePoly PiecewisePoly::scaled(const Rational& c) const {
  std::vector<Polynomial> out;
  out.reserve(pieces_.size());
  for (const auto& p : pieces_) out.push_back(p.scaled(c));
  return PiecewisePoly(breaks_, std::move(out));
}

bool PiecewisePoly::same_function(const PiecewisePoly& o) const {
  if (domain_lo() != o.domain_lo() || domain_hi() != o.domain_hi()) return false;
  return (*this - o).is_zero();
}

}  // namespace filtalg::poly
