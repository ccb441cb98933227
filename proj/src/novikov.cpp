#include "filtalg/novikov.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace filtalg {

Rational parse_rational(const std::string& s, const std::string& where) {
  auto bad = [&](const std::string& msg) -> SchemaError { return SchemaError(where, msg); };
  if (s.empty()) throw bad("empty rational");
  std::string nums = s, dens = "1";
  if (auto pos = s.find('/'); pos != std::string::npos) {
    nums = s.substr(0, pos);
    dens = s.substr(pos + 1);
  }
  auto check_int = [&](const std::string& t) {
    if (t.empty()) throw bad("malformed rational '" + s + "'");
    size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) throw bad("malformed rational '" + s + "'");
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i])))
        throw bad("malformed rational '" + s + "'");
  };
  check_int(nums);
  check_int(dens);
  BigInt n(nums), d(dens);
  if (d == 0) throw bad("zero denominator in '" + s + "'");
  return Rational(n, d);
}

std::string rational_str(const Rational& q) {
  std::ostringstream os;
  os << num(q);
  if (den(q) != 1) os << "/" << den(q);
  return os.str();
}

}  // namespace filtalg

namespace filtalg::nov {

namespace {

bool term_key_less(const NovikovTerm& a, const NovikovTerm& b) {
  if (auto c = a.energy.compare(b.energy); c != 0) return c < 0;
  return a.mu < b.mu;
}

std::vector<NovikovTerm> normalize(std::vector<NovikovTerm> terms) {
  std::sort(terms.begin(), terms.end(), term_key_less);
  std::vector<NovikovTerm> out;
  for (auto& t : terms) {
    if (!out.empty() && out.back().energy == t.energy && out.back().mu == t.mu)
      out.back().coeff += t.coeff;
    else
      out.push_back(std::move(t));
  }
  std::erase_if(out, [](const NovikovTerm& t) { return t.coeff == 0; });
  return out;
}

}  // namespace

NovikovElement::NovikovElement(std::vector<NovikovTerm> terms)
    : terms_(normalize(std::move(terms))) {}

NovikovElement NovikovElement::monomial(Rational coeff, Rational energy, long long mu) {
  NovikovElement e;
  if (coeff != 0) e.terms_.push_back(NovikovTerm{std::move(coeff), std::move(energy), mu});
  return e;
}

std::optional<Rational> NovikovElement::valuation() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.front().energy;
}

bool NovikovElement::in_lambda0() const {
  return terms_.empty() || terms_.front().energy >= 0;
}

bool NovikovElement::in_lambda_plus() const {
  return terms_.empty() || terms_.front().energy > 0;
}

NovikovElement NovikovElement::truncate(const Rational& cut) const {
  if (cut < 0) throw InvalidCutLevel("truncate: negative cut level " + rational_str(cut));
  NovikovElement out;
  for (const auto& t : terms_) {
    if (t.energy >= cut) break;
    out.terms_.push_back(t);
  }
  return out;
}

NovikovElement NovikovElement::invert_unit(const Rational& cut) const {
  auto v = valuation();
  if (!v || *v != 0)
    throw Error("invert_unit: element is not a unit of Lambda_0 (valuation != 0)");
  // *this = c(1 - y) with val(y) > 0; invert by the finite geometric series
  // mod T^cut.  The leading block is the full energy-0 part, which is a
  // single monomial requirement: invertibility over Q needs the energy-0
  // part to be one term.
  size_t lead_end = 0;
  while (lead_end < terms_.size() && terms_[lead_end].energy == 0) ++lead_end;
  if (lead_end != 1 || terms_[0].mu != 0)
    throw Error("invert_unit: leading part is not a scalar");
  Rational c = terms_[0].coeff;
  NovikovElement y;  // y = 1 - this/c, val(y) > 0
  for (size_t i = 1; i < terms_.size(); ++i)
    y.terms_.push_back(NovikovTerm{-terms_[i].coeff / c, terms_[i].energy, terms_[i].mu});
  NovikovElement acc = NovikovElement::one();
  NovikovElement pow = NovikovElement::one();
  // val(y^n) >= n * (min positive energy), so the series stops.
  Rational step = y.is_zero() ? Rational(1) : y.terms_.front().energy;
  for (Rational level = step; !y.is_zero() && level < cut; level += step) {
    pow = (pow * y).truncate(cut);
    if (pow.is_zero()) break;
    acc = acc + pow;
  }
  NovikovElement out;
  for (const auto& t : acc.truncate(cut).terms_)
    out.terms_.push_back(NovikovTerm{t.coeff / c, t.energy, t.mu});
  return out;
}

NovikovElement NovikovElement::operator-() const {
  NovikovElement out;
  out.terms_ = terms_;
  for (auto& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

NovikovElement operator+(const NovikovElement& a, const NovikovElement& b) {
  std::vector<NovikovTerm> terms = a.terms_;
  terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
  return NovikovElement(std::move(terms));
}

NovikovElement operator-(const NovikovElement& a, const NovikovElement& b) { return a + (-b); }

NovikovElement operator*(const NovikovElement& a, const NovikovElement& b) {
  std::vector<NovikovTerm> terms;
  terms.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_)
      terms.push_back(NovikovTerm{s.coeff * t.coeff, s.energy + t.energy, s.mu + t.mu});
  return NovikovElement(std::move(terms));
}

std::string NovikovElement::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << rational_str(t.coeff) << "*T^" << rational_str(t.energy);
    if (t.mu != 0) os << "*e^{" << t.mu << "/2}";
  }
  return os.str();
}

std::string MonoidElem::str() const {
  return "(" + rational_str(energy) + "," + std::to_string(mu) + ")";
}

DiscreteSubmonoid::DiscreteSubmonoid(std::vector<MonoidElem> generators)
    : generators_(std::move(generators)) {
  for (const auto& g : generators_) {
    if (g.energy <= 0)
      throw Error("DiscreteSubmonoid: generator energy must be positive, got " + g.str());
    if (g.mu % 2 != 0)
      throw Error("DiscreteSubmonoid: generator mu must be even, got " + g.str());
  }
  std::sort(generators_.begin(), generators_.end());
  generators_.erase(std::unique(generators_.begin(), generators_.end()), generators_.end());
}

std::vector<MonoidElem> DiscreteSubmonoid::below(const Rational& bound) const {
  std::set<MonoidElem> seen;
  seen.insert(beta0());
  if (bound >= 0) {
    // Saturate under generator addition; energies are positive so the
    // frontier shrinks monotonically.
    std::vector<MonoidElem> frontier{beta0()};
    while (!frontier.empty()) {
      std::vector<MonoidElem> next;
      for (const auto& x : frontier)
        for (const auto& g : generators_) {
          MonoidElem y = x + g;
          if (y.energy > bound) continue;
          if (seen.insert(y).second) next.push_back(y);
        }
      frontier = std::move(next);
    }
  }
  return {seen.begin(), seen.end()};
}

bool DiscreteSubmonoid::contains(const MonoidElem& x) const {
  if (x.energy < 0) return false;
  auto all = below(x.energy);
  return std::find(all.begin(), all.end(), x) != all.end();
}

Rational DiscreteSubmonoid::e_min() const {
  // Every nonzero monoid element is a sum of generators, so the minimum
  // positive energy is attained on a generator.
  if (generators_.empty()) return 1;
  Rational m = generators_.front().energy;
  for (const auto& g : generators_) m = std::min(m, g.energy);
  return m;
}

std::vector<GKPair> gk_set(const DiscreteSubmonoid& G, const Rational& E0, const Rational& e0) {
  if (e0 <= 0 || e0 > G.e_min())
    throw MinimalEnergyViolation("gk_set: need 0 < e0 <= e_min(G), got e0 = " +
                                 rational_str(e0) + ", e_min = " + rational_str(G.e_min()));
  std::vector<GKPair> out;
  if (E0 < 0) return out;
  for (const auto& beta : G.below(E0)) {
    for (long long k = 0; beta.energy + k * e0 <= E0; ++k)
      out.push_back(GKPair{beta, k});
  }
  std::stable_sort(out.begin(), out.end(), [&](const GKPair& a, const GKPair& b) {
    Rational la = a.beta.energy + a.k * e0;
    Rational lb = b.beta.energy + b.k * e0;
    if (auto c = la.compare(lb); c != 0) return c < 0;
    if (auto c = a.beta.energy.compare(b.beta.energy); c != 0) return c < 0;
    return a.k < b.k;
  });
  return out;
}

}  // namespace filtalg::nov
