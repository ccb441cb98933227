#include "filtalg/floer.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

namespace filtalg::floer {

using gcx::CochainComplex;
using gcx::GradedMap;
using gcx::GradedSpace;

bool operator==(const CriticalLabel& a, const CriticalLabel& b) {
  return a.id == b.id && a.energy == b.energy && a.maslov == b.maslov && a.dimR == b.dimR &&
         a.complex == b.complex;
}

CriticalData::CriticalData(std::vector<CriticalLabel> labels) : labels_(std::move(labels)) {
  std::set<std::string> ids;
  for (const auto& l : labels_)
    if (!ids.insert(l.id).second) throw Error("CriticalData: duplicate label '" + l.id + "'");
}

int CriticalData::index_of(const std::string& id) const {
  for (int i = 0; i < size(); ++i)
    if (labels_[i].id == id) return i;
  throw SpaceMismatch("CriticalData: no label '" + id + "'");
}

bool operator==(const CriticalData& a, const CriticalData& b) { return a.labels_ == b.labels_; }

GradedMap signed_d0(const CriticalLabel& l) {
  const auto& d = l.complex.d0();
  GradedMap out(d.source(), d.target(), 1);
  for (const auto& [ji, v] : d.entries()) {
    long long e = l.dimR + l.maslov + 1 + l.complex.space()->degree(ji.second);
    out.set(ji.first, ji.second, (e % 2 == 0) ? v : -v);
  }
  return out;
}

CochainComplex signed_complex(const CriticalLabel& l) {
  return CochainComplex(l.complex.space(), signed_d0(l));
}

namespace {

int m_degree(const CriticalData& C, const PairKey& p) {
  return static_cast<int>(1 - C.label(p.to).maslov + C.label(p.from).maslov);
}

int psi_degree(const CriticalData& src, const CriticalData& tgt, const PairKey& p) {
  return static_cast<int>(src.label(p.from).maslov - tgt.label(p.to).maslov);
}

}  // namespace

PartialComplex::PartialComplex(CriticalPtr critical, Rational cut)
    : critical_(std::move(critical)), cut_(std::move(cut)) {
  if (cut_ < 0) throw InvalidCutLevel("PartialComplex: negative cut level");
}

Rational PartialComplex::gap(const PairKey& p) const {
  return critical_->label(p.to).energy - critical_->label(p.from).energy;
}

void PartialComplex::set_map(int from, int to, GradedMap m) {
  PairKey p{from, to};
  Rational g = gap(p);
  if (!(g > 0) || g > cut_)
    throw Error("PartialComplex::set_map: pair gap " + rational_str(g) +
                " outside (0, cut]");
  const auto& lf = critical_->label(from);
  const auto& lt = critical_->label(to);
  if (!(*m.source() == *lf.complex.space()) || !(*m.target() == *lt.complex.space()))
    throw SpaceMismatch("PartialComplex::set_map: wrong spaces for pair");
  if (m.degree() != m_degree(*critical_, p))
    throw DegreeError("PartialComplex::set_map: wrong map degree");
  if (m.is_zero())
    maps_.erase(p);
  else
    maps_[p] = std::move(m);
}

const GradedMap* PartialComplex::map_at(int from, int to) const {
  auto it = maps_.find(PairKey{from, to});
  return it == maps_.end() ? nullptr : &it->second;
}

PartialMap::PartialMap(ComplexPtr source, ComplexPtr target, Rational cut, Rational loss)
    : source_(std::move(source)),
      target_(std::move(target)),
      cut_(std::move(cut)),
      loss_(std::move(loss)) {
  if (loss_ < 0) throw Error("PartialMap: negative energy loss");
  if (cut_ < loss_) throw InvalidCutLevel("PartialMap: cut below loss");
  if (source_->cut() < cut_ || target_->cut() < cut_)
    throw InvalidCutLevel("PartialMap: endpoint complexes are below the map cut");
  if (same_critical()) {
    for (int a = 0; a < source_->critical()->size(); ++a) {
      const auto& l = source_->critical()->label(a);
      entries_[PairKey{a, a}] = GradedMap::identity(l.complex.space());
    }
  }
}

bool PartialMap::same_critical() const {
  return *source_->critical() == *target_->critical();
}

Rational PartialMap::gap(const PairKey& p) const {
  return target_->critical()->label(p.to).energy - source_->critical()->label(p.from).energy;
}

void PartialMap::set_entry(int from, int to, GradedMap m) {
  PairKey p{from, to};
  Rational g = gap(p);
  if (g < -loss_ || g > cut_ - loss_)
    throw Error("PartialMap::set_entry: pair gap " + rational_str(g) +
                " outside [-loss, cut-loss]");
  if (same_critical() && g == 0) {
    // equal-energy block is pinned: identity on the diagonal, zero off it
    if (from == to || !m.is_zero())
      throw Error("PartialMap::set_entry: equal-energy entries are fixed by the identity shape");
    return;
  }
  const auto& sf = source_->critical()->label(from);
  const auto& tt = target_->critical()->label(to);
  if (!(*m.source() == *sf.complex.space()) || !(*m.target() == *tt.complex.space()))
    throw SpaceMismatch("PartialMap::set_entry: wrong spaces");
  if (m.degree() != psi_degree(*source_->critical(), *target_->critical(), p))
    throw DegreeError("PartialMap::set_entry: wrong degree");
  if (m.is_zero())
    entries_.erase(p);
  else
    entries_[p] = std::move(m);
}

const GradedMap* PartialMap::entry_at(int from, int to) const {
  auto it = entries_.find(PairKey{from, to});
  return it == entries_.end() ? nullptr : &it->second;
}

PartialMap identity_map(ComplexPtr X) {
  if (!X) throw Error("identity_map: null complex");
  return PartialMap(X, X, X->cut(), 0);
}

PartialHomotopy::PartialHomotopy(PartialMap from, PartialMap to)
    : from_(std::move(from)), to_(std::move(to)) {
  if (!(*from_.source() == *to_.source()) || !(*from_.target() == *to_.target()) ||
      from_.cut() != to_.cut() || from_.loss() != to_.loss())
    throw SpaceMismatch("PartialHomotopy: endpoint maps do not share source/target/cut/loss");
}

void PartialHomotopy::set_entry(int from_label, int to_label, GradedMap m) {
  PairKey p{from_label, to_label};
  Rational g = from_.gap(p);
  if (g < -loss() || g > cut() - loss())
    throw Error("PartialHomotopy::set_entry: pair gap outside [-loss, cut-loss]");
  int want =
      psi_degree(*from_.source()->critical(), *from_.target()->critical(), p) - 1;
  if (m.degree() != want) throw DegreeError("PartialHomotopy::set_entry: wrong degree");
  if (m.is_zero())
    entries_.erase(p);
  else
    entries_[p] = std::move(m);
}

const GradedMap* PartialHomotopy::entry_at(int from_label, int to_label) const {
  auto it = entries_.find(PairKey{from_label, to_label});
  return it == entries_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------
// residuals

namespace {

const GradedMap* find_entry(const std::map<PairKey, GradedMap>& table, int from, int to) {
  auto it = table.find(PairKey{from, to});
  return it == table.end() ? nullptr : &it->second;
}

// d0 m + m d0 + sum_x m_{b,x} m_{x,a} at the pair p = (a, b).
GradedMap complex_residual_at(const CriticalData& C, const std::map<PairKey, GradedMap>& maps,
                              const PairKey& p) {
  const auto& la = C.label(p.from);
  const auto& lb = C.label(p.to);
  GradedMap acc =
      GradedMap::zero(la.complex.space(), lb.complex.space(), m_degree(C, p) + 1);
  if (const GradedMap* m = find_entry(maps, p.from, p.to)) {
    acc = acc + compose(signed_d0(lb), *m) + compose(*m, signed_d0(la));
  }
  for (int x = 0; x < C.size(); ++x) {
    const GradedMap* hi = find_entry(maps, x, p.to);
    const GradedMap* lo = find_entry(maps, p.from, x);
    if (hi && lo) acc = acc + compose(*hi, *lo);
  }
  return acc;
}

// d0 psi - psi d0 + sum m2 psi - sum psi m1 at p = (a, b).
GradedMap map_residual_at(const PartialComplex& src, const PartialComplex& tgt,
                          const std::map<PairKey, GradedMap>& entries, const PairKey& p) {
  const CriticalData& Cs = *src.critical();
  const CriticalData& Ct = *tgt.critical();
  const auto& la = Cs.label(p.from);
  const auto& lb = Ct.label(p.to);
  GradedMap acc = GradedMap::zero(la.complex.space(), lb.complex.space(),
                                  psi_degree(Cs, Ct, p) + 1);
  if (const GradedMap* e = find_entry(entries, p.from, p.to))
    acc = acc + compose(signed_d0(lb), *e) - compose(*e, signed_d0(la));
  for (int x = 0; x < Ct.size(); ++x) {
    const GradedMap* m2 = tgt.map_at(x, p.to);
    const GradedMap* ps = find_entry(entries, p.from, x);
    if (m2 && ps) acc = acc + compose(*m2, *ps);
  }
  for (int x = 0; x < Cs.size(); ++x) {
    const GradedMap* ps = find_entry(entries, x, p.to);
    const GradedMap* m1 = src.map_at(p.from, x);
    if (ps && m1) acc = acc - compose(*ps, *m1);
  }
  return acc;
}

// d0 h + h d0 + sum h m1 + sum m2 h - psi_to + psi_from at p = (a, b).
GradedMap homotopy_residual_at(const PartialComplex& src, const PartialComplex& tgt,
                               const std::map<PairKey, GradedMap>& h_entries,
                               const std::map<PairKey, GradedMap>& psi_from,
                               const std::map<PairKey, GradedMap>& psi_to, const PairKey& p) {
  const CriticalData& Cs = *src.critical();
  const CriticalData& Ct = *tgt.critical();
  const auto& la = Cs.label(p.from);
  const auto& lb = Ct.label(p.to);
  GradedMap acc =
      GradedMap::zero(la.complex.space(), lb.complex.space(), psi_degree(Cs, Ct, p));
  if (const GradedMap* e = find_entry(h_entries, p.from, p.to))
    acc = acc + compose(signed_d0(lb), *e) + compose(*e, signed_d0(la));
  for (int x = 0; x < Cs.size(); ++x) {
    const GradedMap* h = find_entry(h_entries, x, p.to);
    const GradedMap* m1 = src.map_at(p.from, x);
    if (h && m1) acc = acc + compose(*h, *m1);
  }
  for (int x = 0; x < Ct.size(); ++x) {
    const GradedMap* m2 = tgt.map_at(x, p.to);
    const GradedMap* h = find_entry(h_entries, p.from, x);
    if (m2 && h) acc = acc + compose(*m2, *h);
  }
  if (const GradedMap* e = find_entry(psi_to, p.from, p.to)) acc = acc - *e;
  if (const GradedMap* e = find_entry(psi_from, p.from, p.to)) acc = acc + *e;
  return acc;
}

}  // namespace

DefectReport check_partial_complex(const PartialComplex& X) {
  DefectReport rep;
  const CriticalData& C = *X.critical();
  for (int a = 0; a < C.size(); ++a)
    for (int b = 0; b < C.size(); ++b) {
      PairKey p{a, b};
      Rational g = X.gap(p);
      if (!(g > 0) || g > X.cut()) continue;
      GradedMap r = complex_residual_at(C, X.maps(), p);
      if (!r.is_zero())
        rep.entries.push_back({p, "differential-squared residual", std::move(r)});
    }
  return rep;
}

DefectReport check_cochain_map(const PartialMap& psi) {
  DefectReport rep;
  const CriticalData& Cs = *psi.source()->critical();
  const CriticalData& Ct = *psi.target()->critical();
  for (int a = 0; a < Cs.size(); ++a)
    for (int b = 0; b < Ct.size(); ++b) {
      PairKey p{a, b};
      Rational g = psi.gap(p);
      if (g < -psi.loss() || g > psi.cut() - psi.loss()) continue;
      GradedMap r = map_residual_at(*psi.source(), *psi.target(), psi.entries(), p);
      if (!r.is_zero()) rep.entries.push_back({p, "cochain-map relation", std::move(r)});
    }
  return rep;
}

DefectReport check_homotopy(const PartialHomotopy& h) {
  DefectReport rep;
  const PartialMap& f = h.from();
  const CriticalData& Cs = *f.source()->critical();
  const CriticalData& Ct = *f.target()->critical();
  for (int a = 0; a < Cs.size(); ++a)
    for (int b = 0; b < Ct.size(); ++b) {
      PairKey p{a, b};
      Rational g = f.gap(p);
      if (g < -f.loss() || g > f.cut() - f.loss()) continue;
      GradedMap r = homotopy_residual_at(*f.source(), *f.target(), h.entries(),
                                         h.from().entries(), h.to().entries(), p);
      if (!r.is_zero()) rep.entries.push_back({p, "homotopy relation", std::move(r)});
    }
  return rep;
}

// ---------------------------------------------------------------------
// energy cut

PartialComplex energy_cut(const PartialComplex& X, const Rational& E) {
  if (E > X.cut()) throw CutRaiseError("energy_cut: new level above the current cut");
  PartialComplex out(X.critical(), E);
  for (const auto& [p, m] : X.maps())
    if (X.gap(p) <= E) out.set_map(p.from, p.to, m);
  return out;
}

PartialMap energy_cut(const PartialMap& psi, const Rational& E) {
  if (E > psi.cut()) throw CutRaiseError("energy_cut: new level above the current cut");
  PartialMap out(psi.source(), psi.target(), E, psi.loss());
  for (const auto& [p, m] : psi.entries()) {
    if (psi.gap(p) > E - psi.loss()) continue;
    if (psi.same_critical() && p.from == p.to) continue;  // identity is implicit
    out.set_entry(p.from, p.to, m);
  }
  return out;
}

PartialHomotopy energy_cut(const PartialHomotopy& h, const Rational& E) {
  PartialHomotopy out(energy_cut(h.from(), E), energy_cut(h.to(), E));
  for (const auto& [p, m] : h.entries())
    if (h.from().gap(p) <= E - h.loss()) out.set_entry(p.from, p.to, m);
  return out;
}

// ---------------------------------------------------------------------
// assembled differential over the Novikov ring

NovikovBlockMatrix assemble_differential(const PartialComplex& X) {
  NovikovBlockMatrix out;
  out.critical = X.critical();
  const CriticalData& C = *X.critical();
  for (int a = 0; a < C.size(); ++a) {
    const auto& l = C.label(a);
    auto& block = out.blocks[PairKey{a, a}];
    for (const auto& [ji, v] : signed_d0(l).entries())
      block[ji] = nov::NovikovElement::scalar(v);
    if (block.empty()) out.blocks.erase(PairKey{a, a});
  }
  for (const auto& [p, m] : X.maps()) {
    Rational g = X.gap(p);
    long long dmu = C.label(p.to).maslov - C.label(p.from).maslov;
    auto& block = out.blocks[p];
    for (const auto& [ji, v] : m.entries())
      block[ji] = nov::NovikovElement::monomial(v, g, dmu);
  }
  return out;
}

NovikovBlockMatrix multiply(const NovikovBlockMatrix& a, const NovikovBlockMatrix& b) {
  if (!(*a.critical == *b.critical)) throw SpaceMismatch("multiply: different critical data");
  NovikovBlockMatrix out;
  out.critical = a.critical;
  for (const auto& [pl, bl] : a.blocks)
    for (const auto& [pr, br] : b.blocks) {
      if (pr.to != pl.from) continue;
      auto& dst = out.blocks[PairKey{pr.from, pl.to}];
      for (const auto& [kj, u] : bl)
        for (const auto& [ji, v] : br) {
          if (kj.second != ji.first) continue;
          auto key = std::make_pair(kj.first, ji.second);
          auto it = dst.find(key);
          nov::NovikovElement prod = u * v;
          if (it == dst.end())
            dst[key] = std::move(prod);
          else
            it->second = it->second + prod;
        }
    }
  // drop zero entries and empty blocks
  for (auto it = out.blocks.begin(); it != out.blocks.end();) {
    for (auto jt = it->second.begin(); jt != it->second.end();)
      jt = jt->second.is_zero() ? it->second.erase(jt) : std::next(jt);
    it = it->second.empty() ? out.blocks.erase(it) : std::next(it);
  }
  return out;
}

std::vector<PairKey> nonzero_blocks_mod(const NovikovBlockMatrix& m, const Rational& cut) {
  std::vector<PairKey> out;
  const CriticalData& C = *m.critical;
  for (const auto& [p, block] : m.blocks) {
    if (block.empty()) continue;
    Rational g = C.label(p.to).energy - C.label(p.from).energy;
    if (g <= cut) out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------
// composition

PartialMap compose_maps(const PartialMap& psi21, const PartialMap& psi32) {
  if (!(*psi21.target() == *psi32.source()))
    throw SpaceMismatch("compose_maps: middle complexes disagree");
  Rational cut = std::min(psi21.cut(), Rational(psi32.cut() + psi21.loss()));
  Rational loss = psi21.loss() + psi32.loss();
  PartialMap out(psi21.source(), psi32.target(), cut, loss);
  const CriticalData& Cs = *psi21.source()->critical();
  const CriticalData& Ct = *psi32.target()->critical();
  for (int a = 0; a < Cs.size(); ++a)
    for (int c = 0; c < Ct.size(); ++c) {
      PairKey p{a, c};
      Rational g = out.gap(p);
      if (g < -loss || g > cut - loss) continue;
      const auto& la = Cs.label(a);
      const auto& lc = Ct.label(c);
      GradedMap acc = GradedMap::zero(la.complex.space(), lc.complex.space(),
                                      psi_degree(Cs, Ct, p));
      for (const auto& [q32, m32] : psi32.entries()) {
        if (q32.to != c) continue;
        const GradedMap* m21 = psi21.entry_at(a, q32.from);
        if (m21) acc = acc + compose(m32, *m21);
      }
      if (out.same_critical() && g == 0) {
        // the composite of identity-shaped maps keeps the identity shape;
        // anything else violates the equal-energy invariant
        GradedMap want = (a == c) ? GradedMap::identity(la.complex.space())
                                  : GradedMap::zero(la.complex.space(), lc.complex.space(),
                                                    psi_degree(Cs, Ct, p));
        if (!((acc - want).is_zero()))
          throw Error("compose_maps: composite breaks the equal-energy identity shape");
        continue;
      }
      if (!acc.is_zero()) out.set_entry(a, c, acc);
    }
  return out;
}

// ---------------------------------------------------------------------
// promotion of a partial complex along a loss-0 map

namespace {

std::vector<Rational> levels_between(const CriticalData& Cs, const CriticalData& Ct,
                                     const Rational& lo, const Rational& hi) {
  std::set<Rational> got;
  for (int a = 0; a < Cs.size(); ++a)
    for (int b = 0; b < Ct.size(); ++b) {
      Rational g = Ct.label(b).energy - Cs.label(a).energy;
      if (g > lo && g <= hi) got.insert(g);
    }
  return {got.begin(), got.end()};
}

PromotionCertificate make_certificate(const std::string& context, const gcx::Vec& phi) {
  PromotionCertificate cert;
  cert.context = context;
  for (size_t i = 0; i < phi.size(); ++i)
    if (phi[i] != 0) cert.functional.emplace_back(static_cast<int>(i), phi[i]);
  return cert;
}

// Solve dB x -(-1)^{parity} x dA = rhs in the hom complex; parity is the
// shifted degree of the unknown.
GradedMap solve_hom_equation(const CriticalLabel& la, const CriticalLabel& lb, int map_degree,
                             int shift, const GradedMap& rhs, const std::string& context) {
  gcx::HomComplex H = gcx::hom_complex(signed_complex(la), signed_complex(lb), shift);
  gcx::Vec y = H.from_map(rhs);
  auto res = gcx::solve_primitive(H.complex, y);
  if (std::holds_alternative<gcx::NotExact>(res)) {
    const auto& phi = std::get<gcx::NotExact>(res).functional;
    throw PromotionObstructed("promotion obstructed at " + context,
                              make_certificate(context, phi));
  }
  return H.to_map(std::get<gcx::Vec>(res), map_degree);
}

}  // namespace

std::pair<PartialComplex, PartialMap> promote_complex_with_map(const PartialComplex& X1,
                                                               const PartialComplex& X2,
                                                               const PartialMap& psi) {
  std::vector<std::string> pre;
  if (psi.loss() != 0) pre.push_back("psi must have energy loss 0");
  if (!psi.same_critical()) pre.push_back("psi must be congruent to the identity");
  if (!(*X1.critical() == *X2.critical())) pre.push_back("critical data differ");
  if (X1.cut() > X2.cut()) pre.push_back("X1 cut above X2 cut");
  if (!(*psi.source() == X1)) pre.push_back("psi source is not X1");
  if (!(*psi.target() == energy_cut(X2, std::min(X1.cut(), X2.cut()))))
    pre.push_back("psi target is not the energy cut of X2");
  if (psi.cut() != X1.cut()) pre.push_back("psi cut is not the X1 cut");
  if (pre.empty()) {
    if (!check_partial_complex(X1).pass()) pre.push_back("X1 fails its relation");
    if (!check_partial_complex(X2).pass()) pre.push_back("X2 fails its relation");
    if (!check_cochain_map(psi).pass()) pre.push_back("psi fails the cochain-map relation");
  }
  if (!pre.empty()) {
    std::string msg = "promote_complex_with_map:";
    for (const auto& s : pre) msg += " " + s + ";";
    throw PreconditionFailed(msg);
  }

  const Rational E1 = X1.cut(), E2 = X2.cut();
  if (E1 == E2) return {X1, psi};

  const CriticalData& C = *X1.critical();
  std::map<PairKey, GradedMap> maps = X1.maps();
  std::map<PairKey, GradedMap> psient = psi.entries();

  PartialComplex cur(X1.critical(), E2);
  auto rebuild = [&]() {
    cur = PartialComplex(X1.critical(), E2);
    for (const auto& [p, m] : maps) cur.set_map(p.from, p.to, m);
  };
  rebuild();

  for (const Rational& level : levels_between(C, C, E1, E2)) {
    for (int a = 0; a < C.size(); ++a)
      for (int b = 0; b < C.size(); ++b) {
        PairKey p{a, b};
        if (C.label(b).energy - C.label(a).energy != level) continue;
        const auto& la = C.label(a);
        const auto& lb = C.label(b);
        // obstruction o = (d1 d1)_{b,a} over the current promoted entries
        GradedMap o = complex_residual_at(C, maps, p);
        // b-term (d2 psi - psi d1)_{b,a} with both differentials cut below
        // the current level; the identity blocks of psi would otherwise pull
        // in the top-gap entries of X2
        GradedMap bterm = GradedMap::zero(la.complex.space(), lb.complex.space(),
                                          m_degree(C, p));
        for (int x = 0; x < C.size(); ++x) {
          if (lb.energy - C.label(x).energy < level) {
            const GradedMap* m2 = X2.map_at(x, b);
            const GradedMap* ps = find_entry(psient, a, x);
            if (m2 && ps) bterm = bterm + compose(*m2, *ps);
          }
          if (C.label(x).energy - la.energy < level) {
            const GradedMap* ps2 = find_entry(psient, x, b);
            const GradedMap* m1 = find_entry(maps, a, x);
            if (ps2 && m1) bterm = bterm - compose(*ps2, *m1);
          }
        }
        const GradedMap* m2top = X2.map_at(a, b);
        GradedMap m_new = m2top ? (*m2top + bterm) : bterm;
        // verify the closed form; fall back to the exact solver otherwise
        GradedMap rel = compose(signed_d0(lb), m_new) + compose(m_new, signed_d0(la)) + o;
        if (!rel.is_zero()) {
          std::string ctx = "pair (" + la.id + " -> " + lb.id + ")";
          m_new = solve_hom_equation(la, lb, m_degree(C, p),
                                     static_cast<int>(lb.maslov - la.maslov), -o, ctx);
          GradedMap oprime = (m2top ? *m2top - m_new : -m_new) + bterm;
          if (!oprime.is_zero()) {
            GradedMap y = solve_hom_equation(la, lb, m_degree(C, p) - 1,
                                             static_cast<int>(lb.maslov - la.maslov), -oprime,
                                             ctx + " (map entry)");
            if (!y.is_zero()) psient[p] = y;
          }
        }
        if (!m_new.is_zero()) maps[p] = m_new;
      }
  }
  rebuild();

  auto curp = std::make_shared<PartialComplex>(cur);
  auto x2p = std::make_shared<PartialComplex>(X2);
  PartialMap psip(curp, x2p, E2, 0);
  for (const auto& [p, m] : psient) {
    if (p.from == p.to) continue;
    psip.set_entry(p.from, p.to, m);
  }
  if (!check_partial_complex(cur).pass())
    throw Error("promote_complex_with_map: promoted complex fails its relation");
  if (!check_cochain_map(psip).pass())
    throw Error("promote_complex_with_map: promoted map fails its relation");
  return {cur, psip};
}

// ---------------------------------------------------------------------
// joint obstruction systems for the square and tower promotions

namespace {

// Collects a per-level linear system in the unknown matrix entries of one
// or two promotion families.
struct JointSolver {
  gcx::LinearSystem sys;
  // (family, from, to, row j, col i) -> variable / equation index
  std::map<std::tuple<int, int, int, int, int>, int> cols, rows;

  int col(int family, const PairKey& p, int j, int i) {
    auto key = std::make_tuple(family, p.from, p.to, j, i);
    auto it = cols.find(key);
    if (it != cols.end()) return it->second;
    int id = static_cast<int>(cols.size());
    cols[key] = id;
    return id;
  }
  int row(int family, const PairKey& p, int j, int i) {
    auto key = std::make_tuple(family, p.from, p.to, j, i);
    auto it = rows.find(key);
    if (it != rows.end()) return it->second;
    int id = static_cast<int>(rows.size());
    rows[key] = id;
    return id;
  }

  // register every degree-admissible slot of an unknown pair
  void register_unknown(int family, const PairKey& p, const GradedSpace& A,
                        const GradedSpace& B, int degree) {
    for (int i = 0; i < A.dim(); ++i)
      for (int j = 0; j < B.dim(); ++j)
        if (B.degree(j) == A.degree(i) + degree) col(family, p, j, i);
  }

  // coupling  sign_left * d0B u  +  sign_right * u d0A   at equation family
  // eq_family, pair p (the unknown family uses the same pair here)
  void couple_d0(int eq_family, int un_family, const PairKey& p, const GradedMap& d0A,
                 const GradedMap& d0B, const GradedSpace& A, const GradedSpace& B, int degree,
                 int sign_right) {
    for (int i = 0; i < A.dim(); ++i)
      for (int j = 0; j < B.dim(); ++j) {
        if (B.degree(j) != A.degree(i) + degree) continue;
        int c = col(un_family, p, j, i);
        for (const auto& [kj, v] : d0B.entries())
          if (kj.second == j) sys.add(row(eq_family, p, kj.first, i), c, v);
        for (const auto& [ii, v] : d0A.entries())
          if (ii.first == i)
            sys.add(row(eq_family, p, j, ii.second), c, Rational(sign_right) * v);
      }
  }

  // coupling  sign * B_block o u  where u sits at pair pu of family
  // un_family and the equation lives at pair pe of family eq_family
  void couple_left(int eq_family, const PairKey& pe, int un_family, const PairKey& pu,
                   const GradedMap& block, const GradedSpace& A, const GradedSpace& Bu,
                   int degree, int sign) {
    for (int i = 0; i < A.dim(); ++i)
      for (int j = 0; j < Bu.dim(); ++j) {
        if (Bu.degree(j) != A.degree(i) + degree) continue;
        int c = col(un_family, pu, j, i);
        for (const auto& [kj, v] : block.entries())
          if (kj.second == j)
            sys.add(row(eq_family, pe, kj.first, i), c, Rational(sign) * v);
      }
  }

  void add_known(int eq_family, const PairKey& p, const GradedMap& known) {
    // equation is  coupling + known = 0
    for (const auto& [ji, v] : known.entries())
      sys.add_rhs(row(eq_family, p, ji.first, ji.second), -v);
  }

  // ensure rhs length covers all rows
  void finalize() {
    sys.num_rows = std::max<int>(sys.num_rows, static_cast<int>(rows.size()));
    sys.num_cols = std::max<int>(sys.num_cols, static_cast<int>(cols.size()));
    sys.rhs.resize(sys.num_rows, Rational(0));
  }

  std::vector<Rational> solve(const std::string& context) {
    finalize();
    auto res = gcx::solve_linear(sys);
    if (std::holds_alternative<gcx::LinearCertificate>(res)) {
      PromotionCertificate cert;
      cert.context = context;
      cert.functional = std::get<gcx::LinearCertificate>(res).rows;
      throw PromotionObstructed("promotion obstructed at " + context, std::move(cert));
    }
    return std::get<std::vector<Rational>>(res);
  }

  // extract one unknown pair into a graded map
  GradedMap extract(const std::vector<Rational>& x, int family, const PairKey& p,
                    gcx::SpacePtr A, gcx::SpacePtr B, int degree) const {
    GradedMap out(std::move(A), std::move(B), degree);
    for (const auto& [key, c] : cols) {
      if (std::get<0>(key) != family || std::get<1>(key) != p.from ||
          std::get<2>(key) != p.to)
        continue;
      if (c < static_cast<int>(x.size()) && x[c] != 0)
        out.set(std::get<3>(key), std::get<4>(key), x[c]);
    }
    return out;
  }
};

}  // namespace

std::pair<PartialMap, PartialHomotopy> promote_map(const MapPromotionSquare& sq) {
  const Rational E2 = sq.psi21.cut();
  const Rational E1 = sq.psi1.cut();
  const Rational c = sq.psi1.loss();

  std::vector<std::string> pre;
  if (sq.psi21.loss() != 0 || !sq.psi21.same_critical())
    pre.push_back("(i) psi21 must be loss-0 congruent to the identity");
  if (sq.psi21_top.loss() != 0 || !sq.psi21_top.same_critical())
    pre.push_back("(i) psi21_top must be loss-0 congruent to the identity");
  if (sq.psi21_top.cut() != E2) pre.push_back("(i) psi21_top cut differs from psi21 cut");
  if (sq.psi2.loss() != c || sq.psi2.cut() != E2)
    pre.push_back("(ii) psi2 must have loss c and cut E2");
  if (E1 > E2) pre.push_back("(iii) psi1 cut above E2");
  if (!(*sq.psi1.source() == *sq.psi21.source()))
    pre.push_back("square: psi1 source differs from psi21 source");
  if (!(*sq.psi1.target() == *sq.psi21_top.source()))
    pre.push_back("square: psi1 target differs from psi21_top source");
  if (!(*sq.psi2.source() == *sq.psi21.target()))
    pre.push_back("square: psi2 source differs from psi21 target");
  if (!(*sq.psi2.target() == *sq.psi21_top.target()))
    pre.push_back("square: psi2 target differs from psi21_top target");
  if (pre.empty()) {
    if (!check_cochain_map(sq.psi21).pass()) pre.push_back("(i) psi21 fails its relation");
    if (!check_cochain_map(sq.psi21_top).pass())
      pre.push_back("(i) psi21_top fails its relation");
    if (!check_cochain_map(sq.psi2).pass()) pre.push_back("(ii) psi2 fails its relation");
    if (!check_cochain_map(sq.psi1).pass()) pre.push_back("(iii) psi1 fails its relation");
    PartialMap from_expect = compose_maps(sq.psi1, sq.psi21_top);
    PartialMap to_expect = energy_cut(compose_maps(sq.psi21, sq.psi2), E1);
    if (!(sq.h.from() == from_expect) || !(sq.h.to() == to_expect))
      pre.push_back("(iv) homotopy endpoints are not the square composites");
    else if (!check_homotopy(sq.h).pass())
      pre.push_back("(iv) homotopy fails its relation at cut E1");
  }
  if (!pre.empty()) {
    std::string msg = "promote_map:";
    for (const auto& s : pre) msg += " " + s + ";";
    throw PreconditionFailed(msg);
  }

  const PartialComplex& F1 = *sq.psi21.source();
  const PartialComplex& F1p = *sq.psi21_top.source();
  const PartialComplex& F2p = *sq.psi21_top.target();
  const CriticalData& C1 = *F1.critical();
  const CriticalData& C1p = *F1p.critical();
  const CriticalData& C2p = *F2p.critical();

  std::map<PairKey, GradedMap> psi1_ent = sq.psi1.entries();
  std::map<PairKey, GradedMap> h_ent = sq.h.entries();

  if (E1 == E2) return {sq.psi1, sq.h};

  // all realized new gap levels, either for psi1 pairs or homotopy pairs
  std::set<Rational> levels;
  for (const Rational& g : levels_between(C1, C1p, E1 - c, E2 - c)) levels.insert(g);
  for (const Rational& g : levels_between(C1, C2p, E1 - c, E2 - c)) levels.insert(g);

  // helper tables for the known parts
  auto psi1_map_at_cut = [&](const Rational& cut_level) {
    PartialMap m(sq.psi1.source(), sq.psi1.target(), cut_level, c);
    for (const auto& [p, e] : psi1_ent) {
      if (m.same_critical() && p.from == p.to) continue;
      if (m.gap(p) <= cut_level - c) m.set_entry(p.from, p.to, e);
    }
    return m;
  };

  for (const Rational& level : levels) {
    JointSolver js;
    std::vector<PairKey> psi_pairs, h_pairs;
    for (int a = 0; a < C1.size(); ++a)
      for (int b = 0; b < C1p.size(); ++b) {
        PairKey p{a, b};
        if (C1p.label(b).energy - C1.label(a).energy != level) continue;
        psi_pairs.push_back(p);
        js.register_unknown(0, p, *C1.label(a).complex.space(), *C1p.label(b).complex.space(),
                            psi_degree(C1, C1p, p));
      }
    for (int a = 0; a < C1.size(); ++a)
      for (int b = 0; b < C2p.size(); ++b) {
        PairKey p{a, b};
        if (C2p.label(b).energy - C1.label(a).energy != level) continue;
        h_pairs.push_back(p);
        js.register_unknown(1, p, *C1.label(a).complex.space(), *C2p.label(b).complex.space(),
                            psi_degree(C1, C2p, p) - 1);
      }

    // cochain-map equations for the new psi1 entries
    for (const PairKey& p : psi_pairs) {
      const auto& la = C1.label(p.from);
      const auto& lb = C1p.label(p.to);
      js.couple_d0(0, 0, p, signed_d0(la), signed_d0(lb), *la.complex.space(),
                   *lb.complex.space(), psi_degree(C1, C1p, p), /*sign_right=*/-1);
      js.add_known(0, p, map_residual_at(F1, F1p, psi1_ent, p));
    }

    // homotopy equations for the new h entries
    PartialMap to_comp = compose_maps(sq.psi21, sq.psi2);
    for (const PairKey& p : h_pairs) {
      const auto& la = C1.label(p.from);
      const auto& lb = C2p.label(p.to);
      js.couple_d0(1, 1, p, signed_d0(la), signed_d0(lb), *la.complex.space(),
                   *lb.complex.space(), psi_degree(C1, C2p, p) - 1, /*sign_right=*/+1);

      // known part: d h + h d + h m1 + m2' h - (psi2 psi21) + (psi21_top psi1)|known
      GradedMap known = homotopy_residual_at(F1, F2p, h_ent, {}, to_comp.entries(), p);
      for (int x = 0; x < C1p.size(); ++x) {
        const GradedMap* top = sq.psi21_top.entry_at(x, p.to);
        if (!top) continue;
        const GradedMap* lo = find_entry(psi1_ent, p.from, x);
        if (lo) known = known + compose(*top, *lo);
        // unknown coupling through the loss-0 top map
        PairKey pu{p.from, x};
        if (C1p.label(x).energy - C1.label(p.from).energy == level)
          js.couple_left(1, p, 0, pu, *top, *la.complex.space(),
                         *C1p.label(x).complex.space(), psi_degree(C1, C1p, pu), +1);
      }
      js.add_known(1, p, known);
    }

    auto x = js.solve("square promotion at level " + rational_str(level));
    for (const PairKey& p : psi_pairs) {
      GradedMap e = js.extract(x, 0, p, C1.label(p.from).complex.space(),
                               C1p.label(p.to).complex.space(), psi_degree(C1, C1p, p));
      if (!e.is_zero()) psi1_ent[p] = e;
    }
    for (const PairKey& p : h_pairs) {
      GradedMap e = js.extract(x, 1, p, C1.label(p.from).complex.space(),
                               C2p.label(p.to).complex.space(), psi_degree(C1, C2p, p) - 1);
      if (!e.is_zero()) h_ent[p] = e;
    }
  }

  PartialMap psi1p = psi1_map_at_cut(E2);
  PartialMap fromp = compose_maps(psi1p, sq.psi21_top);
  PartialMap top = compose_maps(sq.psi21, sq.psi2);
  PartialHomotopy hp(fromp, top);
  for (const auto& [p, e] : h_ent) hp.set_entry(p.from, p.to, e);

  if (!check_cochain_map(psi1p).pass())
    throw Error("promote_map: promoted map fails its relation");
  if (!check_homotopy(hp).pass())
    throw Error("promote_map: promoted homotopy fails its relation");
  return {psi1p, hp};
}

// ---------------------------------------------------------------------

SecondHomotopy::SecondHomotopy(ComplexPtr source, ComplexPtr target, Rational cut,
                               Rational loss)
    : source_(std::move(source)),
      target_(std::move(target)),
      cut_(std::move(cut)),
      loss_(std::move(loss)) {}

void SecondHomotopy::set_entry(int from_label, int to_label, GradedMap m) {
  PairKey p{from_label, to_label};
  Rational g = target_->critical()->label(to_label).energy -
               source_->critical()->label(from_label).energy;
  if (g < -loss_ || g > cut_ - loss_)
    throw Error("SecondHomotopy::set_entry: pair gap outside [-loss, cut-loss]");
  int want = psi_degree(*source_->critical(), *target_->critical(), p) - 2;
  if (m.degree() != want) throw DegreeError("SecondHomotopy::set_entry: wrong degree");
  if (m.is_zero())
    entries_.erase(p);
  else
    entries_[p] = std::move(m);
}

namespace {

// d2^{i+1} H - H d1^i - (h_b - h_a + h_ab_ip1 psi1 - psi2 h_ab_i) at p.
GradedMap second_residual_at(const HomotopyPromotionData& d,
                             const std::map<PairKey, GradedMap>& h_i_entries,
                             const std::map<PairKey, GradedMap>& H_entries, const PairKey& p) {
  const PartialComplex& F1i = *d.na_i.source();
  const PartialComplex& F2ip1 = *d.na_ip1.target();
  const CriticalData& Cs = *F1i.critical();
  const CriticalData& Ct = *F2ip1.critical();
  const auto& la = Cs.label(p.from);
  const auto& lb = Ct.label(p.to);
  GradedMap acc = GradedMap::zero(la.complex.space(), lb.complex.space(),
                                  psi_degree(Cs, Ct, p) - 1);
  if (const GradedMap* H = find_entry(H_entries, p.from, p.to))
    acc = acc + compose(signed_d0(lb), *H) - compose(*H, signed_d0(la));
  for (int x = 0; x < Ct.size(); ++x) {
    const GradedMap* m2 = F2ip1.map_at(x, p.to);
    const GradedMap* H = find_entry(H_entries, p.from, x);
    if (m2 && H) acc = acc + compose(*m2, *H);
  }
  for (int x = 0; x < Cs.size(); ++x) {
    const GradedMap* H = find_entry(H_entries, x, p.to);
    const GradedMap* m1 = F1i.map_at(p.from, x);
    if (H && m1) acc = acc - compose(*H, *m1);
  }
  if (const GradedMap* e = d.h_b.entry_at(p.from, p.to)) acc = acc - *e;
  if (const GradedMap* e = d.h_a.entry_at(p.from, p.to)) acc = acc + *e;
  // - h_ab_ip1 o psi1
  for (const auto& [q, he] : d.h_ab_ip1.entries()) {
    if (q.to != p.to) continue;
    const GradedMap* ps = d.psi1.entry_at(p.from, q.from);
    if (ps) acc = acc - compose(he, *ps);
  }
  // + psi2 o h_ab_i
  for (const auto& [q, pe] : d.psi2.entries()) {
    if (q.to != p.to) continue;
    const GradedMap* he = find_entry(h_i_entries, p.from, q.from);
    if (he) acc = acc + compose(pe, *he);
  }
  return acc;
}

}  // namespace

DefectReport check_second_homotopy(const HomotopyPromotionData& d,
                                   const PartialHomotopy& h_ab_i, const SecondHomotopy& H) {
  DefectReport rep;
  const CriticalData& Cs = *d.na_i.source()->critical();
  const CriticalData& Ct = *d.na_ip1.target()->critical();
  for (int a = 0; a < Cs.size(); ++a)
    for (int b = 0; b < Ct.size(); ++b) {
      PairKey p{a, b};
      Rational g = Ct.label(b).energy - Cs.label(a).energy;
      if (g < -H.loss() || g > H.cut() - H.loss()) continue;
      GradedMap r = second_residual_at(d, h_ab_i.entries(), H.entries(), p);
      if (!r.is_zero())
        rep.entries.push_back({p, "homotopy-of-homotopies relation", std::move(r)});
    }
  return rep;
}

std::pair<PartialHomotopy, SecondHomotopy> promote_homotopy(const HomotopyPromotionData& d) {
  const Rational Eip1 = d.psi1.cut();
  const Rational Ei = d.h_ab_i.cut();
  const Rational c = d.na_i.loss();

  std::vector<std::string> pre;
  if (d.psi1.loss() != 0 || !d.psi1.same_critical())
    pre.push_back("(1) psi1 must be loss-0 congruent to the identity");
  if (d.psi2.loss() != 0 || !d.psi2.same_critical())
    pre.push_back("(1) psi2 must be loss-0 congruent to the identity");
  if (d.psi2.cut() != Eip1) pre.push_back("(1) psi2 cut differs");
  for (const PartialMap* n : {&d.na_i, &d.nb_i, &d.na_ip1, &d.nb_ip1})
    if (n->loss() != c || n->cut() != Eip1)
      pre.push_back("(2) vertical maps must share loss c and cut E^{i+1}");
  if (Ei > Eip1) pre.push_back("h_ab_i cut above E^{i+1}");
  if (pre.empty()) {
    for (const PartialMap* n : {&d.na_i, &d.nb_i, &d.na_ip1, &d.nb_ip1})
      if (!check_cochain_map(*n).pass()) pre.push_back("(2) a vertical map fails its relation");
    if (!(d.h_ab_i.from() == energy_cut(d.na_i, Ei)) ||
        !(d.h_ab_i.to() == energy_cut(d.nb_i, Ei)))
      pre.push_back("(3) h_ab_i endpoints are not the cut vertical maps");
    else if (!check_homotopy(d.h_ab_i).pass())
      pre.push_back("(3) h_ab_i fails its relation");
    if (!(d.h_ab_ip1.from() == d.na_ip1) || !(d.h_ab_ip1.to() == d.nb_ip1))
      pre.push_back("(3) h_ab_ip1 endpoints are wrong");
    else if (!check_homotopy(d.h_ab_ip1).pass())
      pre.push_back("(3) h_ab_ip1 fails its relation");
    auto from_a = compose_maps(d.psi1, d.na_ip1);
    auto to_a = compose_maps(d.na_i, d.psi2);
    auto from_b = compose_maps(d.psi1, d.nb_ip1);
    auto to_b = compose_maps(d.nb_i, d.psi2);
    if (!(d.h_a.from() == from_a) || !(d.h_a.to() == to_a) || !(d.h_b.from() == from_b) ||
        !(d.h_b.to() == to_b))
      pre.push_back("(4) h_a/h_b endpoints are not the square composites");
    else if (!check_homotopy(d.h_a).pass() || !check_homotopy(d.h_b).pass())
      pre.push_back("(4) h_a or h_b fails its relation");
    if (!check_second_homotopy(d, d.h_ab_i, d.H).pass())
      pre.push_back("H fails the square relation at cut E^i");
  }
  if (!pre.empty()) {
    std::string msg = "promote_homotopy:";
    for (const auto& s : pre) msg += " " + s + ";";
    throw PreconditionFailed(msg);
  }

  const PartialComplex& F1i = *d.na_i.source();
  const PartialComplex& F2i = *d.na_i.target();
  const PartialComplex& F2ip1 = *d.na_ip1.target();
  const CriticalData& C1 = *F1i.critical();
  const CriticalData& C2 = *F2i.critical();
  const CriticalData& C2p = *F2ip1.critical();

  std::map<PairKey, GradedMap> h_ent = d.h_ab_i.entries();
  std::map<PairKey, GradedMap> H_ent = d.H.entries();

  if (Ei == Eip1) return {d.h_ab_i, d.H};

  std::set<Rational> levels;
  for (const Rational& g : levels_between(C1, C2, Ei - c, Eip1 - c)) levels.insert(g);
  for (const Rational& g : levels_between(C1, C2p, Ei - c, Eip1 - c)) levels.insert(g);

  for (const Rational& level : levels) {
    JointSolver js;
    std::vector<PairKey> h_pairs, H_pairs;
    for (int a = 0; a < C1.size(); ++a)
      for (int b = 0; b < C2.size(); ++b) {
        PairKey p{a, b};
        if (C2.label(b).energy - C1.label(a).energy != level) continue;
        h_pairs.push_back(p);
        js.register_unknown(0, p, *C1.label(a).complex.space(), *C2.label(b).complex.space(),
                            psi_degree(C1, C2, p) - 1);
      }
    for (int a = 0; a < C1.size(); ++a)
      for (int b = 0; b < C2p.size(); ++b) {
        PairKey p{a, b};
        if (C2p.label(b).energy - C1.label(a).energy != level) continue;
        H_pairs.push_back(p);
        js.register_unknown(1, p, *C1.label(a).complex.space(), *C2p.label(b).complex.space(),
                            psi_degree(C1, C2p, p) - 2);
      }

    for (const PairKey& p : h_pairs) {
      const auto& la = C1.label(p.from);
      const auto& lb = C2.label(p.to);
      js.couple_d0(0, 0, p, signed_d0(la), signed_d0(lb), *la.complex.space(),
                   *lb.complex.space(), psi_degree(C1, C2, p) - 1, /*sign_right=*/+1);
      js.add_known(0, p, homotopy_residual_at(F1i, F2i, h_ent, d.na_i.entries(),
                                              d.nb_i.entries(), p));
    }
    for (const PairKey& p : H_pairs) {
      const auto& la = C1.label(p.from);
      const auto& lb = C2p.label(p.to);
      js.couple_d0(1, 1, p, signed_d0(la), signed_d0(lb), *la.complex.space(),
                   *lb.complex.space(), psi_degree(C1, C2p, p) - 2, /*sign_right=*/-1);
      js.add_known(1, p, second_residual_at(d, h_ent, H_ent, p));
      // + psi2 o (new h entries)
      for (int x = 0; x < C2.size(); ++x) {
        const GradedMap* ps = d.psi2.entry_at(x, p.to);
        if (!ps) continue;
        PairKey pu{p.from, x};
        if (C2.label(x).energy - C1.label(p.from).energy == level)
          js.couple_left(1, p, 0, pu, *ps, *la.complex.space(), *C2.label(x).complex.space(),
                         psi_degree(C1, C2, pu) - 1, +1);
      }
    }

    auto x = js.solve("tower promotion at level " + rational_str(level));
    for (const PairKey& p : h_pairs) {
      GradedMap e = js.extract(x, 0, p, C1.label(p.from).complex.space(),
                               C2.label(p.to).complex.space(), psi_degree(C1, C2, p) - 1);
      if (!e.is_zero()) h_ent[p] = e;
    }
    for (const PairKey& p : H_pairs) {
      GradedMap e = js.extract(x, 1, p, C1.label(p.from).complex.space(),
                               C2p.label(p.to).complex.space(), psi_degree(C1, C2p, p) - 2);
      if (!e.is_zero()) H_ent[p] = e;
    }
  }

  PartialHomotopy hp(d.na_i, d.nb_i);
  for (const auto& [p, e] : h_ent) hp.set_entry(p.from, p.to, e);
  SecondHomotopy Hp(d.H.source(), d.H.target(), Eip1, c);
  for (const auto& [p, e] : H_ent) Hp.set_entry(p.from, p.to, e);

  if (!check_homotopy(hp).pass())
    throw Error("promote_homotopy: promoted homotopy fails its relation");
  if (!check_second_homotopy(d, hp, Hp).pass())
    throw Error("promote_homotopy: promoted square relation fails");
  return {hp, Hp};
}

// ---------------------------------------------------------------------

HomotopyLimitResult homotopy_limit(const std::vector<PartialComplex>& tower,
                                   const std::vector<PartialMap>& maps) {
  if (tower.empty()) throw Error("homotopy_limit: empty tower");
  if (maps.size() + 1 != tower.size())
    throw Error("homotopy_limit: need one connecting map per consecutive pair");
  for (size_t i = 0; i + 1 < tower.size(); ++i)
    if (!(tower[i].cut() < tower[i + 1].cut()))
      throw Error("homotopy_limit: cut levels must strictly increase");

  HomotopyLimitResult res;
  PartialComplex current = tower.front();
  PartialMap link = maps.empty() ? PartialMap() : maps.front();
  for (size_t i = 0; i + 1 < tower.size(); ++i) {
    PartialComplex before = current;
    std::pair<PartialComplex, PartialMap> step;
    try {
      step = promote_complex_with_map(current, tower[i + 1], link);
    } catch (PromotionObstructed& e) {
      e.certificate.context = "stage " + std::to_string(i) + ": " + e.certificate.context;
      throw;
    }
    current = step.first;
    res.promoted_maps.push_back(step.second);
    res.certificates.push_back(energy_cut(current, before.cut()) == before);
    if (i + 1 < maps.size()) {
      // chain into the next stage: the promoted comparison map composed
      // with the next connecting map
      link = compose_maps(step.second, maps[i + 1]);
    }
  }
  res.limit = current;
  return res;
}

// ---------------------------------------------------------------------
// Morse systems

MorseReport morse_check(const MorseKSystem& K) {
  MorseReport rep;
  const CriticalData& C = *K.critical;
  for (int i = 0; i < C.size(); ++i) {
    const auto& l = C.label(i);
    for (const auto& [name, deg] : l.complex.space()->basis())
      if (deg != 0)
        rep.violations.push_back("label " + l.id + ": basis element '" + name +
                                 "' not in degree 0");
    if (!l.complex.d0().is_zero())
      rep.violations.push_back("label " + l.id + ": nonzero d0 in a Morse system");
  }
  auto formal_dim = [&](const PairKey& p) {
    return C.label(p.to).maslov - C.label(p.from).maslov - 1 + C.label(p.to).dimR;
  };
  for (const auto& [p, dim] : K.dims) {
    if (dim != formal_dim(p))
      rep.violations.push_back("dims(" + C.label(p.from).id + "," + C.label(p.to).id +
                               ") disagrees with the dimension formula");
    if (!(C.label(p.from).energy < C.label(p.to).energy))
      rep.violations.push_back("dims(" + C.label(p.from).id + "," + C.label(p.to).id +
                               ") violates energy positivity");
  }
  for (const auto& [p, m] : K.counts) {
    auto it = K.dims.find(p);
    long long dim = it != K.dims.end() ? it->second : formal_dim(p);
    if (dim != 0)
      rep.violations.push_back("counts(" + C.label(p.from).id + "," + C.label(p.to).id +
                               ") on a pair of dimension " + std::to_string(dim));
    if (!(C.label(p.from).energy < C.label(p.to).energy))
      rep.violations.push_back("counts(" + C.label(p.from).id + "," + C.label(p.to).id +
                               ") violates energy positivity");
  }
  // d^2 = 0 on every formal-dimension-1 pair
  for (int a = 0; a < C.size(); ++a)
    for (int b = 0; b < C.size(); ++b) {
      PairKey p{a, b};
      if (!(C.label(a).energy < C.label(b).energy)) continue;
      if (formal_dim(p) != 1) continue;
      GradedMap acc = GradedMap::zero(C.label(a).complex.space(),
                                      C.label(b).complex.space(), 0);
      for (int x = 0; x < C.size(); ++x) {
        auto hi = K.counts.find(PairKey{x, b});
        auto lo = K.counts.find(PairKey{a, x});
        if (hi == K.counts.end() || lo == K.counts.end()) continue;
        int s = boundary_sign(C.label(a).maslov, C.label(x).maslov, C.label(b).maslov,
                              C.label(x).dimR, C.label(b).dimR);
        acc = acc + compose(hi->second, lo->second).scaled(s);
      }
      if (!acc.is_zero())
        rep.violations.push_back("d^2 residual at (" + C.label(a).id + "," + C.label(b).id +
                                 ")");
    }
  return rep;
}

PartialComplex morse_to_partial(const MorseKSystem& K, const Rational& cut) {
  PartialComplex out(K.critical, cut);
  for (const auto& [p, m] : K.counts) {
    // only dimension-0 pairs carry the degree compatible with a connecting
    // map; morse_check enforces that counts live there
    if (out.gap(p) > cut) continue;
    GradedMap g(m.source(), m.target(), m_degree(*K.critical, p));
    for (const auto& [ji, v] : m.entries()) g.set(ji.first, ji.second, v);
    out.set_map(p.from, p.to, std::move(g));
  }
  return out;
}

int boundary_sign(long long mu_minus, long long mu, long long mu_plus, long long dimR_mid,
                  long long dimR_plus) {
  long long dimM = mu_plus - mu - 1 + dimR_plus;
  long long eps = (mu - mu_minus) * dimM - (mu - mu_minus - 1) * dimR_mid;
  return (((eps % 2) + 2) % 2) == 0 ? 1 : -1;
}

int fiber_swap_sign(long long dimX1, long long dimX2, long long dimY) {
  long long eps = (dimX1 - dimY) * (dimX2 - dimY);
  return (((eps % 2) + 2) % 2) == 0 ? 1 : -1;
}

bool check_gapped(const PartialComplex& X, const nov::DiscreteSubmonoid& G) {
  const CriticalData& C = *X.critical();
  for (const auto& [p, m] : X.maps()) {
    nov::MonoidElem e{X.gap(p), C.label(p.to).maslov - C.label(p.from).maslov};
    if (!G.contains(e)) return false;
  }
  return true;
}

}  // namespace filtalg::floer
