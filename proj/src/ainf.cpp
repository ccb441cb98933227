#include "filtalg/ainf.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "filtalg/trees.hpp"

namespace filtalg::ainf {

using gcx::GradedSpace;
using poly::PiecewisePoly;
using poly::Polynomial;

namespace {

void accumulate(SparseVec& acc, int idx, const Rational& v) {
  if (v == 0) return;
  acc[idx] += v;
  if (acc[idx] == 0) acc.erase(idx);
}

void accumulate(SparseVec& acc, const SparseVec& v, const Rational& c) {
  for (const auto& [i, x] : v) accumulate(acc, i, x * c);
}

std::string tuple_str(const GradedSpace& S, const Tuple& t) {
  std::string out = "(";
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += S.name(t[i]);
  }
  return out + ")";
}

std::vector<Tuple> all_tuples(int dim, long long k) {
  std::vector<Tuple> out;
  Tuple cur(static_cast<size_t>(k), 0);
  long long total = 1;
  for (long long i = 0; i < k; ++i) total *= dim;
  for (long long code = 0; code < total; ++code) {
    long long c = code;
    for (long long i = 0; i < k; ++i) {
      cur[i] = static_cast<int>(c % dim);
      c /= dim;
    }
    out.push_back(cur);
  }
  return out;
}

// parity of the shifted degree of the prefix: sum (deg h_j + 1), j < upto
int koszul_prefix(const GradedSpace& S, const Tuple& t, long long upto) {
  long long s = 0;
  for (long long j = 0; j < upto; ++j) s += S.degree(t[j]) + 1;
  return static_cast<int>(((s % 2) + 2) % 2);
}

long long tuple_degree(const GradedSpace& S, const Tuple& t) {
  long long d = 0;
  for (int i : t) d += S.degree(i);
  return d;
}

// splittings (k2, beta2) of (k, beta): the inner part of one composition
struct Splitting {
  long long k2;
  MonoidElem beta2;
  MonoidElem beta1;
};

std::vector<Splitting> splittings(const DiscreteSubmonoid& G, long long k,
                                  const MonoidElem& beta) {
  std::vector<Splitting> out;
  auto monoid = G.below(beta.energy);
  auto in_monoid = [&](const MonoidElem& x) {
    return std::binary_search(monoid.begin(), monoid.end(), x);
  };
  for (const auto& beta2 : monoid) {
    MonoidElem beta1{beta.energy - beta2.energy, beta.mu - beta2.mu};
    if (!in_monoid(beta1)) continue;
    for (long long k2 = 0; k2 <= k; ++k2) out.push_back({k2, beta2, beta1});
  }
  return out;
}

}  // namespace

Product::Product(gcx::SpacePtr space, std::map<std::pair<int, int>, SparseVec> table)
    : space_(std::move(space)), table_(std::move(table)) {
  for (auto it = table_.begin(); it != table_.end();) {
    std::erase_if(it->second, [](const auto& kv) { return kv.second == 0; });
    it = it->second.empty() ? table_.erase(it) : std::next(it);
  }
  for (const auto& [ij, vec] : table_) {
    int di = space_->degree(ij.first), dj = space_->degree(ij.second);
    for (const auto& [o, v] : vec)
      if (space_->degree(o) != di + dj)
        throw DegreeError("Product: entry violates degree additivity at (" +
                          space_->name(ij.first) + "," + space_->name(ij.second) + ")");
    // graded commutativity against the mirrored entry
    SparseVec mirror;
    auto jt = table_.find({ij.second, ij.first});
    if (jt != table_.end()) mirror = jt->second;
    Rational sgn = (di * dj) % 2 == 0 ? 1 : -1;
    SparseVec want;
    for (const auto& [o, v] : vec) want[o] = v * sgn;
    if (mirror != want)
      throw Error("Product: table is not graded-commutative at (" + space_->name(ij.first) +
                  "," + space_->name(ij.second) + ")");
  }
}

const SparseVec* Product::at(int i, int j) const {
  auto it = table_.find({i, j});
  return it == table_.end() ? nullptr : &it->second;
}

AinfOperations::AinfOperations(gcx::CochainComplex space, Product product, int dimL,
                               DiscreteSubmonoid monoid, Rational E0, Rational e0)
    : space_(std::move(space)),
      product_(std::move(product)),
      dimL_(dimL),
      monoid_(std::move(monoid)),
      E0_(std::move(E0)),
      e0_(std::move(e0)) {
  if (!(*product_.space() == *space_.space()))
    throw SpaceMismatch("AinfOperations: product lives on a different space");
  if (E0_ < 0) throw InvalidCutLevel("AinfOperations: negative cut level");
  if (e0_ <= 0 || e0_ > monoid_.e_min())
    throw MinimalEnergyViolation("AinfOperations: need 0 < e0 <= e_min(G)");
}

void AinfOperations::set_op(long long k, const MonoidElem& beta, RatOp op) {
  if (k < 0) throw IndexOutOfRange("set_op: negative arity");
  if (!(beta.energy > 0))
    throw Error("set_op: unit-energy operations are pinned and not stored");
  if (beta.energy < e0_) throw Error("set_op: operations below the minimal energy must vanish");
  if (!monoid_.contains(beta)) throw Error("set_op: beta outside the monoid");
  if (beta.energy + k * e0_ > E0_)
    throw Error("set_op: (k,beta) outside the admissible set at this cut level");
  const GradedSpace& S = *space_.space();
  for (auto it = op.begin(); it != op.end();) {
    std::erase_if(it->second, [](const auto& kv) { return kv.second == 0; });
    it = it->second.empty() ? op.erase(it) : std::next(it);
  }
  for (const auto& [t, vec] : op) {
    if (static_cast<long long>(t.size()) != k)
      throw Error("set_op: tuple arity mismatch");
    long long want = tuple_degree(S, t) - k + 2 - beta.mu;
    for (const auto& [o, v] : vec)
      if (S.degree(o) != want)
        throw DegreeError("set_op: entry violates the operation degree at " + tuple_str(S, t));
  }
  GKKey key{k, beta};
  if (op.empty())
    ops_.erase(key);
  else
    ops_[key] = std::move(op);
}

const RatOp* AinfOperations::op_at(long long k, const MonoidElem& beta) const {
  auto it = ops_.find(GKKey{k, beta});
  return it == ops_.end() ? nullptr : &it->second;
}

bool operator==(const AinfOperations& a, const AinfOperations& b) {
  return a.space_ == b.space_ && a.product_ == b.product_ && a.dimL_ == b.dimL_ &&
         a.monoid_ == b.monoid_ && a.E0_ == b.E0_ && a.e0_ == b.e0_ && a.ops_ == b.ops_;
}

SparseVec evaluate_op(const AinfOperations& A, long long k, const MonoidElem& beta,
                      const Tuple& tuple) {
  const GradedSpace& S = *A.space().space();
  SparseVec out;
  if (beta == nov::beta0()) {
    if (k == 1) {
      int i = tuple[0];
      long long sgn = A.dimL() + 1 + S.degree(i);
      Rational c = (sgn % 2 == 0) ? 1 : -1;
      for (const auto& [ji, v] : A.space().d0().entries())
        if (ji.second == i) accumulate(out, ji.first, c * v);
    } else if (k == 2) {
      int i = tuple[0], j = tuple[1];
      long long sgn = static_cast<long long>(S.degree(i)) * (S.degree(j) + 1);
      Rational c = (((sgn % 2) + 2) % 2 == 0) ? 1 : -1;
      if (const SparseVec* w = A.product().at(i, j)) accumulate(out, *w, c);
    }
    return out;
  }
  if (const RatOp* op = A.op_at(k, beta)) {
    auto it = op->find(tuple);
    if (it != op->end()) out = it->second;
  }
  return out;
}

namespace {

// outer op evaluated with a vector plugged into one slot
SparseVec evaluate_with_slot(const AinfOperations& A, long long k, const MonoidElem& beta,
                             Tuple outer, size_t slot, const SparseVec& inner) {
  SparseVec acc;
  for (const auto& [w, c] : inner) {
    outer[slot] = w;
    accumulate(acc, evaluate_op(A, k, beta, outer), c);
  }
  return acc;
}

}  // namespace

RatOp ainf_defect(const AinfOperations& A, long long k, const MonoidElem& beta) {
  const GradedSpace& S = *A.space().space();
  RatOp defect;
  auto splits = splittings(A.monoid(), k, beta);
  for (const Tuple& tuple : all_tuples(S.dim(), k)) {
    SparseVec acc;
    for (const auto& sp : splits) {
      long long k1 = k + 1 - sp.k2;
      if (k1 < 1) continue;
      for (long long i = 1; i <= k1; ++i) {
        Tuple sub(tuple.begin() + (i - 1), tuple.begin() + (i - 1) + sp.k2);
        SparseVec inner = evaluate_op(A, sp.k2, sp.beta2, sub);
        if (inner.empty()) continue;
        Tuple outer;
        outer.reserve(k1);
        outer.insert(outer.end(), tuple.begin(), tuple.begin() + (i - 1));
        outer.push_back(0);  // slot
        outer.insert(outer.end(), tuple.begin() + (i - 1) + sp.k2, tuple.end());
        Rational sgn = koszul_prefix(S, tuple, i - 1) == 0 ? 1 : -1;
        accumulate(acc, evaluate_with_slot(A, k1, sp.beta1, std::move(outer), i - 1, inner),
                   sgn);
      }
    }
    if (!acc.empty()) defect[tuple] = std::move(acc);
  }
  return defect;
}

AinfReport check_partial_ainf(const AinfOperations& A, bool parallel) {
  AinfReport rep;
  auto keys = nov::gk_set(A.monoid(), A.E0(), A.e0());
  std::vector<std::string> slots(keys.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (long long idx = 0; idx < static_cast<long long>(keys.size()); ++idx) {
    const auto& gk = keys[idx];
    RatOp defect = ainf_defect(A, gk.k, gk.beta);
    if (!defect.empty()) {
      std::ostringstream os;
      os << "a-infinity relation defect at (k=" << gk.k << ", beta=" << gk.beta.str()
         << "), witness " << tuple_str(*A.space().space(), defect.begin()->first);
      slots[idx] = os.str();
    }
  }
  for (auto& s : slots)
    if (!s.empty()) rep.failures.push_back(std::move(s));
  return rep;
}

AinfOperations energy_cut(const AinfOperations& A, const Rational& E) {
  if (E > A.E0()) throw CutRaiseError("energy_cut: new level above the current cut");
  AinfOperations out(A.space(), A.product(), A.dimL(), A.monoid(), E, A.e0());
  for (const auto& [key, op] : A.ops())
    if (key.beta.energy + key.k * A.e0() <= E) out.set_op(key.k, key.beta, op);
  return out;
}

// ---------------------------------------------------------------------

PseudoIsotopy::PseudoIsotopy(gcx::CochainComplex space, Product product, int dimL,
                             DiscreteSubmonoid monoid, Rational E0, Rational e0, Rational t_lo,
                             Rational t_hi)
    : space_(std::move(space)),
      product_(std::move(product)),
      dimL_(dimL),
      monoid_(std::move(monoid)),
      E0_(std::move(E0)),
      e0_(std::move(e0)),
      t_lo_(std::move(t_lo)),
      t_hi_(std::move(t_hi)) {
  if (!(t_lo_ < t_hi_)) throw OutOfDomain("PseudoIsotopy: empty parameter interval");
  if (!(*product_.space() == *space_.space()))
    throw SpaceMismatch("PseudoIsotopy: product lives on a different space");
  if (e0_ <= 0 || e0_ > monoid_.e_min())
    throw MinimalEnergyViolation("PseudoIsotopy: need 0 < e0 <= e_min(G)");
}

namespace {

void validate_family(const GradedSpace& S, const PseudoIsotopy& I, long long k,
                     const MonoidElem& beta, PolyOp& op, long long degree_offset,
                     const char* what) {
  for (auto it = op.begin(); it != op.end();) {
    std::erase_if(it->second, [](const auto& kv) { return kv.second.is_zero(); });
    it = it->second.empty() ? op.erase(it) : std::next(it);
  }
  for (const auto& [t, vec] : op) {
    if (static_cast<long long>(t.size()) != k)
      throw Error(std::string(what) + ": tuple arity mismatch");
    long long want = tuple_degree(S, t) - k + degree_offset - beta.mu;
    for (const auto& [o, pw] : vec) {
      if (S.degree(o) != want)
        throw DegreeError(std::string(what) + ": entry violates the family degree");
      if (pw.domain_lo() != I.t_lo() || pw.domain_hi() != I.t_hi())
        throw OutOfDomain(std::string(what) + ": family domain mismatch");
    }
  }
}

}  // namespace

void PseudoIsotopy::set_m(long long k, const MonoidElem& beta, PolyOp op) {
  if (!(beta.energy > 0))
    throw Error("set_m: unit-energy families are pinned constants and not stored");
  if (beta.energy < e0_) throw Error("set_m: families below the minimal energy must vanish");
  if (!monoid_.contains(beta)) throw Error("set_m: beta outside the monoid");
  if (beta.energy + k * e0_ > E0_) throw Error("set_m: (k,beta) outside the admissible set");
  validate_family(*space_.space(), *this, k, beta, op, 2, "set_m");
  GKKey key{k, beta};
  if (op.empty())
    mt_.erase(key);
  else
    mt_[key] = std::move(op);
}

void PseudoIsotopy::set_c(long long k, const MonoidElem& beta, PolyOp op) {
  if (!(beta.energy > 0)) throw Error("set_c: the connection vanishes at nonpositive energy");
  if (!monoid_.contains(beta)) throw Error("set_c: beta outside the monoid");
  if (beta.energy + k * e0_ > E0_) throw Error("set_c: (k,beta) outside the admissible set");
  validate_family(*space_.space(), *this, k, beta, op, 1, "set_c");
  GKKey key{k, beta};
  if (op.empty())
    ct_.erase(key);
  else
    ct_[key] = std::move(op);
}

const PolyOp* PseudoIsotopy::m_at(long long k, const MonoidElem& beta) const {
  auto it = mt_.find(GKKey{k, beta});
  return it == mt_.end() ? nullptr : &it->second;
}

const PolyOp* PseudoIsotopy::c_at(long long k, const MonoidElem& beta) const {
  auto it = ct_.find(GKKey{k, beta});
  return it == ct_.end() ? nullptr : &it->second;
}

bool operator==(const PseudoIsotopy& a, const PseudoIsotopy& b) {
  return a.space_ == b.space_ && a.product_ == b.product_ && a.dimL_ == b.dimL_ &&
         a.monoid_ == b.monoid_ && a.E0_ == b.E0_ && a.e0_ == b.e0_ && a.t_lo_ == b.t_lo_ &&
         a.t_hi_ == b.t_hi_ && a.mt_ == b.mt_ && a.ct_ == b.ct_;
}

namespace {

void accumulate_poly(PolyVec& acc, int idx, const PiecewisePoly& p) {
  if (p.is_zero()) return;
  auto it = acc.find(idx);
  if (it == acc.end()) {
    acc[idx] = p;
  } else {
    it->second = it->second + p;
    if (it->second.is_zero()) acc.erase(it);
  }
}

void accumulate_poly(PolyVec& acc, const PolyVec& v, const PiecewisePoly& c) {
  for (const auto& [i, p] : v) accumulate_poly(acc, i, p * c);
}

void accumulate_poly_scaled(PolyVec& acc, const PolyVec& v, const Rational& c) {
  if (c == 0) return;
  for (const auto& [i, p] : v) accumulate_poly(acc, i, p.scaled(c));
}

PiecewisePoly const_pw(const PseudoIsotopy& I, const Rational& c) {
  return PiecewisePoly::constant(I.t_lo(), I.t_hi(), c);
}

// m^t_{k,beta} on a basis tuple (pinned constants at unit energy)
PolyVec family_m(const PseudoIsotopy& I, long long k, const MonoidElem& beta,
                 const Tuple& tuple) {
  PolyVec out;
  if (beta == nov::beta0()) {
    const GradedSpace& S = *I.space().space();
    if (k == 1) {
      int i = tuple[0];
      long long sgn = I.dimL() + 1 + S.degree(i);
      Rational c = (sgn % 2 == 0) ? 1 : -1;
      for (const auto& [ji, v] : I.space().d0().entries())
        if (ji.second == i) accumulate_poly(out, ji.first, const_pw(I, c * v));
    } else if (k == 2) {
      int i = tuple[0], j = tuple[1];
      long long sgn = static_cast<long long>(S.degree(i)) * (S.degree(j) + 1);
      Rational c = (((sgn % 2) + 2) % 2 == 0) ? 1 : -1;
      if (const SparseVec* w = I.product().at(i, j))
        for (const auto& [o, v] : *w) accumulate_poly(out, o, const_pw(I, c * v));
    }
    return out;
  }
  if (const PolyOp* op = I.m_at(k, beta)) {
    auto it = op->find(tuple);
    if (it != op->end()) out = it->second;
  }
  return out;
}

PolyVec family_c(const PseudoIsotopy& I, long long k, const MonoidElem& beta,
                 const Tuple& tuple) {
  PolyVec out;
  if (!(beta.energy > 0)) return out;
  if (const PolyOp* op = I.c_at(k, beta)) {
    auto it = op->find(tuple);
    if (it != op->end()) out = it->second;
  }
  return out;
}

template <class Eval>
PolyVec family_with_slot(Eval&& eval, Tuple outer, size_t slot, const PolyVec& inner) {
  PolyVec acc;
  for (const auto& [w, pw] : inner) {
    outer[slot] = w;
    PolyVec v = eval(outer);
    for (const auto& [o, q] : v) accumulate_poly(acc, o, q * pw);
  }
  return acc;
}

}  // namespace

PolyOp isotopy_defect(const PseudoIsotopy& I, long long k, const MonoidElem& beta) {
  const GradedSpace& S = *I.space().space();
  PolyOp R;
  auto splits = splittings(I.monoid(), k, beta);
  for (const Tuple& tuple : all_tuples(S.dim(), k)) {
    PolyVec acc;
    // d/dt m^t (unit-energy parts are constant)
    if (beta.energy > 0) {
      if (const PolyOp* op = I.m_at(k, beta)) {
        auto it = op->find(tuple);
        if (it != op->end())
          for (const auto& [o, pw] : it->second) accumulate_poly(acc, o, pw.derivative());
      }
    }
    for (const auto& sp : splits) {
      long long k1 = k + 1 - sp.k2;
      if (k1 < 1) continue;
      for (long long i = 1; i <= k1; ++i) {
        Tuple sub(tuple.begin() + (i - 1), tuple.begin() + (i - 1) + sp.k2);
        Tuple outer;
        outer.reserve(k1);
        outer.insert(outer.end(), tuple.begin(), tuple.begin() + (i - 1));
        outer.push_back(0);
        outer.insert(outer.end(), tuple.begin() + (i - 1) + sp.k2, tuple.end());
        Rational sgn = koszul_prefix(S, tuple, i - 1) == 0 ? 1 : -1;
        // + (-1)^* c(..., m(...), ...)
        PolyVec inner_m = family_m(I, sp.k2, sp.beta2, sub);
        if (!inner_m.empty()) {
          PolyVec term = family_with_slot(
              [&](const Tuple& t) { return family_c(I, k1, sp.beta1, t); }, outer, i - 1,
              inner_m);
          accumulate_poly_scaled(acc, term, sgn);
        }
        // - m(..., c(...), ...)
        PolyVec inner_c = family_c(I, sp.k2, sp.beta2, sub);
        if (!inner_c.empty()) {
          PolyVec term = family_with_slot(
              [&](const Tuple& t) { return family_m(I, k1, sp.beta1, t); }, outer, i - 1,
              inner_c);
          accumulate_poly_scaled(acc, term, -1);
        }
      }
    }
    std::erase_if(acc, [](const auto& kv) { return kv.second.is_zero(); });
    if (!acc.empty()) R[tuple] = std::move(acc);
  }
  return R;
}

AinfOperations restrict_endpoint(const PseudoIsotopy& I, const Rational& t) {
  if (t < I.t_lo() || t > I.t_hi())
    throw OutOfDomain("restrict_endpoint: t outside the parameter interval");
  AinfOperations out(I.space(), I.product(), I.dimL(), I.monoid(), I.E0(), I.e0());
  for (const auto& [key, op] : I.mt()) {
    RatOp ev;
    for (const auto& [tuple, vec] : op) {
      SparseVec v;
      for (const auto& [o, pw] : vec) {
        Rational x = pw.eval(t);
        if (x != 0) v[o] = x;
      }
      if (!v.empty()) ev[tuple] = std::move(v);
    }
    if (!ev.empty()) out.set_op(key.k, key.beta, std::move(ev));
  }
  return out;
}

IsotopyReport check_pseudoisotopy(const PseudoIsotopy& I, bool parallel) {
  IsotopyReport rep;
  const GradedSpace& S = *I.space().space();
  // (1) continuity across breakpoints
  for (const auto* table : {&I.mt(), &I.ct()}) {
    for (const auto& [key, op] : *table)
      for (const auto& [tuple, vec] : op)
        for (const auto& [o, pw] : vec)
          if (!pw.is_continuous()) {
            std::ostringstream os;
            os << "discontinuous family at (k=" << key.k << ", beta=" << key.beta.str()
               << ") " << tuple_str(S, tuple);
            rep.continuity.push_back(os.str());
          }
  }
  // (4) connection vanishes at nonpositive energy -- structural, but verify
  for (const auto& [key, op] : I.ct())
    if (!(key.beta.energy > 0))
      rep.vanishing.push_back("connection stored at nonpositive energy " + key.beta.str());

  // (2) per-t relation at breakpoints and one interior point per piece
  std::set<Rational> ts{I.t_lo(), I.t_hi()};
  for (const auto* table : {&I.mt(), &I.ct()})
    for (const auto& [key, op] : *table)
      for (const auto& [tuple, vec] : op)
        for (const auto& [o, pw] : vec)
          for (const auto& b : pw.breaks()) ts.insert(b);
  std::vector<Rational> samples(ts.begin(), ts.end());
  std::vector<Rational> mids;
  for (size_t i = 0; i + 1 < samples.size(); ++i)
    mids.push_back((samples[i] + samples[i + 1]) / 2);
  samples.insert(samples.end(), mids.begin(), mids.end());
  for (const auto& t : samples) {
    AinfReport r = check_partial_ainf(restrict_endpoint(I, t), parallel);
    for (const auto& f : r.failures)
      rep.per_t.push_back("at t = " + rational_str(t) + ": " + f);
  }

  // (3) symbolic residual of the isotopy equation
  auto keys = nov::gk_set(I.monoid(), I.E0(), I.e0());
  std::vector<std::string> slots(keys.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (long long idx = 0; idx < static_cast<long long>(keys.size()); ++idx) {
    const auto& gk = keys[idx];
    PolyOp r = isotopy_defect(I, gk.k, gk.beta);
    if (!r.empty()) {
      std::ostringstream os;
      os << "isotopy equation residual at (k=" << gk.k << ", beta=" << gk.beta.str()
         << "), witness " << tuple_str(S, r.begin()->first);
      slots[idx] = os.str();
    }
  }
  for (auto& s : slots)
    if (!s.empty()) rep.ode.push_back(std::move(s));
  return rep;
}

PseudoIsotopy energy_cut(const PseudoIsotopy& I, const Rational& E) {
  if (E > I.E0()) throw CutRaiseError("energy_cut: new level above the current cut");
  PseudoIsotopy out(I.space(), I.product(), I.dimL(), I.monoid(), E, I.e0(), I.t_lo(),
                    I.t_hi());
  for (const auto& [key, op] : I.mt())
    if (key.beta.energy + key.k * I.e0() <= E) out.set_m(key.k, key.beta, op);
  for (const auto& [key, op] : I.ct())
    if (key.beta.energy + key.k * I.e0() <= E) out.set_c(key.k, key.beta, op);
  return out;
}

std::pair<AinfOperations, PseudoIsotopy> promote_via_isotopy(const AinfOperations& m0,
                                                             const AinfOperations& m1,
                                                             const PseudoIsotopy& I) {
  std::vector<std::string> pre;
  if (!(m0.space() == I.space()) || !(m1.space() == I.space()))
    pre.push_back("structures live on different spaces");
  if (!(m0.product() == I.product()) || !(m1.product() == I.product()))
    pre.push_back("structures carry different products");
  if (m0.dimL() != I.dimL() || m1.dimL() != I.dimL()) pre.push_back("dimL mismatch");
  if (!(m0.monoid() == I.monoid()) || !(m1.monoid() == I.monoid()))
    pre.push_back("monoid mismatch");
  if (m0.e0() != I.e0() || m1.e0() != I.e0()) pre.push_back("minimal energy mismatch");
  if (m0.E0() != I.E0()) pre.push_back("isotopy cut differs from the source cut");
  if (m1.E0() < m0.E0()) pre.push_back("target cut below the source cut");
  if (I.t_lo() > 0 || I.t_hi() < 1) pre.push_back("parameter interval must contain [0,1]");
  if (pre.empty()) {
    if (!(restrict_endpoint(I, 0) == m0)) pre.push_back("t=0 endpoint differs from m0");
    if (!(restrict_endpoint(I, 1) == energy_cut(m1, m0.E0())))
      pre.push_back("t=1 endpoint differs from the energy cut of m1");
    if (!check_pseudoisotopy(I).pass()) pre.push_back("isotopy fails its relations");
    if (!check_partial_ainf(m1).pass()) pre.push_back("m1 fails its relations");
  }
  if (!pre.empty()) {
    std::string msg = "promote_via_isotopy:";
    for (const auto& s : pre) msg += " " + s + ";";
    throw PreconditionFailed(msg);
  }

  const Rational E0 = m0.E0(), E1 = m1.E0();
  PseudoIsotopy J(I.space(), I.product(), I.dimL(), I.monoid(), E1, I.e0(), I.t_lo(),
                  I.t_hi());
  for (const auto& [key, op] : I.mt()) J.set_m(key.k, key.beta, op);
  for (const auto& [key, op] : I.ct()) J.set_c(key.k, key.beta, op);

  auto old_keys = nov::gk_set(I.monoid(), E0, I.e0());
  auto in_old = [&](const nov::GKPair& p) {
    return std::find_if(old_keys.begin(), old_keys.end(), [&](const nov::GKPair& q) {
             return q.beta == p.beta && q.k == p.k;
           }) != old_keys.end();
  };
  const GradedSpace& S = *I.space().space();

  // increasing level; ties are independent
  for (const auto& gk : nov::gk_set(I.monoid(), E1, I.e0())) {
    if (in_old(gk)) continue;
    if (!(gk.beta.energy > 0)) continue;  // unit-energy families stay pinned
    // dm/dt = -(sum (-1)^* c(..m..) - sum m(..c..)); the new key never feeds
    // its own right-hand side because its partners carry the vanishing
    // unit-energy connection
    PolyOp rhs = isotopy_defect(J, gk.k, gk.beta);  // = G with m^t_{k,beta} absent
    const RatOp* m1op = m1.op_at(gk.k, gk.beta);
    PolyOp family;
    std::set<Tuple> tuples;
    for (const auto& [t, v] : rhs) tuples.insert(t);
    if (m1op)
      for (const auto& [t, v] : *m1op) tuples.insert(t);
    for (const Tuple& t : tuples) {
      PolyVec vec;
      if (auto it = rhs.find(t); it != rhs.end())
        for (const auto& [o, pw] : it->second) {
          PiecewisePoly prim = pw.antiderivative(1);
          accumulate_poly(vec, o, -prim);
        }
      if (m1op)
        if (auto it = m1op->find(t); it != m1op->end())
          for (const auto& [o, v] : it->second) accumulate_poly(vec, o, const_pw(J, v));
      std::erase_if(vec, [](const auto& kv) { return kv.second.is_zero(); });
      if (!vec.empty()) family[t] = std::move(vec);
    }
    if (!family.empty()) J.set_m(gk.k, gk.beta, std::move(family));
  }

  AinfOperations m0p = restrict_endpoint(J, 0);
  if (!check_pseudoisotopy(J).pass())
    throw Error("promote_via_isotopy: promoted isotopy fails its relations");
  if (!(energy_cut(m0p, E0) == m0))
    throw Error("promote_via_isotopy: energy cut does not round-trip to m0");
  if (!(restrict_endpoint(J, 1) == m1))
    throw Error("promote_via_isotopy: t=1 endpoint of the promotion differs from m1");
  return {m0p, J};
}

bool collared_check(const PseudoIsotopy& I, const Rational& tau) {
  if (!(tau > 0)) throw OutOfDomain("collared_check: tau must be positive");
  if (I.t_lo() != -tau || I.t_hi() != 1 + tau) return false;
  std::vector<Rational> cuts{0, 1};
  auto zero_on_collars = [&](const PiecewisePoly& pw, bool derivative) {
    PiecewisePoly p = derivative ? pw.derivative().refined(cuts) : pw.refined(cuts);
    const auto& br = p.breaks();
    for (size_t i = 0; i + 1 < br.size(); ++i) {
      bool in_collar = (br[i + 1] <= 0) || (br[i] >= 1);
      if (in_collar && !p.pieces()[i].is_zero()) return false;
    }
    return true;
  };
  for (const auto& [key, op] : I.ct())
    for (const auto& [t, vec] : op)
      for (const auto& [o, pw] : vec)
        if (!zero_on_collars(pw, false)) return false;
  for (const auto& [key, op] : I.mt())
    for (const auto& [t, vec] : op)
      for (const auto& [o, pw] : vec)
        if (!zero_on_collars(pw, true)) return false;
  return true;
}

AinfLimitResult homotopy_limit_ainf(const std::vector<AinfOperations>& tower,
                                    const std::vector<PseudoIsotopy>& isotopies) {
  if (tower.empty()) throw Error("homotopy_limit_ainf: empty tower");
  if (isotopies.size() + 1 != tower.size())
    throw Error("homotopy_limit_ainf: need one isotopy per consecutive pair");
  for (size_t i = 0; i + 1 < tower.size(); ++i)
    if (!(tower[i].E0() < tower[i + 1].E0()))
      throw Error("homotopy_limit_ainf: cut levels must strictly increase");

  AinfLimitResult res;
  res.certificates.assign(tower.size(), true);
  // promote from the top of the tower down: each stage is pushed to the
  // final level against the already-promoted next stage
  AinfOperations current = tower.back();
  for (size_t i = tower.size() - 1; i-- > 0;) {
    auto step = promote_via_isotopy(tower[i], current, isotopies[i]);
    current = step.first;
    res.certificates[i] = (energy_cut(current, tower[i].E0()) == tower[i]);
  }
  res.limit = current;
  return res;
}

// ---------------------------------------------------------------------

BarSignReport bar_sign_audit(int dimL, int kmax, bool drop_k1_term) {
  BarSignReport rep;
  if (kmax > 6) throw Unsupported("bar_sign_audit: kmax above 6");
  auto eps = [&](long long k1, long long k2, long long i) {
    long long e = (k1 - 1) * (k2 - 1) + dimL + (drop_k1_term ? 0 : k1) +
                  (i - 1) * (1 + k2 * dimL);
    return static_cast<int>(((e % 2) + 2) % 2);
  };
  // formal positive decoration keeps every vertex stable at any arity
  const MonoidElem unit{1, 0};
  auto corolla = [&](long long k) {
    return trees::DecoratedTree::corolla(static_cast<int>(k), unit);
  };

  for (int k = 1; k <= kmax; ++k) {
    std::map<std::string, std::vector<int>> groups;
    for (long long k1 = 1; k1 <= k + 1; ++k1) {
      long long k2 = k + 1 - k1;
      for (long long i1 = 1; i1 <= k1; ++i1) {
        int s1 = eps(k1, k2, i1);
        // split the inner (second) factor
        for (long long k1b = 1; k1b <= k2 + 1; ++k1b) {
          long long k2b = k2 + 1 - k1b;
          for (long long i2 = 1; i2 <= k1b; ++i2) {
            auto inner = trees::graft(corolla(k2b), corolla(k1b), static_cast<int>(i2));
            auto t = trees::graft(inner, corolla(k1), static_cast<int>(i1));
            int parity = (s1 + k1 + eps(k1b, k2b, i2)) % 2;
            groups[t.code()].push_back(parity);
          }
        }
        // split the outer (first) factor
        for (long long k1b = 1; k1b <= k1 + 1; ++k1b) {
          long long k2b = k1 + 1 - k1b;
          for (long long i2 = 1; i2 <= k1b; ++i2) {
            auto outer = trees::graft(corolla(k2b), corolla(k1b), static_cast<int>(i2));
            auto t = trees::graft(corolla(k2), outer, static_cast<int>(i1));
            int parity = (s1 + eps(k1b, k2b, i2)) % 2;
            groups[t.code()].push_back(parity);
          }
        }
      }
    }
    for (const auto& [code, parities] : groups) {
      rep.configurations++;
      if (parities.size() != 2) {
        rep.violations.push_back("k=" + std::to_string(k) + ": " + code + " arises " +
                                 std::to_string(parities.size()) + " times");
        continue;
      }
      if (parities[0] == parities[1])
        rep.violations.push_back("k=" + std::to_string(k) + ": " + code +
                                 " has matching orientation signs");
    }
  }
  return rep;
}

}  // namespace filtalg::ainf
