#include "filtalg/json_io.hpp"

#include <fstream>

namespace filtalg::io {

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    throw SchemaError(where + "/" + key, "missing field");
  return j[key];
}

std::string str_field(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_string()) throw SchemaError(where + "/" + key, "expected string");
  return v.get<std::string>();
}

long long int_field(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_number_integer()) throw SchemaError(where + "/" + key, "expected integer");
  return v.get<long long>();
}

Rational rat_field(const json& j, const char* key, const std::string& where) {
  return parse_rational(str_field(j, key, where), where + "/" + key);
}

gcx::SpacePtr parse_space(const json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where, "expected array of basis elements");
  std::vector<std::pair<std::string, int>> basis;
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "/" + std::to_string(i);
    basis.emplace_back(str_field(j[i], "name", w),
                       static_cast<int>(int_field(j[i], "deg", w)));
  }
  return std::make_shared<gcx::GradedSpace>(std::move(basis));
}

gcx::GradedMap parse_matrix(const json& j, gcx::SpacePtr src, gcx::SpacePtr tgt, int degree,
                            const std::string& where) {
  gcx::GradedMap m(std::move(src), std::move(tgt), degree);
  if (!j.is_array()) throw SchemaError(where, "expected array of [i,j,value] triplets");
  for (size_t t = 0; t < j.size(); ++t) {
    const json& e = j[t];
    const std::string w = where + "/" + std::to_string(t);
    if (!e.is_array() || e.size() != 3) throw SchemaError(w, "expected [i,j,value]");
    if (!e[0].is_number_integer() || !e[1].is_number_integer())
      throw SchemaError(w, "expected integer indices");
    if (!e[2].is_string()) throw SchemaError(w, "expected rational string");
    int i = e[0].get<int>(), jj = e[1].get<int>();
    try {
      m.set(i, jj, parse_rational(e[2].get<std::string>(), w));
    } catch (const DegreeError& err) {
      throw SchemaError(w, err.what());
    } catch (const SpaceMismatch& err) {
      throw SchemaError(w, err.what());
    }
  }
  return m;
}

json matrix_to_json(const gcx::GradedMap& m) {
  json out = json::array();
  for (const auto& [ji, v] : m.entries())
    out.push_back(json::array({ji.first, ji.second, rational_str(v)}));
  return out;
}

json space_to_json(const gcx::GradedSpace& S) {
  json out = json::array();
  for (const auto& [name, deg] : S.basis()) out.push_back({{"name", name}, {"deg", deg}});
  return out;
}

}  // namespace

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SchemaError(path, std::string("parse error: ") + e.what());
  }
  return j;
}

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IOError("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
}

json novikov_to_json(const nov::NovikovElement& x) {
  json out = json::array();
  for (const auto& t : x.terms())
    out.push_back({{"c", rational_str(t.coeff)},
                   {"T", rational_str(t.energy)},
                   {"e", t.mu}});
  return out;
}

nov::NovikovElement parse_novikov(const json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where, "expected array of terms");
  std::vector<nov::NovikovTerm> terms;
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "/" + std::to_string(i);
    terms.push_back(nov::NovikovTerm{rat_field(j[i], "c", w), rat_field(j[i], "T", w),
                                     int_field(j[i], "e", w)});
  }
  return nov::NovikovElement(std::move(terms));
}

nov::DiscreteSubmonoid parse_monoid(const json& j, const std::string& where) {
  const json& gens = field(j, "generators", where);
  if (!gens.is_array()) throw SchemaError(where + "/generators", "expected array");
  std::vector<nov::MonoidElem> out;
  for (size_t i = 0; i < gens.size(); ++i) {
    const std::string w = where + "/generators/" + std::to_string(i);
    out.push_back(nov::MonoidElem{rat_field(gens[i], "E", w), int_field(gens[i], "mu", w)});
  }
  try {
    return nov::DiscreteSubmonoid(std::move(out));
  } catch (const Error& e) {
    throw SchemaError(where + "/generators", e.what());
  }
}

json monoid_to_json(const nov::DiscreteSubmonoid& G) {
  json gens = json::array();
  for (const auto& g : G.generators())
    gens.push_back({{"E", rational_str(g.energy)}, {"mu", g.mu}});
  return {{"generators", gens}};
}

nov::MonoidElem parse_beta_flag(const std::string& s) {
  // "E:p/q,mu:n"
  auto comma = s.find(',');
  if (s.rfind("E:", 0) != 0 || comma == std::string::npos ||
      s.compare(comma + 1, 3, "mu:") != 0)
    throw SchemaError("--beta", "expected \"E:p/q,mu:n\", got '" + s + "'");
  Rational E = parse_rational(s.substr(2, comma - 2), "--beta/E");
  std::string mus = s.substr(comma + 4);
  try {
    return nov::MonoidElem{E, std::stoll(mus)};
  } catch (...) {
    throw SchemaError("--beta/mu", "expected integer, got '" + mus + "'");
  }
}

namespace {

floer::CriticalPtr parse_critical(const json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where, "expected array of critical labels");
  std::vector<floer::CriticalLabel> labels;
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "/" + std::to_string(i);
    const json& cj = field(j[i], "complex", w);
    gcx::SpacePtr space = parse_space(field(cj, "basis", w + "/complex"), w + "/complex/basis");
    gcx::GradedMap d0 =
        parse_matrix(field(cj, "d0", w + "/complex"), space, space, 1, w + "/complex/d0");
    gcx::CochainComplex complex;
    try {
      complex = gcx::CochainComplex(space, std::move(d0));
    } catch (const Error& e) {
      throw SchemaError(w + "/complex", e.what());
    }
    labels.push_back(floer::CriticalLabel{str_field(j[i], "id", w), rat_field(j[i], "E", w),
                                          int_field(j[i], "mu", w),
                                          static_cast<int>(int_field(j[i], "dimR", w)),
                                          std::move(complex)});
  }
  try {
    return std::make_shared<floer::CriticalData>(std::move(labels));
  } catch (const Error& e) {
    throw SchemaError(where, e.what());
  }
}

}  // namespace

KSystemFile parse_ksystem(const json& j, const std::string& where) {
  KSystemFile out;
  floer::CriticalPtr critical = parse_critical(field(j, "critical", where), where + "/critical");
  Rational cut = rat_field(j, "cut", where);
  floer::PartialComplex X(critical, cut);
  if (j.contains("maps")) {
    const json& maps = j["maps"];
    if (!maps.is_array()) throw SchemaError(where + "/maps", "expected array");
    for (size_t i = 0; i < maps.size(); ++i) {
      const std::string w = where + "/maps/" + std::to_string(i);
      int from = critical->index_of(str_field(maps[i], "from", w));
      int to = critical->index_of(str_field(maps[i], "to", w));
      const auto& lf = critical->label(from);
      const auto& lt = critical->label(to);
      int degree = static_cast<int>(1 - lt.maslov + lf.maslov);
      gcx::GradedMap m = parse_matrix(field(maps[i], "matrix", w), lf.complex.space(),
                                      lt.complex.space(), degree, w + "/matrix");
      try {
        X.set_map(from, to, std::move(m));
      } catch (const Error& e) {
        throw SchemaError(w, e.what());
      }
    }
  }
  out.complex = std::move(X);
  if (j.contains("counts") || j.contains("dims")) {
    floer::MorseKSystem K;
    K.critical = critical;
    if (j.contains("counts")) {
      const json& counts = j["counts"];
      if (!counts.is_array()) throw SchemaError(where + "/counts", "expected array");
      for (size_t i = 0; i < counts.size(); ++i) {
        const std::string w = where + "/counts/" + std::to_string(i);
        int from = critical->index_of(str_field(counts[i], "from", w));
        int to = critical->index_of(str_field(counts[i], "to", w));
        K.counts[floer::PairKey{from, to}] = parse_matrix(
            field(counts[i], "matrix", w), critical->label(from).complex.space(),
            critical->label(to).complex.space(), 0, w + "/matrix");
      }
    }
    if (j.contains("dims")) {
      const json& dims = j["dims"];
      if (!dims.is_array()) throw SchemaError(where + "/dims", "expected array");
      for (size_t i = 0; i < dims.size(); ++i) {
        const std::string w = where + "/dims/" + std::to_string(i);
        int from = critical->index_of(str_field(dims[i], "from", w));
        int to = critical->index_of(str_field(dims[i], "to", w));
        K.dims[floer::PairKey{from, to}] = int_field(dims[i], "d", w);
      }
    }
    out.morse = std::move(K);
  }
  return out;
}

json ksystem_to_json(const floer::PartialComplex& X) {
  const floer::CriticalData& C = *X.critical();
  json critical = json::array();
  for (int i = 0; i < C.size(); ++i) {
    const auto& l = C.label(i);
    critical.push_back({{"id", l.id},
                        {"E", rational_str(l.energy)},
                        {"mu", l.maslov},
                        {"dimR", l.dimR},
                        {"complex",
                         {{"basis", space_to_json(*l.complex.space())},
                          {"d0", matrix_to_json(l.complex.d0())}}}});
  }
  json maps = json::array();
  for (const auto& [p, m] : X.maps())
    maps.push_back({{"from", C.label(p.from).id},
                    {"to", C.label(p.to).id},
                    {"matrix", matrix_to_json(m)}});
  return {{"critical", critical}, {"cut", rational_str(X.cut())}, {"maps", maps}};
}

json morse_to_json(const floer::MorseKSystem& K) {
  floer::PartialComplex shell(K.critical, Rational(0));
  json out = ksystem_to_json(shell);
  out.erase("maps");
  out["cut"] = "0";
  json counts = json::array();
  for (const auto& [p, m] : K.counts)
    counts.push_back({{"from", K.critical->label(p.from).id},
                      {"to", K.critical->label(p.to).id},
                      {"matrix", matrix_to_json(m)}});
  json dims = json::array();
  for (const auto& [p, d] : K.dims)
    dims.push_back({{"from", K.critical->label(p.from).id},
                    {"to", K.critical->label(p.to).id},
                    {"d", d}});
  out["counts"] = counts;
  out["dims"] = dims;
  return out;
}

floer::PartialMap parse_map(const json& j, floer::ComplexPtr source, floer::ComplexPtr target,
                            const std::string& where) {
  Rational cut = rat_field(j, "cut", where);
  Rational loss = rat_field(j, "loss", where);
  floer::PartialMap psi;
  try {
    psi = floer::PartialMap(std::move(source), std::move(target), cut, loss);
  } catch (const Error& e) {
    throw SchemaError(where, e.what());
  }
  if (j.contains("entries")) {
    const json& entries = j["entries"];
    if (!entries.is_array()) throw SchemaError(where + "/entries", "expected array");
    const floer::CriticalData& Cs = *psi.source()->critical();
    const floer::CriticalData& Ct = *psi.target()->critical();
    for (size_t i = 0; i < entries.size(); ++i) {
      const std::string w = where + "/entries/" + std::to_string(i);
      int from = Cs.index_of(str_field(entries[i], "from", w));
      int to = Ct.index_of(str_field(entries[i], "to", w));
      int degree = static_cast<int>(Cs.label(from).maslov - Ct.label(to).maslov);
      gcx::GradedMap m =
          parse_matrix(field(entries[i], "matrix", w), Cs.label(from).complex.space(),
                       Ct.label(to).complex.space(), degree, w + "/matrix");
      try {
        psi.set_entry(from, to, std::move(m));
      } catch (const Error& e) {
        throw SchemaError(w, e.what());
      }
    }
  }
  return psi;
}

json map_to_json(const floer::PartialMap& psi) {
  const floer::CriticalData& Cs = *psi.source()->critical();
  const floer::CriticalData& Ct = *psi.target()->critical();
  json entries = json::array();
  for (const auto& [p, m] : psi.entries()) {
    if (psi.same_critical() && p.from == p.to) continue;  // implied identity
    entries.push_back({{"from", Cs.label(p.from).id},
                       {"to", Ct.label(p.to).id},
                       {"matrix", matrix_to_json(m)}});
  }
  return {{"cut", rational_str(psi.cut())},
          {"loss", rational_str(psi.loss())},
          {"entries", entries}};
}

namespace {

struct AinfHeader {
  gcx::CochainComplex complex;
  ainf::Product product;
  int dimL;
  nov::DiscreteSubmonoid monoid;
  Rational E0, e0;
};

AinfHeader parse_ainf_header(const json& j, const std::string& where) {
  const json& sj = field(j, "space", where);
  gcx::SpacePtr space = parse_space(field(sj, "basis", where + "/space"), where + "/space/basis");
  gcx::GradedMap d0 =
      parse_matrix(field(sj, "d0", where + "/space"), space, space, 1, where + "/space/d0");
  gcx::CochainComplex complex;
  try {
    complex = gcx::CochainComplex(space, std::move(d0));
  } catch (const Error& e) {
    throw SchemaError(where + "/space", e.what());
  }
  std::map<std::pair<int, int>, ainf::SparseVec> table;
  const json& pj = field(sj, "product", where + "/space");
  if (!pj.is_array()) throw SchemaError(where + "/space/product", "expected array");
  for (size_t i = 0; i < pj.size(); ++i) {
    const std::string w = where + "/space/product/" + std::to_string(i);
    const json& e = pj[i];
    if (!e.is_array() || e.size() != 4) throw SchemaError(w, "expected [i,j,out,value]");
    table[{e[0].get<int>(), e[1].get<int>()}][e[2].get<int>()] =
        parse_rational(e[3].get<std::string>(), w);
  }
  ainf::Product product;
  try {
    product = ainf::Product(space, std::move(table));
  } catch (const Error& e) {
    throw SchemaError(where + "/space/product", e.what());
  }
  return AinfHeader{std::move(complex), std::move(product),
                    static_cast<int>(int_field(j, "dimL", where)),
                    parse_monoid(field(j, "monoid", where), where + "/monoid"),
                    rat_field(j, "E0", where), rat_field(j, "e0", where)};
}

json ainf_header_to_json(const gcx::CochainComplex& complex, const ainf::Product& product,
                         int dimL, const nov::DiscreteSubmonoid& monoid, const Rational& E0,
                         const Rational& e0) {
  json prod = json::array();
  for (const auto& [ij, vec] : product.table())
    for (const auto& [o, v] : vec)
      prod.push_back(json::array({ij.first, ij.second, o, rational_str(v)}));
  return {{"space",
           {{"basis", space_to_json(*complex.space())},
            {"d0", matrix_to_json(complex.d0())},
            {"product", prod}}},
          {"dimL", dimL},
          {"monoid", monoid_to_json(monoid)},
          {"E0", rational_str(E0)},
          {"e0", rational_str(e0)}};
}

ainf::Tuple parse_inputs(const json& j, const gcx::GradedSpace& S, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where, "expected array of basis names");
  ainf::Tuple t;
  for (const auto& name : j) {
    if (!name.is_string()) throw SchemaError(where, "expected basis name string");
    t.push_back(S.index_of(name.get<std::string>()));
  }
  return t;
}

}  // namespace

ainf::AinfOperations parse_ainf(const json& j, const std::string& where) {
  AinfHeader h = parse_ainf_header(j, where);
  ainf::AinfOperations A(h.complex, h.product, h.dimL, h.monoid, h.E0, h.e0);
  const gcx::GradedSpace& S = *h.complex.space();
  if (j.contains("ops")) {
    const json& ops = j["ops"];
    if (!ops.is_array()) throw SchemaError(where + "/ops", "expected array");
    std::map<ainf::GKKey, ainf::RatOp> grouped;
    for (size_t i = 0; i < ops.size(); ++i) {
      const std::string w = where + "/ops/" + std::to_string(i);
      long long k = int_field(ops[i], "k", w);
      const json& bj = field(ops[i], "beta", w);
      nov::MonoidElem beta{rat_field(bj, "E", w + "/beta"), int_field(bj, "mu", w + "/beta")};
      const json& entries = field(ops[i], "entries", w);
      if (!entries.is_array()) throw SchemaError(w + "/entries", "expected array");
      auto& op = grouped[ainf::GKKey{k, beta}];
      for (size_t e = 0; e < entries.size(); ++e) {
        const std::string we = w + "/entries/" + std::to_string(e);
        ainf::Tuple t = parse_inputs(field(entries[e], "inputs", we), S, we + "/inputs");
        int out = S.index_of(str_field(entries[e], "output", we));
        op[t][out] = rat_field(entries[e], "coeff", we);
      }
    }
    for (auto& [key, op] : grouped) {
      try {
        A.set_op(key.k, key.beta, std::move(op));
      } catch (const Error& e) {
        throw SchemaError(where + "/ops", e.what());
      }
    }
  }
  return A;
}

json ainf_to_json(const ainf::AinfOperations& A) {
  json out = ainf_header_to_json(A.space(), A.product(), A.dimL(), A.monoid(), A.E0(), A.e0());
  const gcx::GradedSpace& S = *A.space().space();
  json ops = json::array();
  for (const auto& [key, op] : A.ops()) {
    json entries = json::array();
    for (const auto& [t, vec] : op)
      for (const auto& [o, v] : vec) {
        json inputs = json::array();
        for (int i : t) inputs.push_back(S.name(i));
        entries.push_back(
            {{"inputs", inputs}, {"output", S.name(o)}, {"coeff", rational_str(v)}});
      }
    ops.push_back({{"k", key.k},
                   {"beta", {{"E", rational_str(key.beta.energy)}, {"mu", key.beta.mu}}},
                   {"entries", entries}});
  }
  out["ops"] = ops;
  return out;
}

namespace {

poly::PiecewisePoly parse_piecewise(const json& j, const std::string& where) {
  const json& bj = field(j, "breaks", where);
  if (!bj.is_array() || bj.size() < 2) throw SchemaError(where + "/breaks", "need >= 2 breaks");
  std::vector<Rational> breaks;
  for (const auto& b : bj) {
    if (!b.is_string()) throw SchemaError(where + "/breaks", "expected rational strings");
    breaks.push_back(parse_rational(b.get<std::string>(), where + "/breaks"));
  }
  const json& pj = field(j, "pieces", where);
  if (!pj.is_array() || pj.size() + 1 != breaks.size())
    throw SchemaError(where + "/pieces", "need one piece per interval");
  std::vector<poly::Polynomial> pieces;
  for (const auto& p : pj) {
    if (!p.is_array()) throw SchemaError(where + "/pieces", "expected coefficient arrays");
    std::vector<Rational> coeffs;
    for (const auto& c : p) {
      if (!c.is_string()) throw SchemaError(where + "/pieces", "expected rational strings");
      coeffs.push_back(parse_rational(c.get<std::string>(), where + "/pieces"));
    }
    pieces.push_back(poly::Polynomial(std::move(coeffs)));
  }
  try {
    return poly::PiecewisePoly(std::move(breaks), std::move(pieces));
  } catch (const Error& e) {
    throw SchemaError(where, e.what());
  }
}

json piecewise_to_json(const poly::PiecewisePoly& p) {
  json breaks = json::array();
  for (const auto& b : p.breaks()) breaks.push_back(rational_str(b));
  json pieces = json::array();
  for (const auto& piece : p.pieces()) {
    json coeffs = json::array();
    for (const auto& c : piece.coeffs()) coeffs.push_back(rational_str(c));
    pieces.push_back(coeffs);
  }
  return {{"breaks", breaks}, {"pieces", pieces}};
}

void parse_family_table(const json& j, const gcx::GradedSpace& S, ainf::PseudoIsotopy& I,
                        bool is_m, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where, "expected array");
  std::map<ainf::GKKey, ainf::PolyOp> grouped;
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "/" + std::to_string(i);
    long long k = int_field(j[i], "k", w);
    const json& bj = field(j[i], "beta", w);
    nov::MonoidElem beta{rat_field(bj, "E", w + "/beta"), int_field(bj, "mu", w + "/beta")};
    const json& entries = field(j[i], "entries", w);
    auto& op = grouped[ainf::GKKey{k, beta}];
    for (size_t e = 0; e < entries.size(); ++e) {
      const std::string we = w + "/entries/" + std::to_string(e);
      ainf::Tuple t = parse_inputs(field(entries[e], "inputs", we), S, we + "/inputs");
      int out = S.index_of(str_field(entries[e], "output", we));
      op[t].emplace(out, parse_piecewise(entries[e], we));
    }
  }
  for (auto& [key, op] : grouped) {
    try {
      if (is_m)
        I.set_m(key.k, key.beta, std::move(op));
      else
        I.set_c(key.k, key.beta, std::move(op));
    } catch (const Error& e) {
      throw SchemaError(where, e.what());
    }
  }
}

json family_table_to_json(const ainf::PseudoIsotopy& I,
                          const std::map<ainf::GKKey, ainf::PolyOp>& table) {
  const gcx::GradedSpace& S = *I.space().space();
  json out = json::array();
  for (const auto& [key, op] : table) {
    json entries = json::array();
    for (const auto& [t, vec] : op)
      for (const auto& [o, pw] : vec) {
        json inputs = json::array();
        for (int i : t) inputs.push_back(S.name(i));
        json e = piecewise_to_json(pw);
        e["inputs"] = inputs;
        e["output"] = S.name(o);
        entries.push_back(e);
      }
    out.push_back({{"k", key.k},
                   {"beta", {{"E", rational_str(key.beta.energy)}, {"mu", key.beta.mu}}},
                   {"entries", entries}});
  }
  return out;
}

}  // namespace

ainf::PseudoIsotopy parse_isotopy(const json& j, const std::string& where) {
  AinfHeader h = parse_ainf_header(j, where);
  const json& dj = field(j, "domain", where);
  if (!dj.is_array() || dj.size() != 2) throw SchemaError(where + "/domain", "expected [lo,hi]");
  Rational lo = parse_rational(dj[0].get<std::string>(), where + "/domain");
  Rational hi = parse_rational(dj[1].get<std::string>(), where + "/domain");
  ainf::PseudoIsotopy I(h.complex, h.product, h.dimL, h.monoid, h.E0, h.e0, lo, hi);
  if (j.contains("mt"))
    parse_family_table(j["mt"], *h.complex.space(), I, true, where + "/mt");
  if (j.contains("ct"))
    parse_family_table(j["ct"], *h.complex.space(), I, false, where + "/ct");
  return I;
}

json isotopy_to_json(const ainf::PseudoIsotopy& I) {
  json out = ainf_header_to_json(I.space(), I.product(), I.dimL(), I.monoid(), I.E0(), I.e0());
  out["domain"] = json::array({rational_str(I.t_lo()), rational_str(I.t_hi())});
  out["mt"] = family_table_to_json(I, I.mt());
  out["ct"] = family_table_to_json(I, I.ct());
  return out;
}

FloerTower parse_floer_tower(const json& j, const std::string& where) {
  FloerTower out;
  const json& stages = field(j, "stages", where);
  if (!stages.is_array() || stages.empty())
    throw SchemaError(where + "/stages", "expected nonempty array");
  for (size_t i = 0; i < stages.size(); ++i)
    out.stages.push_back(
        parse_ksystem(stages[i], where + "/stages/" + std::to_string(i)).complex);
  const json& maps = field(j, "maps", where);
  if (!maps.is_array() || maps.size() + 1 != stages.size())
    throw SchemaError(where + "/maps", "need one map per consecutive pair");
  for (size_t i = 0; i < maps.size(); ++i) {
    auto src = std::make_shared<floer::PartialComplex>(out.stages[i]);
    auto tgt = std::make_shared<floer::PartialComplex>(
        floer::energy_cut(out.stages[i + 1], out.stages[i].cut()));
    out.maps.push_back(
        parse_map(maps[i], src, tgt, where + "/maps/" + std::to_string(i)));
  }
  return out;
}

AinfTower parse_ainf_tower(const json& j, const std::string& where) {
  AinfTower out;
  const json& stages = field(j, "stages", where);
  if (!stages.is_array() || stages.empty())
    throw SchemaError(where + "/stages", "expected nonempty array");
  for (size_t i = 0; i < stages.size(); ++i)
    out.stages.push_back(parse_ainf(stages[i], where + "/stages/" + std::to_string(i)));
  const json& isotopies = field(j, "isotopies", where);
  if (!isotopies.is_array() || isotopies.size() + 1 != stages.size())
    throw SchemaError(where + "/isotopies", "need one isotopy per consecutive pair");
  for (size_t i = 0; i < isotopies.size(); ++i)
    out.isotopies.push_back(
        parse_isotopy(isotopies[i], where + "/isotopies/" + std::to_string(i)));
  return out;
}

}  // namespace filtalg::io
