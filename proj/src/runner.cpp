#include "filtalg/runner.hpp"

#include <sstream>

#include "filtalg/corners.hpp"
#include "filtalg/json_io.hpp"
#include "filtalg/trees.hpp"

namespace filtalg::cli {

using io::json;

namespace {

json defect_to_json(const floer::DefectReport& rep, const floer::CriticalData& Cs,
                    const floer::CriticalData& Ct) {
  json out = json::array();
  for (const auto& d : rep.entries)
    out.push_back({{"from", Cs.label(d.pair.from).id},
                   {"to", Ct.label(d.pair.to).id},
                   {"relation", d.relation}});
  return out;
}

json run_check_ksystem(const RunConfig& cfg) {
  io::KSystemFile file = io::parse_ksystem(io::load_file(cfg.input), cfg.input);
  json report{{"command", "check-ksystem"}, {"input", cfg.input}};
  bool pass = true;
  if (file.morse) {
    floer::MorseReport rep = floer::morse_check(*file.morse);
    report["kind"] = "morse";
    report["violations"] = rep.violations;
    pass = rep.pass();
  } else {
    floer::DefectReport rep = floer::check_partial_complex(file.complex);
    report["kind"] = "partial-complex";
    report["defects"] =
        defect_to_json(rep, *file.complex.critical(), *file.complex.critical());
    // independent route: square the assembled Novikov differential
    auto d = floer::assemble_differential(file.complex);
    auto bad = floer::nonzero_blocks_mod(floer::multiply(d, d), file.complex.cut());
    json blocks = json::array();
    for (const auto& p : bad)
      blocks.push_back({{"from", file.complex.critical()->label(p.from).id},
                        {"to", file.complex.critical()->label(p.to).id}});
    report["assembled_square_nonzero_blocks"] = blocks;
    pass = rep.pass() && bad.empty();
  }
  report["pass"] = pass;
  return report;
}

json run_check_ainf(const RunConfig& cfg) {
  ainf::AinfOperations A = io::parse_ainf(io::load_file(cfg.input), cfg.input);
  ainf::AinfReport rep = ainf::check_partial_ainf(A);
  return json{{"command", "check-ainf"},
              {"input", cfg.input},
              {"failures", rep.failures},
              {"pass", rep.pass()}};
}

json run_check_isotopy(const RunConfig& cfg) {
  ainf::PseudoIsotopy I = io::parse_isotopy(io::load_file(cfg.input), cfg.input);
  ainf::IsotopyReport rep = ainf::check_pseudoisotopy(I);
  return json{{"command", "check-isotopy"},
              {"input", cfg.input},
              {"continuity", rep.continuity},
              {"per_t", rep.per_t},
              {"ode", rep.ode},
              {"vanishing", rep.vanishing},
              {"pass", rep.pass()}};
}

json run_promote_floer(const RunConfig& cfg) {
  io::KSystemFile f1 = io::parse_ksystem(io::load_file(cfg.from), cfg.from);
  io::KSystemFile f2 = io::parse_ksystem(io::load_file(cfg.to), cfg.to);
  floer::PartialComplex X2 = f2.complex;
  if (cfg.has_final_cut) X2 = floer::energy_cut(X2, cfg.final_cut);
  auto src = std::make_shared<floer::PartialComplex>(f1.complex);
  auto tgt = std::make_shared<floer::PartialComplex>(
      floer::energy_cut(X2, f1.complex.cut()));
  floer::PartialMap psi = io::parse_map(io::load_file(cfg.map), src, tgt, cfg.map);
  auto [Xp, psip] = floer::promote_complex_with_map(f1.complex, X2, psi);
  json report{{"command", "promote-floer"},
              {"pass", true},
              {"promoted", io::ksystem_to_json(Xp)},
              {"promoted_map", io::map_to_json(psip)},
              {"round_trip",
               floer::energy_cut(Xp, f1.complex.cut()) == f1.complex}};
  return report;
}

json run_promote_ainf(const RunConfig& cfg) {
  ainf::AinfOperations m0 = io::parse_ainf(io::load_file(cfg.from), cfg.from);
  ainf::AinfOperations m1 = io::parse_ainf(io::load_file(cfg.to), cfg.to);
  if (cfg.has_final_cut) m1 = ainf::energy_cut(m1, cfg.final_cut);
  ainf::PseudoIsotopy I = io::parse_isotopy(io::load_file(cfg.iso), cfg.iso);
  auto [m0p, Ip] = ainf::promote_via_isotopy(m0, m1, I);
  return json{{"command", "promote-ainf"},
              {"pass", true},
              {"promoted", io::ainf_to_json(m0p)},
              {"promoted_isotopy", io::isotopy_to_json(Ip)},
              {"round_trip", ainf::energy_cut(m0p, m0.E0()) == m0}};
}

json run_limit(const RunConfig& cfg) {
  json j = io::load_file(cfg.input);
  if (j.contains("isotopies")) {
    io::AinfTower tower = io::parse_ainf_tower(j, cfg.input);
    ainf::AinfLimitResult res = ainf::homotopy_limit_ainf(tower.stages, tower.isotopies);
    return json{{"command", "limit"},
                {"kind", "ainf"},
                {"pass", true},
                {"certificates", res.certificates},
                {"limit", io::ainf_to_json(res.limit)}};
  }
  io::FloerTower tower = io::parse_floer_tower(j, cfg.input);
  floer::HomotopyLimitResult res = floer::homotopy_limit(tower.stages, tower.maps);
  bool certs = true;
  for (bool c : res.certificates) certs = certs && c;
  return json{{"command", "limit"},
              {"kind", "floer"},
              {"pass", certs},
              {"certificates", res.certificates},
              {"limit", io::ksystem_to_json(res.limit)}};
}

json run_trees(const RunConfig& cfg) {
  nov::DiscreteSubmonoid G;
  if (!cfg.monoid_file.empty())
    G = io::parse_monoid(io::load_file(cfg.monoid_file), cfg.monoid_file);
  nov::MonoidElem beta = io::parse_beta_flag(cfg.beta);
  auto trees_list = trees::enumerate_trees(G, cfg.k, beta);
  json lines = json::array();
  for (const auto& t : trees_list)
    lines.push_back({{"code", t.code()},
                     {"inputs", t.num_inputs()},
                     {"codim", trees::corner_codim(t)},
                     {"vertices", t.num_interior_vertices()}});
  return json{{"command", "trees"},
              {"k", cfg.k},
              {"beta", beta.str()},
              {"count", trees_list.size()},
              {"trees", lines},
              {"pass", true}};
}

json run_corners_verify(const RunConfig& cfg) {
  json report{{"command", "corners-verify"}, {"n", cfg.n}, {"k", cfg.k}, {"l", cfg.l}};
  auto comps = corners::normalized_corner(cfg.n, cfg.k);
  report["components"] = comps.size();
  auto cov = corners::covering_map(cfg.n, cfg.l, cfg.k);
  json hist = json::object();
  for (const auto& [size, count] : cov.fiber_histogram)
    hist[std::to_string(size)] = count;
  report["fiber_histogram"] = hist;
  report["surjective"] = cov.surjective;
  report["fibers_uniform"] = cov.fibers_uniform;
  bool square = true;
  if (cfg.k + cfg.l + 1 <= cfg.n)
    square = corners::covering_square_check(cfg.n, 1, cfg.k, cfg.l);
  report["square_commutes"] = square;
  report["pass"] = cov.surjective && cov.fibers_uniform && square;
  return report;
}

json run_corners_smooth(const RunConfig& cfg) {
  corners::SmoothingMap S{cfg.k};
  auto rep =
      corners::smoothing_property_check(S, static_cast<int>(cfg.samples), cfg.tol);
  return json{{"command", "corners-smooth"},
              {"k", cfg.k},
              {"samples", cfg.samples},
              {"tol", cfg.tol},
              {"max_homogeneity", rep.max_homogeneity},
              {"max_equivariance", rep.max_equivariance},
              {"max_boundary", rep.max_boundary},
              {"min_injectivity_gap", rep.min_injectivity_gap},
              {"pass", rep.pass}};
}

json run_admissible(const RunConfig& cfg) {
  json report{{"command", "admissible-check"}};
  bool pass = true;
  auto one = [&](corners::CoordChange change, const char* name) {
    auto rep = corners::admissible_coord_check(change);
    json r{{"decay_ok", rep.decay_ok},
           {"counterexample_ok", rep.counterexample_ok},
           {"pass", rep.pass}};
    json env = json::array();
    for (double c : rep.envelope_constants) env.push_back(c);
    r["envelope_constants"] = env;
    if (change == corners::CoordChange::add_one)
      r["second_derivative_at_zero"] = rep.second_derivative_at_zero;
    report[name] = r;
    pass = pass && rep.pass;
  };
  one(corners::CoordChange::identity, "identity");
  one(corners::CoordChange::add_one, "add_one");
  one(corners::CoordChange::add_exp, "add_exp");
  report["pass"] = pass;
  return report;
}

}  // namespace

RunResult run(const RunConfig& cfg) {
  RunResult res;
  try {
    if (cfg.command == "check-ksystem")
      res.report = run_check_ksystem(cfg);
    else if (cfg.command == "check-ainf")
      res.report = run_check_ainf(cfg);
    else if (cfg.command == "check-isotopy")
      res.report = run_check_isotopy(cfg);
    else if (cfg.command == "promote-floer")
      res.report = run_promote_floer(cfg);
    else if (cfg.command == "promote-ainf")
      res.report = run_promote_ainf(cfg);
    else if (cfg.command == "limit")
      res.report = run_limit(cfg);
    else if (cfg.command == "trees")
      res.report = run_trees(cfg);
    else if (cfg.command == "corners-verify")
      res.report = run_corners_verify(cfg);
    else if (cfg.command == "corners-smooth")
      res.report = run_corners_smooth(cfg);
    else if (cfg.command == "admissible-check")
      res.report = run_admissible(cfg);
    else {
      res.report = {{"error", "unknown command '" + cfg.command + "'"}};
      res.exit_code = kInputError;
      return res;
    }
    res.exit_code = res.report.value("pass", false) ? kPass : kCheckFailed;
  } catch (const floer::PromotionObstructed& e) {
    json functional = json::array();
    for (const auto& [i, v] : e.certificate.functional)
      functional.push_back(json::array({i, rational_str(v)}));
    res.report = {{"error", e.what()},
                  {"certificate", {{"context", e.certificate.context},
                                   {"functional", functional}}}};
    res.exit_code = kObstructed;
  } catch (const SchemaError& e) {
    res.report = {{"error", e.what()}, {"where", e.where}};
    res.exit_code = kInputError;
  } catch (const IOError& e) {
    res.report = {{"error", e.what()}};
    res.exit_code = kInputError;
  } catch (const Error& e) {
    res.report = {{"error", e.what()}};
    res.exit_code = kInputError;
  }
  if (!cfg.output.empty()) io::write_file(cfg.output, res.report);
  return res;
}

}  // namespace filtalg::cli
