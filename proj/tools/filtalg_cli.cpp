// Command-line front end: file checks, promotions, enumeration, and the
// corner/smoothing verifiers.  Exit codes: 0 pass, 1 check failure,
// 2 input error, 3 obstruction.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "filtalg/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"exact filtered-complex and operadic verification toolkit"};
  app.require_subcommand(1);

  filtalg::cli::RunConfig cfg;
  std::string final_cut;

  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--output", cfg.output, "write the JSON report to this file");
  };

  auto* check = app.add_subcommand("check", "verify a structure file");
  check->require_subcommand(1);
  auto* check_ks = check->add_subcommand("ksystem", "partial complex or Morse system file");
  check_ks->add_option("input", cfg.input, "K-system JSON file")->required();
  add_output(check_ks);
  auto* check_ainf = check->add_subcommand("ainf", "operation table file");
  check_ainf->add_option("input", cfg.input, "JSON file")->required();
  add_output(check_ainf);
  auto* check_iso = check->add_subcommand("isotopy", "pseudo-isotopy file");
  check_iso->add_option("input", cfg.input, "JSON file")->required();
  add_output(check_iso);

  auto* promote = app.add_subcommand("promote", "extend a structure to a higher cut level");
  promote->require_subcommand(1);
  auto* prom_floer = promote->add_subcommand("floer", "promote a partial complex along a map");
  prom_floer->add_option("--from", cfg.from, "lower-cut K-system file")->required();
  prom_floer->add_option("--to", cfg.to, "higher-cut K-system file")->required();
  prom_floer->add_option("--map", cfg.map, "comparison map file")->required();
  prom_floer->add_option("--final-cut", final_cut, "promote only up to this level (p/q)");
  add_output(prom_floer);
  auto* prom_ainf = promote->add_subcommand("ainf", "promote operations along an isotopy");
  prom_ainf->add_option("--from", cfg.from, "lower-cut operations file")->required();
  prom_ainf->add_option("--to", cfg.to, "higher-cut operations file")->required();
  prom_ainf->add_option("--iso", cfg.iso, "pseudo-isotopy file")->required();
  prom_ainf->add_option("--final-cut", final_cut, "promote only up to this level (p/q)");
  add_output(prom_ainf);

  auto* limit = app.add_subcommand("limit", "assemble a tower by iterated promotion");
  limit->add_option("input", cfg.input, "tower JSON file")->required();
  add_output(limit);

  auto* trees = app.add_subcommand("trees", "decorated tree enumeration");
  trees->require_subcommand(1);
  auto* trees_enum = trees->add_subcommand("enumerate", "list the stable decorated trees");
  trees_enum->add_option("--k", cfg.k, "number of inputs")->required();
  trees_enum->add_option("--beta", cfg.beta, "total decoration \"E:p/q,mu:n\"");
  trees_enum->add_option("--monoid", cfg.monoid_file, "gap monoid JSON file");
  add_output(trees_enum);

  auto* corners = app.add_subcommand("corners", "cube-model corner calculus");
  corners->require_subcommand(1);
  auto* cor_verify = corners->add_subcommand("verify", "component counts and covering maps");
  cor_verify->add_option("--n", cfg.n, "cube dimension")->required();
  cor_verify->add_option("--k", cfg.k, "corner codimension")->required();
  cor_verify->add_option("--l", cfg.l, "second-stage codimension")->required();
  add_output(cor_verify);
  auto* cor_smooth = corners->add_subcommand("smooth", "corner-smoothing property check");
  cor_smooth->add_option("--k", cfg.k, "number of boundary coordinates")->required();
  cor_smooth->add_option("--samples", cfg.samples, "sample count");
  cor_smooth->add_option("--tol", cfg.tol, "violation tolerance");
  cor_smooth->add_option("--seed", cfg.seed, "unused; sampling is quasi-random");
  add_output(cor_smooth);

  auto* admissible = app.add_subcommand("admissible", "boundary-coordinate numerics");
  admissible->require_subcommand(1);
  auto* adm_check = admissible->add_subcommand("check", "decay sweep and the model derivative");
  add_output(adm_check);

  CLI11_PARSE(app, argc, argv);

  if (check_ks->parsed())
    cfg.command = "check-ksystem";
  else if (check_ainf->parsed())
    cfg.command = "check-ainf";
  else if (check_iso->parsed())
    cfg.command = "check-isotopy";
  else if (prom_floer->parsed())
    cfg.command = "promote-floer";
  else if (prom_ainf->parsed())
    cfg.command = "promote-ainf";
  else if (limit->parsed())
    cfg.command = "limit";
  else if (trees_enum->parsed())
    cfg.command = "trees";
  else if (cor_verify->parsed())
    cfg.command = "corners-verify";
  else if (cor_smooth->parsed())
    cfg.command = "corners-smooth";
  else if (adm_check->parsed())
    cfg.command = "admissible-check";

  if (!final_cut.empty()) {
    try {
      cfg.final_cut = filtalg::parse_rational(final_cut, "--final-cut");
      cfg.has_final_cut = true;
    } catch (const filtalg::Error& e) {
      std::cerr << e.what() << "\n";
      return filtalg::cli::kInputError;
    }
  }

  filtalg::cli::RunResult res = filtalg::cli::run(cfg);
  std::cout << res.report.dump(2) << "\n";
  return res.exit_code;
}
