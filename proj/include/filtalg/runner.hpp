#ifndef FILTALG_RUNNER_HPP
#define FILTALG_RUNNER_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "filtalg/rational.hpp"

namespace filtalg::cli {

// Exit codes: 0 pass, 1 check failure, 2 input error, 3 obstruction.
enum ExitCode { kPass = 0, kCheckFailed = 1, kInputError = 2, kObstructed = 3 };

struct RunConfig {
  // check-ksystem, check-ainf, check-isotopy, promote-floer, promote-ainf,
  // limit, trees, corners-verify, corners-smooth, admissible-check
  std::string command;
  std::string input;       // primary input file
  std::string from, to, map, iso;  // promotion inputs
  std::string monoid_file;
  std::string output;      // report / result file; empty = stdout only
  bool has_final_cut = false;
  Rational final_cut;
  double tol = 1e-12;
  long long seed = 0;
  long long samples = 10000;
  int n = 0, k = 0, l = 0;
  std::string beta = "E:0,mu:0";
};

struct RunResult {
  int exit_code = kPass;
  nlohmann::json report;
};

RunResult run(const RunConfig& config);

}  // namespace filtalg::cli

#endif
