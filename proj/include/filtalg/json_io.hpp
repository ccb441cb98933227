#ifndef FILTALG_JSON_IO_HPP
#define FILTALG_JSON_IO_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "filtalg/ainf.hpp"
#include "filtalg/floer.hpp"
#include "filtalg/novikov.hpp"

namespace filtalg::io {

using json = nlohmann::json;

json load_file(const std::string& path);            // IOError / SchemaError
void write_file(const std::string& path, const json& j);

// rationals travel as "p/q" (or "p"); Novikov elements as
// [{"c":"p/q","T":"p/q","e":n}, ...]
json novikov_to_json(const nov::NovikovElement& x);
nov::NovikovElement parse_novikov(const json& j, const std::string& where);

nov::DiscreteSubmonoid parse_monoid(const json& j, const std::string& where);
json monoid_to_json(const nov::DiscreteSubmonoid& G);

nov::MonoidElem parse_beta_flag(const std::string& s);  // "E:p/q,mu:n"

struct KSystemFile {
  floer::PartialComplex complex;
  std::optional<floer::MorseKSystem> morse;
};

KSystemFile parse_ksystem(const json& j, const std::string& where = "ksystem");
json ksystem_to_json(const floer::PartialComplex& X);
json morse_to_json(const floer::MorseKSystem& K);

// entry tables only; endpoints supplied by the caller
floer::PartialMap parse_map(const json& j, floer::ComplexPtr source, floer::ComplexPtr target,
                            const std::string& where = "map");
json map_to_json(const floer::PartialMap& psi);

ainf::AinfOperations parse_ainf(const json& j, const std::string& where = "ainf");
json ainf_to_json(const ainf::AinfOperations& A);

ainf::PseudoIsotopy parse_isotopy(const json& j, const std::string& where = "isotopy");
json isotopy_to_json(const ainf::PseudoIsotopy& I);

struct FloerTower {
  std::vector<floer::PartialComplex> stages;
  std::vector<floer::PartialMap> maps;
};
FloerTower parse_floer_tower(const json& j, const std::string& where = "tower");

struct AinfTower {
  std::vector<ainf::AinfOperations> stages;
  std::vector<ainf::PseudoIsotopy> isotopies;
};
AinfTower parse_ainf_tower(const json& j, const std::string& where = "tower");

}  // namespace filtalg::io

#endif
