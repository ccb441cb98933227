#ifndef FILTALG_FLOER_HPP
#define FILTALG_FLOER_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "filtalg/gradecx.hpp"
#include "filtalg/novikov.hpp"

namespace filtalg::floer {

// One critical label: action level, Maslov grading, the dimension entering
// sign formulas, and the coefficient complex (raw differential; the sign
// twist is applied by this module).
struct CriticalLabel {
  std::string id;
  Rational energy;
  long long maslov = 0;
  int dimR = 0;
  gcx::CochainComplex complex;
};

class CriticalData {
 public:
  CriticalData() = default;
  explicit CriticalData(std::vector<CriticalLabel> labels);

  int size() const { return static_cast<int>(labels_.size()); }
  const CriticalLabel& label(int i) const { return labels_[i]; }
  int index_of(const std::string& id) const;

  friend bool operator==(const CriticalData& a, const CriticalData& b);

 private:
  std::vector<CriticalLabel> labels_;
};

bool operator==(const CriticalLabel& a, const CriticalLabel& b);

using CriticalPtr = std::shared_ptr<const CriticalData>;

struct PairKey {
  int from = 0;
  int to = 0;
  friend auto operator<=>(const PairKey&, const PairKey&) = default;
  friend bool operator==(const PairKey&, const PairKey&) = default;
};

// d0 twisted by (-1)^{dimR + maslov + 1 + deg h}.
gcx::GradedMap signed_d0(const CriticalLabel& l);
gcx::CochainComplex signed_complex(const CriticalLabel& l);

// Connecting maps m_{1;to,from} for 0 < E(to) - E(from) <= cut, of raw
// degree 1 - maslov(to) + maslov(from).
class PartialComplex {
 public:
  PartialComplex() = default;
  PartialComplex(CriticalPtr critical, Rational cut);

  const CriticalPtr& critical() const { return critical_; }
  const Rational& cut() const { return cut_; }
  const std::map<PairKey, gcx::GradedMap>& maps() const { return maps_; }

  Rational gap(const PairKey& p) const;
  void set_map(int from, int to, gcx::GradedMap m);
  const gcx::GradedMap* map_at(int from, int to) const;

  friend bool operator==(const PartialComplex&, const PartialComplex&) = default;

 private:
  CriticalPtr critical_;
  Rational cut_;
  std::map<PairKey, gcx::GradedMap> maps_;
};

using ComplexPtr = std::shared_ptr<const PartialComplex>;

// Morphism table: entries for -loss <= E(to) - E(from) <= cut - loss, raw
// degree maslov(from) - maslov(to).  When source and target share critical
// data the equal-energy block is the identity (stored explicitly); nonzero
// equal-energy off-diagonal entries are rejected.
class PartialMap {
 public:
  PartialMap() = default;
  PartialMap(ComplexPtr source, ComplexPtr target, Rational cut, Rational loss);

  const ComplexPtr& source() const { return source_; }
  const ComplexPtr& target() const { return target_; }
  const Rational& cut() const { return cut_; }
  const Rational& loss() const { return loss_; }
  const std::map<PairKey, gcx::GradedMap>& entries() const { return entries_; }

  Rational gap(const PairKey& p) const;
  void set_entry(int from, int to, gcx::GradedMap m);
  const gcx::GradedMap* entry_at(int from, int to) const;
  bool same_critical() const;

  friend bool operator==(const PartialMap&, const PartialMap&) = default;

 private:
  ComplexPtr source_, target_;
  Rational cut_, loss_;
  std::map<PairKey, gcx::GradedMap> entries_;
};

PartialMap identity_map(ComplexPtr X);

// Homotopy between `from` and `to` (maps with common source, target, cut
// and loss); entries of raw degree maslov(from) - maslov(to) - 1.
class PartialHomotopy {
 public:
  PartialHomotopy() = default;
  PartialHomotopy(PartialMap from, PartialMap to);

  const PartialMap& from() const { return from_; }
  const PartialMap& to() const { return to_; }
  const Rational& cut() const { return from_.cut(); }
  const Rational& loss() const { return from_.loss(); }
  const std::map<PairKey, gcx::GradedMap>& entries() const { return entries_; }

  void set_entry(int from_label, int to_label, gcx::GradedMap m);
  const gcx::GradedMap* entry_at(int from_label, int to_label) const;

  friend bool operator==(const PartialHomotopy&, const PartialHomotopy&) = default;

 private:
  PartialMap from_, to_;
  std::map<PairKey, gcx::GradedMap> entries_;
};

// ---- checks ----------------------------------------------------------

struct DefectEntry {
  PairKey pair;
  std::string relation;  // which relation failed, for reports
  gcx::GradedMap residual;
};

struct DefectReport {
  std::vector<DefectEntry> entries;
  bool pass() const { return entries.empty(); }
};

// d0 m + m d0 + sum m m = 0 for every pair with 0 < gap <= cut.
DefectReport check_partial_complex(const PartialComplex& X);

// d0 psi - psi d0 + sum m2 psi - sum psi m1 = 0 on the allowed range.
DefectReport check_cochain_map(const PartialMap& psi);

// d0 h + h d0 + sum h m1 + sum m2 h - psi_to + psi_from = 0.
DefectReport check_homotopy(const PartialHomotopy& h);

// ---- energy cut ------------------------------------------------------

PartialComplex energy_cut(const PartialComplex& X, const Rational& E);
PartialMap energy_cut(const PartialMap& psi, const Rational& E);
PartialHomotopy energy_cut(const PartialHomotopy& h, const Rational& E);

// ---- assembled Novikov differential ---------------------------------

// One block per (from,to) pair: T^{gap} e^{(mu(to)-mu(from))/2} m_{to,from},
// plus the signed d0 on the diagonal.
struct NovikovBlockMatrix {
  CriticalPtr critical;
  std::map<PairKey, std::map<std::pair<int, int>, nov::NovikovElement>> blocks;
};

NovikovBlockMatrix assemble_differential(const PartialComplex& X);
NovikovBlockMatrix multiply(const NovikovBlockMatrix& a, const NovikovBlockMatrix& b);
// Nonzero blocks of gap <= cut (the mod-T^cut residual of the square).
std::vector<PairKey> nonzero_blocks_mod(const NovikovBlockMatrix& m, const Rational& cut);

// ---- composition -----------------------------------------------------

// psi32 o psi21 (first argument applied first); losses add, the cut is
// min(cut21, cut32 + loss21).
PartialMap compose_maps(const PartialMap& psi21, const PartialMap& psi32);

// ---- promotion -------------------------------------------------------

struct PromotionCertificate {
  std::string context;
  std::vector<std::pair<int, Rational>> functional;  // sparse left-null row
};

struct PromotionObstructed : Error {
  PromotionCertificate certificate;
  PromotionObstructed(const std::string& what, PromotionCertificate cert)
      : Error(what), certificate(std::move(cert)) {}
};

// Extend X1 (cut E1) to the cut of X2 along a loss-0 map psi congruent to
// the identity, producing the promoted complex and promoted map.  The new
// connecting map at each level is m2 + (d2 psi - psi d1) and the new map
// entry is zero; an exact-solver fallback covers inputs for which the
// closed form fails to satisfy the relations.
std::pair<PartialComplex, PartialMap> promote_complex_with_map(const PartialComplex& X1,
                                                               const PartialComplex& X2,
                                                               const PartialMap& psi);

// Homotopy-commutative square data: psi21 (bottom), psi21_top (top),
// psi2 (right, cut E2), psi1 (left, cut E1), and h between
// psi21_top o psi1 ("from") and psi2 o psi21 ("to") at cut E1.
struct MapPromotionSquare {
  PartialMap psi21;
  PartialMap psi21_top;
  PartialMap psi2;
  PartialMap psi1;
  PartialHomotopy h;
};

// Promote psi1 and h to the common cut E2 of the square.
std::pair<PartialMap, PartialHomotopy> promote_map(const MapPromotionSquare& sq);

// Homotopy-of-homotopies table for the tower promotion.
class SecondHomotopy {
 public:
  SecondHomotopy() = default;
  SecondHomotopy(ComplexPtr source, ComplexPtr target, Rational cut, Rational loss);

  const ComplexPtr& source() const { return source_; }
  const ComplexPtr& target() const { return target_; }
  const Rational& cut() const { return cut_; }
  const Rational& loss() const { return loss_; }
  const std::map<PairKey, gcx::GradedMap>& entries() const { return entries_; }
  void set_entry(int from_label, int to_label, gcx::GradedMap m);

  friend bool operator==(const SecondHomotopy&, const SecondHomotopy&) = default;

 private:
  ComplexPtr source_, target_;
  Rational cut_, loss_;
  std::map<PairKey, gcx::GradedMap> entries_;
};

// Tower data: complexes F1i, F1ip1, F2i, F2ip1 all at cut E^{i+1};
// psi1, psi2 the loss-0 tower maps; n's the vertical maps; h_ab_i at cut
// E^i (to be promoted); h_ab_ip1, h_a, h_b at cut E^{i+1}; H satisfies the
// square relation at cut E^i.
struct HomotopyPromotionData {
  PartialMap psi1, psi2;
  PartialMap na_i, nb_i, na_ip1, nb_ip1;
  PartialHomotopy h_ab_i;
  PartialHomotopy h_ab_ip1;
  PartialHomotopy h_a, h_b;
  SecondHomotopy H;
};

// d2 H - H d1 - (h_b - h_a + h_ab_ip1 psi1 - psi2 h_ab_i) on the range.
DefectReport check_second_homotopy(const HomotopyPromotionData& d,
                                   const PartialHomotopy& h_ab_i, const SecondHomotopy& H);

std::pair<PartialHomotopy, SecondHomotopy> promote_homotopy(const HomotopyPromotionData& d);

// ---- homotopy limit ---------------------------------------------------

struct HomotopyLimitResult {
  PartialComplex limit;
  std::vector<PartialMap> promoted_maps;
  // stage agreement: energy cut of the stage-(k+1) state at E^k equals the
  // stage-k state, entry for entry
  std::vector<bool> certificates;
};

// tower[i] at cut E^i, maps[i] : tower[i] -> energy_cut(tower[i+1], E^i).
HomotopyLimitResult homotopy_limit(const std::vector<PartialComplex>& tower,
                                   const std::vector<PartialMap>& maps);

// ---- Morse systems ----------------------------------------------------

struct MorseKSystem {
  CriticalPtr critical;                       // degree-0 complexes, d0 = 0
  std::map<PairKey, gcx::GradedMap> counts;   // signed 0-dimensional counts
  std::map<PairKey, long long> dims;          // formal dimensions
};

struct MorseReport {
  std::vector<std::string> violations;
  bool pass() const { return violations.empty(); }
};

MorseReport morse_check(const MorseKSystem& K);

// View the dimension-0 count matrices as a partial complex at the given cut.
PartialComplex morse_to_partial(const MorseKSystem& K, const Rational& cut);

// ---- sign calculus ----------------------------------------------------

// (-1)^eps with eps = (mu - mu_minus) dimM - (mu - mu_minus - 1) dimR_mid,
// dimM = mu_plus - mu - 1 + dimR_plus.
int boundary_sign(long long mu_minus, long long mu, long long mu_plus, long long dimR_mid,
                  long long dimR_plus);

// (-1)^{(dimX1 - dimY)(dimX2 - dimY)}
int fiber_swap_sign(long long dimX1, long long dimX2, long long dimY);

// Every stored pair's (energy gap, Maslov gap) lies in G.
bool check_gapped(const PartialComplex& X, const nov::DiscreteSubmonoid& G);

}  // namespace filtalg::floer

#endif
