#ifndef FILTALG_CORNERS_HPP
#define FILTALG_CORNERS_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "filtalg/rational.hpp"

namespace filtalg::corners {

// A codimension-#A component of the normalized corner of [0,1]^n: the
// frozen coordinate set A with the chosen endpoint per frozen coordinate.
struct CornerComponent {
  std::vector<int> frozen;      // sorted, subset of 0..n-1
  std::vector<int> endpoint;    // same length, values in {0,1}

  friend bool operator==(const CornerComponent&, const CornerComponent&) = default;
  friend auto operator<=>(const CornerComponent&, const CornerComponent&) = default;
  std::string str() const;
};

// All binomial(n,k) * 2^k components, each carrying an (n-k)-cube.
// k > n yields the empty list.
std::vector<CornerComponent> normalized_corner(int n, int k);

// An element of the k-fold-then-l-fold iterated corner: the first-stage
// component and a second-stage component of the remaining cube.
struct IteratedCorner {
  CornerComponent first;   // codim k
  CornerComponent second;  // codim l, frozen set disjoint from first
  friend auto operator<=>(const IteratedCorner&, const IteratedCorner&) = default;
  friend bool operator==(const IteratedCorner&, const IteratedCorner&) = default;
};

struct CoveringMapResult {
  std::vector<std::pair<IteratedCorner, CornerComponent>> table;
  std::map<int, long long> fiber_histogram;  // fiber size -> count of targets
  bool surjective = false;
  bool fibers_uniform = false;  // all fibers of size binomial(k+l, l)
};

// The covering S_l(S_k(cube)) -> S_{k+l}(cube), (A,s),(B,s') -> (A u B, s u s').
CoveringMapResult covering_map(int n, int l, int k);

// Exact set-level commutation of the iterated covering square on every
// element of S_{k1}(S_{k2}(S_{k3}(cube))).
bool covering_square_check(int n, int k1, int k2, int k3);

// [-tau, 1+tau]^n with the clamping retraction onto [0,1]^n.
struct CollaredCube {
  int n = 0;
  Rational tau;
};

struct PointClass {
  int codim = 0;
  CornerComponent component;
};

// Which collar stratum contains x: coordinates <= 0 freeze at 0,
// coordinates >= 1 freeze at 1.  Throws OutOfDomain outside the collar.
PointClass classify_point(const CollaredCube& C, const std::vector<Rational>& x);

// Clamp to [0,1]^n.
std::vector<Rational> retract(const CollaredCube& C, const std::vector<Rational>& x);

// A face of the n-cube: (coordinate, endpoint).
struct Face {
  int coord = 0;
  int endpoint = 0;  // 0 or 1
  friend auto operator<=>(const Face&, const Face&) = default;
  friend bool operator==(const Face&, const Face&) = default;
};

// Partial collaring along a face set: per-coordinate interval
// [0 - tau*[face (i,0) collared], 1 + tau*[face (i,1) collared]].
struct PartialCollarRegion {
  int n = 0;
  Rational tau;
  std::vector<Rational> lo, hi;
  friend bool operator==(const PartialCollarRegion&, const PartialCollarRegion&) = default;
};

PartialCollarRegion collar_region(int n, const std::vector<Face>& faces, const Rational& tau);

// Collaring first along c1 then along c2 equals collaring along the union,
// as regions with retractions; requires c1, c2 disjoint.
bool partial_collar_commute(int n, const std::vector<Face>& c1, const std::vector<Face>& c2,
                            const Rational& tau);

// Homogeneous Perm(k)-equivariant model of the corner-smoothing map
// Phi_k : [0,inf)^k -> R^{k-1} x [0,inf), k <= 3.
struct SmoothingMap {
  int k = 1;
};

struct SmoothingValue {
  std::vector<double> x;  // k-1 slice coordinates
  double s = 0.0;         // boundary-defining coordinate
};

SmoothingValue smoothing_eval(const SmoothingMap& S, const std::vector<double>& t);

struct SmoothingReport {
  double max_homogeneity = 0.0;
  double max_equivariance = 0.0;
  double max_boundary = 0.0;
  double min_injectivity_gap = 0.0;  // min image distance over sampled distinct pairs
  bool pass = false;
};

// Deterministic quasi-random sampling of homogeneity (degree 1 on both
// components), Perm(k)-equivariance (sum-zero-hyperplane action on the
// slice factor), boundary-to-boundary, and sampled injectivity.
SmoothingReport smoothing_property_check(const SmoothingMap& S, int samples, double tol,
                                         bool parallel = true);

// Closed forms for the admissible-coordinate-change numerics: T' = T + f.
enum class CoordChange {
  identity,   // f = 0
  add_one,    // f = 1
  add_exp,    // f = e^{-T}
};

struct AdmissibleReport {
  // max over the sweep grid of |D^m (t'-t)| * e^{S/2}, orders m = 0..3
  std::array<double, 4> envelope_constants{};
  bool decay_ok = false;      // finite difference data fits the decaying envelope
  double second_derivative_at_zero = 0.0;  // of s' = s/(s+1) in s = 1/T coordinates
  bool counterexample_ok = false;          // |d2s'/ds2(0) + 2| <= 1e-6 (add_one only)
  bool pass = false;
};

// Finite-difference verification that t' - t and its S-derivatives decay
// exponentially in S = 1/t on [5, 40], plus the reproduction of the
// nonvanishing second derivative in s = 1/T coordinates for T' = T + 1.
AdmissibleReport admissible_coord_check(CoordChange change);

}  // namespace filtalg::corners

#endif
