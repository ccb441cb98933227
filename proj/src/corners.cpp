#include "filtalg/corners.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "filtalg/errors.hpp"

namespace filtalg::corners {

std::string CornerComponent::str() const {
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < frozen.size(); ++i) {
    if (i) os << ",";
    os << frozen[i] << ":" << endpoint[i];
  }
  os << "}";
  return os.str();
}

namespace {

void k_subsets(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    k_subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

std::vector<CornerComponent> components_of_subset(const std::vector<int>& A) {
  std::vector<CornerComponent> out;
  int k = static_cast<int>(A.size());
  for (int mask = 0; mask < (1 << k); ++mask) {
    CornerComponent c;
    c.frozen = A;
    c.endpoint.resize(k);
    for (int i = 0; i < k; ++i) c.endpoint[i] = (mask >> i) & 1;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

std::vector<CornerComponent> normalized_corner(int n, int k) {
  std::vector<CornerComponent> out;
  if (k < 0 || k > n) return out;
  std::vector<std::vector<int>> subsets;
  std::vector<int> cur;
  k_subsets(n, k, 0, cur, subsets);
  for (const auto& A : subsets)
    for (auto& c : components_of_subset(A)) out.push_back(std::move(c));
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

CornerComponent merge_components(const CornerComponent& a, const CornerComponent& b) {
  CornerComponent m;
  size_t i = 0, j = 0;
  while (i < a.frozen.size() || j < b.frozen.size()) {
    bool take_a = j >= b.frozen.size() ||
                  (i < a.frozen.size() && a.frozen[i] < b.frozen[j]);
    if (take_a) {
      m.frozen.push_back(a.frozen[i]);
      m.endpoint.push_back(a.endpoint[i]);
      ++i;
    } else {
      m.frozen.push_back(b.frozen[j]);
      m.endpoint.push_back(b.endpoint[j]);
      ++j;
    }
  }
  return m;
}

// codim-l components of the cube on the coordinates NOT in `used`.
std::vector<CornerComponent> second_stage(int n, const std::vector<int>& used, int l) {
  std::vector<int> rest;
  for (int i = 0; i < n; ++i)
    if (!std::binary_search(used.begin(), used.end(), i)) rest.push_back(i);
  std::vector<CornerComponent> out;
  std::vector<std::vector<int>> subsets;
  std::vector<int> cur;
  k_subsets(static_cast<int>(rest.size()), l, 0, cur, subsets);
  for (const auto& idx : subsets) {
    std::vector<int> B;
    for (int i : idx) B.push_back(rest[i]);
    for (auto& c : components_of_subset(B)) out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

CoveringMapResult covering_map(int n, int l, int k) {
  if (k + l > n) throw IndexOutOfRange("covering_map: k + l > n");
  CoveringMapResult res;
  std::map<CornerComponent, long long> hits;
  for (const auto& first : normalized_corner(n, k))
    for (const auto& second : second_stage(n, first.frozen, l)) {
      CornerComponent target = merge_components(first, second);
      res.table.push_back({IteratedCorner{first, second}, target});
      hits[target]++;
    }
  auto targets = normalized_corner(n, k + l);
  res.surjective = true;
  res.fibers_uniform = true;
  long long want = 1;
  {
    // binomial(k+l, l)
    for (int i = 1; i <= l; ++i) want = want * (k + i) / i;
  }
  for (const auto& t : targets) {
    auto it = hits.find(t);
    long long size = it == hits.end() ? 0 : it->second;
    if (size == 0) res.surjective = false;
    if (size != want) res.fibers_uniform = false;
    res.fiber_histogram[static_cast<int>(size)]++;
  }
  return res;
}

bool covering_square_check(int n, int k1, int k2, int k3) {
  if (k1 + k2 + k3 > n) throw IndexOutOfRange("covering_square_check: k1+k2+k3 > n");
  for (const auto& c3 : normalized_corner(n, k3))
    for (const auto& c2 : second_stage(n, c3.frozen, k2))
      for (const auto& c1 : second_stage(n, merge_components(c3, c2).frozen, k1)) {
        // route via pi_{k1,k2} then pi_{k1+k2,k3}
        CornerComponent r1 = merge_components(merge_components(c1, c2), c3);
        // route via S_{k1}(pi_{k2,k3}) then pi_{k1,k2+k3}
        CornerComponent r2 = merge_components(c1, merge_components(c2, c3));
        if (!(r1 == r2)) return false;
      }
  return true;
}

PointClass classify_point(const CollaredCube& C, const std::vector<Rational>& x) {
  if (static_cast<int>(x.size()) != C.n) throw OutOfDomain("classify_point: dimension mismatch");
  PointClass out;
  for (int i = 0; i < C.n; ++i) {
    if (x[i] < -C.tau || x[i] > 1 + C.tau)
      throw OutOfDomain("classify_point: coordinate outside the collar");
    if (x[i] <= 0) {
      out.component.frozen.push_back(i);
      out.component.endpoint.push_back(0);
    } else if (x[i] >= 1) {
      out.component.frozen.push_back(i);
      out.component.endpoint.push_back(1);
    }
  }
  out.codim = static_cast<int>(out.component.frozen.size());
  return out;
}

std::vector<Rational> retract(const CollaredCube& C, const std::vector<Rational>& x) {
  std::vector<Rational> y = x;
  for (auto& v : y) {
    if (v < 0) v = 0;
    if (v > 1) v = 1;
  }
  return y;
}

PartialCollarRegion collar_region(int n, const std::vector<Face>& faces, const Rational& tau) {
  PartialCollarRegion r;
  r.n = n;
  r.tau = tau;
  r.lo.assign(n, Rational(0));
  r.hi.assign(n, Rational(1));
  for (const auto& f : faces) {
    if (f.coord < 0 || f.coord >= n) throw IndexOutOfRange("collar_region: face coordinate");
    if (f.endpoint == 0)
      r.lo[f.coord] = -tau;
    else
      r.hi[f.coord] = 1 + tau;
  }
  return r;
}

namespace {

std::vector<Rational> clamp_to(const PartialCollarRegion& from, const std::vector<Rational>& x) {
  // the retraction of a partially collared cube clamps exactly the
  // collared sides back to the unit cube
  std::vector<Rational> y = x;
  for (int i = 0; i < from.n; ++i) {
    if (y[i] < 0) y[i] = 0;
    if (y[i] > 1) y[i] = 1;
  }
  return y;
}

}  // namespace

bool partial_collar_commute(int n, const std::vector<Face>& c1, const std::vector<Face>& c2,
                            const Rational& tau) {
  std::set<Face> s1(c1.begin(), c1.end()), s2(c2.begin(), c2.end());
  for (const auto& f : s1)
    if (s2.count(f)) throw InvalidPartition("partial_collar_commute: overlapping face sets");
  std::vector<Face> all = c1;
  all.insert(all.end(), c2.begin(), c2.end());

  PartialCollarRegion r12 = collar_region(n, all, tau);
  // region of (X^{c1})^{c2}: extend along c1 then along c2; interval algebra
  PartialCollarRegion r1 = collar_region(n, c1, tau);
  PartialCollarRegion step = r1;
  for (const auto& f : c2) {
    if (f.endpoint == 0)
      step.lo[f.coord] = -tau;
    else
      step.hi[f.coord] = 1 + tau;
  }
  PartialCollarRegion r21 = collar_region(n, c2, tau);
  PartialCollarRegion step2 = r21;
  for (const auto& f : c1) {
    if (f.endpoint == 0)
      step2.lo[f.coord] = -tau;
    else
      step2.hi[f.coord] = 1 + tau;
  }
  if (!(step == r12) || !(step2 == r12)) return false;

  // Retraction equality on an exact sample grid: composite clamps agree
  // with the one-step clamp at every corner pattern of the region.
  std::vector<Rational> probe{-tau, -tau / 2, Rational(0), Rational(1, 2), Rational(1),
                              1 + tau / 2, 1 + tau};
  std::vector<int> idx(n, 0);
  long long total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<long long>(probe.size());
  for (long long code = 0; code < total; ++code) {
    long long c = code;
    std::vector<Rational> x(n);
    bool inside = true;
    for (int i = 0; i < n; ++i) {
      x[i] = probe[c % probe.size()];
      c /= probe.size();
      if (x[i] < r12.lo[i] || x[i] > r12.hi[i]) inside = false;
    }
    if (!inside) continue;
    auto direct = clamp_to(r12, x);
    auto composite = clamp_to(r1, clamp_to(step, x));
    auto composite2 = clamp_to(r21, clamp_to(step2, x));
    if (direct != composite || direct != composite2) return false;
  }
  return true;
}

namespace {

constexpr double kPi = 3.14159265358979323846;

// Orthonormal basis of the sum-zero hyperplane of R^k (k <= 3 used).
std::vector<std::vector<double>> sum_zero_basis(int k) {
  if (k == 2) return {{1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)}};
  if (k == 3)
    return {{1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0},
            {1.0 / std::sqrt(6.0), 1.0 / std::sqrt(6.0), -2.0 / std::sqrt(6.0)}};
  return {};
}

std::vector<double> plane_coords(int k, const std::vector<double>& v) {
  auto basis = sum_zero_basis(k);
  std::vector<double> x(basis.size(), 0.0);
  for (size_t a = 0; a < basis.size(); ++a)
    for (int i = 0; i < k; ++i) x[a] += basis[a][i] * v[i];
  return x;
}

std::vector<double> plane_embed(int k, const std::vector<double>& x) {
  auto basis = sum_zero_basis(k);
  std::vector<double> v(k, 0.0);
  for (size_t a = 0; a < basis.size(); ++a)
    for (int i = 0; i < k; ++i) v[i] += x[a] * basis[a][i];
  return v;
}

SmoothingValue eval_phi2(const std::vector<double>& t) {
  double r = std::hypot(t[0], t[1]);
  if (r == 0.0) return {{0.0}, 0.0};
  double theta = std::atan2(t[1], t[0]);  // in [0, pi/2] on the octant
  double phi = 2.0 * theta - kPi / 2.0;
  return {{r * std::sin(phi)}, r * std::cos(phi)};
}

SmoothingValue eval_phi3(const std::vector<double>& t) {
  double norm = std::sqrt(t[0] * t[0] + t[1] * t[1] + t[2] * t[2]);
  if (norm == 0.0) return {{0.0, 0.0}, 0.0};
  double sum = t[0] + t[1] + t[2];
  // barycentric direction relative to the simplex center
  std::vector<double> p(3);
  for (int i = 0; i < 3; ++i) p[i] = t[i] / sum - 1.0 / 3.0;
  double pnorm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  std::vector<double> q3(3, 0.0);
  if (pnorm > 0.0) {
    // lambda_max: multiples of p from the center to the simplex boundary;
    // the radial distance along the unit direction is pnorm * lambda_max
    double lambda_max = 1e300;
    for (int i = 0; i < 3; ++i)
      if (p[i] < 0.0) lambda_max = std::min(lambda_max, (1.0 / 3.0) / (-p[i]));
    for (int i = 0; i < 3; ++i) q3[i] = p[i] / (lambda_max * pnorm);
  }
  auto x = plane_coords(3, q3);
  double q2 = x[0] * x[0] + x[1] * x[1];
  double s = std::sqrt(std::max(0.0, 1.0 - q2));
  return {{norm * x[0], norm * x[1]}, norm * s};
}

}  // namespace

SmoothingValue smoothing_eval(const SmoothingMap& S, const std::vector<double>& t) {
  if (static_cast<int>(t.size()) != S.k)
    throw OutOfDomain("smoothing_eval: wrong number of coordinates");
  for (double v : t)
    if (v < 0.0) throw OutOfDomain("smoothing_eval: point outside [0,inf)^k");
  switch (S.k) {
    case 1:
      return {{}, t[0]};
    case 2:
      return eval_phi2(t);
    case 3:
      return eval_phi3(t);
    default:
      throw Unsupported("smoothing_eval: k > 3 is not supported");
  }
}

namespace {

double halton(long long i, int base) {
  double f = 1.0, r = 0.0;
  for (long long n = i; n > 0; n /= base) {
    f /= base;
    r += f * (n % base);
  }
  return r;
}

std::vector<double> sample_point(int k, long long i) {
  static const int bases[3] = {2, 3, 5};
  std::vector<double> t(k);
  for (int d = 0; d < k; ++d) t[d] = 2.0 * halton(i + 1, bases[d]);
  return t;
}

std::vector<std::vector<int>> permutations_of(int k) {
  std::vector<int> p(k);
  for (int i = 0; i < k; ++i) p[i] = i;
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

double value_dist(const SmoothingValue& a, const SmoothingValue& b) {
  double d = std::abs(a.s - b.s);
  for (size_t i = 0; i < a.x.size(); ++i) d = std::max(d, std::abs(a.x[i] - b.x[i]));
  return d;
}

}  // namespace

SmoothingReport smoothing_property_check(const SmoothingMap& S, int samples, double tol,
                                         bool parallel) {
  SmoothingReport rep;
  const auto perms = permutations_of(S.k);
  const double scales[3] = {0.5, 2.0, 3.75};

  double max_h = 0.0, max_e = 0.0, max_b = 0.0;
#ifdef _OPENMP
#pragma omp parallel for reduction(max : max_h, max_e, max_b) schedule(static) if (parallel)
#endif
  for (long long i = 0; i < samples; ++i) {
    auto t = sample_point(S.k, i);
    auto v = smoothing_eval(S, t);
    for (double c : scales) {
      std::vector<double> ct(t);
      for (auto& z : ct) z *= c;
      auto vc = smoothing_eval(S, ct);
      SmoothingValue scaled{v.x, v.s * c};
      for (auto& z : scaled.x) z *= c;
      max_h = std::max(max_h, value_dist(vc, scaled));
    }
    for (const auto& p : perms) {
      std::vector<double> pt(S.k);
      for (int d = 0; d < S.k; ++d) pt[d] = t[p[d]];
      auto vp = smoothing_eval(S, pt);
      SmoothingValue expect{{}, v.s};
      if (S.k >= 2) {
        auto vec = plane_embed(S.k, v.x);
        std::vector<double> pv(S.k);
        for (int d = 0; d < S.k; ++d) pv[d] = vec[p[d]];
        expect.x = plane_coords(S.k, pv);
      }
      max_e = std::max(max_e, value_dist(vp, expect));
    }
    for (int face = 0; face < S.k; ++face) {
      std::vector<double> bt(t);
      bt[face] = 0.0;
      max_b = std::max(max_b, std::abs(smoothing_eval(S, bt).s));
    }
  }
  rep.max_homogeneity = max_h;
  rep.max_equivariance = max_e;
  rep.max_boundary = max_b;

  int inj = std::min(samples, 300);
  std::vector<SmoothingValue> vals;
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < inj; ++i) {
    pts.push_back(sample_point(S.k, i));
    vals.push_back(smoothing_eval(S, pts.back()));
  }
  double min_gap = 1e300;
  for (int a = 0; a < inj; ++a)
    for (int b = a + 1; b < inj; ++b) {
      double dp = 0.0;
      for (int d = 0; d < S.k; ++d) dp = std::max(dp, std::abs(pts[a][d] - pts[b][d]));
      if (dp < 1e-9) continue;
      min_gap = std::min(min_gap, value_dist(vals[a], vals[b]) / dp);
    }
  rep.min_injectivity_gap = min_gap;
  rep.pass = max_h <= tol && max_e <= tol && max_b <= tol && min_gap > 1e-6;
  return rep;
}

namespace {

// g(S) = log(1 + f(e^S)/e^S); the deviation t' - t in S-coordinates is
// -g / (S (S + g)), which is stable to evaluate via log1p.
double deviation(CoordChange change, double S) {
  double g;
  switch (change) {
    case CoordChange::identity:
      return 0.0;
    case CoordChange::add_one:
      g = std::log1p(std::exp(-S));
      break;
    case CoordChange::add_exp:
      g = std::log1p(std::exp(-(std::exp(S) + S)));
      break;
    default:
      g = 0.0;
  }
  return -g / (S * (S + g));
}

}  // namespace

AdmissibleReport admissible_coord_check(CoordChange change) {
  AdmissibleReport rep;
  const double s_lo = 5.0, s_hi = 40.0, h = 0.25;
  const int n = static_cast<int>((s_hi - s_lo) / h) + 1;
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = deviation(change, s_lo + i * h);

  rep.decay_ok = true;
  std::vector<double> level = grid;
  for (int m = 0; m <= 3; ++m) {
    double cmax = 0.0;
    for (int i = 0; i < static_cast<int>(level.size()); ++i) {
      double S = s_lo + (i + 0.5 * m) * h;
      cmax = std::max(cmax, std::abs(level[i]) * std::exp(S / 2.0));
    }
    rep.envelope_constants[m] = cmax;
    if (!std::isfinite(cmax)) rep.decay_ok = false;
    // decay with rate at least 1/2: the last value sits far below the
    // envelope anchored at the start of the sweep
    double first = std::abs(level.front());
    double last = std::abs(level.back());
    if (first > 0.0 && last > first * std::exp(-(s_hi - s_lo - 1.0) / 2.0))
      rep.decay_ok = false;
    // forward difference quotient for the next derivative order
    std::vector<double> next(level.size() - 1);
    for (size_t i = 0; i + 1 < level.size(); ++i) next[i] = (level[i + 1] - level[i]) / h;
    level = std::move(next);
  }

  if (change == CoordChange::add_one) {
    auto sprime = [](double s) { return s / (1.0 + s); };
    double step = 1e-4;
    rep.second_derivative_at_zero =
        (sprime(step) - 2.0 * sprime(0.0) + sprime(-step)) / (step * step);
    rep.counterexample_ok = std::abs(rep.second_derivative_at_zero + 2.0) <= 1e-6;
  } else {
    rep.counterexample_ok = true;
  }
  rep.pass = rep.decay_ok && rep.counterexample_ok;
  return rep;
}

}  // namespace filtalg::corners
