#include "filtalg/gradecx.hpp"

#include <algorithm>
#include <set>

#include "filtalg/errors.hpp"

namespace filtalg::gcx {

GradedSpace::GradedSpace(std::vector<std::pair<std::string, int>> basis)
    : basis_(std::move(basis)) {
  std::set<std::string> names;
  for (const auto& [name, deg] : basis_)
    if (!names.insert(name).second)
      throw Error("GradedSpace: duplicate basis name '" + name + "'");
}

int GradedSpace::index_of(const std::string& name) const {
  for (int i = 0; i < dim(); ++i)
    if (basis_[i].first == name) return i;
  throw SpaceMismatch("GradedSpace: no basis element named '" + name + "'");
}

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

Vec zero_vec(int n) { return Vec(static_cast<size_t>(n), Rational(0)); }

GradedMap::GradedMap(SpacePtr source, SpacePtr target, int degree)
    : source_(std::move(source)), target_(std::move(target)), degree_(degree) {}

GradedMap GradedMap::identity(SpacePtr space) {
  GradedMap f(space, space, 0);
  for (int i = 0; i < space->dim(); ++i) f.set(i, i, 1);
  return f;
}

void GradedMap::set(int j, int i, Rational v) {
  if (j < 0 || j >= target_->dim() || i < 0 || i >= source_->dim())
    throw SpaceMismatch("GradedMap::set: index out of range");
  if (v == 0) {
    entries_.erase({j, i});
    return;
  }
  if (target_->degree(j) != source_->degree(i) + degree_)
    throw DegreeError("GradedMap::set: entry (" + target_->name(j) + "," + source_->name(i) +
                      ") violates degree " + std::to_string(degree_));
  entries_[{j, i}] = std::move(v);
}

Rational GradedMap::at(int j, int i) const {
  auto it = entries_.find({j, i});
  return it == entries_.end() ? Rational(0) : it->second;
}

Vec GradedMap::apply(const Vec& x) const {
  if (static_cast<int>(x.size()) != source_->dim())
    throw SpaceMismatch("GradedMap::apply: dimension mismatch");
  Vec y = zero_vec(target_->dim());
  for (const auto& [ji, v] : entries_) y[ji.first] += v * x[ji.second];
  return y;
}

GradedMap GradedMap::operator+(const GradedMap& o) const {
  if (!(*source_ == *o.source_) || !(*target_ == *o.target_))
    throw SpaceMismatch("GradedMap::+: space mismatch");
  if (degree_ != o.degree_) throw DegreeError("GradedMap::+: degree mismatch");
  GradedMap out = *this;
  for (const auto& [ji, v] : o.entries_) out.set(ji.first, ji.second, out.at(ji.first, ji.second) + v);
  return out;
}

GradedMap GradedMap::operator-(const GradedMap& o) const { return *this + (-o); }

GradedMap GradedMap::operator-() const { return scaled(-1); }

GradedMap GradedMap::scaled(const Rational& c) const {
  GradedMap out(source_, target_, degree_);
  if (c == 0) return out;
  for (const auto& [ji, v] : entries_) out.entries_[ji] = v * c;
  return out;
}

bool operator==(const GradedMap& a, const GradedMap& b) {
  return *a.source_ == *b.source_ && *a.target_ == *b.target_ && a.degree_ == b.degree_ &&
         a.entries_ == b.entries_;
}

GradedMap compose(const GradedMap& f, const GradedMap& g) {
  if (!(*g.target() == *f.source()))
    throw SpaceMismatch("compose: g.target != f.source");
  GradedMap out(g.source(), f.target(), f.degree() + g.degree());
  for (const auto& [kj, fv] : f.entries())
    for (const auto& [ji, gv] : g.entries()) {
      if (kj.second != ji.first) continue;
      out.set(kj.first, ji.second, out.at(kj.first, ji.second) + fv * gv);
    }
  return out;
}

CochainComplex::CochainComplex(SpacePtr space, GradedMap d0)
    : space_(std::move(space)), d0_(std::move(d0)) {
  if (!(*d0_.source() == *space_) || !(*d0_.target() == *space_))
    throw SpaceMismatch("CochainComplex: d0 is not an endomorphism of the space");
  if (d0_.degree() != 1) throw DegreeError("CochainComplex: d0 must have degree +1");
  if (!compose(d0_, d0_).is_zero()) throw Error("CochainComplex: d0 o d0 != 0");
}

namespace {

// Dense deterministic elimination.  Returns (solution) or a left-null
// certificate row with nonzero pairing against b.
struct DenseSolve {
  std::vector<Rational> solution;
  std::vector<Rational> certificate;  // in row space; empty if solved
};

DenseSolve eliminate(int nrows, int ncols,
                     const std::map<std::pair<int, int>, Rational>& entries,
                     const std::vector<Rational>& rhs) {
  std::vector<std::vector<Rational>> A(nrows, std::vector<Rational>(ncols, Rational(0)));
  for (const auto& [rc, v] : entries) A[rc.first][rc.second] = v;
  std::vector<Rational> b = rhs;
  // record[r] = row r of the elimination operator E, so that the current
  // tableau is (E A | E b); certificates are rows of E.
  std::vector<std::vector<Rational>> record(nrows, std::vector<Rational>(nrows, Rational(0)));
  for (int r = 0; r < nrows; ++r) record[r][r] = 1;

  std::vector<int> pivot_col_of_row(nrows, -1);
  int rank = 0;
  for (int c = 0; c < ncols && rank < nrows; ++c) {
    int piv = -1;
    for (int r = rank; r < nrows; ++r)
      if (A[r][c] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(A[piv], A[rank]);
    std::swap(b[piv], b[rank]);
    std::swap(record[piv], record[rank]);
    Rational inv = Rational(1) / A[rank][c];
    for (int cc = c; cc < ncols; ++cc) A[rank][cc] *= inv;
    b[rank] *= inv;
    for (auto& x : record[rank]) x *= inv;
    for (int r = 0; r < nrows; ++r) {
      if (r == rank || A[r][c] == 0) continue;
      Rational f = A[r][c];
      for (int cc = c; cc < ncols; ++cc) A[r][cc] -= f * A[rank][cc];
      b[r] -= f * b[rank];
      for (int k = 0; k < nrows; ++k) record[r][k] -= f * record[rank][k];
    }
    pivot_col_of_row[rank] = c;
    ++rank;
  }
  for (int r = rank; r < nrows; ++r) {
    if (b[r] != 0) {
      DenseSolve out;
      out.certificate = record[r];
      return out;
    }
  }
  DenseSolve out;
  out.solution.assign(ncols, Rational(0));
  for (int r = 0; r < rank; ++r) out.solution[pivot_col_of_row[r]] = b[r];
  return out;
}

}  // namespace

PrimitiveResult solve_primitive(const CochainComplex& C, const Vec& y) {
  const GradedSpace& S = *C.space();
  if (static_cast<int>(y.size()) != S.dim())
    throw SpaceMismatch("solve_primitive: vector size mismatch");
  int d = 0;
  bool have_degree = false;
  for (int i = 0; i < S.dim(); ++i) {
    if (y[i] == 0) continue;
    if (!have_degree) {
      d = S.degree(i);
      have_degree = true;
    } else if (S.degree(i) != d) {
      throw DegreeError("solve_primitive: y is not homogeneous");
    }
  }
  if (!have_degree) return zero_vec(S.dim());

  std::vector<int> rows, cols;
  for (int i = 0; i < S.dim(); ++i) {
    if (S.degree(i) == d) rows.push_back(i);
    if (S.degree(i) == d - 1) cols.push_back(i);
  }
  std::map<std::pair<int, int>, Rational> entries;
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < cols.size(); ++c) {
      Rational v = C.d0().at(rows[r], cols[c]);
      if (v != 0) entries[{static_cast<int>(r), static_cast<int>(c)}] = v;
    }
  std::vector<Rational> rhs;
  rhs.reserve(rows.size());
  for (int r : rows) rhs.push_back(y[r]);

  DenseSolve res = eliminate(static_cast<int>(rows.size()), static_cast<int>(cols.size()),
                             entries, rhs);
  if (!res.certificate.empty()) {
    Vec phi = zero_vec(S.dim());
    for (size_t r = 0; r < rows.size(); ++r) phi[rows[r]] = res.certificate[r];
    return NotExact{std::move(phi)};
  }
  Vec x = zero_vec(S.dim());
  for (size_t c = 0; c < cols.size(); ++c) x[cols[c]] = res.solution[c];
  return x;
}

bool is_cocycle(const CochainComplex& B, const CochainComplex& A, const GradedMap& f,
                int sign_degree) {
  GradedMap lhs = compose(B.d0(), f);
  GradedMap rhs = compose(f, A.d0());
  if (sign_degree % 2 == 0) return (lhs - rhs).is_zero();
  return (lhs + rhs).is_zero();
}

bool is_cocycle(const CochainComplex& B, const CochainComplex& A, const GradedMap& f) {
  return is_cocycle(B, A, f, f.degree());
}

bool is_cocycle(const CochainComplex& C, const GradedMap& f) { return is_cocycle(C, C, f); }

int HomComplex::index(int i, int j) const { return i * B->dim() + j; }

GradedMap HomComplex::to_map(const Vec& coords, int map_degree) const {
  GradedMap f(A, B, map_degree);
  for (int i = 0; i < A->dim(); ++i)
    for (int j = 0; j < B->dim(); ++j) {
      const Rational& v = coords[index(i, j)];
      if (v != 0) f.set(j, i, v);
    }
  return f;
}

Vec HomComplex::from_map(const GradedMap& f) const {
  Vec v = zero_vec(A->dim() * B->dim());
  for (const auto& [ji, val] : f.entries()) v[index(ji.second, ji.first)] = val;
  return v;
}

HomComplex hom_complex(const CochainComplex& CA, const CochainComplex& CB, int degree_shift) {
  const GradedSpace& A = *CA.space();
  const GradedSpace& B = *CB.space();
  std::vector<std::pair<std::string, int>> basis;
  basis.reserve(static_cast<size_t>(A.dim()) * B.dim());
  for (int i = 0; i < A.dim(); ++i)
    for (int j = 0; j < B.dim(); ++j)
      basis.emplace_back(A.name(i) + ">" + B.name(j), B.degree(j) - A.degree(i) + degree_shift);
  auto space = std::make_shared<GradedSpace>(std::move(basis));

  GradedMap D(space, space, 1);
  auto idx = [&](int i, int j) { return i * B.dim() + j; };
  for (int i = 0; i < A.dim(); ++i)
    for (int j = 0; j < B.dim(); ++j) {
      int col = idx(i, j);
      int hdeg = space->degree(col);
      // dB o E_{ji}
      for (const auto& [kj, v] : CB.d0().entries()) {
        if (kj.second != j) continue;
        D.set(idx(i, kj.first), col, D.at(idx(i, kj.first), col) + v);
      }
      // -(-1)^{|E|} E_{ji} o dA
      Rational sgn = (hdeg % 2 == 0) ? Rational(-1) : Rational(1);
      for (const auto& [ii, v] : CA.d0().entries()) {
        if (ii.first != i) continue;
        int row = idx(ii.second, j);
        D.set(row, col, D.at(row, col) + sgn * v);
      }
    }
  HomComplex out;
  out.A = CA.space();
  out.B = CB.space();
  out.complex = CochainComplex(space, std::move(D));
  return out;
}

void LinearSystem::add(int row, int col, const Rational& v) {
  if (v == 0) return;
  num_rows = std::max(num_rows, row + 1);
  num_cols = std::max(num_cols, col + 1);
  entries[{row, col}] += v;
  if (entries[{row, col}] == 0) entries.erase({row, col});
}

void LinearSystem::add_rhs(int row, const Rational& v) {
  num_rows = std::max(num_rows, row + 1);
  if (static_cast<int>(rhs.size()) < num_rows) rhs.resize(num_rows, Rational(0));
  rhs[row] += v;
}

std::variant<std::vector<Rational>, LinearCertificate> solve_linear(const LinearSystem& sys) {
  std::vector<Rational> b = sys.rhs;
  b.resize(sys.num_rows, Rational(0));
  DenseSolve res = eliminate(sys.num_rows, sys.num_cols, sys.entries, b);
  if (!res.certificate.empty()) {
    LinearCertificate cert;
    for (int r = 0; r < sys.num_rows; ++r)
      if (res.certificate[r] != 0) cert.rows.emplace_back(r, res.certificate[r]);
    return cert;
  }
  return res.solution;
}

}  // namespace filtalg::gcx
