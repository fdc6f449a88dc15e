#include "twistedcx/graded.hpp"

#include <set>

namespace tcx {

GradedSpace::GradedSpace(std::map<int, std::size_t> dims) {
  for (auto [n, d] : dims)
    if (d) dims_[n] = d;
}

std::size_t GradedSpace::dim(int n) const {
  auto it = dims_.find(n);
  return it == dims_.end() ? 0 : it->second;
}

void GradedSpace::set_dim(int n, std::size_t d) {
  if (d)
    dims_[n] = d;
  else
    dims_.erase(n);
}

std::size_t GradedSpace::total() const {
  std::size_t t = 0;
  for (auto [n, d] : dims_) t += d;
  return t;
}

std::pair<int, int> GradedSpace::support() const {
  if (dims_.empty()) return {0, -1};
  return {dims_.begin()->first, dims_.rbegin()->first};
}

GradedSpace GradedSpace::shifted(int k) const {
  GradedSpace out;
  for (auto [n, d] : dims_) out.dims_[n - k] = d;
  return out;
}

GradedSpace direct_sum(const GradedSpace& a, const GradedSpace& b) {
  GradedSpace out = a;
  for (auto [n, d] : b.dims()) out.set_dim(n, out.dim(n) + d);
  return out;
}

GradedMap::GradedMap(GradedSpace src, GradedSpace dst, int shift, Field f)
    : src_(std::move(src)), dst_(std::move(dst)), shift_(shift), field_(f) {}

GradedMap GradedMap::identity(const GradedSpace& s, Field f) {
  GradedMap m(s, s, 0, f);
  for (auto [n, d] : s.dims()) m.comps_[n] = Matrix::identity(d, f);
  return m;
}

Matrix GradedMap::at(int n) const {
  auto it = comps_.find(n);
  if (it != comps_.end()) return it->second;
  return Matrix(dst_.dim(n + shift_), src_.dim(n), field_);
}

void GradedMap::set(int n, Matrix m) {
  if (m.rows() != dst_.dim(n + shift_) || m.cols() != src_.dim(n))
    throw DimensionError("graded map component has the wrong size at degree " + std::to_string(n));
  if (m.is_zero())
    comps_.erase(n);
  else
    comps_[n] = std::move(m);
}

void GradedMap::add(int n, const Matrix& m, const Scalar& coeff) {
  if (coeff.is_zero() || m.is_zero()) return;
  Matrix cur = at(n);
  cur.add_block(0, 0, m, coeff);
  set(n, std::move(cur));
}

bool GradedMap::is_zero() const {
  for (const auto& [n, m] : comps_)
    if (!m.is_zero()) return false;
  return true;
}

GradedMap& GradedMap::operator+=(const GradedMap& o) {
  if (shift_ != o.shift_ || !(src_ == o.src_) || !(dst_ == o.dst_))
    throw DimensionError("graded map sum between different spaces");
  for (const auto& [n, m] : o.comps_) add(n, m);
  return *this;
}

GradedMap& GradedMap::operator-=(const GradedMap& o) { return *this += -o; }

GradedMap& GradedMap::operator*=(const Scalar& s) {
  if (s.is_zero()) {
    comps_.clear();
    return *this;
  }
  for (auto& [n, m] : comps_) m *= s;
  return *this;
}

GradedMap GradedMap::operator-() const {
  GradedMap m = *this;
  m *= Scalar(-1, field_);
  return m;
}

bool operator==(const GradedMap& a, const GradedMap& b) {
  if (a.shift_ != b.shift_ || !(a.src_ == b.src_) || !(a.dst_ == b.dst_)) return false;
  std::set<int> keys;
  for (const auto& [n, m] : a.comps_) keys.insert(n);
  for (const auto& [n, m] : b.comps_) keys.insert(n);
  for (int n : keys)
    if (!(a.at(n) == b.at(n))) return false;
  return true;
}

GradedMap compose(const GradedMap& g, const GradedMap& f) {
  if (!(g.src() == f.dst())) throw DimensionError("graded map composition mismatch");
  GradedMap out(f.src(), g.dst(), f.shift() + g.shift(), f.field());
  for (const auto& [n, m] : f.components()) out.set(n, g.at(n + f.shift()) * m);
  return out;
}

ChainComplex::ChainComplex(GradedSpace s, GradedMap diff) : space(std::move(s)), d(std::move(diff)) {
  if (!(d.src() == space) || !(d.dst() == space) || d.shift() != 1)
    throw DimensionError("differential must be a shift +1 endomorphism");
}

ChainComplex ChainComplex::zero_differential(const GradedSpace& s, Field f) {
  return ChainComplex(s, GradedMap(s, s, 1, f));
}

bool ChainComplex::squares_to_zero() const { return compose(d, d).is_zero(); }

std::map<int, std::size_t> cohomology_dims(const ChainComplex& c) {
  if (!c.squares_to_zero()) throw NotAComplex("differential does not square to zero");
  std::map<int, std::size_t> out;
  auto [lo, hi] = c.space.support();
  for (int n = lo; n <= hi; ++n) {
    std::size_t dim = c.space.dim(n);
    std::size_t rk_out = rank(c.d.at(n));
    std::size_t rk_in = rank(c.d.at(n - 1));
    out[n] = dim - rk_out - rk_in;
  }
  return out;
}

bool is_acyclic(const ChainComplex& c) {
  for (auto [n, h] : cohomology_dims(c))
    if (h) return false;
  return true;
}

ChainComplex mapping_cone(const ChainComplex& c, const ChainComplex& d, const GradedMap& f) {
  if (f.shift() != 0 || !(f.src() == c.space) || !(f.dst() == d.space))
    throw DimensionError("mapping cone needs a degree-0 map between the given complexes");
  Field fld = d.field();
  GradedSpace sp = direct_sum(c.space.shifted(1), d.space);
  GradedMap diff(sp, sp, 1, fld);
  auto [lo, hi] = sp.support();
  for (int n = lo; n <= hi; ++n) {
    std::size_t cn1 = c.space.dim(n + 1), dn = d.space.dim(n);
    std::size_t cn2 = c.space.dim(n + 2), dn1 = d.space.dim(n + 1);
    Matrix m(cn2 + dn1, cn1 + dn, fld);
    m.add_block(0, 0, c.d.at(n + 1), Scalar(-1, fld));
    m.add_block(cn2, 0, f.at(n + 1));
    m.add_block(cn2, cn1, d.d.at(n));
    diff.set(n, m);
  }
  return ChainComplex(sp, diff);
}

std::optional<GradedMap> null_homotopy(const GradedMap& phi, const ChainComplex& src,
                                       const ChainComplex& dst, int sign) {
  if (!(phi.src() == src.space) || !(phi.dst() == dst.space))
    throw DimensionError("null_homotopy: map does not match the complexes");
  Field f = phi.field();
  int s = phi.shift();
  int hs = s - 1;
  auto [lo, hi] = src.space.support();
  // unknown layout: h_n is dst(n+hs) x src(n), row-major
  std::map<int, std::size_t> offset;
  std::size_t nvars = 0;
  for (int n = lo; n <= hi; ++n) {
    offset[n] = nvars;
    nvars += dst.space.dim(n + hs) * src.space.dim(n);
  }
  std::map<int, std::size_t> eq_off;
  std::size_t neqs = 0;
  for (int n = lo; n <= hi; ++n) {
    eq_off[n] = neqs;
    neqs += dst.space.dim(n + s) * src.space.dim(n);
  }
  Matrix a(neqs, nvars, f);
  Vector b(neqs, Scalar(0, f));
  Scalar sg(sign, f);
  for (int n = lo; n <= hi; ++n) {
    std::size_t rows = dst.space.dim(n + s), cols = src.space.dim(n);
    if (!rows || !cols) continue;
    Matrix target = phi.at(n);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) b[eq_off[n] + r * cols + c] = target.at(r, c);
    // d_D h_n : coefficient of h_n[i][c] in row (r, c) is dD[r][i]
    Matrix dd = dst.d.at(n + hs);
    std::size_t hcols = cols;
    dd.for_each_nonzero([&](std::size_t r, std::size_t i, const Scalar& v) {
      for (std::size_t c = 0; c < cols; ++c)
        a.add_to(eq_off[n] + r * cols + c, offset[n] + i * hcols + c, v);
    });
    // sign * h_{n+1} d_C^n : coefficient of h_{n+1}[r][j] is dC[j][c]
    if (n + 1 <= hi) {
      Matrix dc = src.d.at(n);
      std::size_t h1cols = src.space.dim(n + 1);
      dc.for_each_nonzero([&](std::size_t j, std::size_t c, const Scalar& v) {
        for (std::size_t r = 0; r < rows; ++r)
          a.add_to(eq_off[n] + r * cols + c, offset[n + 1] + r * h1cols + j, sg * v);
      });
    }
  }
  auto x = solve_linear(a, b);
  if (!x) return std::nullopt;
  GradedMap h(src.space, dst.space, hs, f);
  for (int n = lo; n <= hi; ++n) {
    std::size_t rows = dst.space.dim(n + hs), cols = src.space.dim(n);
    Matrix m(rows, cols, f);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) m.set(r, c, (*x)[offset[n] + r * cols + c]);
    h.set(n, m);
  }
  return h;
}

namespace {

Matrix drop_row(const Matrix& m, std::size_t row) {
  Matrix out(m.rows() - 1, m.cols(), m.field());
  m.for_each_nonzero([&](std::size_t r, std::size_t c, const Scalar& v) {
    if (r != row) out.set(r < row ? r : r - 1, c, v);
  });
  return out;
}

Matrix drop_col(const Matrix& m, std::size_t col) {
  Matrix out(m.rows(), m.cols() - 1, m.field());
  m.for_each_nonzero([&](std::size_t r, std::size_t c, const Scalar& v) {
    if (c != col) out.set(r, c < col ? c : c - 1, v);
  });
  return out;
}

}  // namespace

MinimalModel minimize_complex(const ChainComplex& c) {
  if (!c.squares_to_zero()) throw NotAComplex("differential does not square to zero");
  Field f = c.field();
  auto [lo, hi] = c.space.support();
  std::map<int, std::size_t> dims;
  std::map<int, Matrix> d, inc, prj, hom;  // hom[n]: C^n -> C^{n-1}
  for (int n = lo; n <= hi; ++n) {
    dims[n] = c.space.dim(n);
    d[n] = c.d.at(n);
    inc[n] = Matrix::identity(dims[n], f);
    prj[n] = Matrix::identity(dims[n], f);
    hom[n] = Matrix(c.space.dim(n - 1), dims[n], f);
  }
  auto cdim = [&](int n) { return c.space.dim(n); };
  while (true) {
    int deg = 0;
    std::size_t brow = 0, acol = 0;
    bool found = false;
    for (int n = lo; n < hi && !found; ++n) {
      const Matrix& m = d[n];
      for (std::size_t r = 0; r < m.rows() && !found; ++r)
        m.for_row(r, [&](std::size_t col, const Scalar&) {
          if (!found) {
            found = true;
            deg = n;
            brow = r;
            acol = col;
          }
        });
    }
    if (!found) break;
    int n = deg;
    const Matrix D = d[n];
    Scalar lam = D.at(brow, acol);
    Scalar linv = lam.inverse();
    Matrix beta = drop_col(D.block(brow, 0, 1, D.cols()), acol);   // 1 x (m-1)
    Matrix alpha = drop_row(D.block(0, acol, D.rows(), 1), brow);  // (k-1) x 1
    Matrix delta = drop_col(drop_row(D, brow), acol);
    Matrix dnew = delta - alpha * (beta * linv);

    std::size_t m_n = dims[n], m_n1 = dims[n + 1];
    // step inclusion/projection on degrees n and n+1
    Matrix is_n(m_n, m_n - 1, f), is_n1(m_n1, m_n1 - 1, f);
    for (std::size_t j = 0; j + 1 < m_n; ++j) is_n.set(j < acol ? j : j + 1, j, Scalar(1, f));
    for (std::size_t j = 0; j + 1 < m_n; ++j) is_n.set(acol, j, -(beta.at(0, j) * linv));
    for (std::size_t j = 0; j + 1 < m_n1; ++j) is_n1.set(j < brow ? j : j + 1, j, Scalar(1, f));
    Matrix ps_n(m_n - 1, m_n, f), ps_n1(m_n1 - 1, m_n1, f);
    for (std::size_t j = 0; j + 1 < m_n; ++j) ps_n.set(j, j < acol ? j : j + 1, Scalar(1, f));
    for (std::size_t j = 0; j + 1 < m_n1; ++j) {
      ps_n1.set(j, j < brow ? j : j + 1, Scalar(1, f));
      ps_n1.set(j, brow, -(alpha.at(j, 0) * linv));
    }
    Matrix hs(m_n, m_n1, f);  // cur(n+1) -> cur(n)
    hs.set(acol, brow, -linv);

    // accumulate: H += i_n hs p_{n+1}, then I <- I is, P <- ps P
    hom[n + 1] += inc[n] * hs * prj[n + 1];
    inc[n] = inc[n] * is_n;
    inc[n + 1] = inc[n + 1] * is_n1;
    prj[n] = ps_n * prj[n];
    prj[n + 1] = ps_n1 * prj[n + 1];

    if (d.count(n - 1)) d[n - 1] = drop_row(d[n - 1], acol);
    if (d.count(n + 1)) d[n + 1] = drop_col(d[n + 1], brow);
    d[n] = dnew;
    dims[n] -= 1;
    dims[n + 1] -= 1;
  }
  GradedSpace ms;
  for (auto [n, k] : dims) ms.set_dim(n, k);
  MinimalModel out;
  out.model = ChainComplex::zero_differential(ms, f);
  out.incl = GradedMap(ms, c.space, 0, f);
  out.proj = GradedMap(c.space, ms, 0, f);
  out.homotopy = GradedMap(c.space, c.space, -1, f);
  for (int n = lo; n <= hi; ++n) {
    out.incl.set(n, inc[n]);
    out.proj.set(n, prj[n]);
    if (cdim(n - 1) && cdim(n)) out.homotopy.set(n, hom[n]);
  }
  return out;
}

}  // namespace tcx
