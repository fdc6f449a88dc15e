#pragma once

// Reference computations for the test suites, written against plain GMP
// rationals and machine residues so they share no code with the kernel's
// elimination.

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include <gmpxx.h>

#include "twistedcx/graded.hpp"

namespace tcx::oracle {

// Element of Q or F_p without going through Scalar arithmetic.
struct Num {
  mpq_class q;
  std::uint64_t r = 0;
  std::uint64_t p = 0;

  bool zero() const { return p ? r == 0 : q == 0; }
};

inline std::uint64_t mod_pow(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  unsigned __int128 acc = 1, base = b % p;
  while (e) {
    if (e & 1) acc = acc * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::uint64_t>(acc);
}

using Grid = std::vector<std::vector<Num>>;

inline Grid to_grid(const Matrix& m) {
  std::uint64_t p = m.field().modulus();
  Grid g(m.rows(), std::vector<Num>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      g[i][j].p = p;
      mpq_class v = m.at(i, j).to_mpq();
      if (p) {
        // residues are returned as integers in [0, p)
        g[i][j].r = static_cast<std::uint64_t>(v.get_num().get_ui());
      } else {
        g[i][j].q = v;
      }
    }
  return g;
}

// Column-by-column elimination, pivoting on the last nonzero row.
inline std::size_t grid_rank(Grid g) {
  if (g.empty()) return 0;
  std::size_t rows = g.size(), cols = g[0].size(), r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = rows; i-- > r;)
      if (!g[i][c].zero()) {
        piv = i;
        break;
      }
    if (piv == rows) continue;
    std::swap(g[piv], g[r]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || g[i][c].zero()) continue;
      if (g[r][c].p) {
        std::uint64_t p = g[r][c].p;
        std::uint64_t f = static_cast<std::uint64_t>(
            static_cast<unsigned __int128>(g[i][c].r) * mod_pow(g[r][c].r, p - 2, p) % p);
        for (std::size_t j = 0; j < cols; ++j) {
          std::uint64_t sub = static_cast<std::uint64_t>(static_cast<unsigned __int128>(f) * g[r][j].r % p);
          g[i][j].r = (g[i][j].r + p - sub) % p;
        }
      } else {
        mpq_class f = g[i][c].q / g[r][c].q;
        for (std::size_t j = 0; j < cols; ++j) g[i][j].q -= f * g[r][j].q;
      }
    }
    ++r;
  }
  return r;
}

inline std::size_t rank_of(const Matrix& m) { return grid_rank(to_grid(m)); }

inline Matrix hcat(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), a.cols() + b.cols(), a.field());
  out.set_block(0, 0, a);
  out.set_block(0, a.cols(), b);
  return out;
}

inline std::map<int, std::size_t> cohomology(const ChainComplex& c) {
  std::map<int, std::size_t> out;
  auto [lo, hi] = c.space.support();
  for (int n = lo; n <= hi; ++n) {
    std::size_t dim = c.space.dim(n);
    std::size_t rk_out = c.space.dim(n + 1) ? rank_of(c.d.at(n)) : 0;
    std::size_t rk_in = c.space.dim(n - 1) ? rank_of(c.d.at(n - 1)) : 0;
    std::size_t h = dim - rk_out - rk_in;
    if (h) out[n] = h;
  }
  return out;
}

// Basis of ker m as columns, by brute force over the oracle: the columns
// e_j - sum over pivots, computed from an independent elimination.
inline std::vector<Vector> kernel_basis(const Matrix& m) {
  // Gaussian elimination on the transpose-free system m x = 0.
  Grid g = to_grid(m);
  std::size_t rows = m.rows(), cols = m.cols(), r = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (!g[i][c].zero()) {
        piv = i;
        break;
      }
    if (piv == rows) continue;
    std::swap(g[piv], g[r]);
    // normalise
    if (g[r][c].p) {
      std::uint64_t p = g[r][c].p, inv = mod_pow(g[r][c].r, p - 2, p);
      for (auto& x : g[r]) x.r = static_cast<std::uint64_t>(static_cast<unsigned __int128>(x.r) * inv % p);
    } else {
      mpq_class inv = 1 / g[r][c].q;
      for (auto& x : g[r]) x.q *= inv;
    }
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || g[i][c].zero()) continue;
      if (g[r][c].p) {
        std::uint64_t p = g[r][c].p, f = g[i][c].r;
        for (std::size_t j = 0; j < cols; ++j) {
          std::uint64_t sub = static_cast<std::uint64_t>(static_cast<unsigned __int128>(f) * g[r][j].r % p);
          g[i][j].r = (g[i][j].r + p - sub) % p;
        }
      } else {
        mpq_class f = g[i][c].q;
        for (std::size_t j = 0; j < cols; ++j) g[i][j].q -= f * g[r][j].q;
      }
    }
    pivots.push_back(c);
    ++r;
  }
  Field fld = m.field();
  std::vector<Vector> out;
  for (std::size_t free = 0; free < cols; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    Vector v(cols, Scalar(0, fld));
    v[free] = Scalar(1, fld);
    for (std::size_t k = 0; k < pivots.size(); ++k) {
      const Num& e = g[k][free];
      v[pivots[k]] = e.p ? -Scalar(static_cast<long>(e.r), fld) : -Scalar(e.q, fld);
    }
    out.push_back(v);
  }
  return out;
}

// phi: C -> C of shift 0 induces zero on cohomology in every degree:
// phi(Z^n) lies in B^n.
inline bool zero_on_cohomology(const GradedMap& phi, const ChainComplex& c) {
  Field f = c.field();
  auto [lo, hi] = c.space.support();
  for (int n = lo; n <= hi; ++n) {
    std::size_t dim = c.space.dim(n);
    if (!dim) continue;
    Matrix dn = c.space.dim(n + 1) ? c.d.at(n) : Matrix(0, dim, f);
    auto z = kernel_basis(dn);
    if (z.empty()) continue;
    Matrix image(dim, z.size(), f);
    Matrix pn = phi.at(n);
    for (std::size_t k = 0; k < z.size(); ++k) {
      Vector w = pn.apply(z[k]);
      for (std::size_t i = 0; i < dim; ++i)
        if (!w[i].is_zero()) image.set(i, k, w[i]);
    }
    Matrix b = c.space.dim(n - 1) ? c.d.at(n - 1) : Matrix(dim, 0, f);
    if (rank_of(hcat(b, image)) != rank_of(b)) return false;
  }
  return true;
}

}  // namespace tcx::oracle
