#pragma once

// Hand-rolled random generators for the test suites. Everything is driven by
// an explicit seed so failures reproduce.

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "twistedcx/descent.hpp"
#include "twistedcx/resolution.hpp"

namespace tcx::gen {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(eng_); }
  Scalar scalar(Field f, int range = 3) { return Scalar(uniform(-range, range), f); }
  Scalar nonzero(Field f) {
    for (;;) {
      Scalar s = scalar(f, 4);
      if (!s.is_zero()) return s;
    }
  }

private:
  std::mt19937_64 eng_;
};

inline Field field_for(std::uint64_t seed) { return (seed & 1) ? Field::prime(101) : Field::rational(); }

inline Matrix random_matrix(Rng& r, std::size_t rows, std::size_t cols, Field f, double density = 0.7) {
  Matrix m(rows, cols, f);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (r.coin(density)) m.set(i, j, r.scalar(f));
  return m;
}

// Unit upper triangular times unit lower triangular: always invertible.
inline std::pair<Matrix, Matrix> random_invertible(Rng& r, std::size_t n, Field f) {
  Matrix u = Matrix::identity(n, f), l = Matrix::identity(n, f);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (r.coin(0.5)) u.set(i, j, r.scalar(f, 2));
      if (r.coin(0.5)) l.set(j, i, r.scalar(f, 2));
    }
  Matrix g = u * l;
  // inverse of u l is l^{-1} u^{-1}
  auto inv = solve_linear(g, Matrix::identity(n, f));
  return {g, *inv};
}

inline NervePtr make_nerve(std::vector<std::string> labels, const std::vector<std::vector<int>>& faces) {
  return std::make_shared<const CoverNerve>(CoverNerve::build(std::move(labels), faces));
}

inline NervePtr circle_nerve() { return make_nerve({"A", "B", "C"}, {{0, 1}, {1, 2}, {0, 2}}); }
inline NervePtr interval_nerve() { return make_nerve({"U", "V"}, {{0, 1}}); }

inline NervePtr random_nerve(Rng& r, int max_opens = 4) {
  int n = r.uniform(1, max_opens);
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back(std::string(1, static_cast<char>('A' + i)));
  std::vector<std::vector<int>> faces;
  for (Face f = 1; f < (Face(1) << n); ++f) {
    auto members = face_members(f);
    if (members.size() < 2) continue;
    if (r.coin(members.size() == 2 ? 0.7 : 0.35)) faces.push_back(members);
  }
  return make_nerve(labels, faces);
}

// Graded dimensions in [lo, lo + amplitude).
inline GradedSpace random_space(Rng& r, int lo, int amplitude, int max_dim) {
  std::map<int, std::size_t> dims;
  for (int n = lo; n < lo + amplitude; ++n) {
    int d = r.uniform(0, max_dim);
    if (d) dims[n] = static_cast<std::size_t>(d);
  }
  return GradedSpace(dims);
}

// Random complex built from elementary pieces k[n] and (k -> k) in random
// bases, so d o d = 0 by construction.
inline ChainComplex random_chain_complex(Rng& r, Field f, int lo = -1, int amplitude = 3, int max_pieces = 3) {
  std::map<int, std::size_t> dims;
  std::vector<std::pair<int, bool>> pieces;  // (degree, acyclic pair)
  int count = r.uniform(0, max_pieces);
  for (int k = 0; k < count; ++k) {
    int n = r.uniform(lo, lo + amplitude - 1);
    bool pair = amplitude > 1 && n < lo + amplitude - 1 && r.coin(0.4);
    pieces.emplace_back(n, pair);
    dims[n] += 1;
    if (pair) dims[n + 1] += 1;
  }
  GradedSpace s(dims);
  GradedMap d(s, s, 1, f);
  std::map<int, std::size_t> used;
  std::map<int, Matrix> dm;
  for (const auto& [n, dim] : dims) dm.emplace(n, Matrix(s.dim(n + 1), dim, f));
  for (const auto& [n, pair] : pieces) {
    std::size_t src = used[n]++;
    if (pair) {
      std::size_t tgt = used[n + 1]++;
      dm.at(n).set(tgt, src, r.nonzero(f));
    }
  }
  // change of basis per degree
  std::map<int, std::pair<Matrix, Matrix>> g;
  for (const auto& [n, dim] : dims) g.emplace(n, random_invertible(r, dim, f));
  for (const auto& [n, m] : dm) {
    if (!s.dim(n + 1)) continue;
    d.set(n, g.at(n + 1).first * m * g.at(n).second);
  }
  return ChainComplex(s, d);
}

// Complex of presheaves on every face, assembled from pieces supported on
// stars of faces (extended by zero) and twisted by random bases per face.
// With perfect = true the pieces off the full domain are acyclic, so every
// restriction is a quasi-isomorphism.
inline GlobalComplex random_global_complex(Rng& r, const NervePtr& nerve, Field f, bool perfect = false,
                                           int lo = -1, int amplitude = 3) {
  struct Piece {
    std::vector<Face> domain;
    ChainComplex c;
  };
  std::vector<Piece> pieces;
  pieces.push_back({nerve->faces(), random_chain_complex(r, f, lo, amplitude)});
  int extra = r.uniform(0, 2);
  for (int k = 0; k < extra; ++k) {
    Face base = nerve->faces()[r.uniform(0, static_cast<int>(nerve->faces().size()) - 1)];
    ChainComplex c;
    if (perfect) {
      int n = r.uniform(lo, lo + amplitude - 2);
      GradedSpace s(std::map<int, std::size_t>{{n, 1}, {n + 1, 1}});
      GradedMap d(s, s, 1, f);
      d.set(n, Matrix::identity(1, f) * r.nonzero(f));
      c = ChainComplex(s, d);
    } else {
      c = random_chain_complex(r, f, lo, amplitude, 2);
    }
    pieces.push_back({nerve->star(base), c});
  }
  // assemble block-diagonal values
  Presheaf p(nerve, nerve->faces(), f);
  std::map<Face, std::vector<std::size_t>> active;  // piece indices per face
  std::map<Face, GradedSpace> values;
  for (Face s : nerve->faces()) {
    GradedSpace v;
    for (std::size_t k = 0; k < pieces.size(); ++k)
      if (std::find(pieces[k].domain.begin(), pieces[k].domain.end(), s) != pieces[k].domain.end()) {
        active[s].push_back(k);
        v = direct_sum(v, pieces[k].c.space);
      }
    values[s] = v;
    p.set_value(s, v);
  }
  // offset of piece k inside face s in degree n
  auto offset = [&](Face s, std::size_t piece, int n) {
    std::size_t off = 0;
    for (std::size_t k : active[s]) {
      if (k == piece) return std::optional<std::size_t>(off);
      off += pieces[k].c.space.dim(n);
    }
    return std::optional<std::size_t>();
  };
  std::map<Face, std::map<int, std::pair<Matrix, Matrix>>> basis;
  for (Face s : nerve->faces())
    for (const auto& [n, dim] : values[s].dims()) basis[s].emplace(n, random_invertible(r, dim, f));
  auto conj = [&](Face to, Face from, int nt, int nf, const Matrix& m) {
    Matrix out = m;
    if (values[to].dim(nt)) out = basis[to].at(nt).first * out;
    if (values[from].dim(nf)) out = out * basis[from].at(nf).second;
    return out;
  };
  std::map<Face, GradedMap> diffs;
  for (Face s : nerve->faces()) {
    GradedMap d(values[s], values[s], 1, f);
    for (const auto& [n, dim] : values[s].dims()) {
      std::size_t rows = values[s].dim(n + 1);
      if (!rows) continue;
      Matrix m(rows, dim, f);
      for (std::size_t k : active[s]) {
        const auto& pc = pieces[k].c;
        if (!pc.space.dim(n) || !pc.space.dim(n + 1)) continue;
        m.add_block(*offset(s, k, n + 1), *offset(s, k, n), pc.d.at(n));
      }
      d.set(n, conj(s, s, n + 1, n, m));
    }
    diffs[s] = d;
  }
  for (Face s : nerve->faces())
    for (Face t : nerve->star(s)) {
      if (t == s) continue;
      GradedMap res(values[s], values[t], 0, f);
      for (const auto& [n, dim] : values[s].dims()) {
        std::size_t rows = values[t].dim(n);
        if (!rows) continue;
        Matrix m(rows, dim, f);
        for (std::size_t k : active[s]) {
          auto ot = offset(t, k, n);
          if (!ot || !pieces[k].c.space.dim(n)) continue;
          m.add_block(*ot, *offset(s, k, n), Matrix::identity(pieces[k].c.space.dim(n), f));
        }
        res.set(n, conj(t, s, n, n, m));
      }
      p.set_restriction(s, t, res);
    }
  return GlobalComplex(std::move(p), std::move(diffs));
}

// Random twisted complex drawn from the constructions available: twists,
// shifts, resolutions and cones.
inline TwistedComplex random_twisted(Rng& r, const NervePtr& nerve, Field f) {
  int kind = r.uniform(0, 3);
  GlobalComplex p = random_global_complex(r, nerve, f, kind >= 2);
  switch (kind) {
    case 0:
      return twist(p);
    case 1:
      return shift(twist(p));
    case 2:
      return twisted_resolution(p).resolved;
    default: {
      ResolutionResult res = twisted_resolution(p);
      return cone(res.comparison, res.resolved, res.target);
    }
  }
}

// Arbitrary (not necessarily natural or closed) morphism with random
// components; every component is defined on every admissible face.
inline Morphism random_morphism(Rng& r, const FamilyPtr& src, const FamilyPtr& dst, int degree, int max_p = 2,
                                double density = 0.5) {
  Morphism m(src, dst, degree);
  const auto& nerve = *src->nerve;
  Field f = src->field;
  for (const Tuple& t : tuples_up_to(nerve, max_p)) {
    if (!r.coin(density)) continue;
    for (Face s : nerve.star(tuple_set(t))) {
      GradedMap g = m.zero_component(t, s);
      for (const auto& [n, cols] : g.src().dims()) {
        std::size_t rows = g.dst().dim(n + g.shift());
        if (rows) g.set(n, random_matrix(r, rows, cols, f));
      }
      m.set(t, s, g);
    }
  }
  return m;
}

// Family whose locals are constant on stars, with random dimensions.
inline FamilyPtr random_constant_family(Rng& r, const NervePtr& nerve, Field f, int lo = -1, int amplitude = 3,
                                        int max_dim = 2) {
  std::vector<Presheaf> locals;
  for (int i = 0; i < nerve->size(); ++i)
    locals.push_back(Presheaf::constant(nerve, nerve->star_of(i), random_space(r, lo, amplitude, max_dim), f));
  return make_family(nerve, f, std::move(locals));
}

// Natural morphism between constant families: chosen at the minimal face and
// copied upward.
inline Morphism random_natural_constant(Rng& r, const FamilyPtr& src, const FamilyPtr& dst, int degree,
                                        int max_p = 2, double density = 0.5) {
  Morphism m(src, dst, degree);
  const auto& nerve = *src->nerve;
  Field f = src->field;
  for (const Tuple& t : tuples_up_to(nerve, max_p)) {
    if (!r.coin(density)) continue;
    Face base = tuple_set(t);
    GradedMap g = m.zero_component(t, base);
    for (const auto& [n, cols] : g.src().dims()) {
      std::size_t rows = g.dst().dim(n + g.shift());
      if (rows) g.set(n, random_matrix(r, rows, cols, f));
    }
    for (Face s : nerve.star(base)) m.set(t, s, g);
  }
  return m;
}

// Degenerate datum: every a is an idempotent e on constant locals with zero
// differential; e = 0 gives the all-zero datum.
inline TwistedComplex projector_twisted(Rng& r, const NervePtr& nerve, Field f, bool zero = false) {
  GradedSpace v = random_space(r, -1, 3, 3);
  if (v.is_zero()) v = GradedSpace(std::map<int, std::size_t>{{0, 1}});
  std::vector<Presheaf> locals;
  for (int i = 0; i < nerve->size(); ++i) locals.push_back(Presheaf::constant(nerve, nerve->star_of(i), v, f));
  FamilyPtr fam = make_family(nerve, f, std::move(locals));
  GradedMap e(v, v, 0, f);
  if (!zero)
    for (const auto& [n, dim] : v.dims()) {
      // conjugated coordinate projector
      Matrix proj(dim, dim, f);
      std::size_t rank = static_cast<std::size_t>(r.uniform(0, static_cast<int>(dim)));
      for (std::size_t k = 0; k < rank; ++k) proj.set(k, k, Scalar(1, f));
      auto [g, gi] = random_invertible(r, dim, f);
      e.set(n, g * proj * gi);
    }
  Morphism a(fam, fam, 1);
  for (int i = 0; i < nerve->size(); ++i)
    for (int j = 0; j < nerve->size(); ++j) {
      Face ij = singleton(i) | singleton(j);
      if (!nerve->is_face(ij)) continue;
      for (Face s : nerve->star(ij)) a.set({i, j}, s, e);
    }
  return TwistedComplex(fam, std::move(a), true);
}

}  // namespace tcx::gen
