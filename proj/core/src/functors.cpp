#include "twistedcx/functors.hpp"

#include <stdexcept>

#include "twistedcx/system.hpp"

namespace tcx {

namespace {

void require_all_faces(const Presheaf& p) {
  if (p.domain() != p.nerve()->faces()) throw NerveError("global complex must be defined on every face");
}

GradedMap from_columns(const GradedSpace& src, const GradedSpace& dst, int shift, Field fld,
                       const std::map<int, Matrix>& comps) {
  GradedMap m(src, dst, shift, fld);
  for (const auto& [n, mat] : comps) m.set(n, mat);
  return m;
}

Vector unit(std::size_t n, std::size_t k, Field f) {
  Vector v(n, Scalar(0, f));
  v[k] = Scalar(1, f);
  return v;
}

void set_column(Matrix& m, std::size_t c, const Vector& v) {
  for (std::size_t r = 0; r < v.size(); ++r)
    if (!v[r].is_zero()) m.set(r, c, v[r]);
}

}  // namespace

GlobalComplex::GlobalComplex(Presheaf p, std::map<Face, GradedMap> diff) : space(std::move(p)), d(std::move(diff)) {
  require_all_faces(space);
  for (const auto& [f, m] : d)
    if (!(m.src() == space.value(f)) || !(m.dst() == space.value(f)) || m.shift() != 1)
      throw DimensionError("differential at " + nerve()->face_name(f) + " has the wrong shape");
}

GlobalComplex GlobalComplex::with_zero_differential(Presheaf p) { return GlobalComplex(std::move(p), {}); }

GradedMap GlobalComplex::diff(Face f) const {
  auto it = d.find(f);
  if (it != d.end()) return it->second;
  return GradedMap(space.value(f), space.value(f), 1, field());
}

std::pair<int, int> GlobalComplex::degree_range() const {
  int lo = 0, hi = -1;
  bool any = false;
  for (Face f : space.domain()) {
    auto [a, b] = space.value(f).support();
    if (a > b) continue;
    if (!any || a < lo) lo = a;
    if (!any || b > hi) hi = b;
    any = true;
  }
  return {lo, hi};
}

GlobalReport validate_global(const GlobalComplex& p) {
  GlobalReport rep;
  auto pr = validate_presheaf(p.space);
  if (!pr.valid) {
    rep.valid = false;
    rep.message = pr.message;
    return rep;
  }
  const auto& nerve = *p.nerve();
  for (Face f : nerve.faces())
    if (!p.at(f).squares_to_zero()) {
      rep.valid = false;
      rep.message = "differential does not square to zero on " + nerve.face_name(f);
      return rep;
    }
  for (Face a : nerve.faces())
    for (Face b : nerve.faces()) {
      if (a == b || !face_contains(b, a)) continue;
      GradedMap r = p.space.restriction(a, b);
      if (!(compose(p.diff(b), r) == compose(r, p.diff(a)))) {
        rep.valid = false;
        rep.message = "differential does not commute with restriction " + nerve.face_name(a) + " <= " +
                      nerve.face_name(b);
        return rep;
      }
    }
  return rep;
}

GradedMap GlobalMorphism::at(Face f, const GlobalComplex& src, const GlobalComplex& dst) const {
  auto it = maps.find(f);
  if (it != maps.end()) return it->second;
  return GradedMap(src.value(f), dst.value(f), degree, src.field());
}

bool GlobalMorphism::is_zero() const {
  for (const auto& [f, m] : maps)
    if (!m.is_zero()) return false;
  return true;
}

GlobalMorphism global_identity(const GlobalComplex& p) {
  GlobalMorphism out;
  for (Face f : p.nerve()->faces()) out.maps[f] = GradedMap::identity(p.value(f), p.field());
  return out;
}

GlobalMorphism global_compose(const GlobalMorphism& g, const GlobalMorphism& f, const GlobalComplex& src,
                              const GlobalComplex& mid, const GlobalComplex& dst) {
  GlobalMorphism out;
  out.degree = g.degree + f.degree;
  for (Face face : src.nerve()->faces()) out.maps[face] = compose(g.at(face, mid, dst), f.at(face, src, mid));
  return out;
}

GlobalMorphism global_difference(const GlobalMorphism& a, const GlobalMorphism& b, const GlobalComplex& src,
                                 const GlobalComplex& dst) {
  if (a.degree != b.degree) throw WrongDegree("difference of global morphisms of different degrees");
  GlobalMorphism out;
  out.degree = a.degree;
  for (Face f : src.nerve()->faces()) out.maps[f] = a.at(f, src, dst) - b.at(f, src, dst);
  return out;
}

bool global_equal(const GlobalMorphism& a, const GlobalMorphism& b, const GlobalComplex& src,
                  const GlobalComplex& dst) {
  return a.degree == b.degree && global_difference(a, b, src, dst).is_zero();
}

std::optional<Face> global_naturality_failure(const GlobalMorphism& f, const GlobalComplex& src,
                                              const GlobalComplex& dst) {
  const auto& nerve = *src.nerve();
  for (Face a : nerve.faces())
    for (Face b : nerve.faces()) {
      if (a == b || !face_contains(b, a)) continue;
      if (!(compose(dst.space.restriction(a, b), f.at(a, src, dst)) ==
            compose(f.at(b, src, dst), src.space.restriction(a, b))))
        return a;
    }
  return std::nullopt;
}

GlobalMorphism global_diff(const GlobalMorphism& f, const GlobalComplex& src, const GlobalComplex& dst) {
  GlobalMorphism out;
  out.degree = f.degree + 1;
  Scalar s((f.degree & 1) ? 1 : -1, src.field());
  for (Face face : src.nerve()->faces()) {
    GradedMap m = f.at(face, src, dst);
    out.maps[face] = compose(dst.diff(face), m) + s * compose(m, src.diff(face));
  }
  return out;
}

std::map<Face, std::map<int, std::size_t>> facewise_cohomology(const GlobalComplex& p) {
  std::map<Face, std::map<int, std::size_t>> out;
  for (Face f : p.nerve()->faces()) out[f] = cohomology_dims(p.at(f));
  return out;
}

bool facewise_acyclic(const GlobalComplex& p) {
  for (Face f : p.nerve()->faces())
    if (!is_acyclic(p.at(f))) return false;
  return true;
}

std::optional<Face> facewise_cone_failure(const GlobalMorphism& f, const GlobalComplex& src,
                                          const GlobalComplex& dst) {
  if (f.degree != 0) throw WrongDegree("cone of a global morphism needs degree 0");
  for (Face face : src.nerve()->faces())
    if (!is_acyclic(mapping_cone(src.at(face), dst.at(face), f.at(face, src, dst)))) return face;
  return std::nullopt;
}

std::optional<GlobalMorphism> natural_null_homotopy(const GlobalMorphism& phi, const GlobalComplex& src,
                                                    const GlobalComplex& dst, int sign) {
  Field fld = src.field();
  const auto& nerve = *src.nerve();
  int s = phi.degree;
  MatrixSystem sys(fld);
  // unknown h(face)^n : src^n -> dst^{n+s-1}
  std::map<std::pair<Face, int>, int> unk;
  auto unknown = [&](Face f, int n) -> int {
    auto it = unk.find({f, n});
    return it == unk.end() ? -1 : it->second;
  };
  for (Face f : nerve.faces())
    for (const auto& [n, dim] : src.value(f).dims()) {
      std::size_t rows = dst.value(f).dim(n + s - 1);
      if (rows && dim) unk[{f, n}] = sys.add_unknown(rows, dim);
    }
  Scalar sg(sign, fld);
  for (Face f : nerve.faces()) {
    GradedMap p = phi.at(f, src, dst), dd = dst.diff(f), ds = src.diff(f);
    for (const auto& [n, dim] : src.value(f).dims()) {
      std::size_t rows = dst.value(f).dim(n + s);
      if (!rows) continue;
      int eq = sys.add_equation(rows, dim);
      if (int u = unknown(f, n); u >= 0) {
        Matrix l = dd.at(n + s - 1);
        sys.add_term(eq, &l, u, nullptr);
      }
      if (int u = unknown(f, n + 1); u >= 0) {
        Matrix r = ds.at(n);
        sys.add_term(eq, nullptr, u, &r, sg);
      }
      sys.add_rhs(eq, p.at(n));
    }
  }
  // naturality along one-element extensions
  for (Face a : nerve.faces())
    for (Face b : nerve.faces()) {
      if (!face_contains(b, a) || face_size(b) != face_size(a) + 1) continue;
      for (const auto& [n, dim] : src.value(a).dims()) {
        std::size_t rows = dst.value(b).dim(n + s - 1);
        if (!rows) continue;
        int eq = sys.add_equation(rows, dim);
        if (int u = unknown(a, n); u >= 0) {
          Matrix l = dst.space.restriction_at(a, b, n + s - 1);
          sys.add_term(eq, &l, u, nullptr);
        }
        if (int u = unknown(b, n); u >= 0) {
          Matrix r = src.space.restriction_at(a, b, n);
          sys.add_term(eq, nullptr, u, &r, Scalar(-1, fld));
        }
      }
    }
  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  GlobalMorphism h;
  h.degree = s - 1;
  for (Face f : nerve.faces()) {
    GradedMap m(src.value(f), dst.value(f), s - 1, fld);
    for (const auto& [n, dim] : src.value(f).dims()) {
      (void)dim;
      if (int u = unknown(f, n); u >= 0) m.set(n, (*sol)[u]);
    }
    h.maps[f] = std::move(m);
  }
  return h;
}

const SheafLayout& Sheafified::layout(Face base, int n) const {
  static const SheafLayout empty;
  auto it = layouts_.find(base);
  if (it == layouts_.end()) return empty;
  auto jt = it->second.find(n);
  return jt == it->second.end() ? empty : jt->second;
}

Vector Sheafified::flatten(const Cochain& c) const {
  const SheafLayout& lay = layout(c.base(), c.degree());
  Field fld = source.field();
  Vector out(lay.total, Scalar(0, fld));
  for (const auto& [t, v] : c.components()) {
    auto it = lay.index.find(t);
    if (it == lay.index.end())
      throw std::logic_error("cochain component " + source.nerve()->tuple_name(t) + " outside the layout");
    const SheafBlock& b = lay.blocks[it->second];
    for (std::size_t k = 0; k < b.dim; ++k) out[b.offset + k] = v[k];
  }
  return out;
}

Cochain Sheafified::unflatten(Face base, int n, const Vector& full) const {
  const SheafLayout& lay = layout(base, n);
  if (full.size() != lay.total) throw DimensionError("flattened cochain has the wrong size");
  Cochain c(source.locals, base, n);
  for (const auto& b : lay.blocks) c.set(b.tuple, Vector(full.begin() + b.offset, full.begin() + b.offset + b.dim));
  return c;
}

Cochain Sheafified::cochain(Face base, int n, const Vector& coords) const {
  if (n == top && top >= lo) {
    const Matrix& k = kernel_.at(base);
    if (coords.size() != k.cols()) throw DimensionError("top-degree coordinates have the wrong size");
    return unflatten(base, n, k.apply(coords));
  }
  return unflatten(base, n, coords);
}

std::optional<Vector> Sheafified::coordinates(const Cochain& c) const {
  if (c.degree() < lo || c.degree() > top) {
    if (!c.is_zero()) return std::nullopt;
    return Vector{};
  }
  Vector full = flatten(c);
  if (c.degree() < top) return full;
  const Matrix& d = top_diff_.at(c.base());
  for (const auto& x : d.apply(full))
    if (!x.is_zero()) return std::nullopt;
  Vector out;
  for (std::size_t col : free_cols_.at(c.base())) out.push_back(full[col]);
  return out;
}

Cochain Sheafified::basis_cochain(Face base, int n, std::size_t k) const {
  return cochain(base, n, unit(complex.value(base).dim(n), k, source.field()));
}

Sheafified sheafify(const TwistedComplex& t, std::optional<int> top) {
  Sheafified s;
  s.source = t;
  const auto& nerve = t.nerve();
  Field fld = t.field();
  auto [qlo, qhi] = t.locals->degree_range();
  s.lo = qlo > qhi ? 0 : qlo;
  s.top = top.value_or(qlo > qhi ? -1 : qhi);
  const Family& fam = *t.locals;

  for (Face base : nerve->faces())
    for (int n = s.lo; n <= s.top + 1; ++n) {
      SheafLayout lay;
      for (int p = 0; p <= n - s.lo; ++p)
        for (const Tuple& tup : nerve->tuples_compatible(static_cast<std::size_t>(p + 1), base)) {
          Face fc = tuple_set(tup) | base;
          std::size_t dim = fam[tup.front()].value(fc).dim(n - p);
          if (!dim) continue;
          lay.index[tup] = lay.blocks.size();
          lay.blocks.push_back({tup, fc, lay.total, dim});
          lay.total += dim;
        }
      s.layouts_[base][n] = std::move(lay);
    }

  // full differential d^n : S^n -> S^{n+1} on untruncated cochains
  auto full_diff = [&](Face base, int n) {
    const SheafLayout& src = s.layout(base, n);
    const SheafLayout& dst = s.layout(base, n + 1);
    Matrix m(dst.total, src.total, fld);
    for (std::size_t k = 0; k < src.total; ++k) {
      Cochain c = s.unflatten(base, n, unit(src.total, k, fld));
      set_column(m, k, s.flatten(delta_a(t, c)));
    }
    return m;
  };

  std::map<Face, GradedSpace> values;
  std::map<Face, GradedMap> diffs;
  for (Face base : nerve->faces()) {
    GradedSpace v;
    if (s.top >= s.lo) {
      Matrix dtop = full_diff(base, s.top);
      Rref r = rref(dtop);
      s.free_cols_[base] = r.free_cols();
      s.kernel_[base] = nullspace(dtop);
      s.top_diff_[base] = std::move(dtop);
      for (int n = s.lo; n < s.top; ++n) v.set_dim(n, s.layout(base, n).total);
      v.set_dim(s.top, s.kernel_[base].cols());
    }
    values[base] = v;
    GradedMap d(v, v, 1, fld);
    for (int n = s.lo; n < s.top; ++n) {
      Matrix m = full_diff(base, n);
      if (n + 1 == s.top) {
        if (!(s.top_diff_[base] * m).is_zero())
          throw std::logic_error("delta_a does not square to zero; the structure datum violates Maurer-Cartan");
        const auto& fc = s.free_cols_[base];
        Matrix sel(fc.size(), m.cols(), fld);
        for (std::size_t r = 0; r < fc.size(); ++r) sel.set_block(r, 0, m.block(fc[r], 0, 1, m.cols()));
        m = std::move(sel);
      }
      d.set(n, std::move(m));
    }
    diffs[base] = std::move(d);
  }

  Presheaf space(nerve, nerve->faces(), fld);
  for (const auto& [f, v] : values) space.set_value(f, v);
  for (Face a : nerve->faces())
    for (Face b : nerve->faces()) {
      if (a == b || !face_contains(b, a)) continue;
      GradedMap res(values[a], values[b], 0, fld);
      for (int n = s.lo; n <= s.top; ++n) {
        const SheafLayout& la = s.layout(a, n);
        const SheafLayout& lb = s.layout(b, n);
        Matrix full(lb.total, la.total, fld);
        for (const auto& blk : la.blocks) {
          auto it = lb.index.find(blk.tuple);
          if (it == lb.index.end()) continue;
          const SheafBlock& tb = lb.blocks[it->second];
          int p = static_cast<int>(blk.tuple.size()) - 1;
          full.set_block(tb.offset, blk.offset, fam[blk.tuple.front()].restriction_at(blk.face, tb.face, n - p));
        }
        if (n == s.top) {
          Matrix m = full * s.kernel_[a];
          const auto& fc = s.free_cols_[b];
          Matrix sel(fc.size(), m.cols(), fld);
          for (std::size_t r = 0; r < fc.size(); ++r) sel.set_block(r, 0, m.block(fc[r], 0, 1, m.cols()));
          full = std::move(sel);
        }
        res.set(n, std::move(full));
      }
      space.set_restriction(a, b, std::move(res));
    }
  s.complex = GlobalComplex(std::move(space), std::move(diffs));
  return s;
}

int default_top(const std::vector<const TwistedComplex*>& ts) {
  int top = -1;
  bool any = false;
  for (const auto* t : ts) {
    auto [lo, hi] = t->locals->degree_range();
    if (lo > hi) continue;
    top = any ? std::max(top, hi) : hi;
    any = true;
  }
  return top;
}

GlobalMorphism sheafify_morphism(const Morphism& phi, const Sheafified& se, const Sheafified& sf) {
  if (!same_family(phi.src(), se.source.locals) || !same_family(phi.dst(), sf.source.locals))
    throw FamilyMismatch("sheafified morphism: families do not match");
  Field fld = phi.field();
  GlobalMorphism out;
  out.degree = phi.degree();
  for (Face base : se.source.nerve()->faces()) {
    const GradedSpace& sv = se.complex.value(base);
    const GradedSpace& tv = sf.complex.value(base);
    std::map<int, Matrix> comps;
    for (const auto& [n, dim] : sv.dims()) {
      int m = n + phi.degree();
      if (m > sf.top || m < sf.lo) continue;
      Matrix mat(tv.dim(m), dim, fld);
      for (std::size_t k = 0; k < dim; ++k) {
        auto coords = sf.coordinates(act(phi, se.basis_cochain(base, n, k)));
        if (!coords) throw NotClosed("sheafified morphism leaves the truncation at " + se.source.nerve()->face_name(base));
        set_column(mat, k, *coords);
      }
      comps[n] = std::move(mat);
    }
    out.maps[base] = from_columns(sv, tv, phi.degree(), fld, comps);
  }
  return out;
}

TwistedComplex twist(const GlobalComplex& p) {
  const auto& nerve = p.nerve();
  Field fld = p.field();
  std::vector<Presheaf> locals;
  for (int i = 0; i < nerve->size(); ++i) locals.push_back(p.space.restricted_to(nerve->star_of(i)));
  FamilyPtr fam = make_family(nerve, fld, std::move(locals));
  Morphism a(fam, fam, 1);
  for (int i = 0; i < nerve->size(); ++i)
    for (Face s : nerve->star_of(i)) a.add({i}, s, p.diff(s));
  for (int i = 0; i < nerve->size(); ++i)
    for (int j = 0; j < nerve->size(); ++j) {
      Face ij = singleton(i) | singleton(j);
      if (!nerve->is_face(ij)) continue;
      for (Face s : nerve->star(ij)) a.add({i, j}, s, GradedMap::identity(p.value(s), fld));
    }
  return TwistedComplex(fam, std::move(a), false);
}

Morphism twist_morphism(const GlobalMorphism& f, const TwistedComplex& tp, const TwistedComplex& tq) {
  Morphism out(tp.locals, tq.locals, f.degree);
  const auto& nerve = tp.nerve();
  for (int i = 0; i < nerve->size(); ++i)
    for (Face s : nerve->star_of(i)) {
      auto it = f.maps.find(s);
      if (it != f.maps.end()) out.add({i}, s, it->second);
    }
  return out;
}

GlobalMorphism tau(const GlobalComplex& p, const Sheafified& stp) {
  const auto& nerve = *p.nerve();
  Field fld = p.field();
  GlobalMorphism out;
  for (Face base : nerve.faces()) {
    const GradedSpace& sv = p.value(base);
    const GradedSpace& tv = stp.complex.value(base);
    std::map<int, Matrix> comps;
    for (const auto& [n, dim] : sv.dims()) {
      if (n > stp.top || n < stp.lo) continue;
      Matrix mat(tv.dim(n), dim, fld);
      for (std::size_t k = 0; k < dim; ++k) {
        Vector x = unit(dim, k, fld);
        Cochain c(stp.source.locals, base, n);
        for (int i = 0; i < nerve.size(); ++i) {
          Face fc = base | singleton(i);
          if (!nerve.is_face(fc)) continue;
          c.set({i}, p.space.restriction_at(base, fc, n).apply(x));
        }
        auto coords = stp.coordinates(c);
        if (!coords) throw std::logic_error("tau leaves the truncated sheafification");
        set_column(mat, k, *coords);
      }
      comps[n] = std::move(mat);
    }
    out.maps[base] = from_columns(sv, tv, 0, fld, comps);
  }
  return out;
}

Morphism gamma(const Sheafified& se, const TwistedComplex& tse) {
  Field fld = se.source.field();
  Morphism out(tse.locals, se.source.locals, 0);
  for (Face base : se.source.nerve()->faces())
    for (int n = se.lo; n <= se.top; ++n) {
      const SheafLayout& lay = se.layout(base, n);
      std::size_t cols = se.complex.value(base).dim(n);
      if (!cols) continue;
      for (const auto& blk : lay.blocks) {
        if (blk.face != base) continue;  // component defined only where base contains the tuple
        Matrix proj(blk.dim, cols, fld);
        for (std::size_t k = 0; k < cols; ++k) {
          Vector full = se.flatten(se.basis_cochain(base, n, k));
          for (std::size_t r = 0; r < blk.dim; ++r)
            if (!full[blk.offset + r].is_zero()) proj.set(r, k, full[blk.offset + r]);
        }
        out.add_matrix(blk.tuple, base, n, proj);
      }
    }
  return out;
}

LocalEquivalenceReport local_equivalence(const Sheafified& se, int j) {
  const TwistedComplex& t = se.source;
  Field fld = t.field();
  const auto& nerve = *t.nerve();
  const Family& fam = *t.locals;
  LocalEquivalenceReport rep;
  rep.index = j;
  auto fail = [&](bool& flag, const std::string& what, Face s) {
    if (flag && rep.failure.empty()) rep.failure = what + " fails on " + nerve.face_name(s);
    flag = false;
  };
  for (Face s : nerve.star_of(j)) {
    const GradedSpace& sv = se.complex.value(s);
    const GradedSpace& ev = fam[j].value(s);
    std::map<int, Matrix> fc, gc, hc;
    for (int n = se.lo; n <= se.top; ++n) {
      std::size_t sd = sv.dim(n), ed = ev.dim(n);
      // f: component (j)
      Matrix fm(ed, sd, fld);
      for (std::size_t k = 0; k < sd; ++k) set_column(fm, k, se.basis_cochain(s, n, k).at({j}));
      fc[n] = std::move(fm);
      // g(x)_I = (-1)^p a^{p+1,-p}_{I j}(x)
      Matrix gm(sd, ed, fld);
      for (std::size_t k = 0; k < ed; ++k) {
        Vector x = unit(ed, k, fld);
        Cochain c(t.locals, s, n);
        for (const auto& [tup, comp] : t.a.components()) {
          if (tup.size() < 2 || tup.back() != j) continue;
          Tuple in(tup.begin(), tup.end() - 1);
          int p = static_cast<int>(in.size()) - 1;
          Face fi = tuple_set(in) | s;
          auto it = comp.find(fi);
          if (it == comp.end()) continue;
          Vector y = it->second.at(n).apply(fam[j].restriction_at(s, fi, n).apply(x));
          c.add(in, y, Scalar((p & 1) ? -1 : 1, fld));
        }
        auto coords = se.coordinates(c);
        if (!coords) {
          fail(rep.g_chain, "g (image outside the truncation)", s);
          continue;
        }
        set_column(gm, k, *coords);
      }
      gc[n] = std::move(gm);
      // (h c)_I = (-1)^k c_{I j}
      if (n - 1 >= se.lo) {
        Matrix hm(sv.dim(n - 1), sd, fld);
        for (std::size_t k = 0; k < sd; ++k) {
          Cochain c = se.basis_cochain(s, n, k);
          Cochain out(t.locals, s, n - 1);
          for (const auto& [tup, v] : c.components()) {
            if (tup.size() < 2 || tup.back() != j) continue;
            Tuple in(tup.begin(), tup.end() - 1);
            int kk = static_cast<int>(in.size()) - 1;
            out.add(in, v, Scalar((kk & 1) ? -1 : 1, fld));
          }
          auto coords = se.coordinates(out);
          if (!coords) throw std::logic_error("homotopy leaves the truncation");
          set_column(hm, k, *coords);
        }
        hc[n] = std::move(hm);
      }
    }
    GradedMap f = from_columns(sv, ev, 0, fld, fc);
    GradedMap g = from_columns(ev, sv, 0, fld, gc);
    GradedMap h = from_columns(sv, sv, -1, fld, hc);
    GradedMap ds = se.complex.diff(s), de = t.a.at({j}, s);
    if (!(compose(de, f) == compose(f, ds))) fail(rep.f_chain, "f is not a chain map", s);
    if (!(compose(ds, g) == compose(g, de))) fail(rep.g_chain, "g is not a chain map", s);
    if (!(compose(f, g) == t.a.at({j, j}, s))) fail(rep.fg_is_transition, "f g = a_jj", s);
    GradedMap lhs = compose(g, f) - GradedMap::identity(sv, fld);
    GradedMap rhs = compose(ds, h) + compose(h, ds);
    if (!(lhs == rhs)) fail(rep.homotopy, "g f - id = d h + h d", s);
    rep.f[s] = std::move(f);
    rep.g[s] = std::move(g);
    rep.h[s] = std::move(h);
  }
  return rep;
}

AdjunctionReport verify_adjunction(const Sheafified& se, bool materialize) {
  AdjunctionReport rep;
  rep.materialized = materialize;
  const auto& nerve = *se.source.nerve();
  Field fld = se.source.field();
  TwistedComplex tse = twist(se.complex);
  Morphism gm = gamma(se, tse);
  if (materialize) {
    Sheafified stse = sheafify(tse, se.top);
    GlobalMorphism t = tau(se.complex, stse);
    GlobalMorphism sg = sheafify_morphism(gm, stse, se);
    GlobalMorphism comp = global_compose(sg, t, se.complex, stse.complex, se.complex);
    if (!global_equal(comp, global_identity(se.complex), se.complex, se.complex)) {
      rep.ok = false;
      rep.failure = "S(gamma) tau differs from the identity";
    }
    return rep;
  }
  for (Face base : nerve.faces())
    for (const auto& [n, dim] : se.complex.value(base).dims())
      for (std::size_t k = 0; k < dim; ++k) {
        Vector x = unit(dim, k, fld);
        Cochain c(tse.locals, base, n);
        for (int i = 0; i < nerve.size(); ++i) {
          Face fc = base | singleton(i);
          if (!nerve.is_face(fc)) continue;
          c.set({i}, se.complex.space.restriction_at(base, fc, n).apply(x));
        }
        auto coords = se.coordinates(act(gm, c));
        if (!coords || *coords != x) {
          rep.ok = false;
          rep.failure = "S(gamma) tau differs from the identity on " + nerve.face_name(base) + " in degree " +
                        std::to_string(n);
          return rep;
        }
      }
  return rep;
}

WeqCriterionReport weq_criterion(const Morphism& phi, const TwistedComplex& e, const TwistedComplex& f) {
  WeqCriterionReport rep;
  WeqReport w = is_weak_equivalence(phi, e, f);
  rep.twisted_route = w.ok;
  rep.reason = w.reason;
  if (phi.degree() != 0 || !morphism_diff(phi, e.a, f.a).is_zero()) {
    rep.sheafified_route = false;
    return rep;
  }
  int top = default_top({&e, &f});
  Sheafified se = sheafify(e, top), sf = sheafify(f, top);
  GlobalMorphism sp = sheafify_morphism(phi, se, sf);
  auto bad = facewise_cone_failure(sp, se.complex, sf.complex);
  rep.sheafified_route = !bad.has_value();
  if (bad && rep.reason.empty()) rep.reason = "cone of S(phi) has cohomology on " + e.nerve()->face_name(*bad);
  return rep;
}

}  // namespace tcx
