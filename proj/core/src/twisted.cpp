#include "twistedcx/twisted.hpp"

#include <algorithm>
#include <sstream>

namespace tcx {

TwistedComplex::TwistedComplex(FamilyPtr e, Morphism datum, bool gen)
    : locals(std::move(e)), a(std::move(datum)), generalized(gen) {
  if (a.degree() != 1) throw WrongDegree("structure datum must have total degree 1");
  if (!same_family(a.src(), locals) || !same_family(a.dst(), locals))
    throw FamilyMismatch("structure datum is not an endomorphism of the locals");
}

ChainComplex TwistedComplex::local_complex(int i, Face f) const {
  const GradedSpace& v = (*locals)[i].value(f);
  return ChainComplex(v, a.at({i}, f));
}

std::string McReport::describe(const CoverNerve& n) const {
  if (valid) return "Maurer-Cartan equation holds";
  if (violations.empty()) return "structure datum is not a degree-1 endomorphism of the locals";
  const auto& v = violations.front();
  std::ostringstream os;
  os << "Maurer-Cartan equation fails at Cech degree " << v.k << ", multi-index " << n.tuple_name(v.tuple)
     << ", face " << n.face_name(v.face) << ", source degree " << v.degree << " (" << violations.size()
     << " violation" << (violations.size() == 1 ? "" : "s") << ")";
  return os.str();
}

McReport check_mc(const FamilyPtr& e, const Morphism& a) {
  McReport rep;
  if (a.degree() != 1 || !same_family(a.src(), e) || !same_family(a.dst(), e)) {
    rep.valid = false;
    return rep;
  }
  Morphism r = cech_delta(a) + compose(a, a);
  for (const auto& [t, comp] : r.components())
    for (const auto& [f, m] : comp)
      for (const auto& [n, mat] : m.components())
        if (!mat.is_zero()) rep.violations.push_back({static_cast<int>(t.size()) - 1, t, f, n});
  rep.valid = rep.violations.empty();
  return rep;
}

std::optional<NondegeneracyEntry> NondegeneracyReport::first_failure() const {
  for (const auto& e : entries)
    if (!e.homotopic_to_id) return e;
  return std::nullopt;
}

NondegeneracyReport check_nondegenerate(const TwistedComplex& t) {
  NondegeneracyReport rep;
  Field fld = t.field();
  for (int i = 0; i < t.size(); ++i)
    for (Face s : t.nerve()->star_of(i)) {
      NondegeneracyEntry e;
      e.index = i;
      e.face = s;
      ChainComplex c = t.local_complex(i, s);
      GradedMap aii = t.transition(i, i, s);
      GradedMap target = GradedMap::identity(c.space, fld) - aii;
      e.witness = null_homotopy(target, c, c, 1);
      e.homotopic_to_id = e.witness.has_value();
      e.quasi_iso = is_acyclic(mapping_cone(c, c, aii));
      if (!e.homotopic_to_id) rep.valid = false;
      if (e.homotopic_to_id != e.quasi_iso) rep.consistent = false;
      rep.entries.push_back(std::move(e));
    }
  return rep;
}

IdempotentReport check_idempotent(const TwistedComplex& t, int i) {
  IdempotentReport rep;
  Tuple iii{i, i, i};
  for (Face s : t.nerve()->star_of(i)) {
    // first route: the MC residual component
    GradedMap residual = cech_delta_component(t.a, iii, s);
    residual += compose_component(t.a, t.a, iii, s);
    // second route: -a_ii + a_ii a_ii + a^{0,1} a^{2,-1} + a^{2,-1} a^{0,1}
    GradedMap d = t.a.at({i}, s);
    GradedMap aii = t.a.at({i, i}, s);
    GradedMap h = t.a.at(iii, s);
    GradedMap explicit_form = -aii;
    explicit_form += compose(aii, aii);
    explicit_form += compose(d, h);
    explicit_form += compose(h, d);
    if (!(residual == explicit_form)) rep.routes_agree = false;
    if (!residual.is_zero() || !explicit_form.is_zero()) {
      rep.valid = false;
      rep.failing_faces.push_back(s);
    }
  }
  return rep;
}

Cochain delta_a(const TwistedComplex& t, const Cochain& c) { return cech_delta(c) + act(t.a, c); }

GradedMap shift_map(const GradedMap& m, int k) {
  GradedMap out(m.src().shifted(k), m.dst().shifted(k), m.shift(), m.field());
  for (const auto& [n, mat] : m.components()) out.set(n - k, mat);
  return out;
}

Presheaf shift_presheaf(const Presheaf& p, int k) {
  Presheaf out(p.nerve(), p.domain(), p.field());
  for (Face f : p.domain()) out.set_value(f, p.value(f).shifted(k));
  for (Face a : p.domain())
    for (Face b : p.domain())
      if (a != b && face_contains(b, a)) out.set_restriction(a, b, shift_map(p.restriction(a, b), k));
  return out;
}

FamilyPtr shift_family(const FamilyPtr& f, int k) {
  std::vector<Presheaf> locals;
  for (const auto& p : f->locals) locals.push_back(shift_presheaf(p, k));
  return make_family(f->nerve, f->field, std::move(locals));
}

namespace {

// Re-indexes every component of u onto the shifted families, scaling the
// component of Cech degree p and sheaf degree q by sign(p, q).
template <class SignFn>
Morphism reindex(const Morphism& u, const FamilyPtr& src1, const FamilyPtr& dst1, int k, SignFn sign) {
  Morphism out(src1, dst1, u.degree());
  for (const auto& [t, comp] : u.components()) {
    int p = static_cast<int>(t.size()) - 1;
    Scalar s(sign(p, u.sheaf_degree(t)), u.field());
    for (const auto& [f, m] : comp) out.add(t, f, shift_map(m, k), s);
  }
  return out;
}

}  // namespace

TwistedComplex shift(const TwistedComplex& t) {
  FamilyPtr e1 = shift_family(t.locals, 1);
  Morphism a1 = reindex(t.a, e1, e1, 1, [](int p, int) { return ((p - 1) & 1) ? -1 : 1; });
  return TwistedComplex(e1, std::move(a1), t.generalized);
}

Morphism shift_morphism(const Morphism& phi, const FamilyPtr& src1, const FamilyPtr& dst1) {
  return reindex(phi, src1, dst1, 1, [](int, int q) { return (q & 1) ? -1 : 1; });
}

Morphism shift_morphism(const Morphism& phi) {
  FamilyPtr s1 = shift_family(phi.src(), 1);
  FamilyPtr d1 = phi.src() == phi.dst() ? s1 : shift_family(phi.dst(), 1);
  return shift_morphism(phi, s1, d1);
}

Presheaf presheaf_sum(const Presheaf& a, const Presheaf& b) {
  if (a.domain() != b.domain()) throw NerveError("direct sum of presheaves on different domains");
  Field fld = a.field();
  Presheaf out(a.nerve(), a.domain(), fld);
  for (Face f : a.domain()) out.set_value(f, direct_sum(a.value(f), b.value(f)));
  for (Face x : a.domain())
    for (Face y : a.domain()) {
      if (x == y || !face_contains(y, x)) continue;
      GradedMap m(out.value(x), out.value(y), 0, fld);
      for (const auto& [n, dim] : out.value(x).dims()) {
        (void)dim;
        m.set(n, block_diag({a.restriction_at(x, y, n), b.restriction_at(x, y, n)}, fld));
      }
      out.set_restriction(x, y, std::move(m));
    }
  return out;
}

TwistedComplex cone(const Morphism& phi, const TwistedComplex& e, const TwistedComplex& f) {
  if (phi.degree() != 0) throw WrongDegree("mapping cone needs a degree-0 morphism");
  if (!same_family(phi.src(), e.locals) || !same_family(phi.dst(), f.locals))
    throw FamilyMismatch("mapping cone: morphism does not connect the given complexes");
  if (!morphism_diff(phi, e.a, f.a).is_zero()) throw NotClosed("mapping cone needs a closed morphism");
  Field fld = e.field();
  const auto& nerve = e.nerve();
  std::vector<Presheaf> locals;
  for (int i = 0; i < e.size(); ++i) locals.push_back(presheaf_sum(shift_presheaf((*e.locals)[i], 1), (*f.locals)[i]));
  FamilyPtr g = make_family(nerve, fld, std::move(locals));
  Morphism c(g, g, 1);
  std::map<Tuple, std::vector<Face>> keys;
  for (const auto* src : {&e.a, &f.a, &phi})
    for (const auto& [t, comp] : src->components())
      for (const auto& [face, m] : comp) {
        (void)m;
        keys[t].push_back(face);
      }
  for (auto& [t, faces] : keys) {
    std::sort(faces.begin(), faces.end());
    faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
    int k = static_cast<int>(t.size()) - 1;
    int first = t.front(), last = t.back();
    // The comparison block carries no Cech sign: with the Koszul rule of
    // compose() this is the only choice for which MC(c) <=> d phi = 0.
    Scalar sa(((k - 1) & 1) ? -1 : 1, fld);
    for (Face face : faces) {
      const GradedSpace& es = (*e.locals)[last].value(face);
      const GradedSpace& fs = (*f.locals)[last].value(face);
      const GradedSpace& et = (*e.locals)[first].value(face);
      const GradedSpace& ft = (*f.locals)[first].value(face);
      GradedMap am = e.a.at(t, face), bm = f.a.at(t, face), pm = phi.at(t, face);
      GradedMap out = c.zero_component(t, face);
      for (const auto& [n, dim] : out.src().dims()) {
        (void)dim;
        int m = n + 1 - k;  // target degree
        std::size_t rows_e = et.dim(m + 1), cols_e = es.dim(n + 1);
        Matrix blk(rows_e + ft.dim(m), cols_e + fs.dim(n), fld);
        blk.add_block(0, 0, am.at(n + 1), sa);
        blk.add_block(rows_e, 0, pm.at(n + 1));
        blk.add_block(rows_e, cols_e, bm.at(n));
        out.set(n, std::move(blk));
      }
      c.add(t, face, out);
    }
  }
  return TwistedComplex(g, std::move(c), e.generalized || f.generalized);
}

WeqReport is_weak_equivalence(const Morphism& phi, const TwistedComplex& e, const TwistedComplex& f) {
  WeqReport rep;
  if (phi.degree() != 0) {
    rep.ok = false;
    rep.reason = "morphism has degree " + std::to_string(phi.degree());
    return rep;
  }
  if (!morphism_diff(phi, e.a, f.a).is_zero()) {
    rep.ok = false;
    rep.reason = "morphism is not closed";
    return rep;
  }
  for (int i = 0; i < e.size(); ++i)
    for (Face s : e.nerve()->star_of(i)) {
      ChainComplex src = e.local_complex(i, s), dst = f.local_complex(i, s);
      if (!is_acyclic(mapping_cone(src, dst, phi.at({i}, s)))) {
        rep.ok = false;
        rep.index = i;
        rep.face = s;
        rep.reason = "component " + e.nerve()->labels()[i] + " is not a quasi-isomorphism on " +
                     e.nerve()->face_name(s);
        return rep;
      }
    }
  return rep;
}

TwistedComplex zero_twisted(NervePtr nerve, Field f) {
  FamilyPtr z = zero_family(std::move(nerve), f);
  return TwistedComplex(z, Morphism(z, z, 1), false);
}

}  // namespace tcx
