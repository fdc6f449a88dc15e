#include "twistedcx/resolution.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "twistedcx/system.hpp"

namespace tcx {

namespace {

struct UnitEntry {
  std::size_t unknown;
  Face face;
  int n;
  std::size_t r, c;
};

// Row layout for a list of graded maps with fixed shapes.
struct RowLayout {
  std::vector<std::map<int, std::size_t>> offsets;  // per map: source degree -> first row
  std::size_t total = 0;
};

RowLayout layout_of(const std::vector<GradedMap>& maps) {
  RowLayout lay;
  for (const auto& m : maps) {
    std::map<int, std::size_t> off;
    for (const auto& [n, cols] : m.src().dims()) {
      std::size_t rows = m.dst().dim(n + m.shift());
      if (!rows) continue;
      off[n] = lay.total;
      lay.total += rows * cols;
    }
    lay.offsets.push_back(std::move(off));
  }
  return lay;
}

void scatter(const std::vector<GradedMap>& maps, const RowLayout& lay, std::size_t base,
             std::map<std::size_t, Scalar>& out, const Scalar& coeff) {
  for (std::size_t k = 0; k < maps.size(); ++k)
    for (const auto& [n, m] : maps[k].components()) {
      auto it = lay.offsets[k].find(n);
      if (it == lay.offsets[k].end()) {
        if (!m.is_zero()) throw DimensionError("residual changed shape during a solve");
        continue;
      }
      std::size_t cols = m.cols();
      m.for_each_nonzero([&](std::size_t r, std::size_t c, const Scalar& v) {
        auto [pos, fresh] = out.try_emplace(base + it->second + r * cols + c, coeff * v);
        if (!fresh) pos->second += coeff * v;
      });
    }
}

// Covering pairs inside a list of faces.
std::vector<std::pair<Face, Face>> covering_pairs(const std::vector<Face>& faces) {
  std::vector<std::pair<Face, Face>> out;
  for (Face s : faces)
    for (Face t : faces)
      if (s != t && face_contains(t, s) && face_size(t) == face_size(s) + 1) out.emplace_back(s, t);
  return out;
}

GradedMap naturality_defect(const Morphism& m, const Tuple& t, Face from, Face to) {
  const Presheaf& src = (*m.src())[t.back()];
  const Presheaf& dst = (*m.dst())[t.front()];
  return compose(dst.restriction(from, to), m.at(t, from)) - compose(m.at(t, to), src.restriction(from, to));
}

Matrix unit_matrix(std::size_t rows, std::size_t cols, std::size_t r, std::size_t c, Field f) {
  Matrix m(rows, cols, f);
  m.set(r, c, Scalar(1, f));
  return m;
}

}  // namespace

bool solve_tuple(const Tuple& t, const std::vector<UnknownBlock>& unknowns, const FaceResidual& residual) {
  if (unknowns.empty()) throw std::invalid_argument("solve_tuple needs at least one unknown");
  const CoverNerve& nerve = *unknowns.front().morphism->nerve();
  Field fld = unknowns.front().morphism->field();
  std::vector<Face> faces = nerve.star(tuple_set(t));
  auto pairs = covering_pairs(faces);

  std::vector<UnitEntry> units;
  for (std::size_t u = 0; u < unknowns.size(); ++u) {
    const Morphism& m = *unknowns[u].morphism;
    for (Face f : faces) {
      GradedMap shape = m.zero_component(t, f);
      for (const auto& [n, cols] : shape.src().dims()) {
        std::size_t rows = shape.dst().dim(n + shape.shift());
        if (!rows) continue;
        std::array<std::size_t, 4> w{0, rows, 0, cols};
        if (unknowns[u].window) w = unknowns[u].window(f, n, rows, cols);
        for (std::size_t r = w[0]; r < w[1]; ++r)
          for (std::size_t c = w[2]; c < w[3]; ++c) units.push_back({u, f, n, r, c});
      }
    }
  }

  // Baseline residuals and their row layout.
  std::map<Face, std::vector<GradedMap>> base_face;
  std::map<Face, RowLayout> face_layout;
  std::map<Face, std::size_t> face_offset;
  std::size_t rows = 0;
  for (Face f : faces) {
    base_face[f] = residual(f);
    face_layout[f] = layout_of(base_face[f]);
    face_offset[f] = rows;
    rows += face_layout[f].total;
  }
  std::map<std::pair<std::size_t, std::size_t>, std::vector<GradedMap>> base_nat;  // (unknown, pair index)
  std::map<std::pair<std::size_t, std::size_t>, RowLayout> nat_layout;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> nat_offset;
  for (std::size_t u = 0; u < unknowns.size(); ++u)
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      auto key = std::make_pair(u, k);
      base_nat[key] = {naturality_defect(*unknowns[u].morphism, t, pairs[k].first, pairs[k].second)};
      nat_layout[key] = layout_of(base_nat[key]);
      nat_offset[key] = rows;
      rows += nat_layout[key].total;
    }

  std::map<std::size_t, Scalar> rhs;
  for (Face f : faces) scatter(base_face[f], face_layout[f], face_offset[f], rhs, Scalar(-1, fld));
  for (const auto& [key, maps] : base_nat) scatter(maps, nat_layout[key], nat_offset[key], rhs, Scalar(-1, fld));

  Matrix a(rows, units.size(), fld);
  for (std::size_t col = 0; col < units.size(); ++col) {
    const UnitEntry& e = units[col];
    Morphism& m = *unknowns[e.unknown].morphism;
    GradedMap shape = m.zero_component(t, e.face);
    Matrix unit = unit_matrix(shape.dst().dim(e.n + shape.shift()), shape.src().dim(e.n), e.r, e.c, fld);
    m.add_matrix(t, e.face, e.n, unit);
    std::map<std::size_t, Scalar> col_entries;
    scatter(residual(e.face), face_layout[e.face], face_offset[e.face], col_entries, Scalar(1, fld));
    scatter(base_face[e.face], face_layout[e.face], face_offset[e.face], col_entries, Scalar(-1, fld));
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (pairs[k].first != e.face && pairs[k].second != e.face) continue;
      auto key = std::make_pair(e.unknown, k);
      scatter({naturality_defect(m, t, pairs[k].first, pairs[k].second)}, nat_layout[key], nat_offset[key],
              col_entries, Scalar(1, fld));
      scatter(base_nat[key], nat_layout[key], nat_offset[key], col_entries, Scalar(-1, fld));
    }
    m.add_matrix(t, e.face, e.n, unit, Scalar(-1, fld));
    for (const auto& [r, v] : col_entries)
      if (!v.is_zero()) a.set(r, col, v);
  }

  Vector b(rows, Scalar(0, fld));
  for (const auto& [r, v] : rhs) b[r] = v;
  auto x = solve_linear(a, b);
  if (!x) return false;
  std::map<std::tuple<std::size_t, Face, int>, Matrix> updates;
  for (std::size_t col = 0; col < units.size(); ++col) {
    if ((*x)[col].is_zero()) continue;
    const UnitEntry& e = units[col];
    auto key = std::make_tuple(e.unknown, e.face, e.n);
    auto it = updates.find(key);
    if (it == updates.end()) {
      GradedMap shape = unknowns[e.unknown].morphism->zero_component(t, e.face);
      it = updates.emplace(key, Matrix(shape.dst().dim(e.n + shape.shift()), shape.src().dim(e.n), fld)).first;
    }
    it->second.set(e.r, e.c, (*x)[col]);
  }
  for (const auto& [key, mat] : updates)
    unknowns[std::get<0>(key)].morphism->add_matrix(t, std::get<1>(key), std::get<2>(key), mat);
  return true;
}

std::optional<Morphism> twisted_null_homotopy(const Morphism& x, const TwistedComplex& e, const TwistedComplex& f) {
  if (!same_family(x.src(), e.locals) || !same_family(x.dst(), f.locals))
    throw FamilyMismatch("null homotopy: morphism does not connect the given complexes");
  const CoverNerve& nerve = *e.nerve();
  Field fld = e.field();
  const Family& src = *e.locals;
  const Family& dst = *f.locals;
  int deg = x.degree() - 1;
  Morphism shape(e.locals, f.locals, deg);
  Morphism eq_shape(e.locals, f.locals, x.degree());
  int pmax = max_cech_bound(src, dst, deg);
  int emax = std::max(pmax + 1, x.max_cech());
  MatrixSystem sys(fld);

  // unknown blocks nu_I(face)^n
  std::map<std::tuple<Tuple, Face, int>, int> unk;
  for (const Tuple& t : tuples_up_to(nerve, pmax))
    for (Face s : nerve.star(tuple_set(t))) {
      GradedMap z = shape.zero_component(t, s);
      for (const auto& [n, cols] : z.src().dims()) {
        std::size_t rows = z.dst().dim(n + z.shift());
        if (rows) unk[{t, s, n}] = sys.add_unknown(rows, cols);
      }
    }
  auto find_unknown = [&](const Tuple& t, Face s, int n) -> int {
    auto it = unk.find({t, s, n});
    return it == unk.end() ? -1 : it->second;
  };

  Scalar right_sign((deg & 1) ? 1 : -1, fld);
  for (const Tuple& j : tuples_up_to(nerve, emax)) {
    int p = static_cast<int>(j.size()) - 1;
    for (Face s : nerve.star(tuple_set(j))) {
      GradedMap z = eq_shape.zero_component(j, s);
      GradedMap xj = x.at(j, s);
      for (const auto& [n, cols] : z.src().dims()) {
        std::size_t rows = z.dst().dim(n + z.shift());
        if (!rows) continue;
        int eq = sys.add_equation(rows, cols);
        sys.add_rhs(eq, xj.at(n));
        // interior Cech differential
        for (int k = 1; k <= p - 1; ++k) {
          Tuple a = j;
          a.erase(a.begin() + k);
          int u = find_unknown(a, s, n);
          if (u >= 0) sys.add_term(eq, nullptr, u, nullptr, Scalar((k & 1) ? -1 : 1, fld));
        }
        for (int m = 0; m <= p; ++m) {
          Tuple head(j.begin(), j.begin() + m + 1), tail(j.begin() + m, j.end());
          int rt = p - m;
          // b_head . nu_tail
          if (const auto* bm = f.a.find(head, s)) {
            int u = find_unknown(tail, s, n);
            if (u >= 0) {
              Matrix l = bm->at(n + deg - rt);
              sys.add_term(eq, &l, u, nullptr, Scalar(koszul_sign(1 - m, rt), fld));
            }
          }
          // nu_head . a_tail
          if (const auto* am = e.a.find(tail, s)) {
            int u = find_unknown(head, s, n + 1 - rt);
            if (u >= 0) {
              Matrix r = am->at(n);
              sys.add_term(eq, nullptr, u, &r, right_sign * Scalar(koszul_sign(deg - m, rt), fld));
            }
          }
        }
      }
    }
  }
  // naturality of every unknown component
  for (const Tuple& t : tuples_up_to(nerve, pmax))
    for (const auto& [from, to] : covering_pairs(nerve.star(tuple_set(t)))) {
      GradedMap z = shape.zero_component(t, from);
      for (const auto& [n, cols] : z.src().dims()) {
        std::size_t rows = z.dst().dim(n + z.shift());
        if (!rows) continue;
        int uf = find_unknown(t, from, n), ut = find_unknown(t, to, n);
        std::size_t out_rows = dst[t.front()].value(to).dim(n + deg - static_cast<int>(t.size()) + 1);
        if (!out_rows) continue;
        int eq = sys.add_equation(out_rows, cols);
        Matrix rd = dst[t.front()].restriction_at(from, to, n + z.shift());
        Matrix rs = src[t.back()].restriction_at(from, to, n);
        if (uf >= 0) sys.add_term(eq, &rd, uf, nullptr);
        if (ut >= 0) sys.add_term(eq, nullptr, ut, &rs, Scalar(-1, fld));
      }
    }

  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  Morphism out = shape;
  for (const auto& [key, id] : unk) {
    const Matrix& m = (*sol)[id];
    if (!m.is_zero()) out.add_matrix(std::get<0>(key), std::get<1>(key), std::get<2>(key), m);
  }
  return out;
}

bool ResolutionResult::has_nonzero_higher() const {
  for (const auto& [t, comp] : resolved.a.components())
    if (t.size() >= 3 && !comp.empty()) return true;
  return false;
}

std::optional<std::pair<Face, Face>> perfectness_failure(const GlobalComplex& p) {
  const auto& nerve = *p.nerve();
  for (Face s : nerve.faces())
    for (Face t : nerve.star(s)) {
      if (t == s || face_size(t) != face_size(s) + 1) continue;
      GradedMap r = p.space.restriction(s, t);
      if (!is_acyclic(mapping_cone(p.at(s), p.at(t), r))) return std::make_pair(s, t);
    }
  return std::nullopt;
}

ResolutionResult twisted_resolution(const GlobalComplex& p, const ResolutionOptions& opts) {
  auto rep = validate_global(p);
  if (!rep.valid) throw std::invalid_argument("resolution input is not a complex of presheaves: " + rep.message);
  const NervePtr& nerve = p.nerve();
  if (auto bad = perfectness_failure(p))
    throw NotPerfect("restriction " + nerve->face_name(bad->first) + " -> " + nerve->face_name(bad->second) +
                     " is not a quasi-isomorphism");
  Field fld = p.field();
  int size = nerve->size();

  ResolutionResult res;
  res.target = twist(p);
  const TwistedComplex& tp = res.target;
  std::vector<Presheaf> e_locals, g_locals;
  for (int i = 0; i < size; ++i) {
    ChainComplex local = p.at(singleton(i));
    if (opts.minimal_models) {
      res.local_models.push_back(minimize_complex(local));
    } else {
      GradedMap id = GradedMap::identity(local.space, fld);
      GradedMap zero(local.space, local.space, -1, fld);
      res.local_models.push_back(MinimalModel{local, id, id, zero});
    }
    Presheaf ei = Presheaf::constant(nerve, nerve->star_of(i), res.local_models.back().model.space, fld);
    g_locals.push_back(presheaf_sum(shift_presheaf(ei, 1), (*tp.locals)[i]));
    e_locals.push_back(std::move(ei));
  }
  FamilyPtr e = make_family(nerve, fld, std::move(e_locals));
  FamilyPtr g = make_family(nerve, fld, std::move(g_locals));

  // The cone datum c on G_i = E_i[1] + P_i carries both the structure on E
  // (top-left block) and the comparison map (bottom-left block).
  Morphism c(g, g, 1);
  auto block = [&](const Tuple& t, Face s, const GradedMap& am, const GradedMap& pm, const GradedMap& bm) {
    int k = static_cast<int>(t.size()) - 1;
    Scalar sa(((k - 1) & 1) ? -1 : 1, fld);
    const Family& ef = *e;
    const Family& pf = *tp.locals;
    GradedMap out = c.zero_component(t, s);
    for (const auto& [n, dim] : out.src().dims()) {
      (void)dim;
      int m = n + 1 - k;
      std::size_t rows_e = ef[t.front()].value(s).dim(m + 1), cols_e = ef[t.back()].value(s).dim(n + 1);
      Matrix blk(rows_e + pf[t.front()].value(s).dim(m), cols_e + pf[t.back()].value(s).dim(n), fld);
      blk.add_block(0, 0, am.at(n + 1), sa);
      blk.add_block(rows_e, 0, pm.at(n + 1));
      blk.add_block(rows_e, cols_e, bm.at(n));
      out.set(n, std::move(blk));
    }
    return out;
  };
  Morphism e_shape(e, e, 1), phi_shape(e, tp.locals, 0), b_shape(tp.locals, tp.locals, 1);
  for (int i = 0; i < size; ++i) {
    const MinimalModel& mm = res.local_models[i];
    for (Face s : nerve->star_of(i)) {
      GradedMap phi0 = compose(p.space.restriction(singleton(i), s), mm.incl);
      c.set({i}, s, block({i}, s, mm.model.d, phi0, tp.a.at({i}, s)));
    }
  }
  for (const auto& [t, comp] : tp.a.components()) {
    if (t.size() < 2) continue;
    for (const auto& [s, bm] : comp) {
      GradedMap am = e_shape.zero_component(t, s);
      if (t.size() == 2 && t[0] == t[1]) am = GradedMap::identity((*e)[t[0]].value(s), fld);
      c.set(t, s, block(t, s, am, phi_shape.zero_component(t, s), bm));
    }
  }

  int kmax = max_cech_bound(*g, *g, 1);
  for (int k = 1; k <= kmax; ++k)
    for (const Tuple& t : nerve->tuples(static_cast<std::size_t>(k + 1))) {
      ResolutionStep step{t, true};
      const Family& ef = *e;
      bool fixed_diag = k == 1 && t[0] == t[1];
      // right-hand side without the unknown component
      Morphism::Component saved;
      if (auto it = c.components().find(t); it != c.components().end()) saved = it->second;
      c.erase(t);
      Scalar sk((k & 1) ? -1 : 1, fld);
      for (Face s : nerve->star(tuple_set(t))) {
        GradedMap r = cech_delta_component(c, t, s) + compose_component(c, c, t, s);
        GradedMap dr = sk * compose(c.at({t.front()}, s), r) - compose(r, c.at({t.back()}, s));
        if (!dr.is_zero()) step.cocycle = false;
      }
      for (auto& [s, m] : saved) c.set(t, s, m);

      UnknownBlock ub{&c, [&, t, fixed_diag](Face s, int n, std::size_t rows, std::size_t) {
                        std::size_t cols_e = ef[t.back()].value(s).dim(n + 1);
                        std::size_t r0 = fixed_diag ? ef[t.front()].value(s).dim(n + 2 - k) : 0;
                        return std::array<std::size_t, 4>{r0, rows, 0, cols_e};
                      }};
      auto residual = [&, t](Face s) {
        return std::vector<GradedMap>{cech_delta_component(c, t, s) + compose_component(c, c, t, s)};
      };
      bool ok = solve_tuple(t, {ub}, residual);
      res.steps.push_back(step);
      if (!ok)
        throw LiftFailed("no lift at " + nerve->tuple_name(t) +
                         (step.cocycle ? std::string() : std::string(" (right-hand side is not a cocycle)")));
    }

  // Read off a and the comparison map from the blocks of c.
  Morphism a(e, e, 1), phi(e, tp.locals, 0);
  for (const auto& [t, comp] : c.components()) {
    int k = static_cast<int>(t.size()) - 1;
    Scalar sa(((k - 1) & 1) ? -1 : 1, fld);
    for (const auto& [s, m] : comp) {
      GradedMap am = e_shape.zero_component(t, s), pm = phi_shape.zero_component(t, s);
      for (const auto& [n, mat] : m.components()) {
        int tgt = n + 1 - k;
        std::size_t rows_e = (*e)[t.front()].value(s).dim(tgt + 1), cols_e = (*e)[t.back()].value(s).dim(n + 1);
        if (!cols_e) continue;
        if (rows_e) am.add(n + 1, mat.block(0, 0, rows_e, cols_e), sa);
        std::size_t rows_p = mat.rows() - rows_e;
        if (rows_p) pm.add(n + 1, mat.block(rows_e, 0, rows_p, cols_e));
      }
      if (!am.is_zero()) a.add(t, s, am);
      if (!pm.is_zero()) phi.add(t, s, pm);
    }
  }
  res.resolved = TwistedComplex(e, std::move(a), false);
  res.comparison = std::move(phi);

  auto mc = check_mc(res.resolved);
  if (!mc.valid) throw LiftFailed("resolved datum violates the Maurer-Cartan equation: " + mc.describe(*nerve));
  auto weq = is_weak_equivalence(res.comparison, res.resolved, tp);
  if (!weq.ok) throw LiftFailed("comparison map is not a weak equivalence: " + weq.reason);
  return res;
}

Factorization factor_through(const Morphism& phi, const TwistedComplex& e, const Morphism& psi,
                             const TwistedComplex& g, const TwistedComplex& f, bool check_precondition) {
  if (!same_family(phi.src(), e.locals) || !same_family(phi.dst(), f.locals) || !same_family(psi.src(), g.locals) ||
      !same_family(psi.dst(), f.locals))
    throw FamilyMismatch("factor_through: morphisms do not connect the given complexes");
  if (check_precondition) {
    auto w = is_weak_equivalence(psi, g, f);
    if (!w.ok) throw NotWeakEquivalence("factor_through: " + w.reason);
  }
  if (!morphism_diff(phi, e.a, f.a).is_zero()) throw NotClosed("factor_through needs a closed morphism");
  const CoverNerve& nerve = *e.nerve();
  int l = phi.degree();
  Factorization out{Morphism(e.locals, g.locals, l), Morphism(e.locals, f.locals, l - 1)};
  int pmax = std::max({max_cech_bound(*e.locals, *g.locals, l) + 1, max_cech_bound(*e.locals, *f.locals, l - 1) + 1,
                       phi.max_cech()});
  for (const Tuple& t : tuples_up_to(nerve, pmax)) {
    auto residual = [&, t](Face s) {
      GradedMap lift = compose_component(psi, out.theta, t, s) - phi.at(t, s) -
                       morphism_diff_component(out.mu, e.a, f.a, t, s);
      return std::vector<GradedMap>{morphism_diff_component(out.theta, e.a, g.a, t, s), lift};
    };
    if (!solve_tuple(t, {UnknownBlock{&out.theta, {}}, UnknownBlock{&out.mu, {}}}, residual))
      throw LiftFailed("factor_through: no lift at " + nerve.tuple_name(t));
  }
  if (!morphism_diff(out.theta, e.a, g.a).is_zero() ||
      !(compose(psi, out.theta) - phi == morphism_diff(out.mu, e.a, f.a)))
    throw LiftFailed("factor_through: certificate check failed");
  return out;
}

Inverse invert_weak_equivalence(const Morphism& phi, const TwistedComplex& e, const TwistedComplex& f,
                                bool check_precondition) {
  if (check_precondition) {
    auto w = is_weak_equivalence(phi, e, f);
    if (!w.ok) throw NotWeakEquivalence("invert: " + w.reason);
  }
  Morphism id_f = Morphism::identity(f.locals);
  Factorization fac = factor_through(id_f, f, phi, e, f, false);
  Morphism left = compose(fac.theta, phi) - Morphism::identity(e.locals);
  auto nu = twisted_null_homotopy(left, e, e);
  if (!nu) throw LiftFailed("invert: inverse is only a one-sided homotopy inverse");
  return Inverse{std::move(fac.theta), std::move(fac.mu), std::move(*nu)};
}

Transfer hom_transfer(const GlobalMorphism& f, const Sheafified& sa, const Sheafified& sb) {
  if (sa.top != sb.top) throw std::invalid_argument("hom_transfer: sheafifications have different top degrees");
  if (f.degree != 0) throw WrongDegree("hom_transfer needs a degree-0 map");
  if (!global_diff(f, sa.complex, sb.complex).is_zero()) throw NotClosed("hom_transfer needs a chain map");
  TwistedComplex tsa = twist(sa.complex), tsb = twist(sb.complex);
  Morphism ga = gamma(sa, tsa), gb = gamma(sb, tsb);
  Inverse inv = invert_weak_equivalence(ga, tsa, sa.source);
  Morphism tf = twist_morphism(f, tsa, tsb);
  Transfer out;
  out.theta = compose(gb, compose(tf, inv.inverse));
  GlobalMorphism st = sheafify_morphism(out.theta, sa, sb);
  GlobalMorphism diff = global_difference(st, f, sa.complex, sb.complex);
  auto h = natural_null_homotopy(diff, sa.complex, sb.complex, 1);
  if (!h) throw LiftFailed("hom_transfer: transferred map is not homotopic to the input");
  out.homotopy = std::move(*h);
  return out;
}

}  // namespace tcx
