#include "twistedcx/morphism.hpp"

#include <algorithm>
#include <limits>

namespace tcx {

std::pair<int, int> Family::degree_range() const {
  int lo = std::numeric_limits<int>::max(), hi = std::numeric_limits<int>::min();
  for (const auto& p : locals)
    for (Face f : p.domain()) {
      auto [a, b] = p.value(f).support();
      if (a > b) continue;
      lo = std::min(lo, a);
      hi = std::max(hi, b);
    }
  if (lo > hi) return {0, -1};
  return {lo, hi};
}

bool Family::is_zero() const {
  auto [lo, hi] = degree_range();
  return lo > hi;
}

FamilyPtr make_family(NervePtr nerve, Field f, std::vector<Presheaf> locals) {
  if (static_cast<int>(locals.size()) != nerve->size())
    throw FamilyMismatch("one local object per open is required");
  for (int i = 0; i < nerve->size(); ++i) {
    auto star = nerve->star_of(i);
    if (locals[i].domain() != star)
      throw FamilyMismatch("local object " + nerve->labels()[i] + " is not defined exactly on its star");
    if (!(*locals[i].nerve() == *nerve)) throw FamilyMismatch("local object over a different nerve");
  }
  auto fam = std::make_shared<Family>();
  fam->nerve = std::move(nerve);
  fam->field = f;
  fam->locals = std::move(locals);
  return fam;
}

FamilyPtr zero_family(NervePtr nerve, Field f) {
  std::vector<Presheaf> locals;
  for (int i = 0; i < nerve->size(); ++i) locals.push_back(Presheaf::zero(nerve, nerve->star_of(i), f));
  return make_family(std::move(nerve), f, std::move(locals));
}

bool same_family(const FamilyPtr& a, const FamilyPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (!(*a->nerve == *b->nerve) || a->locals.size() != b->locals.size()) return false;
  for (std::size_t i = 0; i < a->locals.size(); ++i)
    if (!(a->locals[i] == b->locals[i])) return false;
  return true;
}

int max_cech_bound(const Family& src, const Family& dst, int degree) {
  auto shi = src.degree_range().second;
  auto dlo = dst.degree_range().first;
  if (src.is_zero() || dst.is_zero()) return -1;
  // component p maps degree n to n + degree - p, which must be at least dlo
  int p = degree + shi - dlo;
  return p < 0 ? -1 : p;
}

Morphism::Morphism(FamilyPtr src, FamilyPtr dst, int degree)
    : src_(std::move(src)), dst_(std::move(dst)), degree_(degree) {
  if (!src_ || !dst_) throw FamilyMismatch("morphism needs source and target families");
  if (!(*src_->nerve == *dst_->nerve)) throw FamilyMismatch("morphism between families over different nerves");
}

Morphism Morphism::identity(const FamilyPtr& f) {
  Morphism m(f, f, 0);
  for (int i = 0; i < f->size(); ++i)
    for (Face s : f->nerve->star_of(i)) {
      const auto& v = (*f)[i].value(s);
      if (!v.is_zero()) m.set({i}, s, GradedMap::identity(v, f->field));
    }
  return m;
}

void Morphism::check_key(const Tuple& t, Face f) const {
  if (t.empty()) throw std::invalid_argument("empty multi-index");
  for (int i : t)
    if (i < 0 || i >= nerve()->size()) throw std::invalid_argument("multi-index refers to an unknown open");
  if (!nerve()->is_face(f) || !face_contains(f, tuple_set(t)))
    throw std::invalid_argument("component face " + nerve()->face_name(f) + " does not contain " +
                                nerve()->tuple_name(t));
}

const GradedMap* Morphism::find(const Tuple& t, Face f) const {
  auto it = comps_.find(t);
  if (it == comps_.end()) return nullptr;
  auto jt = it->second.find(f);
  return jt == it->second.end() ? nullptr : &jt->second;
}

GradedMap Morphism::zero_component(const Tuple& t, Face f) const {
  return GradedMap((*src_)[t.back()].value(f), (*dst_)[t.front()].value(f), sheaf_degree(t), field());
}

GradedMap Morphism::at(const Tuple& t, Face f) const {
  if (const auto* m = find(t, f)) return *m;
  return zero_component(t, f);
}

void Morphism::prune(const Tuple& t, Face f) {
  auto it = comps_.find(t);
  if (it == comps_.end()) return;
  auto jt = it->second.find(f);
  if (jt != it->second.end() && jt->second.is_zero()) it->second.erase(jt);
  if (it->second.empty()) comps_.erase(it);
}

void Morphism::set(const Tuple& t, Face f, GradedMap m) {
  check_key(t, f);
  if (!(m.src() == (*src_)[t.back()].value(f)) || !(m.dst() == (*dst_)[t.front()].value(f)) ||
      m.shift() != sheaf_degree(t))
    throw DimensionError("component at " + nerve()->tuple_name(t) + " on " + nerve()->face_name(f) +
                         " has the wrong shape");
  comps_[t][f] = std::move(m);
  prune(t, f);
}

void Morphism::add(const Tuple& t, Face f, const GradedMap& m, const Scalar& coeff) {
  if (coeff.is_zero() || m.is_zero()) return;
  check_key(t, f);
  auto& comp = comps_[t];
  auto it = comp.find(f);
  if (it == comp.end()) {
    GradedMap z = zero_component(t, f);
    z += m;
    if (!coeff.is_one()) z *= coeff;
    comp.emplace(f, std::move(z));
  } else {
    if (coeff.is_one())
      it->second += m;
    else
      it->second += coeff * m;
  }
  prune(t, f);
}

void Morphism::add_matrix(const Tuple& t, Face f, int n, const Matrix& m, const Scalar& coeff) {
  if (coeff.is_zero() || m.is_zero()) return;
  check_key(t, f);
  auto& comp = comps_[t];
  auto it = comp.find(f);
  if (it == comp.end()) it = comp.emplace(f, zero_component(t, f)).first;
  it->second.add(n, m, coeff);
  prune(t, f);
}

Morphism Morphism::cech_part(int p) const {
  Morphism out(src_, dst_, degree_);
  for (const auto& [t, comp] : comps_)
    if (static_cast<int>(t.size()) == p + 1) out.comps_[t] = comp;
  return out;
}

int Morphism::max_cech() const { return max_cech_bound(*src_, *dst_, degree_); }

bool Morphism::is_zero() const {
  for (const auto& [t, comp] : comps_)
    for (const auto& [f, m] : comp)
      if (!m.is_zero()) return false;
  return true;
}

Morphism& Morphism::operator+=(const Morphism& o) {
  if (degree_ != o.degree_ || !same_family(src_, o.src_) || !same_family(dst_, o.dst_))
    throw FamilyMismatch("sum of morphisms with different source, target or degree");
  for (const auto& [t, comp] : o.comps_)
    for (const auto& [f, m] : comp) add(t, f, m);
  return *this;
}

Morphism& Morphism::operator-=(const Morphism& o) { return *this += -o; }

Morphism& Morphism::operator*=(const Scalar& s) {
  if (s.is_zero()) {
    comps_.clear();
    return *this;
  }
  for (auto& [t, comp] : comps_)
    for (auto& [f, m] : comp) m *= s;
  return *this;
}

Morphism Morphism::operator-() const {
  Morphism m = *this;
  m *= Scalar(-1, field());
  return m;
}

bool operator==(const Morphism& a, const Morphism& b) {
  if (a.degree_ != b.degree_ || !same_family(a.src_, b.src_) || !same_family(a.dst_, b.dst_)) return false;
  return (a - b).is_zero();
}

NaturalityReport check_naturality(const Morphism& u) {
  NaturalityReport rep;
  const auto& nerve = *u.nerve();
  for (const auto& [t, comp] : u.components()) {
    auto faces = nerve.star(tuple_set(t));
    const auto& s = (*u.src())[t.back()];
    const auto& d = (*u.dst())[t.front()];
    for (Face a : faces)
      for (Face b : faces) {
        if (a == b || !face_contains(b, a)) continue;
        GradedMap lhs = compose(d.restriction(a, b), u.at(t, a));
        GradedMap rhs = compose(u.at(t, b), s.restriction(a, b));
        if (!(lhs == rhs)) {
          rep.valid = false;
          rep.tuple = t;
          rep.from = a;
          rep.to = b;
          rep.message = "component " + nerve.tuple_name(t) + " is not natural for " + nerve.face_name(a) +
                        " <= " + nerve.face_name(b);
          return rep;
        }
      }
  }
  return rep;
}

Cochain::Cochain(FamilyPtr fam, Face base, int degree) : fam_(std::move(fam)), base_(base), degree_(degree) {}

std::size_t Cochain::component_dim(const Tuple& t) const {
  Face f = face_of(t);
  if (!fam_->nerve->is_face(f)) return 0;
  return (*fam_)[t.front()].value(f).dim(degree_ - (static_cast<int>(t.size()) - 1));
}

Vector Cochain::at(const Tuple& t) const {
  auto it = comps_.find(t);
  if (it != comps_.end()) return it->second;
  return Vector(component_dim(t), Scalar(0, fam_->field));
}

namespace {
bool all_zero(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}
}  // namespace

void Cochain::set(const Tuple& t, Vector v) {
  if (v.size() != component_dim(t))
    throw DimensionError("cochain component " + fam_->nerve->tuple_name(t) + " has the wrong size");
  if (all_zero(v))
    comps_.erase(t);
  else
    comps_[t] = std::move(v);
}

void Cochain::add(const Tuple& t, const Vector& v, const Scalar& coeff) {
  if (coeff.is_zero() || all_zero(v)) return;
  Vector cur = at(t);
  if (cur.size() != v.size()) throw DimensionError("cochain component size mismatch");
  for (std::size_t k = 0; k < v.size(); ++k) cur[k] += coeff * v[k];
  set(t, std::move(cur));
}

Cochain& Cochain::operator+=(const Cochain& o) {
  if (base_ != o.base_ || degree_ != o.degree_ || !same_family(fam_, o.fam_))
    throw FamilyMismatch("sum of incompatible cochains");
  for (const auto& [t, v] : o.comps_) add(t, v);
  return *this;
}

Cochain& Cochain::operator-=(const Cochain& o) {
  if (base_ != o.base_ || degree_ != o.degree_ || !same_family(fam_, o.fam_))
    throw FamilyMismatch("difference of incompatible cochains");
  for (const auto& [t, v] : o.comps_) add(t, v, Scalar(-1, fam_->field));
  return *this;
}

bool operator==(const Cochain& a, const Cochain& b) {
  if (a.base_ != b.base_ || a.degree_ != b.degree_ || !same_family(a.fam_, b.fam_)) return false;
  return a.comps_ == b.comps_;
}

namespace {

Tuple concat(const Tuple& a, const Tuple& b) {
  Tuple j = a;
  j.insert(j.end(), b.begin() + 1, b.end());
  return j;
}

void require_composable(const Morphism& u, const Morphism& v) {
  if (!same_family(u.src(), v.dst())) throw FamilyMismatch("composition: target of v is not the source of u");
}

}  // namespace

Morphism compose(const Morphism& u, const Morphism& v) {
  require_composable(u, v);
  Morphism out(v.src(), u.dst(), u.degree() + v.degree());
  const auto& nerve = *u.nerve();
  std::map<int, std::vector<const std::pair<const Tuple, Morphism::Component>*>> by_first;
  for (const auto& e : v.components()) by_first[e.first.front()].push_back(&e);
  for (const auto& [a, ucomp] : u.components()) {
    auto it = by_first.find(a.back());
    if (it == by_first.end()) continue;
    int q = u.sheaf_degree(a);
    for (const auto* ve : it->second) {
      const Tuple& b = ve->first;
      Tuple j = concat(a, b);
      Face sj = tuple_set(j);
      if (!nerve.is_face(sj)) continue;
      Scalar sign(koszul_sign(q, static_cast<int>(b.size()) - 1), u.field());
      for (const auto& [f, um] : ucomp) {
        if (!face_contains(f, sj)) continue;
        auto vt = ve->second.find(f);
        if (vt == ve->second.end()) continue;
        out.add(j, f, compose(um, vt->second), sign);
      }
    }
  }
  return out;
}

GradedMap compose_component(const Morphism& u, const Morphism& v, const Tuple& t, Face f) {
  require_composable(u, v);
  Morphism shape(v.src(), u.dst(), u.degree() + v.degree());
  GradedMap out = shape.zero_component(t, f);
  for (std::size_t m = 0; m < t.size(); ++m) {
    Tuple a(t.begin(), t.begin() + m + 1), b(t.begin() + m, t.end());
    const auto* um = u.find(a, f);
    const auto* vm = v.find(b, f);
    if (!um || !vm) continue;
    int sign = koszul_sign(u.sheaf_degree(a), static_cast<int>(b.size()) - 1);
    out += Scalar(sign, u.field()) * compose(*um, *vm);
  }
  return out;
}

Cochain act(const Morphism& u, const Cochain& c) {
  if (!same_family(u.src(), c.family())) throw FamilyMismatch("action: cochain is not over the source family");
  Cochain out(u.dst(), c.base(), c.degree() + u.degree());
  const auto& nerve = *u.nerve();
  std::map<int, std::vector<const std::pair<const Tuple, Vector>*>> by_first;
  for (const auto& e : c.components()) by_first[e.first.front()].push_back(&e);
  for (const auto& [a, ucomp] : u.components()) {
    auto it = by_first.find(a.back());
    if (it == by_first.end()) continue;
    int q = u.sheaf_degree(a);
    for (const auto* ce : it->second) {
      const Tuple& b = ce->first;
      Tuple j = concat(a, b);
      Face fj = tuple_set(j) | c.base();
      if (!nerve.is_face(fj)) continue;
      auto um = ucomp.find(fj);
      if (um == ucomp.end()) continue;
      int r = static_cast<int>(b.size()) - 1;
      int n = c.degree() - r;  // sheaf degree of the section
      const auto& src_local = (*c.family())[b.front()];
      Vector restricted = src_local.restriction_at(c.face_of(b), fj, n).apply(ce->second);
      Vector image = um->second.at(n).apply(restricted);
      out.add(j, image, Scalar(koszul_sign(q, r), u.field()));
    }
  }
  return out;
}

Morphism cech_delta(const Morphism& u) {
  Morphism out(u.src(), u.dst(), u.degree() + 1);
  const auto& nerve = *u.nerve();
  for (const auto& [a, comp] : u.components()) {
    int p = static_cast<int>(a.size()) - 1;
    for (int k = 1; k <= p; ++k)
      for (int x = 0; x < nerve.size(); ++x) {
        Tuple j = a;
        j.insert(j.begin() + k, x);
        Face sj = tuple_set(j);
        if (!nerve.is_face(sj)) continue;
        Scalar sign((k & 1) ? -1 : 1, u.field());
        for (const auto& [f, m] : comp)
          if (face_contains(f, sj)) out.add(j, f, m, sign);
      }
  }
  return out;
}

GradedMap cech_delta_component(const Morphism& u, const Tuple& t, Face f) {
  Morphism shape(u.src(), u.dst(), u.degree() + 1);
  GradedMap out = shape.zero_component(t, f);
  int p = static_cast<int>(t.size()) - 2;  // Cech degree of the removed-index tuples
  for (int k = 1; k <= p; ++k) {
    Tuple a = t;
    a.erase(a.begin() + k);
    if (const auto* m = u.find(a, f)) out += Scalar((k & 1) ? -1 : 1, u.field()) * *m;
  }
  return out;
}

Cochain cech_delta(const Cochain& c) {
  Cochain out(c.family(), c.base(), c.degree() + 1);
  const auto& nerve = *c.family()->nerve;
  for (const auto& [b, v] : c.components()) {
    int r = static_cast<int>(b.size()) - 1;
    int n = c.degree() - r;
    const auto& local = (*c.family())[b.front()];
    for (int k = 1; k <= r + 1; ++k)
      for (int x = 0; x < nerve.size(); ++x) {
        Tuple j = b;
        j.insert(j.begin() + k, x);
        Face fj = tuple_set(j) | c.base();
        if (!nerve.is_face(fj)) continue;
        Vector w = local.restriction_at(c.face_of(b), fj, n).apply(v);
        out.add(j, w, Scalar((k & 1) ? -1 : 1, c.family()->field));
      }
  }
  return out;
}

Morphism morphism_diff(const Morphism& phi, const Morphism& a, const Morphism& b) {
  if (!same_family(a.src(), phi.src()) || !same_family(a.dst(), phi.src()) || !same_family(b.src(), phi.dst()) ||
      !same_family(b.dst(), phi.dst()))
    throw FamilyMismatch("morphism differential: structure data do not match the morphism");
  Morphism out = cech_delta(phi);
  out += compose(b, phi);
  Scalar s((phi.degree() & 1) ? 1 : -1, phi.field());
  out += s * compose(phi, a);
  return out;
}

GradedMap morphism_diff_component(const Morphism& phi, const Morphism& a, const Morphism& b, const Tuple& t,
                                  Face f) {
  GradedMap out = cech_delta_component(phi, t, f);
  out += compose_component(b, phi, t, f);
  Scalar s((phi.degree() & 1) ? 1 : -1, phi.field());
  out += s * compose_component(phi, a, t, f);
  return out;
}

std::vector<Tuple> tuples_up_to(const CoverNerve& n, int max_p) {
  std::vector<Tuple> out;
  for (int p = 0; p <= max_p; ++p) {
    auto ts = n.tuples(static_cast<std::size_t>(p + 1));
    out.insert(out.end(), ts.begin(), ts.end());
  }
  return out;
}

}  // namespace tcx
