#include "twistedcx/cover.hpp"

#include <algorithm>
#include <bit>
#include <functional>

namespace tcx {

Face tuple_set(const Tuple& t) {
  Face f = 0;
  for (int i : t) f |= singleton(i);
  return f;
}

int face_size(Face f) { return std::popcount(f); }

std::vector<int> face_members(Face f) {
  std::vector<int> out;
  for (int i = 0; f; ++i, f >>= 1)
    if (f & 1) out.push_back(i);
  return out;
}

bool face_less(Face a, Face b) {
  int sa = face_size(a), sb = face_size(b);
  if (sa != sb) return sa < sb;
  return face_members(a) < face_members(b);
}

CoverNerve CoverNerve::build(std::vector<std::string> labels,
                             const std::vector<std::vector<int>>& declared) {
  bool closed = true;
  return build(std::move(labels), declared, closed);
}

CoverNerve CoverNerve::build(std::vector<std::string> labels,
                             const std::vector<std::vector<int>>& declared, bool& was_closed) {
  if (labels.empty()) throw NerveError("empty index set");
  if (static_cast<int>(labels.size()) > kMaxOpens) throw NerveError("too many opens");
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = i + 1; j < labels.size(); ++j)
      if (labels[i] == labels[j]) throw NerveError("duplicate open label '" + labels[i] + "'");
  CoverNerve n;
  n.labels_ = std::move(labels);
  int k = n.size();
  n.is_face_.assign(std::size_t(1) << k, 0);
  std::vector<char> declared_mask(std::size_t(1) << k, 0);
  for (const auto& face : declared) {
    if (face.empty()) throw NerveError("empty face declared");
    Face m = 0;
    for (int i : face) {
      if (i < 0 || i >= k) throw NerveError("face refers to an unknown open");
      m |= singleton(i);
    }
    declared_mask[m] = 1;
    // all nonempty submasks
    for (Face s = m; s; s = (s - 1) & m) n.is_face_[s] = 1;
  }
  for (int i = 0; i < k; ++i) n.is_face_[singleton(i)] = 1;
  was_closed = true;
  for (Face m = 1; m < n.is_face_.size(); ++m)
    if (n.is_face_[m] && face_size(m) > 1 && !declared_mask[m]) was_closed = false;
  for (Face m = 1; m < n.is_face_.size(); ++m)
    if (n.is_face_[m]) n.faces_.push_back(m);
  std::sort(n.faces_.begin(), n.faces_.end(), face_less);
  return n;
}

std::optional<int> CoverNerve::index_of(const std::string& label) const {
  for (int i = 0; i < size(); ++i)
    if (labels_[i] == label) return i;
  return std::nullopt;
}

bool CoverNerve::is_face(Face f) const { return f != 0 && f < is_face_.size() && is_face_[f]; }

std::vector<Face> CoverNerve::star(Face f) const {
  std::vector<Face> out;
  for (Face g : faces_)
    if (face_contains(g, f)) out.push_back(g);
  return out;
}

std::string CoverNerve::face_name(Face f) const {
  std::string s = "{";
  bool first = true;
  for (int i : face_members(f)) {
    if (!first) s += ",";
    s += labels_[i];
    first = false;
  }
  return s + "}";
}

std::string CoverNerve::tuple_name(const Tuple& t) const {
  std::string s = "(";
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k) s += ",";
    s += labels_[t[k]];
  }
  return s + ")";
}

std::vector<Tuple> CoverNerve::tuples(std::size_t length) const { return tuples_compatible(length, 0); }

std::vector<Tuple> CoverNerve::tuples_compatible(std::size_t length, Face base) const {
  std::vector<Tuple> out;
  if (length == 0) return out;
  Tuple t;
  // depth-first in lexicographic order, pruning non-faces
  std::function<void(Face)> rec = [&](Face acc) {
    if (t.size() == length) {
      out.push_back(t);
      return;
    }
    for (int i = 0; i < size(); ++i) {
      Face next = acc | singleton(i);
      if (!is_face(next | base)) continue;
      t.push_back(i);
      rec(next);
      t.pop_back();
    }
  };
  rec(0);
  return out;
}

Presheaf::Presheaf(NervePtr nerve, std::vector<Face> domain, Field f)
    : nerve_(std::move(nerve)), domain_(std::move(domain)), field_(f) {
  std::sort(domain_.begin(), domain_.end(), face_less);
  for (Face d : domain_) {
    if (!nerve_->is_face(d)) throw NerveError("presheaf domain contains a non-face");
    for (Face g : nerve_->star(d))
      if (!std::binary_search(domain_.begin(), domain_.end(), g, face_less))
        throw NerveError("presheaf domain is not closed under enlarging faces");
  }
}

Presheaf Presheaf::constant(NervePtr nerve, std::vector<Face> domain, const GradedSpace& v, Field f) {
  Presheaf p(std::move(nerve), std::move(domain), f);
  for (Face d : p.domain_) p.values_[d] = v;
  for (Face a : p.domain_)
    for (Face b : p.domain_)
      if (a != b && face_contains(b, a)) p.res_[{a, b}] = GradedMap::identity(v, f);
  return p;
}

Presheaf Presheaf::zero(NervePtr nerve, std::vector<Face> domain, Field f) {
  return constant(std::move(nerve), std::move(domain), GradedSpace(), f);
}

bool Presheaf::in_domain(Face f) const {
  return std::binary_search(domain_.begin(), domain_.end(), f, face_less);
}

Matrix Presheaf::restriction_at(Face from, Face to, int n) const {
  if (from == to) return Matrix::identity(value(from).dim(n), field_);
  auto it = res_.find({from, to});
  if (it != res_.end()) return it->second.at(n);
  if (!face_contains(to, from)) throw NerveError("restriction requested between non-nested faces");
  return Matrix(value(to).dim(n), value(from).dim(n), field_);
}

const GradedSpace& Presheaf::value(Face f) const {
  static const GradedSpace empty;
  auto it = values_.find(f);
  return it == values_.end() ? empty : it->second;
}

void Presheaf::set_value(Face f, GradedSpace v) {
  if (!in_domain(f)) throw NerveError("value assigned outside the presheaf domain");
  values_[f] = std::move(v);
}

GradedMap Presheaf::restriction(Face from, Face to) const {
  if (!face_contains(to, from)) throw NerveError("restriction requested between non-nested faces");
  if (from == to) return GradedMap::identity(value(from), field_);
  auto it = res_.find({from, to});
  if (it != res_.end()) return it->second;
  return GradedMap(value(from), value(to), 0, field_);
}

void Presheaf::set_restriction(Face from, Face to, GradedMap m) {
  if (!in_domain(from) || !in_domain(to) || from == to || !face_contains(to, from))
    throw NerveError("restriction must go from a face to a strictly larger face in the domain");
  if (!(m.src() == value(from)) || !(m.dst() == value(to)) || m.shift() != 0)
    throw DimensionError("restriction map does not match the presheaf values");
  res_[{from, to}] = std::move(m);
}

void Presheaf::complete_from_covering_relations() {
  // larger sources first, so the shorter chain (from | first) -> to exists
  for (Face to : domain_)
    for (auto it = domain_.rbegin(); it != domain_.rend(); ++it) {
      Face from = *it;
      if (from == to || !face_contains(to, from) || face_size(to) - face_size(from) < 2) continue;
      Face extra = to & ~from;
      Face first = extra & (~extra + 1);  // lowest added index
      GradedMap step = restriction(from, from | first);
      GradedMap rest = restriction(from | first, to);
      res_[{from, to}] = compose(rest, step);
    }
}

Presheaf Presheaf::restricted_to(const std::vector<Face>& domain) const {
  Presheaf p(nerve_, domain, field_);
  for (Face d : p.domain_) {
    if (!in_domain(d)) throw NerveError("restriction domain not inside the presheaf domain");
    p.values_[d] = value(d);
  }
  for (Face a : p.domain_)
    for (Face b : p.domain_)
      if (a != b && face_contains(b, a)) p.res_[{a, b}] = restriction(a, b);
  return p;
}

bool operator==(const Presheaf& a, const Presheaf& b) {
  if (!(*a.nerve_ == *b.nerve_) || a.domain_ != b.domain_) return false;
  for (Face f : a.domain_)
    if (!(a.value(f) == b.value(f))) return false;
  for (Face x : a.domain_)
    for (Face y : a.domain_)
      if (x != y && face_contains(y, x) && !(a.restriction(x, y) == b.restriction(x, y))) return false;
  return true;
}

std::size_t section_space(const Presheaf& p, Face f, int n) {
  if (!p.nerve()->is_face(f)) return 0;
  return p.value(f).dim(n);
}

PresheafReport validate_presheaf(const Presheaf& p) {
  PresheafReport rep;
  const auto& dom = p.domain();
  for (Face s : dom) {
    auto id = p.restriction(s, s);
    if (!(id == GradedMap::identity(p.value(s), p.field()))) {
      rep.valid = false;
      rep.sigma = rep.tau = rep.upsilon = s;
      rep.message = "identity restriction fails at " + p.nerve()->face_name(s);
      return rep;
    }
  }
  for (Face s : dom)
    for (Face t : dom) {
      if (s == t || !face_contains(t, s)) continue;
      for (Face u : dom) {
        if (u == t || !face_contains(u, t)) continue;
        if (!(compose(p.restriction(t, u), p.restriction(s, t)) == p.restriction(s, u))) {
          rep.valid = false;
          rep.sigma = s;
          rep.tau = t;
          rep.upsilon = u;
          rep.message = "functoriality fails for " + p.nerve()->face_name(s) + " <= " +
                        p.nerve()->face_name(t) + " <= " + p.nerve()->face_name(u);
          return rep;
        }
      }
    }
  return rep;
}

}  // namespace tcx
