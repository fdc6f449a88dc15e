#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "twistedcx/cover.hpp"

namespace tcx {

class FamilyMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Local objects of a twisted complex: index i -> graded presheaf on star(i).
struct Family {
  NervePtr nerve;
  Field field;
  std::vector<Presheaf> locals;

  int size() const { return static_cast<int>(locals.size()); }
  const Presheaf& operator[](int i) const { return locals.at(i); }
  // Smallest and largest degree of any local at any face; (0,-1) when all zero.
  std::pair<int, int> degree_range() const;
  bool is_zero() const;
};

using FamilyPtr = std::shared_ptr<const Family>;

// Validates that locals[i] lives exactly on star(i).
FamilyPtr make_family(NervePtr nerve, Field f, std::vector<Presheaf> locals);
FamilyPtr zero_family(NervePtr nerve, Field f);
bool same_family(const FamilyPtr& a, const FamilyPtr& b);

inline int koszul_sign(int q, int r) { return ((q * r) & 1) ? -1 : 1; }

// Cech-bigraded morphism of total degree t between two families. The
// component at a tuple (i0..ip) is a natural family, indexed by the faces
// containing {i0..ip}, of maps src[ip] -> dst[i0] of sheaf degree t - p.
class Morphism {
public:
  using Component = std::map<Face, GradedMap>;

  Morphism() = default;
  Morphism(FamilyPtr src, FamilyPtr dst, int degree);
  static Morphism identity(const FamilyPtr& f);

  const FamilyPtr& src() const { return src_; }
  const FamilyPtr& dst() const { return dst_; }
  const NervePtr& nerve() const { return src_->nerve; }
  Field field() const { return src_->field; }
  int degree() const { return degree_; }
  int sheaf_degree(const Tuple& t) const { return degree_ - (static_cast<int>(t.size()) - 1); }

  const GradedMap* find(const Tuple& t, Face f) const;
  GradedMap at(const Tuple& t, Face f) const;  // zero map when absent
  GradedMap zero_component(const Tuple& t, Face f) const;
  void set(const Tuple& t, Face f, GradedMap m);
  void add(const Tuple& t, Face f, const GradedMap& m, const Scalar& coeff = Scalar(1));
  void add_matrix(const Tuple& t, Face f, int n, const Matrix& m, const Scalar& coeff = Scalar(1));
  void erase(const Tuple& t) { comps_.erase(t); }
  const std::map<Tuple, Component>& components() const { return comps_; }

  // Only the components of Cech degree p.
  Morphism cech_part(int p) const;
  // Largest Cech degree a nonzero component can have, from degree supports;
  // -1 when every component is forced to vanish.
  int max_cech() const;
  bool is_zero() const;

  Morphism& operator+=(const Morphism& o);
  Morphism& operator-=(const Morphism& o);
  Morphism& operator*=(const Scalar& s);
  friend Morphism operator+(Morphism a, const Morphism& b) { return a += b; }
  friend Morphism operator-(Morphism a, const Morphism& b) { return a -= b; }
  friend Morphism operator*(const Scalar& s, Morphism a) { return a *= s; }
  Morphism operator-() const;
  friend bool operator==(const Morphism& a, const Morphism& b);

private:
  void check_key(const Tuple& t, Face f) const;
  void prune(const Tuple& t, Face f);

  FamilyPtr src_, dst_;
  int degree_ = 0;
  std::map<Tuple, Component> comps_;
};

int max_cech_bound(const Family& src, const Family& dst, int degree);

struct NaturalityReport {
  bool valid = true;
  std::string message;
  Tuple tuple;
  Face from = 0, to = 0;
};

// Every component commutes with the restrictions of source and target.
NaturalityReport check_naturality(const Morphism& u);

// Cech cochain of total degree n relative to a base face: the component at
// (i0..ip) is a vector in E_{i0}(set(I) | base) of degree n - p. Base 0 gives
// the plain cochains over the intersections.
class Cochain {
public:
  Cochain() = default;
  Cochain(FamilyPtr fam, Face base, int degree);

  const FamilyPtr& family() const { return fam_; }
  Face base() const { return base_; }
  int degree() const { return degree_; }
  Face face_of(const Tuple& t) const { return tuple_set(t) | base_; }
  std::size_t component_dim(const Tuple& t) const;

  Vector at(const Tuple& t) const;  // zero vector when absent
  void set(const Tuple& t, Vector v);
  void add(const Tuple& t, const Vector& v, const Scalar& coeff = Scalar(1));
  const std::map<Tuple, Vector>& components() const { return comps_; }
  bool is_zero() const { return comps_.empty(); }

  Cochain& operator+=(const Cochain& o);
  Cochain& operator-=(const Cochain& o);
  friend Cochain operator+(Cochain a, const Cochain& b) { return a += b; }
  friend Cochain operator-(Cochain a, const Cochain& b) { return a -= b; }
  friend bool operator==(const Cochain& a, const Cochain& b);

private:
  FamilyPtr fam_;
  Face base_ = 0;
  int degree_ = 0;
  std::map<Tuple, Vector> comps_;
};

// (u.v)_{i0..i(p+r)} = (-1)^{qr} u_{i0..ip} v_{ip..i(p+r)}, with q the sheaf
// degree of the u factor and r the Cech degree of the v factor.
Morphism compose(const Morphism& u, const Morphism& v);
// One output component, summing over the split points of t.
GradedMap compose_component(const Morphism& u, const Morphism& v, const Tuple& t, Face f);

// (u.c) with the same sign rule, evaluated on restricted sections.
Cochain act(const Morphism& u, const Cochain& c);

// Interior-index Cech differential: sum over k = 1..p for morphisms of Cech
// degree p, k = 1..p+1 for cochains.
Morphism cech_delta(const Morphism& u);
GradedMap cech_delta_component(const Morphism& u, const Tuple& t, Face f);
Cochain cech_delta(const Cochain& c);

// d(phi) = delta(phi) + b.phi - (-1)^{|phi|} phi.a for phi: (E,a) -> (F,b).
Morphism morphism_diff(const Morphism& phi, const Morphism& a, const Morphism& b);
GradedMap morphism_diff_component(const Morphism& phi, const Morphism& a, const Morphism& b,
                                  const Tuple& t, Face f);

// All tuples (with repeats) of Cech degree 0..max_p whose underlying set is a
// face, in order of Cech degree then lexicographic.
std::vector<Tuple> tuples_up_to(const CoverNerve& n, int max_p);

}  // namespace tcx
