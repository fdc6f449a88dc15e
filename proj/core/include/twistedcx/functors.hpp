#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twistedcx/twisted.hpp"

namespace tcx {

// Complex of presheaves on every face of the nerve.
struct GlobalComplex {
  Presheaf space;
  std::map<Face, GradedMap> d;  // shift +1 at each face

  GlobalComplex() = default;
  GlobalComplex(Presheaf p, std::map<Face, GradedMap> diff);
  // Zero differential where absent.
  static GlobalComplex with_zero_differential(Presheaf p);

  const NervePtr& nerve() const { return space.nerve(); }
  Field field() const { return space.field(); }
  const GradedSpace& value(Face f) const { return space.value(f); }
  GradedMap diff(Face f) const;
  ChainComplex at(Face f) const { return ChainComplex(space.value(f), diff(f)); }
  // Smallest and largest degree over all faces; (0,-1) when zero.
  std::pair<int, int> degree_range() const;
};

struct GlobalReport {
  bool valid = true;
  std::string message;
};

// Functoriality, naturality of d, and d o d = 0.
GlobalReport validate_global(const GlobalComplex& p);

// Natural family of graded maps between two global complexes.
struct GlobalMorphism {
  int degree = 0;
  std::map<Face, GradedMap> maps;

  GradedMap at(Face f, const GlobalComplex& src, const GlobalComplex& dst) const;
  bool is_zero() const;
};

GlobalMorphism global_identity(const GlobalComplex& p);
GlobalMorphism global_compose(const GlobalMorphism& g, const GlobalMorphism& f, const GlobalComplex& src,
                              const GlobalComplex& mid, const GlobalComplex& dst);
GlobalMorphism global_difference(const GlobalMorphism& a, const GlobalMorphism& b, const GlobalComplex& src,
                                 const GlobalComplex& dst);
bool global_equal(const GlobalMorphism& a, const GlobalMorphism& b, const GlobalComplex& src,
                  const GlobalComplex& dst);
// First face where the morphism fails to commute with restrictions.
std::optional<Face> global_naturality_failure(const GlobalMorphism& f, const GlobalComplex& src,
                                              const GlobalComplex& dst);
// d f - (-1)^k f d
GlobalMorphism global_diff(const GlobalMorphism& f, const GlobalComplex& src, const GlobalComplex& dst);

std::map<Face, std::map<int, std::size_t>> facewise_cohomology(const GlobalComplex& p);
bool facewise_acyclic(const GlobalComplex& p);
// First face where the cone of a degree-0 map has cohomology.
std::optional<Face> facewise_cone_failure(const GlobalMorphism& f, const GlobalComplex& src,
                                          const GlobalComplex& dst);

// Natural h of degree |phi| - 1 with d h + sign h d = phi at every face.
std::optional<GlobalMorphism> natural_null_homotopy(const GlobalMorphism& phi, const GlobalComplex& src,
                                                    const GlobalComplex& dst, int sign = 1);

struct SheafBlock {
  Tuple tuple;
  Face face = 0;  // set(tuple) | base
  std::size_t offset = 0, dim = 0;
};

struct SheafLayout {
  std::vector<SheafBlock> blocks;
  std::map<Tuple, std::size_t> index;  // tuple -> position in blocks
  std::size_t total = 0;
};

// Sheafification S(E) of a twisted complex: the cochains with differential
// delta_a, canonically truncated at a top degree M. Below M the value at a
// face is the full product over compatible multi-indices; in degree M it is
// the kernel of delta_a, with coordinates read off at the free columns of
// its reduced echelon form.
class Sheafified {
public:
  TwistedComplex source;
  int lo = 0, top = -1;
  GlobalComplex complex;

  // Block layout of the untruncated cochains in degree n (n <= top + 1).
  const SheafLayout& layout(Face base, int n) const;
  Vector flatten(const Cochain& c) const;
  Cochain unflatten(Face base, int n, const Vector& full) const;
  // Element of the truncated complex -> cochain, and back. coordinates()
  // returns nothing when the cochain is outside the truncation (nonzero
  // above the top degree, or not a cocycle in the top degree).
  Cochain cochain(Face base, int n, const Vector& coords) const;
  std::optional<Vector> coordinates(const Cochain& c) const;
  Cochain basis_cochain(Face base, int n, std::size_t k) const;

private:
  friend Sheafified sheafify(const TwistedComplex& t, std::optional<int> top);
  std::map<Face, std::map<int, SheafLayout>> layouts_;
  std::map<Face, Matrix> top_diff_;     // full S^M -> full S^{M+1}
  std::map<Face, Matrix> kernel_;       // full S^M x kernel dimension
  std::map<Face, std::vector<std::size_t>> free_cols_;
};

// Top degree defaults to the largest degree of the locals.
Sheafified sheafify(const TwistedComplex& t, std::optional<int> top = std::nullopt);
// Common default top degree for several twisted complexes.
int default_top(const std::vector<const TwistedComplex*>& ts);

// S(phi) as a natural family between truncated complexes; components
// landing above the top degree are dropped. Throws NotClosed when an image
// in the top degree is not a cocycle.
GlobalMorphism sheafify_morphism(const Morphism& phi, const Sheafified& se, const Sheafified& sf);

// T(P): E_i = P on star(i), a^{0,1} = d, a^{1,0} = id, higher terms zero.
TwistedComplex twist(const GlobalComplex& p);
// T(f): only Cech-degree-0 components f|U_i.
Morphism twist_morphism(const GlobalMorphism& f, const TwistedComplex& tp, const TwistedComplex& tq);

// tau: P -> S T(P), Cech-degree-0 restrictions.
GlobalMorphism tau(const GlobalComplex& p, const Sheafified& stp);

// gamma: T S(E) -> E, projections onto the components.
Morphism gamma(const Sheafified& se, const TwistedComplex& tse);

struct LocalEquivalenceReport {
  int index = 0;
  bool f_chain = true, g_chain = true, fg_is_transition = true, homotopy = true;
  std::string failure;
  // per face containing the index: f, g, h
  std::map<Face, GradedMap> f, g, h;
  bool ok() const { return f_chain && g_chain && fg_is_transition && homotopy; }
};

// f: S(E)|U_j -> E_j, g: E_j -> S(E)|U_j and h, checked at every face
// containing j in all degrees up to the top.
LocalEquivalenceReport local_equivalence(const Sheafified& se, int j);

struct AdjunctionReport {
  bool ok = true;
  bool materialized = false;
  std::string failure;
};

// S(gamma) o tau_{S(E)} = id on S(E), evaluated on basis vectors; with
// materialize the double sheafification is built and composed as matrices.
AdjunctionReport verify_adjunction(const Sheafified& se, bool materialize = false);

struct WeqCriterionReport {
  bool twisted_route = false;   // is_weak_equivalence
  bool sheafified_route = false;  // facewise cone of S(phi) acyclic
  bool agree() const { return twisted_route == sheafified_route; }
  std::string reason;
};

WeqCriterionReport weq_criterion(const Morphism& phi, const TwistedComplex& e, const TwistedComplex& f);

}  // namespace tcx
