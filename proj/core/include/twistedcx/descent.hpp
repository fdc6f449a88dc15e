#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "twistedcx/functors.hpp"

namespace tcx {

class WrongCoverShape : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class NotInvertible : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Complexes of presheaves on a sub-domain of the nerve are stored as global
// complexes extended by zero; morphisms between them are global morphisms.
GlobalComplex extend_by_zero(const Presheaf& p, const std::map<Face, GradedMap>& d);
GlobalComplex restrict_to_domain(const GlobalComplex& c, const std::vector<Face>& domain);
GlobalMorphism restrict_to_domain(const GlobalMorphism& m, const std::vector<Face>& domain);

// g is a two-sided homotopy inverse of f:
// g f - id = d left + left d, f g - id = d right + right d.
struct InverseCertificate {
  GlobalMorphism inverse, left, right;
  std::string method;  // "seed" (structure data) or "solved"
};

// (M over U, N over V, f: M|overlap -> N|overlap).
struct FiberObject {
  NervePtr nerve;
  std::vector<Face> overlap;  // faces containing both opens
  GlobalComplex m, n;
  GlobalComplex m_overlap, n_overlap;
  GlobalMorphism f;
  InverseCertificate certificate;
};

// Candidate inverse, with optional candidate homotopies.
struct FiberSeed {
  GlobalMorphism inverse;
  std::optional<GlobalMorphism> left, right;
};

// Builds the restricted complexes and certifies f against the seed; missing
// or failing homotopies are solved for. Throws NotClosed when f is not a
// chain map and NotInvertible when the seed cannot be certified.
FiberObject make_fiber_object(NervePtr nerve, GlobalComplex m, GlobalComplex n, GlobalMorphism f,
                              const std::optional<FiberSeed>& seed);

// (mu, nu, tau): mu: M1 -> M2 and nu: N1 -> N2 of degree k, tau:
// M1|overlap -> N2|overlap of degree k - 1.
struct FiberMorphism {
  int degree = 0;
  GlobalMorphism mu, nu, tau;
};

bool fiber_equal(const FiberMorphism& a, const FiberMorphism& b, const FiberObject& x, const FiberObject& y);
FiberMorphism fiber_identity(const FiberObject& x);
FiberMorphism fiber_sum(const FiberMorphism& a, const FiberMorphism& b, const FiberObject& x, const FiberObject& y);

// (m2 m1) = (mu2 mu1, nu2 nu1, tau2 mu1 + (-1)^{k2} nu2 tau1)
FiberMorphism fiber_compose(const FiberMorphism& m2, const FiberMorphism& m1, const FiberObject& x1,
                            const FiberObject& x2, const FiberObject& x3);
// d(mu, nu, tau) = (d mu, d nu, -d tau + f2 mu - nu f1)
FiberMorphism fiber_differential(const FiberMorphism& m, const FiberObject& x1, const FiberObject& x2);

// Restriction of a twisted complex over a two-open cover to the fiber
// product; f = a^{1,0} from the first open to the second.
FiberObject restrict_to_fiber(const TwistedComplex& t);

// Sign on the Cech-degree-1 component of R on morphisms, found by testing
// both candidates against d R = R d on a fixed generic instance.
int descent_sign();

FiberMorphism restrict_morphism(const Morphism& phi, const FiberObject& x1, const FiberObject& x2,
                                int sign = descent_sign());

}  // namespace tcx
