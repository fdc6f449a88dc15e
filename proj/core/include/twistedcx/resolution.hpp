#pragma once

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "twistedcx/functors.hpp"

namespace tcx {

class NotPerfect : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class LiftFailed : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NotWeakEquivalence : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// One block of unknown entries of a morphism component at a fixed tuple:
// rows [r0, r1) and columns [c0, c1) of the matrix at (face, degree). The
// default is the whole matrix.
struct UnknownBlock {
  Morphism* morphism = nullptr;
  std::function<std::array<std::size_t, 4>(Face, int, std::size_t rows, std::size_t cols)> window;
};

// Solves for the unknown entries at one tuple so that every residual
// vanishes at every face containing the tuple and the components stay
// natural. The residuals must be affine in the unknowns; they are sampled at
// the current value and at unit perturbations, then solved exactly. Returns
// false when the system is inconsistent.
using FaceResidual = std::function<std::vector<GradedMap>(Face)>;
bool solve_tuple(const Tuple& t, const std::vector<UnknownBlock>& unknowns, const FaceResidual& residual);

// Morphism nu: (E,a) -> (F,b) of degree |x| - 1 with d nu = x, solved over
// all multi-indices at once.
std::optional<Morphism> twisted_null_homotopy(const Morphism& x, const TwistedComplex& e,
                                              const TwistedComplex& f);

struct ResolutionStep {
  Tuple tuple;
  bool cocycle = true;  // right-hand side was a D-cocycle
};

struct ResolutionResult {
  TwistedComplex resolved;
  TwistedComplex target;  // T(P)
  Morphism comparison;    // resolved -> T(P)
  std::vector<MinimalModel> local_models;
  std::vector<ResolutionStep> steps;
  bool has_nonzero_higher() const;  // some a^{k,1-k} with k >= 2 is nonzero
};

// Every restriction of P is a quasi-isomorphism.
std::optional<std::pair<Face, Face>> perfectness_failure(const GlobalComplex& p);

struct ResolutionOptions {
  // Local objects: P({i}) held constant on star(i), or its minimal model.
  // Minimal models make a^{1,0} compose strictly, so the higher terms can
  // vanish; the full complexes exercise them.
  bool minimal_models = false;
};

ResolutionResult twisted_resolution(const GlobalComplex& p, const ResolutionOptions& opts = {});

struct Factorization {
  Morphism theta;  // E -> G, closed
  Morphism mu;     // E -> F, psi theta - phi = d mu
};

// phi: (E,a) -> (F,b) closed; psi: (G,g) -> (F,b) a weak equivalence.
Factorization factor_through(const Morphism& phi, const TwistedComplex& e, const Morphism& psi,
                             const TwistedComplex& g, const TwistedComplex& f, bool check_precondition = true);

struct Inverse {
  Morphism inverse;   // F -> E
  Morphism right;     // phi inverse - id_F = d right
  Morphism left;      // inverse phi - id_E = d left
};

Inverse invert_weak_equivalence(const Morphism& phi, const TwistedComplex& e, const TwistedComplex& f,
                                bool check_precondition = true);

struct Transfer {
  Morphism theta;          // A -> B
  GlobalMorphism homotopy;  // S(theta) - f = d h + h d
};

// Lifts a closed degree-0 map f: S(A) -> S(B) between sheafifications with
// a common top degree to a twisted morphism A -> B.
Transfer hom_transfer(const GlobalMorphism& f, const Sheafified& sa, const Sheafified& sb);

}  // namespace tcx
