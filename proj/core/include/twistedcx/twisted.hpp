#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "twistedcx/morphism.hpp"

namespace tcx {

class NotClosed : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class WrongDegree : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Local objects plus a degree-1 structure datum a = sum a^{k,1-k}.
struct TwistedComplex {
  FamilyPtr locals;
  Morphism a;
  bool generalized = false;

  TwistedComplex() = default;
  TwistedComplex(FamilyPtr e, Morphism datum, bool gen = false);

  const NervePtr& nerve() const { return locals->nerve; }
  Field field() const { return locals->field; }
  int size() const { return locals->size(); }
  // (E_i(face), a^{0,1}_i(face))
  ChainComplex local_complex(int i, Face f) const;
  // a^{1,0}_{ii} at a face
  GradedMap transition(int i, int j, Face f) const { return a.at({i, j}, f); }
};

struct McViolation {
  int k = 0;  // Cech degree of the failing component
  Tuple tuple;
  Face face = 0;
  int degree = 0;  // source degree of the nonzero block
};

struct McReport {
  bool valid = true;
  std::vector<McViolation> violations;
  std::string describe(const CoverNerve& n) const;
};

// delta a + a.a = 0, componentwise.
McReport check_mc(const FamilyPtr& e, const Morphism& a);
inline McReport check_mc(const TwistedComplex& t) { return check_mc(t.locals, t.a); }

struct NondegeneracyEntry {
  int index = 0;
  Face face = 0;
  bool homotopic_to_id = false;  // id - a_ii = dh + hd solvable
  bool quasi_iso = false;        // a_ii induces an isomorphism on cohomology
  std::optional<GradedMap> witness;
};

struct NondegeneracyReport {
  bool valid = true;
  // Both verdicts agree at every face; a disagreement on an idempotent
  // datum indicates a kernel bug.
  bool consistent = true;
  std::vector<NondegeneracyEntry> entries;
  std::optional<NondegeneracyEntry> first_failure() const;
};

NondegeneracyReport check_nondegenerate(const TwistedComplex& t);

struct IdempotentReport {
  bool valid = true;
  // The (i,i,i) component of delta a + a.a and the hand-expanded formula
  // agree at every face.
  bool routes_agree = true;
  std::vector<Face> failing_faces;
};

IdempotentReport check_idempotent(const TwistedComplex& t, int i);

// delta c + a.c
Cochain delta_a(const TwistedComplex& t, const Cochain& c);

// Degree translation of graded objects: result(n) = input(n + k).
GradedMap shift_map(const GradedMap& m, int k);
Presheaf shift_presheaf(const Presheaf& p, int k);
FamilyPtr shift_family(const FamilyPtr& f, int k = 1);

// E[1] with a[1]^{k,1-k} = (-1)^{k-1} a^{k,1-k}.
TwistedComplex shift(const TwistedComplex& t);
// phi[1]^{p,q} = (-1)^q phi^{p,q}, between the given shifted families.
Morphism shift_morphism(const Morphism& phi, const FamilyPtr& src1, const FamilyPtr& dst1);
Morphism shift_morphism(const Morphism& phi);

Presheaf presheaf_sum(const Presheaf& a, const Presheaf& b);

// Mapping cone of a closed degree-0 morphism phi: (E,a) -> (F,b).
TwistedComplex cone(const Morphism& phi, const TwistedComplex& e, const TwistedComplex& f);

struct WeqReport {
  bool ok = true;
  std::string reason;
  int index = -1;
  Face face = 0;
};

// Closed, degree 0, and every phi^{0,0}_i(face) is a quasi-isomorphism.
WeqReport is_weak_equivalence(const Morphism& phi, const TwistedComplex& e, const TwistedComplex& f);

// Twisted complex with zero locals and zero datum.
TwistedComplex zero_twisted(NervePtr nerve, Field f);

}  // namespace tcx
