#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "twistedcx/graded.hpp"

namespace tcx {

// A face is a nonempty set of open indices, stored as a bitmask.
using Face = std::uint32_t;
// Ordered multi-index (i0, ..., ip); repeats are allowed.
using Tuple = std::vector<int>;

inline bool face_contains(Face big, Face small) { return (big & small) == small; }
inline Face singleton(int i) { return Face(1) << i; }
Face tuple_set(const Tuple& t);
int face_size(Face f);
std::vector<int> face_members(Face f);
// Total order: by size, then lexicographically by sorted members.
bool face_less(Face a, Face b);

class NerveError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class CoverNerve {
public:
  static constexpr int kMaxOpens = 24;

  // Subset closure of the declared faces plus every singleton.
  static CoverNerve build(std::vector<std::string> labels, const std::vector<std::vector<int>>& declared);
  // Same, reporting whether the declared family was already subset-closed.
  static CoverNerve build(std::vector<std::string> labels, const std::vector<std::vector<int>>& declared,
                          bool& was_closed);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<int> index_of(const std::string& label) const;
  bool is_face(Face f) const;
  const std::vector<Face>& faces() const { return faces_; }  // sorted by face_less
  // Faces containing the given one (its up-set), sorted.
  std::vector<Face> star(Face f) const;
  std::vector<Face> star_of(int i) const { return star(singleton(i)); }
  std::string face_name(Face f) const;
  std::string tuple_name(const Tuple& t) const;
  // All tuples of the given length whose underlying set is a face, in
  // lexicographic order.
  std::vector<Tuple> tuples(std::size_t length) const;
  // Tuples t of the given length with set(t) | base a face.
  std::vector<Tuple> tuples_compatible(std::size_t length, Face base) const;

  friend bool operator==(const CoverNerve& a, const CoverNerve& b) {
    return a.labels_ == b.labels_ && a.faces_ == b.faces_;
  }

private:
  std::vector<std::string> labels_;
  std::vector<Face> faces_;
  std::vector<char> is_face_;  // indexed by mask
};

using NervePtr = std::shared_ptr<const CoverNerve>;

// Graded presheaf on an up-closed set of faces: one graded space per face and
// a restriction map for every inclusion sigma < tau inside the domain.
class Presheaf {
public:
  Presheaf() = default;
  Presheaf(NervePtr nerve, std::vector<Face> domain, Field f);
  // Constant presheaf with identity restrictions.
  static Presheaf constant(NervePtr nerve, std::vector<Face> domain, const GradedSpace& v, Field f);
  static Presheaf zero(NervePtr nerve, std::vector<Face> domain, Field f);

  const NervePtr& nerve() const { return nerve_; }
  const std::vector<Face>& domain() const { return domain_; }
  bool in_domain(Face f) const;
  Field field() const { return field_; }

  // Value at a face; zero space at non-faces and outside the domain.
  const GradedSpace& value(Face f) const;
  void set_value(Face f, GradedSpace v);
  // Restriction sigma -> tau for sigma <= tau, both in the domain.
  GradedMap restriction(Face from, Face to) const;
  Matrix restriction_at(Face from, Face to, int n) const;
  void set_restriction(Face from, Face to, GradedMap m);
  // Fills every restriction from the restrictions along one-element
  // extensions, composing along the smallest added index first.
  void complete_from_covering_relations();
  // Sub-presheaf restricted to a smaller up-closed domain.
  Presheaf restricted_to(const std::vector<Face>& domain) const;

  friend bool operator==(const Presheaf& a, const Presheaf& b);

private:
  NervePtr nerve_;
  std::vector<Face> domain_;
  Field field_;
  std::map<Face, GradedSpace> values_;
  std::map<std::pair<Face, Face>, GradedMap> res_;
};

// Degree-n slice of a presheaf value; zero at non-faces.
std::size_t section_space(const Presheaf& p, Face f, int n);

struct PresheafReport {
  bool valid = true;
  std::string message;
  // Offending chain sigma <= tau <= upsilon for a functoriality failure, or
  // sigma = tau for an identity failure.
  Face sigma = 0, tau = 0, upsilon = 0;
};

PresheafReport validate_presheaf(const Presheaf& p);

}  // namespace tcx
