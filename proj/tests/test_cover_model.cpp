#include <gtest/gtest.h>

#include "generators.hpp"

using namespace tcx;

namespace {

Field Q = Field::rational();

GradedSpace k0() { return GradedSpace(std::map<int, std::size_t>{{0, 1}}); }

// Brute force: every sequence of the given length over the index set whose
// underlying set is a face.
std::size_t count_tuples(const CoverNerve& n, std::size_t length) {
  std::size_t total = 1, count = 0;
  for (std::size_t k = 0; k < length; ++k) total *= n.size();
  for (std::size_t code = 0; code < total; ++code) {
    Face f = 0;
    std::size_t c = code;
    for (std::size_t k = 0; k < length; ++k) {
      f |= singleton(static_cast<int>(c % n.size()));
      c /= n.size();
    }
    if (n.is_face(f)) ++count;
  }
  return count;
}

}  // namespace

TEST(Nerve, IntervalClosure) {
  bool closed = false;
  auto n = CoverNerve::build({"1", "2"}, {{0, 1}}, closed);
  EXPECT_TRUE(closed);
  EXPECT_EQ(n.faces(), (std::vector<Face>{0b01, 0b10, 0b11}));
}

TEST(Nerve, CircleHasNoTripleFace) {
  auto n = gen::circle_nerve();
  EXPECT_EQ(n->faces().size(), 6u);
  EXPECT_FALSE(n->is_face(0b111));
  EXPECT_TRUE(n->is_face(0b101));
}

TEST(Nerve, SingletonCompletion) {
  auto n = CoverNerve::build({"1"}, {});
  EXPECT_EQ(n.faces(), (std::vector<Face>{0b1}));
}

TEST(Nerve, DeclaredTripleIsClosedWithWarningFlag) {
  bool closed = true;
  auto n = CoverNerve::build({"A", "B", "C"}, {{0, 1, 2}}, closed);
  EXPECT_FALSE(closed);
  EXPECT_EQ(n.faces().size(), 7u);
}

TEST(Nerve, EmptyIndexSetRejected) { EXPECT_THROW(CoverNerve::build({}, {}), NerveError); }

TEST(Nerve, FacesOrderedBySizeThenMembers) {
  auto n = CoverNerve::build({"A", "B", "C"}, {{0, 1, 2}});
  std::vector<Face> expect{0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111};
  EXPECT_EQ(n.faces(), expect);
  EXPECT_EQ(n.star(0b010), (std::vector<Face>{0b010, 0b011, 0b110, 0b111}));
}

TEST(Nerve, RepeatedTuplesReduceToTheirSet) {
  auto n = gen::circle_nerve();
  EXPECT_EQ(tuple_set({0, 0, 1}), Face(0b011));
  EXPECT_TRUE(n->is_face(tuple_set({2, 0, 2})));
  EXPECT_FALSE(n->is_face(tuple_set({0, 1, 2})));
  EXPECT_EQ(n->tuple_name({0, 0, 1}), "(A,A,B)");
  EXPECT_EQ(n->face_name(0b101), "{A,C}");
}

TEST(Nerve, TupleEnumerationMatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    gen::Rng r(seed);
    auto n = gen::random_nerve(r);
    for (std::size_t len = 1; len <= 4; ++len) {
      auto ts = n->tuples(len);
      ASSERT_EQ(ts.size(), count_tuples(*n, len)) << "seed " << seed;
      ASSERT_TRUE(std::is_sorted(ts.begin(), ts.end())) << "seed " << seed;
    }
  }
}

TEST(Presheaf, ConstantIsValid) {
  auto n = gen::circle_nerve();
  Presheaf p = Presheaf::constant(n, n->faces(), k0(), Q);
  EXPECT_TRUE(validate_presheaf(p).valid);
  EXPECT_EQ(section_space(p, 0b011, 0), 1u);
}

TEST(Presheaf, NonFacesAndOutsideSupportAreZero) {
  auto n = gen::circle_nerve();
  GradedSpace v(std::map<int, std::size_t>{{-1, 2}, {0, 1}});
  Presheaf p = Presheaf::constant(n, n->faces(), v, Q);
  EXPECT_EQ(section_space(p, 0b111, 0), 0u);
  EXPECT_EQ(section_space(p, 0b001, 5), 0u);
  EXPECT_EQ(section_space(p, 0b001, -1), 2u);
}

TEST(Presheaf, NonCommutingTriangleReported) {
  auto n = CoverNerve::build({"A", "B", "C"}, {{0, 1, 2}});
  auto np = std::make_shared<const CoverNerve>(n);
  Presheaf p = Presheaf::constant(np, np->faces(), k0(), Q);
  // break A -> ABC only: the chain A <= AB <= ABC no longer composes
  GradedMap twice = Scalar(2, Q) * GradedMap::identity(k0(), Q);
  p.set_restriction(0b001, 0b111, twice);
  auto rep = validate_presheaf(p);
  ASSERT_FALSE(rep.valid);
  EXPECT_EQ(rep.sigma, Face(0b001));
  EXPECT_EQ(rep.upsilon, Face(0b111));
  EXPECT_TRUE(rep.tau == Face(0b011) || rep.tau == Face(0b101));
}

TEST(Presheaf, CompletionFromCoveringRelationsIsFunctorial) {
  auto np = std::make_shared<const CoverNerve>(CoverNerve::build({"A", "B", "C"}, {{0, 1, 2}}));
  gen::Rng r(11);
  Presheaf p(np, np->faces(), Q);
  for (Face f : np->faces()) p.set_value(f, k0());
  // scalar restrictions: commuting squares need a multiplicative cocycle,
  // which a potential u(face) provides: res(s -> t) = u(t) / u(s)
  std::map<Face, Scalar> u;
  for (Face f : np->faces()) u[f] = r.nonzero(Q);
  for (Face s : np->faces())
    for (Face t : np->star(s))
      if (face_size(t) == face_size(s) + 1) p.set_restriction(s, t, (u[t] / u[s]) * GradedMap::identity(k0(), Q));
  p.complete_from_covering_relations();
  EXPECT_TRUE(validate_presheaf(p).valid);
  EXPECT_EQ(p.restriction(0b001, 0b111).at(0).at(0, 0), u[0b111] / u[0b001]);
}

TEST(Presheaf, RandomGlobalComplexesAreValid) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    gen::Rng r(seed);
    auto n = (seed % 3 == 0) ? gen::circle_nerve() : gen::random_nerve(r);
    GlobalComplex c = gen::random_global_complex(r, n, gen::field_for(seed), seed % 2 == 0);
    ASSERT_TRUE(validate_global(c).valid) << "seed " << seed;
  }
}

TEST(Presheaf, RestrictionToStarKeepsValues) {
  auto n = gen::circle_nerve();
  gen::Rng r(5);
  GlobalComplex c = gen::random_global_complex(r, n, Q);
  Presheaf local = c.space.restricted_to(n->star_of(1));
  EXPECT_EQ(local.domain(), n->star_of(1));
  for (Face f : local.domain()) EXPECT_EQ(local.value(f), c.value(f));
  EXPECT_FALSE(local.in_domain(0b001));
}
