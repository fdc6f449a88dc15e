#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracle.hpp"

using namespace tcx;

namespace {

Field Q = Field::rational();

// Arbitrary facewise maps, not necessarily natural or closed.
GlobalMorphism random_global(gen::Rng& r, const GlobalComplex& src, const GlobalComplex& dst, int degree,
                             const std::vector<Face>& domain) {
  GlobalMorphism g;
  g.degree = degree;
  Field f = src.field();
  for (Face s : domain) {
    const GradedSpace &a = src.value(s), &b = dst.value(s);
    GradedMap m(a, b, degree, f);
    for (const auto& [n, cols] : a.dims())
      if (std::size_t rows = b.dim(n + degree)) m.set(n, gen::random_matrix(r, rows, cols, f));
    g.maps[s] = m;
  }
  return g;
}

FiberMorphism random_fiber(gen::Rng& r, const FiberObject& x, const FiberObject& y, int degree) {
  FiberMorphism m;
  m.degree = degree;
  m.mu = random_global(r, x.m, y.m, degree, x.nerve->star_of(0));
  m.nu = random_global(r, x.n, y.n, degree, x.nerve->star_of(1));
  m.tau = random_global(r, x.m_overlap, y.n_overlap, degree - 1, x.overlap);
  return m;
}

FiberObject random_object(gen::Rng& r, Field f) {
  auto res = twisted_resolution(gen::random_global_complex(r, gen::interval_nerve(), f, true));
  return restrict_to_fiber(r.coin() ? res.resolved : res.target);
}

bool certified(const FiberObject& x) {
  const auto& c = x.certificate;
  GlobalMorphism gf = global_difference(global_compose(c.inverse, x.f, x.m_overlap, x.n_overlap, x.m_overlap),
                                        global_identity(x.m_overlap), x.m_overlap, x.m_overlap);
  GlobalMorphism fg = global_difference(global_compose(x.f, c.inverse, x.n_overlap, x.m_overlap, x.n_overlap),
                                        global_identity(x.n_overlap), x.n_overlap, x.n_overlap);
  return global_diff(x.f, x.m_overlap, x.n_overlap).is_zero() &&
         global_diff(c.inverse, x.n_overlap, x.m_overlap).is_zero() &&
         global_equal(gf, global_diff(c.left, x.m_overlap, x.m_overlap), x.m_overlap, x.m_overlap) &&
         global_equal(fg, global_diff(c.right, x.n_overlap, x.n_overlap), x.n_overlap, x.n_overlap);
}

FiberMorphism negated(FiberMorphism m) {
  for (auto* g : {&m.mu, &m.nu, &m.tau})
    for (auto& entry : g->maps) entry.second = -entry.second;
  return m;
}


// Hom complexes as coordinate spaces, one slot per matrix entry. Both sides
// are restricted to natural morphisms between locals that are constant on
// stars, so a component is determined by its value at the smallest face.
struct Slot {
  int part = 0;  // twisted side: unused; fiber side: 0 = mu, 1 = nu, 2 = tau
  Tuple tuple;
  Face face = 0;
  int n = 0;
  std::size_t row = 0, col = 0;
};

std::vector<Slot> entry_slots(int part, const Tuple& t, Face face, const GradedSpace& src, const GradedSpace& dst,
                              int shift) {
  std::vector<Slot> out;
  for (const auto& [n, cols] : src.dims())
    for (std::size_t i = 0; i < dst.dim(n + shift); ++i)
      for (std::size_t j = 0; j < cols; ++j) out.push_back({part, t, face, n, i, j});
  return out;
}

void append(std::vector<Slot>& a, std::vector<Slot> b) { a.insert(a.end(), b.begin(), b.end()); }

GradedMap unit_map(GradedMap g, const Slot& sl) {
  Matrix u = g.at(sl.n);
  u.set(sl.row, sl.col, Scalar(1, g.field()));
  g.set(sl.n, u);
  return g;
}

std::vector<Slot> twisted_slots(const TwistedComplex& a, const TwistedComplex& b, int k) {
  std::vector<Slot> out;
  for (int p = 0; p <= max_cech_bound(*a.locals, *b.locals, k); ++p)
    for (const Tuple& t : a.nerve()->tuples(static_cast<std::size_t>(p + 1))) {
      Face s = tuple_set(t);
      append(out, entry_slots(0, t, s, (*a.locals)[t.back()].value(s), (*b.locals)[t.front()].value(s), k - p));
    }
  return out;
}

Morphism twisted_unit(const TwistedComplex& a, const TwistedComplex& b, int k, const Slot& sl) {
  Morphism m(a.locals, b.locals, k);
  for (Face s : a.nerve()->star(sl.face)) m.set(sl.tuple, s, unit_map(m.zero_component(sl.tuple, s), sl));
  return m;
}

Vector twisted_coords(const Morphism& m, const std::vector<Slot>& slots) {
  Vector v;
  for (const Slot& sl : slots) v.push_back(m.at(sl.tuple, sl.face).at(sl.n).at(sl.row, sl.col));
  return v;
}

std::vector<Slot> fiber_slots(const FiberObject& x, const FiberObject& y, int k) {
  std::vector<Slot> out;
  append(out, entry_slots(0, {}, singleton(0), x.m.value(singleton(0)), y.m.value(singleton(0)), k));
  append(out, entry_slots(1, {}, singleton(1), x.n.value(singleton(1)), y.n.value(singleton(1)), k));
  for (Face s : x.overlap) append(out, entry_slots(2, {}, s, x.m_overlap.value(s), y.n_overlap.value(s), k - 1));
  return out;
}

FiberMorphism fiber_unit(const FiberObject& x, const FiberObject& y, int k, const Slot& sl) {
  FiberMorphism m;
  m.degree = k;
  m.mu.degree = m.nu.degree = k;
  m.tau.degree = k - 1;
  const GlobalComplex& src = sl.part == 0 ? x.m : sl.part == 1 ? x.n : x.m_overlap;
  const GlobalComplex& dst = sl.part == 0 ? y.m : sl.part == 1 ? y.n : y.n_overlap;
  GlobalMorphism& g = sl.part == 0 ? m.mu : sl.part == 1 ? m.nu : m.tau;
  for (Face s : x.nerve->star(sl.face)) g.maps[s] = unit_map(GradedMap(src.value(s), dst.value(s), g.degree, src.field()), sl);
  return m;
}

Vector fiber_coords(const FiberMorphism& m, const FiberObject& x, const FiberObject& y, const std::vector<Slot>& slots) {
  Vector v;
  for (const Slot& sl : slots) {
    GradedMap g = sl.part == 0   ? m.mu.at(sl.face, x.m, y.m)
                  : sl.part == 1 ? m.nu.at(sl.face, x.n, y.n)
                                 : m.tau.at(sl.face, x.m_overlap, y.n_overlap);
    v.push_back(g.at(sl.n).at(sl.row, sl.col));
  }
  return v;
}

Matrix columns(const std::vector<Vector>& cols, std::size_t rows, Field f) {
  Matrix m(rows, cols.size(), f);
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < rows; ++i)
      if (!cols[j][i].is_zero()) m.set(i, j, cols[j][i]);
  return m;
}

// The differential of a hom complex in degree k, as a matrix in slot
// coordinates.
template <class Unit, class Diff, class Coords>
Matrix hom_differential(const std::vector<Slot>& from, const std::vector<Slot>& to, Field f, Unit unit, Diff diff,
                        Coords coords) {
  std::vector<Vector> cols;
  for (const Slot& sl : from) cols.push_back(coords(diff(unit(sl)), to));
  return columns(cols, to.size(), f);
}

}  // namespace

TEST(FiberCompose, IdentityIsATwoSidedUnit) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    gen::Rng r(seed);
    Field f = gen::field_for(seed);
    FiberObject x = random_object(r, f), y = random_object(r, f);
    FiberMorphism m = random_fiber(r, x, y, r.uniform(-1, 1));
    ASSERT_TRUE(fiber_equal(fiber_compose(fiber_identity(y), m, x, y, y), m, x, y)) << "seed " << seed;
    ASSERT_TRUE(fiber_equal(fiber_compose(m, fiber_identity(x), x, x, y), m, x, y)) << "seed " << seed;
  }
}

TEST(FiberCompose, ZeroTausGiveZeroTau) {
  gen::Rng r(1);
  FiberObject x = random_object(r, Q), y = random_object(r, Q), z = random_object(r, Q);
  FiberMorphism m1 = random_fiber(r, x, y, 0), m2 = random_fiber(r, y, z, 1);
  m1.tau.maps.clear();
  m2.tau.maps.clear();
  EXPECT_TRUE(fiber_compose(m2, m1, x, y, z).tau.is_zero());
}

TEST(FiberCompose, Associative) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    gen::Rng r(seed);
    Field f = gen::field_for(seed);
    std::vector<FiberObject> xs;
    for (int k = 0; k < 4; ++k) xs.push_back(random_object(r, f));
    FiberMorphism a = random_fiber(r, xs[0], xs[1], r.uniform(-1, 1));
    FiberMorphism b = random_fiber(r, xs[1], xs[2], r.uniform(-1, 1));
    FiberMorphism c = random_fiber(r, xs[2], xs[3], r.uniform(-1, 1));
    FiberMorphism left = fiber_compose(fiber_compose(c, b, xs[1], xs[2], xs[3]), a, xs[0], xs[1], xs[3]);
    FiberMorphism right = fiber_compose(c, fiber_compose(b, a, xs[0], xs[1], xs[2]), xs[0], xs[2], xs[3]);
    ASSERT_TRUE(fiber_equal(left, right, xs[0], xs[3])) << "seed " << seed;
  }
}

TEST(FiberDifferential, IdentityIsClosed) {
  gen::Rng r(2);
  FiberObject x = random_object(r, Q);
  FiberMorphism d = fiber_differential(fiber_identity(x), x, x);
  EXPECT_TRUE(d.mu.is_zero());
  EXPECT_TRUE(d.nu.is_zero());
  EXPECT_TRUE(d.tau.is_zero());
}

TEST(FiberDifferential, PureTauComponent) {
  // With the sign that makes d square to zero the third slot is -d(tau).
  gen::Rng r(3);
  FiberObject x = random_object(r, Q), y = random_object(r, Q);
  FiberMorphism m = random_fiber(r, x, y, 1);
  m.mu.maps.clear();
  m.nu.maps.clear();
  FiberMorphism d = fiber_differential(m, x, y);
  EXPECT_TRUE(d.mu.is_zero());
  EXPECT_TRUE(d.nu.is_zero());
  GlobalMorphism dt = global_diff(m.tau, x.m_overlap, y.n_overlap);
  for (Face s : x.overlap) EXPECT_EQ(d.tau.at(s, x.m_overlap, y.n_overlap), -dt.at(s, x.m_overlap, y.n_overlap));
}

TEST(FiberDifferential, SquaresToZero) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    gen::Rng r(seed);
    Field f = gen::field_for(seed);
    FiberObject x = random_object(r, f), y = random_object(r, f);
    FiberMorphism m = random_fiber(r, x, y, r.uniform(-1, 1));
    FiberMorphism dd = fiber_differential(fiber_differential(m, x, y), x, y);
    ASSERT_TRUE(dd.mu.is_zero() && dd.nu.is_zero() && dd.tau.is_zero()) << "seed " << seed;
  }
}

TEST(FiberDifferential, Leibniz) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    gen::Rng r(seed);
    Field f = gen::field_for(seed);
    FiberObject x = random_object(r, f), y = random_object(r, f), z = random_object(r, f);
    FiberMorphism m1 = random_fiber(r, x, y, r.uniform(-1, 1));
    FiberMorphism m2 = random_fiber(r, y, z, r.uniform(-1, 1));
    FiberMorphism lhs = fiber_differential(fiber_compose(m2, m1, x, y, z), x, z);
    FiberMorphism a = fiber_compose(fiber_differential(m2, y, z), m1, x, y, z);
    FiberMorphism b = fiber_compose(m2, fiber_differential(m1, x, y), x, y, z);
    FiberMorphism rhs = fiber_sum(a, (m2.degree % 2) ? negated(b) : b, x, z);
    ASSERT_TRUE(fiber_equal(lhs, rhs, x, z)) << "seed " << seed;
  }
}

TEST(RestrictToFiber, TwistGluesByIdentity) {
  gen::Rng r(4);
  GlobalComplex p = gen::random_global_complex(r, gen::interval_nerve(), Q);
  FiberObject x = restrict_to_fiber(twist(p));
  for (Face s : x.overlap) {
    GradedMap f = x.f.at(s, x.m_overlap, x.n_overlap);
    EXPECT_EQ(f, GradedMap::identity(p.value(s), Q));
  }
  EXPECT_TRUE(certified(x));
}

TEST(RestrictToFiber, ResolvedComplexesAreCertified) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    gen::Rng r(seed);
    auto res = twisted_resolution(gen::random_global_complex(r, gen::interval_nerve(), gen::field_for(seed), true));
    FiberObject x = restrict_to_fiber(res.resolved);
    ASSERT_TRUE(certified(x)) << "seed " << seed;
    ASSERT_EQ(x.certificate.method, "seed");
  }
}

TEST(RestrictToFiber, DegenerateDatumRejected) {
  gen::Rng r(5);
  TwistedComplex z = gen::projector_twisted(r, gen::interval_nerve(), Q, true);
  EXPECT_THROW(restrict_to_fiber(z), NotInvertible);
}

TEST(RestrictToFiber, NeedsTwoOpens) {
  gen::Rng r(6);
  TwistedComplex t = twist(gen::random_global_complex(r, gen::circle_nerve(), Q));
  EXPECT_THROW(restrict_to_fiber(t), WrongCoverShape);
}

TEST(RestrictMorphism, SignIsStable) {
  int s = descent_sign();
  EXPECT_EQ(s, 1);
  EXPECT_EQ(descent_sign(), s);
}

TEST(RestrictMorphism, CommutesWithDifferentials) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    gen::Rng r(seed);
    Field f = gen::field_for(seed);
    auto n = gen::interval_nerve();
    auto res = twisted_resolution(gen::random_global_complex(r, n, f, true));
    const TwistedComplex& e = res.resolved;
    FiberObject x = restrict_to_fiber(e);
    // non-closed: random natural endomorphisms; closed: the identity and
    // boundaries d(x)
    Morphism phi = gen::random_natural_constant(r, e.locals, e.locals, r.uniform(-1, 1), 1);
    Morphism bnd = morphism_diff(gen::random_natural_constant(r, e.locals, e.locals, -1, 1), e.a, e.a);
    for (const Morphism* m : {&phi, &bnd}) {
      FiberMorphism lhs = fiber_differential(restrict_morphism(*m, x, x), x, x);
      FiberMorphism rhs = restrict_morphism(morphism_diff(*m, e.a, e.a), x, x);
      ASSERT_TRUE(fiber_equal(lhs, rhs, x, x)) << "seed " << seed;
    }
    FiberMorphism rid = restrict_morphism(Morphism::identity(e.locals), x, x);
    ASSERT_TRUE(fiber_equal(rid, fiber_identity(x), x, x));
  }
}

TEST(QuasiFullyFaithful, HomCohomologyMatchesOnInstances) {
  // Instance evidence: for pairs of resolved complexes, R induces an
  // isomorphism on H^0 of the hom complexes, and H^-1, H^1 have equal
  // dimensions.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    gen::Rng r(seed);
    Field f = gen::field_for(seed);
    auto make = [&] {
      return twisted_resolution(gen::random_global_complex(r, gen::interval_nerve(), f, true, 0, 2)).resolved;
    };
    TwistedComplex a = make(), b = make();
    FiberObject x = restrict_to_fiber(a), y = restrict_to_fiber(b);
    std::map<int, std::vector<Slot>> ts, fs;
    for (int k = -2; k <= 2; ++k) {
      ts[k] = twisted_slots(a, b, k);
      fs[k] = fiber_slots(x, y, k);
    }
    std::map<int, Matrix> td, fd;
    for (int k = -2; k <= 1; ++k) {
      td.emplace(k, hom_differential(
                        ts[k], ts[k + 1], f, [&](const Slot& sl) { return twisted_unit(a, b, k, sl); },
                        [&](const Morphism& m) { return morphism_diff(m, a.a, b.a); }, twisted_coords));
      fd.emplace(k, hom_differential(
                        fs[k], fs[k + 1], f, [&](const Slot& sl) { return fiber_unit(x, y, k, sl); },
                        [&](const FiberMorphism& m) { return fiber_differential(m, x, y); },
                        [&](const FiberMorphism& m, const std::vector<Slot>& to) { return fiber_coords(m, x, y, to); }));
    }
    for (int k = -2; k <= 0; ++k) {
      ASSERT_TRUE((td.at(k + 1) * td.at(k)).is_zero()) << "twisted dd " << k;
      ASSERT_TRUE((fd.at(k + 1) * fd.at(k)).is_zero()) << "fiber dd " << k;
    }
    for (const Slot& sl : ts[0]) ASSERT_TRUE(check_naturality(twisted_unit(a, b, 0, sl)).valid);
    auto h = [](const std::map<int, std::vector<Slot>>& sl, const std::map<int, Matrix>& d, int k) {
      return sl.at(k).size() - oracle::rank_of(d.at(k)) - oracle::rank_of(d.at(k - 1));
    };
    for (int k = -1; k <= 1; ++k) ASSERT_EQ(h(ts, td, k), h(fs, fd, k)) << "seed " << seed << " degree " << k;
    // R on degree-0 cocycles, modulo fiber boundaries
    std::vector<Vector> images;
    for (const Vector& z : oracle::kernel_basis(td.at(0))) {
      Morphism m(a.locals, b.locals, 0);
      for (std::size_t i = 0; i < z.size(); ++i)
        if (!z[i].is_zero()) m += z[i] * twisted_unit(a, b, 0, ts[0][i]);
      images.push_back(fiber_coords(restrict_morphism(m, x, y), x, y, fs[0]));
    }
    Matrix bnd = fd.at(-1);
    Matrix img = columns(images, fs[0].size(), f);
    std::size_t gained = oracle::rank_of(oracle::hcat(bnd, img)) - oracle::rank_of(bnd);
    ASSERT_EQ(gained, h(ts, td, 0)) << "seed " << seed;
    ASSERT_EQ(gained + oracle::rank_of(fd.at(0)) + oracle::rank_of(bnd), fs[0].size()) << "seed " << seed;
  }
}
