#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "hcell/perm_group.hpp"
#include "test_support.hpp"

namespace hcell {
namespace {

using testing::all_perms;
using testing::as_set;
using testing::naive_closure;
using testing::point_labels;

FinPermGroup sym3() {
  return FinPermGroup(point_labels(3), {Perm::from_cycles(3, {{0, 1}}), Perm::from_cycles(3, {{0, 1, 2}})});
}

TEST(Perm, RejectsNonBijection) {
  EXPECT_THROW(Perm({0, 0, 1}), Error);
  EXPECT_THROW(Perm({0, 3}), Error);
}

TEST(Perm, CompositionAppliesRightFactorFirst) {
  const Perm a = Perm::from_cycles(3, {{0, 1}});
  const Perm b = Perm::from_cycles(3, {{1, 2}});
  // b sends 1 to 2, then a fixes 2.
  EXPECT_EQ((a * b)[1], 2u);
  EXPECT_EQ((a * b) * (a * b).inverse(), Perm::identity(3));
}

TEST(GenerateElements, EmptyGeneratingSetGivesIdentity) {
  const FinPermGroup g(point_labels(3), {});
  const ElementSet e = generate_elements(g);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_TRUE(e.front().is_identity());
}

TEST(GenerateElements, TranspositionAndThreeCycleGiveSym3) {
  const ElementSet e = generate_elements(sym3());
  EXPECT_EQ(as_set(e), as_set(all_perms(3)));
  EXPECT_TRUE(std::is_sorted(e.begin(), e.end()));
}

TEST(GenerateElements, CapExceeded) {
  const FinPermGroup g(point_labels(2), {Perm::from_cycles(2, {{0, 1}})}, 1);
  try {
    generate_elements(g);
    FAIL() << "expected CapExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kCapExceeded);
  }
}

TEST(GenerateElements, ClosedUnderProductAndInverse) {
  const std::vector<FinPermGroup> groups = {
      sym3(),
      FinPermGroup(point_labels(4), {Perm::from_cycles(4, {{0, 1, 2, 3}}), Perm::from_cycles(4, {{0, 2}})}),
      FinPermGroup(point_labels(5), {Perm::from_cycles(5, {{0, 1, 2}}), Perm::from_cycles(5, {{2, 3, 4}})}),
  };
  for (const FinPermGroup& g : groups) {
    const ElementSet e = generate_elements(g);
    EXPECT_EQ(as_set(e), naive_closure(g.gens(), g.degree()));
    for (const Perm& a : e) {
      EXPECT_TRUE(contains(e, a.inverse()));
      for (const Perm& b : e) EXPECT_TRUE(contains(e, a * b));
    }
  }
}

TEST(FinPermGroup, DomainIsSortedAndGeneratorsFollowLabels) {
  // Domain given as (b, a); the generator sends b to a and a to b.
  const FinPermGroup g(labels({"b", "a", "c"}), {Perm({1, 0, 2})});
  EXPECT_EQ(g.domain(), labels({"a", "b", "c"}));
  EXPECT_EQ(g.gens().front(), Perm({1, 0, 2}));
  const FinPermGroup h(labels({"c", "a", "b"}), {Perm({1, 0, 2})});  // swaps c and a
  EXPECT_EQ(h.gens().front(), Perm({2, 1, 0}));
}

TEST(FinPermGroup, DuplicateLabelsRejected) {
  EXPECT_THROW(FinPermGroup(labels({"a", "a"}), {}), Error);
}

TEST(SubgroupRelation, CyclicNormalInSym3) {
  const FinPermGroup h(point_labels(3), {Perm::from_cycles(3, {{0, 1, 2}})});
  const SubgroupRelation rel = subgroup_relation(h, sym3());
  EXPECT_TRUE(rel.is_subgroup);
  EXPECT_TRUE(rel.is_normal);
  EXPECT_EQ(rel.index, 2u);
}

TEST(SubgroupRelation, TranspositionNotNormal) {
  const FinPermGroup h(point_labels(3), {Perm::from_cycles(3, {{0, 1}})});
  const SubgroupRelation rel = subgroup_relation(h, sym3());
  EXPECT_TRUE(rel.is_subgroup);
  EXPECT_FALSE(rel.is_normal);
  EXPECT_EQ(rel.index, 3u);
  // Oracle: some conjugate of (0 1) by a Sym(3) element leaves H.
  const ElementSet he = generate_elements(h);
  bool escaped = false;
  for (const Perm& g : all_perms(3)) {
    escaped |= !contains(he, g * Perm::from_cycles(3, {{0, 1}}) * g.inverse());
  }
  EXPECT_TRUE(escaped);
}

TEST(SubgroupRelation, Reflexive) {
  const SubgroupRelation rel = subgroup_relation(sym3(), sym3());
  EXPECT_TRUE(rel.is_subgroup && rel.is_normal);
  EXPECT_EQ(rel.index, 1u);
}

TEST(SubgroupRelation, NotASubgroupAndDomainMismatch) {
  const FinPermGroup a(point_labels(3), {Perm::from_cycles(3, {{0, 1}})});
  const FinPermGroup b(point_labels(3), {Perm::from_cycles(3, {{1, 2}})});
  EXPECT_FALSE(subgroup_relation(a, b).is_subgroup);
  EXPECT_FALSE(subgroup_relation(a, b).index.has_value());
  EXPECT_THROW(subgroup_relation(a, FinPermGroup(point_labels(4), {})), Error);
}

TEST(Stabilizer, PointwiseAndSetwise) {
  const std::vector<Point> zero{0};
  EXPECT_EQ(group_order(stabilizer(sym3(), zero, StabMode::kPointwise)), 2u);
  const std::vector<Point> all{0, 1, 2};
  EXPECT_TRUE(same_group(stabilizer(sym3(), all, StabMode::kSetwise), sym3()));
  EXPECT_TRUE(same_group(stabilizer(sym3(), {}, StabMode::kPointwise), sym3()));
}

TEST(Stabilizer, MatchesFilterOracle) {
  const FinPermGroup g(point_labels(5), {Perm::from_cycles(5, {{0, 1, 2, 3, 4}}), Perm::from_cycles(5, {{1, 4}, {2, 3}})});
  const std::vector<Point> s{1, 3};
  std::set<Perm> pointwise, setwise;
  for (const Perm& p : naive_closure(g.gens(), 5)) {
    if (p[1] == 1 && p[3] == 3) pointwise.insert(p);
    if ((p[1] == 1 || p[1] == 3) && (p[3] == 1 || p[3] == 3)) setwise.insert(p);
  }
  EXPECT_EQ(as_set(generate_elements(stabilizer(g, s, StabMode::kPointwise))), pointwise);
  EXPECT_EQ(as_set(generate_elements(stabilizer(g, s, StabMode::kSetwise))), setwise);
}

TEST(RestrictInner, ProductOfSymmetricGroups) {
  const FinPermGroup s2a(labels({"a", "b"}), {Perm({1, 0})});
  const FinPermGroup s2b(labels({"c", "d"}), {Perm({1, 0})});
  const std::vector<FinPermGroup> parts{s2a, s2b};
  const FinPermGroup g = direct_product(parts);
  const std::vector<Point> y{0, 1};  // B0/a, B0/b
  const FinPermGroup r = restrict_inner(g, y, RestrictMode::kPointwise);
  EXPECT_EQ(r.domain(), labels({"B0/a", "B0/b"}));
  EXPECT_EQ(group_order(r), 2u);
}

TEST(RestrictInner, BlockSwapHasTrivialPointwiseRestriction) {
  const FinPermGroup g(point_labels(4), {Perm::from_cycles(4, {{0, 2}, {1, 3}})});
  const std::vector<Point> y{0, 1};
  EXPECT_EQ(group_order(restrict_inner(g, y, RestrictMode::kPointwise)), 1u);
  EXPECT_EQ(group_order(restrict_inner(g, y, RestrictMode::kSetwise)), 1u);
  const std::vector<Point> all{0, 1, 2, 3};
  EXPECT_TRUE(same_group(restrict_inner(g, all, RestrictMode::kPointwise), g));
  EXPECT_TRUE(same_group(restrict_inner(g, all, RestrictMode::kSetwise), g));
}

TEST(RestrictInner, PointwiseIsContainedInSetwise) {
  const FinPermGroup g(point_labels(5), {Perm::from_cycles(5, {{0, 1}}), Perm::from_cycles(5, {{0, 2, 4}}), Perm::from_cycles(5, {{3, 4}})});
  for (const std::vector<Point>& y : std::vector<std::vector<Point>>{{0}, {0, 1}, {1, 3}, {0, 2, 4}}) {
    const ElementSet inner = generate_elements(restrict_inner(g, y, RestrictMode::kPointwise));
    const ElementSet outer = generate_elements(restrict_inner(g, y, RestrictMode::kSetwise));
    for (const Perm& p : inner) EXPECT_TRUE(contains(outer, p));
  }
}

TEST(Quotient, WreathOnBlocks) {
  const FinPermGroup s2(labels({"x", "y"}), {Perm({1, 0})});
  const FinPermGroup w = wreath_finite(s2, 2);
  // Domain: c0/x c0/y c1/x c1/y.
  const Partition blocks = Partition::from_classes(4, {{0, 1}, {2, 3}});
  const FinPermGroup q = quotient_by_congruence(w, blocks);
  EXPECT_EQ(q.degree(), 2u);
  EXPECT_EQ(group_order(q), 2u);
  EXPECT_EQ(q.domain(), labels({"c0/x", "c1/x"}));
}

TEST(Quotient, EqualityAndUniversal) {
  const FinPermGroup g = sym3();
  EXPECT_TRUE(same_group(quotient_by_congruence(g, Partition::equality(3)), g));
  const FinPermGroup u = quotient_by_congruence(g, Partition::universal(3));
  EXPECT_EQ(u.degree(), 1u);
  EXPECT_EQ(group_order(u), 1u);
}

TEST(Quotient, RejectsNonCongruence) {
  try {
    quotient_by_congruence(sym3(), Partition::from_classes(3, {{0, 1}, {2}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotACongruence);
  }
}

TEST(Quotient, IsHomomorphicImage) {
  const FinPermGroup s2(labels({"x", "y"}), {Perm({1, 0})});
  const FinPermGroup w = wreath_finite(wreath_finite(s2, 2), 2);
  const Partition e = Partition::from_ids(std::vector<std::size_t>{0, 0, 0, 0, 1, 1, 1, 1});
  for (const Perm& g : w.gens()) {
    for (const Perm& h : w.gens()) {
      EXPECT_EQ(induced_on_classes(g * h, e), induced_on_classes(g, e) * induced_on_classes(h, e));
    }
  }
}

TEST(DirectProduct, Orders) {
  const FinPermGroup s2(labels({"x", "y"}), {Perm({1, 0})});
  const std::vector<FinPermGroup> two{s2, s2};
  const FinPermGroup p = direct_product(two);
  EXPECT_EQ(p.degree(), 4u);
  EXPECT_EQ(group_order(p), 4u);
  const std::vector<FinPermGroup> one{sym3()};
  EXPECT_EQ(group_order(direct_product(one)), 6u);
  const std::vector<FinPermGroup> mixed{sym3(), FinPermGroup::trivial({label("z")})};
  const FinPermGroup m = direct_product(mixed);
  EXPECT_EQ(m.degree(), 4u);
  EXPECT_EQ(group_order(m), 6u);
}

TEST(WreathFinite, OrderFormula) {
  const FinPermGroup s2(labels({"x", "y"}), {Perm({1, 0})});
  EXPECT_EQ(group_order(wreath_finite(s2, 2)), 8u);
  const FinPermGroup pt = FinPermGroup::trivial({label("x")});
  const FinPermGroup w3 = wreath_finite(pt, 3);
  EXPECT_EQ(w3.degree(), 3u);
  EXPECT_EQ(as_set(generate_elements(w3)), as_set(all_perms(3)));
  EXPECT_EQ(group_order(wreath_finite(sym3(), 1)), 6u);
  // |G|^m m! across a small matrix.
  const FinPermGroup c3(point_labels(3), {Perm::from_cycles(3, {{0, 1, 2}})});
  const std::size_t fact[] = {1, 1, 2, 6, 24};
  for (std::size_t m = 1; m <= 4; ++m) {
    std::size_t pow = 1;
    for (std::size_t i = 0; i < m; ++i) pow *= 3;
    EXPECT_EQ(group_order(wreath_finite(c3, m)), pow * fact[m]);
  }
}

TEST(Orbits, PointOrbitsAndSchreierStabilizer) {
  const FinPermGroup s2(labels({"x", "y"}), {Perm({1, 0})});
  const FinPermGroup w = wreath_finite(s2, 3);
  EXPECT_EQ(point_orbits(w.gens(), w.degree()).num_classes(), 1u);
  const std::vector<Perm> sg = stabilizer_gens(w.gens(), w.degree(), 0);
  const FinPermGroup stab(w.domain(), sg);
  const std::vector<Point> zero{0};
  EXPECT_TRUE(same_group(stab, stabilizer(w, zero, StabMode::kPointwise)));
}

}  // namespace
}  // namespace hcell
