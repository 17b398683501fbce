#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "hcell/analysis.hpp"
#include "hcell/fixtures.hpp"
#include "test_support.hpp"

namespace hcell {
namespace {

using fixtures::cons_fixtures;
using fixtures::generated;
using fixtures::sym;
using fixtures::trivial;
using testing::naive_closure;
using testing::point_labels;

// Orbit counts by minimal image over the whole element set.
OrbitCounts brute_counts(const FinPermGroup& g, std::size_t n) {
  const std::set<Perm> elems = naive_closure(g.gens(), g.degree());
  const std::size_t d = g.degree();
  std::set<std::vector<Point>> reps, inj_reps, set_reps;
  std::vector<Point> tuple(n, 0);
  while (true) {
    std::vector<Point> best;
    for (const Perm& p : elems) {
      std::vector<Point> img(n);
      for (std::size_t j = 0; j < n; ++j) img[j] = p[tuple[j]];
      if (best.empty() || img < best) best = img;
    }
    reps.insert(best);
    std::set<Point> distinct(tuple.begin(), tuple.end());
    if (distinct.size() == n) {
      inj_reps.insert(best);
      std::vector<Point> bs;
      for (const Perm& p : elems) {
        std::vector<Point> img;
        for (Point x : distinct) img.push_back(p[x]);
        std::sort(img.begin(), img.end());
        if (bs.empty() || img < bs) bs = img;
      }
      set_reps.insert(bs);
    }
    std::size_t pos = 0;
    while (pos < n && ++tuple[pos] == d) tuple[pos++] = 0;
    if (pos == n) break;
  }
  return OrbitCounts{n, reps.size(), inj_reps.size(), set_reps.size()};
}

std::vector<FinPermGroup> small_groups() {
  return {
      sym({"a", "b", "c", "d"}),
      trivial({"a", "b"}),
      generated({"a", "b", "c", "d"}, {{{"a", "b", "c", "d"}}}),
      generated({"a", "b", "c", "d", "e"}, {{{"a", "b"}}, {{"c", "d", "e"}}}),
      wreath_finite(sym({"x", "y"}), 2),
  };
}

TEST(OrbitProfile, SymmetricGroupCountsEqualityPatterns) {
  const OrbitProfile p = orbit_profile(sym({"a", "b", "c", "d"}), 3);
  const std::uint64_t o[] = {1, 2, 5};
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(p[i].o, o[i]);
    EXPECT_EQ(p[i].oi, 1u);
    EXPECT_EQ(p[i].os, 1u);
  }
}

TEST(OrbitProfile, TrivialGroup) {
  const OrbitCounts c = orbit_counts(trivial({"a", "b"}), 1);
  EXPECT_EQ(c.o, 2u);
  EXPECT_EQ(c.oi, 2u);
  EXPECT_EQ(c.os, 2u);
}

TEST(OrbitProfile, MatchesMinimalImageOracle) {
  for (const FinPermGroup& g : small_groups()) {
    for (std::size_t n = 1; n <= 3; ++n) EXPECT_EQ(orbit_counts(g, n), brute_counts(g, n));
  }
}

TEST(OrbitProfile, ChainAndStirlingIdentity) {
  // o_n = sum_k S(n,k) oi_k: each tuple orbit has a unique equality pattern.
  const std::uint64_t stirling[5][5] = {{1}, {1, 1}, {1, 3, 1}, {1, 7, 6, 1}, {1, 15, 25, 10, 1}};
  for (const FinPermGroup& g : small_groups()) {
    const OrbitProfile p = orbit_profile(g, 4);
    for (std::size_t n = 1; n <= 4; ++n) {
      std::uint64_t sum = 0;
      for (std::size_t k = 1; k <= n; ++k) sum += stirling[n - 1][k - 1] * p[k - 1].oi;
      EXPECT_EQ(p[n - 1].o, sum);
    }
  }
}

TEST(OrbitProfile, SubgroupHasAtLeastAsManyOrbits) {
  const FinPermGroup big = sym({"a", "b", "c", "d"});
  const std::vector<FinPermGroup> subs = {
      generated({"a", "b", "c", "d"}, {{{"a", "b", "c", "d"}}}),
      generated({"a", "b", "c", "d"}, {{{"a", "b"}, {"c", "d"}}}),
      trivial({"a", "b", "c", "d"}),
  };
  const OrbitProfile pb = orbit_profile(big, 3);
  for (const FinPermGroup& h : subs) {
    ASSERT_TRUE(subgroup_relation(h, big).is_subgroup);
    const OrbitProfile ph = orbit_profile(h, 3);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_LE(pb[i].o, ph[i].o);
      EXPECT_LE(pb[i].oi, ph[i].oi);
      EXPECT_LE(pb[i].os, ph[i].os);
    }
  }
}

// Orbit counts of the nested equivalence (E2 twin) from its combinatorial
// description: a tuple's orbit is fixed by its equality and class patterns.
OrbitCounts e2_oracle(std::size_t t, std::size_t n) {
  std::set<std::vector<Point>> tuples, injective;
  std::set<std::vector<std::size_t>> subsets;
  const std::size_t d = t * t;
  std::vector<Point> tuple(n, 0);
  while (true) {
    std::map<Point, Point> eq, cls;
    std::vector<Point> pattern;
    for (Point x : tuple) {
      pattern.push_back(eq.emplace(x, static_cast<Point>(eq.size())).first->second);
      pattern.push_back(cls.emplace(x / t, static_cast<Point>(cls.size())).first->second);
    }
    tuples.insert(pattern);
    if (eq.size() == n) {
      injective.insert(pattern);
      std::map<Point, std::size_t> sizes;
      for (Point x : tuple) ++sizes[x / t];
      std::vector<std::size_t> shape;
      for (auto [c, s] : sizes) shape.push_back(s);
      std::sort(shape.begin(), shape.end());
      subsets.insert(shape);
    }
    std::size_t pos = 0;
    while (pos < n && ++tuple[pos] == d) tuple[pos++] = 0;
    if (pos == n) break;
  }
  return OrbitCounts{n, tuples.size(), injective.size(), subsets.size()};
}

TEST(StableProfile, PureSetBellNumbers) {
  const OrbitProfile p = stable_profile(fixtures::pure_set(), 4);
  const std::uint64_t bell[] = {1, 2, 5, 15};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(p[i].o, bell[i]);
    EXPECT_EQ(p[i].os, 1u);
  }
}

TEST(StableProfile, E2MatchesCombinatorialOracle) {
  const OrbitProfile p = stable_profile(fixtures::e2(), 4);
  const std::uint64_t partitions[] = {1, 2, 3, 5};
  for (std::size_t n = 1; n <= 4; ++n) {
    EXPECT_EQ(p[n - 1], e2_oracle(n, n));
    EXPECT_EQ(p[n - 1].os, partitions[n - 1]);
  }
}

TEST(StableProfile, ChainHolds) {
  for (const GroupExpr& e : {fixtures::pure_set(), fixtures::e2()}) {
    for (const OrbitCounts& c : stable_profile(e, 4)) EXPECT_TRUE(chain_holds(c));
  }
  for (const auto& [name, e] : cons_fixtures()) {
    for (const OrbitCounts& c : stable_profile(e, 3)) {
      EXPECT_LE(c.os, c.oi) << name;
      EXPECT_LE(c.oi, c.o) << name;
      EXPECT_LE(c.oi, factorial(c.n) * c.os) << name;
    }
  }
}

TEST(StableProfile, TopLinkFailsWithDiagonalSwap) {
  // Sym(2) x Sym(omega) on 2 x omega: 20 triple orbits against 3! * 3.
  const OrbitCounts c = stable_profile(cons_fixtures()[0].expr, 3)[2];
  EXPECT_EQ(c.o, 20u);
  EXPECT_EQ(c.oi, 10u);
  EXPECT_EQ(c.os, 3u);
  EXPECT_FALSE(chain_holds(c));
  EXPECT_FALSE(chain_holds(orbit_counts(trivial({"a", "b"}), 2)));
}

TEST(StableProfile, FiniteEqualsOrbitProfile) {
  const FinPermGroup g = generated({"a", "b", "c"}, {{{"a", "b", "c"}}});
  EXPECT_EQ(stable_profile(GroupExpr::finite(g), 3), orbit_profile(g, 3));
}

// Every set partition of {0..n-1}, as class-id vectors.
std::vector<Partition> all_partitions(std::size_t n) {
  std::vector<Partition> out;
  std::vector<std::size_t> ids(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == n) {
      out.push_back(Partition::from_ids(ids));
      return;
    }
    for (std::size_t c = 0; c <= used; ++c) {
      ids[i] = c;
      rec(i + 1, std::max(used, c + 1));
    }
  };
  if (n == 0) return {Partition::equality(0)};
  ids[0] = 0;
  rec(1, 1);
  return out;
}

TEST(Congruences, MatchBruteForce) {
  const std::vector<std::pair<FinPermGroup, std::size_t>> cases = {
      {sym({"a", "b", "c"}), 2},
      {wreath_finite(sym({"x", "y"}), 2), 3},
      {trivial({"a", "b"}), 2},
  };
  for (const auto& [g, expected] : cases) {
    const std::vector<Partition> got = congruences(g);
    EXPECT_EQ(got.size(), expected);
    std::vector<Partition> brute;
    for (const Partition& p : all_partitions(g.degree())) {
      if (is_congruence(g.gens(), p)) brute.push_back(p);
    }
    std::sort(brute.begin(), brute.end());
    EXPECT_EQ(got, brute);
  }
}

TEST(Congruences, JoinClosedWithBounds) {
  for (const FinPermGroup& g : small_groups()) {
    const std::vector<Partition> c = congruences(g);
    const std::set<Partition> s(c.begin(), c.end());
    EXPECT_TRUE(s.count(Partition::equality(g.degree())));
    EXPECT_TRUE(s.count(Partition::universal(g.degree())));
    for (const Partition& a : c) {
      for (const Partition& b : c) EXPECT_TRUE(s.count(a.join(b)));
    }
  }
}

TEST(StableAcl, PureSet) {
  EXPECT_EQ(stable_acl(fixtures::pure_set(), 3).acl_size, 0u);
  Site site;
  site.points = labels({"c0/x"});
  site.classes = {labels({"c0/x"}), labels({"c1/x", "c2/x"})};
  for (std::size_t t : {3u, 4u}) {
    if (t == 4) site.classes = {labels({"c0/x"}), labels({"c1/x", "c2/x", "c3/x"})};
    const AclReport r = stable_acl(fixtures::pure_set(), t, site);
    EXPECT_EQ(r.acl_size, 2u);
    EXPECT_EQ(r.stable_points.size(), t);
  }
}

TEST(StableAcl, FiniteIsWholeDomain) {
  const AclReport r = stable_acl(GroupExpr::finite(sym({"a", "b", "c"})), 2);
  EXPECT_EQ(r.acl_size, 3u);
  EXPECT_EQ(r.stable_points.size(), 3u);
}

TEST(StableAcl, NonTransportableSite) {
  // Pairs classes across copies 1 and 2; at t = 4 the stabilizer also
  // moves copy 3 and the closure merges everything off copy 0.
  Site site;
  site.points = labels({"B1/c0/a"});
  site.classes = {labels({"B1/c0/a"}), labels({"B1/c0/b"}), labels({"B1/c1/a", "B1/c2/b"}),
                  labels({"B1/c1/b", "B1/c2/a"})};
  try {
    stable_acl(cons_fixtures()[0].expr, 3, site);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSiteMismatch);
  }
  EXPECT_EQ(width(cons_fixtures()[0].expr, 3).skipped, 2u);
}

TEST(Width, PureSetIsTwo) {
  EXPECT_EQ(width(fixtures::pure_set(), 3).width, 2u);
  EXPECT_EQ(width(fixtures::pure_set(), 4).width, 2u);
}

TEST(Width, FiniteIsDomainSize) {
  EXPECT_EQ(width(GroupExpr::finite(sym({"a", "b", "c"})), 2).width, 3u);
}

TEST(Width, ProductBound) {
  const std::vector<GroupExpr> pool{fixtures::pure_set(), GroupExpr::finite(sym({"u", "v"})),
                                    GroupExpr::finite(trivial({"w"})), cons_fixtures()[0].expr,
                                    cons_fixtures()[2].expr};
  for (const GroupExpr& a : pool) {
    for (const GroupExpr& b : pool) {
      const std::size_t wa = width(a, 2).width;
      const std::size_t wb = width(b, 2).width;
      EXPECT_LE(width(GroupExpr::direct_product({a, b}), 2).width, wa + wb);
    }
  }
}

TEST(OmegaPartition, CanonicalPasses) {
  for (const GroupExpr& e : {fixtures::pure_set(), fixtures::e2(), cons_fixtures()[4].expr}) {
    const Truncation tr = truncate(e, 3);
    const PartitionReport r = omega_partition_check(tr.group, 3, canonical_candidate(tr.meta));
    EXPECT_TRUE(r.ok()) << r.failure;
  }
}

TEST(OmegaPartition, CollapsedDeltaFailsFour) {
  const Truncation tr = truncate(fixtures::pure_set(), 3);
  const OmegaCandidate c{{}, Partition::universal(3), Partition::universal(3)};
  const PartitionReport r = omega_partition_check(tr.group, 3, c);
  EXPECT_TRUE(r.c1 && r.c2);
  EXPECT_FALSE(r.c4);
}

TEST(OmegaPartition, DiagonalActionFailsFive) {
  // Sym(3) acting diagonally on {x,y} x 3: rows are blocks but the pointwise
  // restriction to one block is trivial.
  const FinPermGroup g = generated({"x0", "x1", "x2", "y0", "y1", "y2"},
                                   {{{"x0", "x1"}, {"y0", "y1"}}, {{"x0", "x1", "x2"}, {"y0", "y1", "y2"}}});
  const Partition rows = Partition::from_classes(6, {{0, 1, 2}, {3, 4, 5}});
  const OmegaCandidate c{{}, rows, Partition::equality(6)};
  const PartitionReport r = omega_partition_check(g, 3, c);
  EXPECT_TRUE(r.c1 && r.c2 && r.c4);
  EXPECT_FALSE(r.c5);
}

TEST(OmegaPartition, FindExamples) {
  const Truncation tr = truncate(fixtures::pure_set(), 3);
  const std::vector<OmegaCandidate> found = omega_partition_find(tr.group, 3);
  const OmegaCandidate canon = canonical_candidate(tr.meta);
  EXPECT_TRUE(std::any_of(found.begin(), found.end(), [&](const OmegaCandidate& c) {
    return c.k == canon.k && c.nabla == canon.nabla && c.delta == canon.delta;
  }));
  const FinPermGroup s3 = sym({"a", "b", "c"});
  const std::vector<OmegaCandidate> f3 = omega_partition_find(s3, 3);
  EXPECT_TRUE(std::any_of(f3.begin(), f3.end(), [](const OmegaCandidate& c) { return c.k.size() == 3; }));
  const std::vector<OmegaCandidate> f1 = omega_partition_find(trivial({"p"}), 3);
  ASSERT_EQ(f1.size(), 1u);
  EXPECT_EQ(f1.front().k, std::vector<Point>{0});
}

TEST(EStar, LiftOnOrderFourCons) {
  const GroupExpr e = cons_fixtures()[0].expr;
  const ConsNode& c = *e.as<ConsNode>();
  const Truncation tr = truncate(e, 2);
  const Partition eq = lift_congruence_estar(c, tr, 1, label("a"), {labels({"a"}), labels({"b"})});
  // Domain: B1/c0/a B1/c0/b B1/c1/a B1/c1/b.
  EXPECT_EQ(eq, Partition::from_classes(4, {{0}, {1}, {2, 3}}));
  const Partition un = lift_congruence_estar(c, tr, 1, label("a"), {labels({"a", "b"})});
  EXPECT_EQ(un, tr.meta.delta);
}

TEST(EStar, AclBoundedByWidthOnFixtures) {
  for (const auto& [name, e] : cons_fixtures()) {
    const ConsNode& c = *e.as<ConsNode>();
    const Truncation tr = truncate(e, 2);
    const std::size_t w = width(e, 2).width;
    for (std::size_t i = 1; i <= tr.meta.k; ++i) {
      const std::vector<Point> yi = tr.meta.block_base(i);
      const FinPermGroup hi = restrict_inner(c.h, yi, RestrictMode::kSetwise);
      const PointLabel x = hi.domain().front();
      const std::vector<Perm> hx = stabilizer_gens(hi.gens(), hi.degree(), 0);
      for (const Partition& pe : congruences(hx, hi.degree())) {
        std::vector<std::vector<PointLabel>> cls;
        for (const auto& k : pe.classes()) {
          std::vector<PointLabel> ls;
          for (Point p : k) ls.push_back(hi.domain()[p]);
          cls.push_back(ls);
        }
        EXPECT_NO_THROW(lift_congruence_estar(c, tr, i, x, cls)) << name;
        // (H_i)_x is finite, so its stable acl on Y_i/E is every class.
        EXPECT_LE(pe.num_classes(), w) << name;
      }
    }
  }
}

TEST(SubdirectClosure, NormalWithFiniteIndex) {
  for (const auto& [name, e] : cons_fixtures()) {
    const ConsNode& c = *e.as<ConsNode>();
    std::vector<Perm> extra;
    std::vector<std::vector<Point>> blocks{{}};
    for (const PointLabel& l : c.y0) blocks[0].push_back(c.h.require_index(l));
    for (const FinPermGroup& p : c.parts) {
      blocks.emplace_back();
      for (const PointLabel& l : p.domain()) blocks.back().push_back(c.h.require_index(l));
    }
    for (const auto& b : blocks) {
      if (b.empty()) continue;
      const FinPermGroup hi = restrict_inner(c.h, b, RestrictMode::kSetwise);
      for (const Perm& s : generate_elements(hi)) {
        std::vector<Point> image = c.h.identity().image();
        for (Point j = 0; j < s.degree(); ++j) {
          image[c.h.require_index(hi.domain()[j])] = c.h.require_index(hi.domain()[s[j]]);
        }
        extra.push_back(Perm(image));
      }
    }
    const FinPermGroup hstar = adjoin(c.h, extra);
    const SubgroupRelation rel = subgroup_relation(cons_normal_part(c), hstar);
    EXPECT_TRUE(rel.is_subgroup && rel.is_normal) << name;
    ASSERT_TRUE(rel.index.has_value());
    EXPECT_GE(*rel.index, 1u);
  }
}

}  // namespace
}  // namespace hcell
