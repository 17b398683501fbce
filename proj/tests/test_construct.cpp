#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "hcell/construct.hpp"
#include "hcell/fixtures.hpp"
#include "hcell/oracle.hpp"
#include "test_support.hpp"

namespace hcell {
namespace {

using fixtures::cons_fixtures;
using fixtures::sym;
using fixtures::trivial;
using testing::all_perms;
using testing::as_set;

GroupExpr id2_sym2() { return GroupExpr::cons({}, {trivial({"a", "b"})}, sym({"a", "b"})); }

const ConsNode& cons_of(const GroupExpr& e) { return *e.as<ConsNode>(); }

Point at(const Truncation& tr, const std::string& l) { return tr.group.require_index(label(l)); }

TEST(Truncate, PureSetIsSymmetric) {
  const Truncation tr = truncate(e_n_expr(1), 3);
  EXPECT_EQ(tr.group.degree(), 3u);
  EXPECT_EQ(as_set(generate_elements(tr.group)), as_set(all_perms(3)));
  EXPECT_EQ(tr.meta.k, 1u);
  EXPECT_EQ(tr.meta.delta.num_classes(), 3u);
}

TEST(Truncate, ConsOrderFour) {
  const Truncation tr = truncate(id2_sym2(), 2);
  EXPECT_EQ(tr.group.degree(), 4u);
  EXPECT_EQ(group_order(tr.group), 4u);
  EXPECT_EQ(tr.group.domain(), labels({"B1/c0/a", "B1/c0/b", "B1/c1/a", "B1/c1/b"}));
}

TEST(Truncate, FiniteIsUnchanged) {
  const FinPermGroup g = sym({"x", "y", "z"});
  for (std::size_t t = 1; t <= 3; ++t) {
    const Truncation tr = truncate(GroupExpr::finite(g), t);
    EXPECT_TRUE(same_group(tr.group, g));
    EXPECT_EQ(tr.meta.y0.size(), 3u);
    EXPECT_EQ(tr.meta.nabla.num_classes(), 1u);
  }
}

TEST(Truncate, MetaInvariants) {
  for (const auto& [name, e] : cons_fixtures()) {
    for (std::size_t t = 1; t <= 3; ++t) {
      const TruncationMeta m = truncate(e, t).meta;
      SCOPED_TRACE(name);
      EXPECT_TRUE(m.delta.refines(m.nabla));
      for (std::size_t i = 1; i <= m.k; ++i) {
        std::set<Point> classes;
        for (Point x = 0; x < m.degree(); ++x) {
          if (m.copy_of[x].block == i) classes.insert(m.delta.class_of(x));
        }
        EXPECT_EQ(classes.size(), t);
      }
      if (!m.y0.empty()) {
        std::set<Point> n, d;
        for (Point x : m.y0) {
          n.insert(m.nabla.class_of(x));
          d.insert(m.delta.class_of(x));
        }
        EXPECT_EQ(n.size(), 1u);
        EXPECT_EQ(d.size(), 1u);
      }
    }
  }
}

TEST(Truncate, DirectProductMergesMetas) {
  const GroupExpr e = GroupExpr::direct_product({e_n_expr(1), GroupExpr::finite(sym({"u", "v"})), id2_sym2()});
  const Truncation tr = truncate(e, 2);
  EXPECT_EQ(tr.group.degree(), 2u + 2u + 4u);
  EXPECT_EQ(group_order(tr.group), 2u * 2u * 4u);
  EXPECT_EQ(tr.meta.k, 2u);
  EXPECT_EQ(tr.meta.y0.size(), 2u);
  EXPECT_EQ(tr.meta.nabla.num_classes(), 3u);
  EXPECT_EQ(tr.meta.delta.num_classes(), 1u + 2u + 2u);
}

TEST(Decompose, Identity) {
  const Truncation tr = truncate(id2_sym2(), 2);
  const ConsDecomposition d = decompose(tr.group.identity(), tr.meta);
  EXPECT_TRUE(d.phi.is_identity());
  for (const Perm& r : d.rho) EXPECT_TRUE(r.is_identity());
  for (std::size_t n = 0; n < 2; ++n) EXPECT_EQ(d.psi[1][n], n);
}

TEST(Decompose, DiagonalLiftHasConstantRho) {
  for (const auto& [name, e] : cons_fixtures()) {
    const Truncation tr = truncate(e, 2);
    for (const Perm& tau : generate_elements(cons_of(e).h)) {
      const ConsDecomposition d = decompose(diagonal_lift(tau, tr.meta), tr.meta);
      for (const Perm& r : d.rho) EXPECT_EQ(r, tau) << name;
    }
  }
}

TEST(Decompose, CopyTransposition) {
  const Truncation tr = truncate(id2_sym2(), 2);
  std::vector<Point> image(4);
  image[at(tr, "B1/c0/a")] = at(tr, "B1/c1/a");
  image[at(tr, "B1/c1/a")] = at(tr, "B1/c0/a");
  image[at(tr, "B1/c0/b")] = at(tr, "B1/c1/b");
  image[at(tr, "B1/c1/b")] = at(tr, "B1/c0/b");
  const ConsDecomposition d = decompose(Perm(image), tr.meta);
  for (const Perm& r : d.rho) EXPECT_TRUE(r.is_identity());
  EXPECT_EQ(d.psi[1][0], 1u);
  EXPECT_EQ(d.psi[1][1], 0u);
}

TEST(Decompose, RejectsNonBlockRespecting) {
  const Truncation tr = truncate(id2_sym2(), 2);
  const Perm bad = Perm::from_cycles(4, {{at(tr, "B1/c0/a"), at(tr, "B1/c1/a")}});
  try {
    decompose(bad, tr.meta);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotBlockRespecting);
  }
}

TEST(Decompose, ReassembleIsInverseOnAllBlockRespecting) {
  for (const auto& [name, e] : cons_fixtures()) {
    const Truncation tr = truncate(e, 2);
    std::size_t count = 0;
    for_each_block_respecting(tr.meta, [&](const Perm& s) {
      ++count;
      ASSERT_EQ(reassemble(decompose(s, tr.meta), tr.meta), s) << name;
    });
    EXPECT_GT(count, 0u);
  }
}

TEST(BlockRespectingOracle, MatchesFilteredSymmetricGroup) {
  for (const auto& [name, e] : cons_fixtures()) {
    const TruncationMeta m = truncate(e, 2).meta;
    if (m.degree() > 8) continue;
    std::set<Perm> structured;
    for_each_block_respecting(m, [&](const Perm& s) { structured.insert(s); });
    std::set<Perm> filtered;
    for (const Perm& s : all_perms(m.degree())) {
      const BlockCheck bc = check_block_respecting(s, m);
      if (bc.fixes_y0 && bc.preserves_relations) filtered.insert(s);
    }
    EXPECT_EQ(structured, filtered) << name;
  }
}

TEST(Membership, CrossBlockSwapFailsB) {
  const GroupExpr e = cons_fixtures()[4].expr;  // blocks {a} and {b,c}
  const Truncation tr = truncate(e, 2);
  const Perm s = Perm::from_cycles(tr.group.degree(), {{at(tr, "B1/c0/a"), at(tr, "B2/c0/b")}});
  const MembershipVerdict v = membership_abcd(s, cons_of(e), tr.meta);
  EXPECT_FALSE(v.ok());
  EXPECT_EQ(v.first_failure(), 'b');
}

TEST(Membership, SingleCopySwapFailsD) {
  const GroupExpr e = id2_sym2();
  const Truncation tr = truncate(e, 2);
  const Perm s = Perm::from_cycles(4, {{at(tr, "B1/c0/a"), at(tr, "B1/c0/b")}});
  const MembershipVerdict v = membership_abcd(s, cons_of(e), tr.meta);
  EXPECT_TRUE(v.a && v.b && v.c);
  EXPECT_FALSE(v.d);
  ASSERT_TRUE(v.failing_vector.has_value());
  EXPECT_EQ(*v.failing_vector, (std::vector<std::size_t>{0, 1}));
}

TEST(Membership, OracleEquivalenceFullSweep) {
  // Independent of the structured enumerator: sweep all of Sym(Ω_t).
  for (const auto& [name, e] : cons_fixtures()) {
    for (std::size_t t = 1; t <= 3; ++t) {
      const Truncation tr = truncate(e, t);
      if (tr.group.degree() > 8) continue;
      SCOPED_TRACE(name + " t=" + std::to_string(t));
      const MembershipOracle oracle(cons_of(e), tr.meta);
      std::set<Perm> members;
      for (const Perm& s : all_perms(tr.group.degree())) {
        if (oracle(s).ok()) members.insert(s);
      }
      EXPECT_EQ(as_set(generate_elements(tr.group)), members);
    }
  }
}

TEST(Membership, OracleEquivalenceStructured) {
  for (const auto& [name, e] : cons_fixtures()) {
    for (std::size_t t = 1; t <= 3; ++t) {
      const Truncation tr = truncate(e, t);
      SCOPED_TRACE(name + " t=" + std::to_string(t));
      const MembershipOracle oracle(cons_of(e), tr.meta);
      std::set<Perm> members;
      for_each_block_respecting(tr.meta, [&](const Perm& s) {
        if (oracle(s).ok()) members.insert(s);
      });
      EXPECT_EQ(as_set(generate_elements(tr.group)), members);
    }
  }
}

TEST(Construct, IndexIdentity) {
  for (const auto& [name, e] : cons_fixtures()) {
    const ConsNode& c = cons_of(e);
    const std::size_t h = group_order(c.h);
    const std::size_t n = group_order(cons_normal_part(c));
    for (std::size_t t = 1; t <= 3; ++t) {
      const std::size_t g = group_order(truncate(e, t).group);
      const std::size_t core = group_order(truncate(normal_core_expr(c), t).group);
      EXPECT_EQ(g % core, 0u) << name;
      EXPECT_EQ(g / core * n, h) << name << " t=" << t;
    }
  }
}

TEST(RecoverBase, RoundTripsH) {
  for (const auto& [name, e] : cons_fixtures()) {
    for (std::size_t t = 1; t <= 3; ++t) {
      const Truncation tr = truncate(e, t);
      const RecoveredBase rb = recover_base(tr.group, tr.meta);
      EXPECT_TRUE(same_group(rb.h, cons_of(e).h)) << name << " t=" << t;
      ASSERT_EQ(rb.n_checked, t >= 2);
      if (rb.n_checked) {
        EXPECT_TRUE(same_group(rb.n, cons_normal_part(cons_of(e)))) << name << " t=" << t;
        EXPECT_TRUE(rb.contains_n && rb.normalizes_n);
      }
    }
  }
}

TEST(RecoverBase, NormalCoreAndTrivial) {
  const GroupExpr e = id2_sym2();
  const ConsNode& c = cons_of(e);
  const Truncation core = truncate(normal_core_expr(c), 2);
  EXPECT_EQ(group_order(recover_base(core.group, core.meta).h), 1u);
  const FinPermGroup triv = FinPermGroup::trivial(core.group.domain());
  const RecoveredBase rb = recover_base(triv, core.meta);
  EXPECT_EQ(rb.h.degree(), 2u);
  EXPECT_EQ(group_order(rb.h), 1u);
}

TEST(DiagonalExtend, Examples) {
  const GroupExpr e = id2_sym2();
  const ConsNode& c = cons_of(e);
  const Truncation core = truncate(normal_core_expr(c), 2);
  const std::size_t base_order = group_order(core.group);
  EXPECT_TRUE(same_group(diagonal_extend(core.group, core.meta, Perm::identity(2)), core.group));
  const FinPermGroup ext = diagonal_extend(core.group, core.meta, Perm({1, 0}));
  EXPECT_EQ(group_order(ext), 2 * base_order);
  EXPECT_TRUE(same_group(ext, truncate(id2_sym2(), 2).group));

  const GroupExpr y = cons_fixtures()[2].expr;  // y0 = {z}
  const Truncation ty = truncate(normal_core_expr(cons_of(y)), 2);
  // Base order is (a, b, z); moving z into a block is rejected.
  try {
    diagonal_extend(ty.group, ty.meta, Perm({2, 1, 0}));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::kNotNormalizing);
  }
}

TEST(DiagonalExtend, RejectsNonNormalizingTau) {
  // N = <(a b)> on block {a,b}, {c} a second block of a different shape:
  // tau = (b c) maps blocks inconsistently.
  const GroupExpr e = GroupExpr::cons({}, {sym({"a", "b"}), trivial({"c", "d"})},
                                      fixtures::generated({"a", "b", "c", "d"}, {{{"a", "b"}}}));
  const Truncation tr = truncate(e, 2);
  EXPECT_THROW(diagonal_extend(tr.group, tr.meta, Perm::from_cycles(4, {{0, 2}, {1, 3}})), Error);
}

TEST(RhoProduct, AllPairsAllVectors) {
  for (const auto& [name, e] : cons_fixtures()) {
    for (std::size_t t = 1; t <= 2; ++t) {
      const Truncation tr = truncate(e, t);
      const ElementSet elems = generate_elements(tr.group);
      for (const Perm& s : elems) {
        for (const Perm& u : elems) {
          for (std::size_t idx = 0; idx < tr.meta.vector_count(); ++idx) {
            ASSERT_TRUE(rho_compose_check(s, u, tr.meta, tr.meta.vector_at(idx))) << name;
          }
        }
      }
    }
  }
}

TEST(RhoProduct, IdentityPairAndCorruptedTable) {
  const Truncation tr = truncate(id2_sym2(), 2);
  const Perm id = tr.group.identity();
  EXPECT_TRUE(rho_compose_check(id, id, tr.meta, {0, 0}));
  const ElementSet elems = generate_elements(tr.group);
  bool detected = false;
  for (const Perm& s : elems) {
    for (const Perm& u : elems) {
      ConsDecomposition ds = decompose(s, tr.meta);
      ds.rho[1] = Perm({1, 0}) * ds.rho[1];
      for (std::size_t idx = 0; idx < tr.meta.vector_count(); ++idx) {
        detected |= !rho_identities_hold(ds, decompose(u, tr.meta), decompose(u * s, tr.meta),
                                         decompose(s.inverse(), tr.meta), tr.meta,
                                         tr.meta.vector_at(idx));
      }
    }
  }
  EXPECT_TRUE(detected);
}

}  // namespace
}  // namespace hcell
