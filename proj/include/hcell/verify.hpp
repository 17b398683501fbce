#pragma once

// Named invariant checks over the shipped fixtures. Each check returns a
// verdict and a one-line detail; the runner orders results by name.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "hcell/analysis.hpp"
#include "hcell/construct.hpp"
#include "hcell/expr.hpp"
#include "hcell/fixtures.hpp"
#include "hcell/oracle.hpp"
#include "hcell/perm_group.hpp"
#include "hcell/reducts.hpp"
#include "hcell/structures.hpp"

namespace hcell {

struct CheckContext {
  std::vector<fixtures::NamedExpr> extra_exprs;  // from --fixture
  bool corrupt_rho_table = false;
  std::size_t jobs = 1;
};

struct CheckOutcome {
  bool pass = true;
  std::string detail;
};

struct Check {
  std::string name;
  std::string summary;
  std::function<CheckOutcome(const CheckContext&)> run;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double millis = 0;
};

struct SuiteReport {
  std::vector<CheckResult> results;

  bool ok() const {
    return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; });
  }
  std::size_t failures() const {
    return static_cast<std::size_t>(
        std::count_if(results.begin(), results.end(), [](const CheckResult& r) { return !r.pass; }));
  }
};

namespace verify {

inline CheckOutcome pass(std::string detail) { return {true, std::move(detail)}; }
inline CheckOutcome failed(std::string detail) { return {false, std::move(detail)}; }

inline const ConsNode& cons_of(const GroupExpr& e) { return *e.as<ConsNode>(); }

// Shipped Cons fixtures plus any valid Cons expressions passed in.
inline std::vector<fixtures::NamedExpr> cons_pool(const CheckContext& ctx) {
  std::vector<fixtures::NamedExpr> out = fixtures::cons_fixtures();
  for (const auto& f : ctx.extra_exprs) {
    if (f.expr.as<ConsNode>() && validate(f.expr).empty()) out.push_back(f);
  }
  return out;
}

inline std::vector<FinPermGroup> small_groups() {
  using fixtures::generated;
  using fixtures::sym;
  using fixtures::trivial;
  std::vector<FinPermGroup> out{trivial({"a"}), sym({"a", "b"}), sym({"a", "b", "c"}),
                                generated({"a", "b", "c"}, {{{"a", "b", "c"}}}), trivial({"a", "b"})};
  for (const FinPermGroup& g : fixtures::four_point_bases()) out.push_back(g);
  return out;
}

inline bool closed(const ElementSet& e, const Perm& id) {
  if (!contains(e, id)) return false;
  for (const Perm& x : e) {
    if (!contains(e, x.inverse())) return false;
    for (const Perm& y : e) {
      if (!contains(e, x * y)) return false;
    }
  }
  return true;
}

inline std::vector<Point> class_points(const Partition& p, std::size_t c) { return p.classes()[c]; }

inline bool counts_le(const OrbitCounts& a, const OrbitCounts& b) {
  return a.o <= b.o && a.oi <= b.oi && a.os <= b.os;
}

inline std::vector<PointLabel> labels_of(const FinPermGroup& g, const std::vector<Point>& pts) {
  std::vector<PointLabel> out;
  for (Point x : pts) out.push_back(g.domain()[x]);
  return out;
}

// ---------------------------------------------------------------------------
// permcore

inline CheckOutcome permcore_closure(const CheckContext& ctx) {
  std::size_t n = 0;
  std::vector<FinPermGroup> pool = small_groups();
  for (const auto& [name, e] : cons_pool(ctx)) pool.push_back(truncate(e, 2).group);
  pool.push_back(wreath_finite(fixtures::sym({"a", "b"}), 2));
  for (const FinPermGroup& g : pool) {
    if (!closed(generate_elements(g), g.identity())) return failed("group " + std::to_string(n) + " not closed");
    ++n;
  }
  return pass(std::to_string(n) + " groups closed");
}

inline CheckOutcome permcore_wreath_order(const CheckContext&) {
  std::size_t n = 0;
  for (const FinPermGroup& g : small_groups()) {
    const std::size_t order = group_order(g);
    for (std::size_t m = 1; m <= 3; ++m) {
      std::size_t expect = factorial(m);
      for (std::size_t i = 0; i < m; ++i) expect *= order;
      if (expect > 50'000) continue;
      if (group_order(wreath_finite(g, m)) != expect) {
        return failed("order mismatch at degree " + std::to_string(g.degree()) + ", m=" + std::to_string(m));
      }
      ++n;
    }
  }
  return pass(std::to_string(n) + " (G, m) pairs");
}

inline CheckOutcome permcore_restrict_inner(const CheckContext& ctx) {
  std::size_t n = 0;
  for (const auto& [name, e] : cons_pool(ctx)) {
    const Truncation tr = truncate(e, 2);
    for (std::size_t c = 0; c < tr.meta.delta.num_classes(); ++c) {
      const std::vector<Point> y = class_points(tr.meta.delta, c);
      const ElementSet pw = generate_elements(restrict_inner(tr.group, y, RestrictMode::kPointwise));
      const ElementSet sw = generate_elements(restrict_inner(tr.group, y, RestrictMode::kSetwise));
      if (!std::includes(sw.begin(), sw.end(), pw.begin(), pw.end())) return failed(name + ": pointwise not in setwise");
      ++n;
    }
  }
  return pass(std::to_string(n) + " subsets");
}

inline CheckOutcome permcore_quotient_hom(const CheckContext& ctx) {
  std::size_t n = 0;
  for (const auto& [name, e] : cons_pool(ctx)) {
    const Truncation tr = truncate(e, 2);
    for (const Partition* p : {&tr.meta.delta, &tr.meta.nabla}) {
      const std::vector<Perm>& gens = tr.group.gens();
      for (const Perm& a : gens) {
        for (const Perm& b : gens) {
          if (induced_on_classes(a * b, *p) != induced_on_classes(a, *p) * induced_on_classes(b, *p)) {
            return failed(name + ": quotient is not multiplicative");
          }
          ++n;
        }
      }
    }
  }
  return pass(std::to_string(n) + " generator pairs");
}

inline CheckOutcome permcore_orbit_monotonicity(const CheckContext&) {
  std::size_t n = 0;
  const std::vector<FinPermGroup> pool{fixtures::trivial({"a", "b", "c"}), fixtures::four_point_bases()[1]};
  for (const FinPermGroup& base : pool) {
    const LatticeReport lat = intermediate_groups(base);
    for (const FinPermGroup& g : lat.groups) {
      for (const FinPermGroup& h : lat.groups) {
        if (!subgroup_relation(g, h).is_subgroup) continue;
        for (std::size_t k = 1; k <= 3; ++k) {
          if (!counts_le(orbit_counts(h, k), orbit_counts(g, k))) return failed("supergroup has more orbits");
        }
        ++n;
      }
    }
  }
  return pass(std::to_string(n) + " subgroup pairs");
}

// ---------------------------------------------------------------------------
// expr

inline std::vector<GroupExpr> expr_pool() {
  std::vector<GroupExpr> pool{GroupExpr::finite(fixtures::sym({"a"})), fixtures::e2(),
                              fixtures::cons_fixtures()[3].expr,
                              GroupExpr::direct_product({e_n_expr(1), e_n_expr(3)})};
  return pool;
}

inline CheckOutcome expr_rank_wreath(const CheckContext&) {
  for (const GroupExpr& e : expr_pool()) {
    if (rank_upper(GroupExpr::wreath_omega(e)).rank_upper != rank_upper(e).rank_upper + 1) {
      return failed("wreath rank mismatch on " + print_expr(e));
    }
  }
  return pass(std::to_string(expr_pool().size()) + " expressions");
}

inline CheckOutcome expr_rank_product(const CheckContext&) {
  std::size_t n = 0;
  for (const GroupExpr& e : expr_pool()) {
    for (const GroupExpr& f : expr_pool()) {
      const std::size_t want = std::max(rank_upper(e).rank_upper, rank_upper(f).rank_upper);
      if (rank_upper(GroupExpr::direct_product({e, f})).rank_upper != want) return failed("product rank mismatch");
      ++n;
    }
  }
  return pass(std::to_string(n) + " pairs");
}

inline CheckOutcome expr_validate(const CheckContext& ctx) {
  std::vector<fixtures::NamedExpr> pool = fixtures::cons_fixtures();
  for (std::size_t n = 0; n <= 3; ++n) pool.push_back({"e" + std::to_string(n), e_n_expr(n)});
  pool.insert(pool.end(), ctx.extra_exprs.begin(), ctx.extra_exprs.end());
  for (const auto& [name, e] : pool) {
    const std::vector<Violation> v = validate(e);
    if (!v.empty()) return failed(name + " rejected at " + v.front().path + ": " + v.front().message);
  }
  std::size_t rejected = 0;
  for (const auto& [name, e] : fixtures::cons_fixtures()) {
    const ConsNode& c = cons_of(e);
    std::vector<PointLabel> y0 = c.y0;
    y0.push_back(label("zz"));
    std::vector<FinPermGroup> parts = c.parts;
    std::vector<PointLabel> dom = parts[0].domain();
    dom[0] = label("renamed");
    parts[0] = FinPermGroup(dom, parts[0].gens());
    const std::vector<GroupExpr> bad{GroupExpr::cons(y0, c.parts, c.h), GroupExpr::cons(c.y0, parts, c.h),
                                     GroupExpr::cons(c.y0, {}, c.h)};
    for (const GroupExpr& b : bad) {
      if (validate(b).empty()) return failed(name + ": corruption accepted");
      ++rejected;
    }
  }
  return pass(std::to_string(pool.size()) + " accepted, " + std::to_string(rejected) + " corruptions rejected");
}

inline CheckOutcome expr_rank_en(const CheckContext&) {
  for (std::size_t n = 0; n <= 4; ++n) {
    if (rank_upper(e_n_expr(n)).rank_upper != n) return failed("rank of E_" + std::to_string(n));
  }
  return pass("rank(E_n) = n for n = 0..4");
}

// ---------------------------------------------------------------------------
// construct

inline CheckOutcome construct_oracle_equivalence(const CheckContext& ctx) {
  std::size_t n = 0;
  for (const auto& [name, e] : cons_pool(ctx)) {
    for (std::size_t t = 1; t <= 3; ++t) {
      const Truncation tr = truncate(e, t);
      const MembershipOracle oracle(cons_of(e), tr.meta);
      ElementSet members;
      for_each_block_respecting(tr.meta, [&](const Perm& s) {
        if (oracle(s).ok()) members.push_back(s);
      });
      std::sort(members.begin(), members.end());
      if (members != generate_elements(tr.group)) return failed(name + " t=" + std::to_string(t));
      ++n;
    }
  }
  return pass(std::to_string(n) + " truncations equal their (a)-(d) sets");
}

inline CheckOutcome construct_index_identity(const CheckContext& ctx) {
  std::size_t n = 0;
  for (const auto& [name, e] : cons_pool(ctx)) {
    const ConsNode& c = cons_of(e);
    const std::size_t h = group_order(c.h);
    const std::size_t nn = group_order(cons_normal_part(c));
    for (std::size_t t = 1; t <= 3; ++t) {
      const std::size_t g = group_order(truncate(e, t).group);
      const std::size_t core = group_order(truncate(normal_core_expr(c), t).group);
      if (g % core != 0 || (g / core) * nn != h) return failed(name + " t=" + std::to_string(t));
      ++n;
    }
  }
  return pass(std::to_string(n) + " truncations");
}

inline CheckOutcome construct_recover_base(const CheckContext& ctx) {
  std::size_t n = 0;
  for (const auto& [name, e] : cons_pool(ctx)) {
    for (std::size_t t = 1; t <= 3; ++t) {
      const Truncation tr = truncate(e, t);
      const RecoveredBase rb = recover_base(tr.group, tr.meta);
      if (!same_group(rb.h, cons_of(e).h)) return failed(name + " t=" + std::to_string(t));
      if (rb.n_checked && !(rb.contains_n && rb.normalizes_n)) return failed(name + ": N not normal");
      ++n;
    }
  }
  return pass(std::to_string(n) + " truncations recover H");
}

inline CheckOutcome construct_decompose_reassemble(const CheckContext& ctx) {
  std::size_t n = 0;
  for (const auto& [name, e] : cons_pool(ctx)) {
    const Truncation tr = truncate(e, 2);
    bool ok = true;
    for_each_block_respecting(tr.meta, [&](const Perm& s) {
      ok = ok && reassemble(decompose(s, tr.meta), tr.meta) == s;
      ++n;
    });
    if (!ok) return failed(name);
  }
  return pass(std::to_string(n) + " block-respecting permutations");
}

// With `corrupt`, one ρ entry of σ is multiplied by a base transposition
// before the identities are evaluated.
inline CheckOutcome construct_rho_product(const CheckContext& ctx) {
  std::size_t n = 0;
  for (const auto& [name, e] : cons_pool(ctx)) {
    for (std::size_t t = 1; t <= 2; ++t) {
      const Truncation tr = truncate(e, t);
      const TruncationMeta& m = tr.meta;
      const ElementSet elems = generate_elements(tr.group);
      std::vector<ConsDecomposition> dec;
      for (const Perm& s : elems) dec.push_back(decompose(s, m));
      for (std::size_t i = 0; i < elems.size(); ++i) {
        ConsDecomposition ds = dec[i];
        if (ctx.corrupt_rho_table && m.base.size() >= 2) {
          const Perm swap = Perm::from_cycles(m.base.size(), {{0, 1}});
          ds.rho.back() = swap * ds.rho.back();
        }
        const ConsDecomposition inv = decompose(elems[i].inverse(), m);
        for (std::size_t j = 0; j < elems.size(); ++j) {
          const ConsDecomposition prod = decompose(elems[j] * elems[i], m);
          for (std::size_t idx = 0; idx < m.vector_count(); ++idx) {
            if (!rho_identities_hold(ds, dec[j], prod, inv, m, m.vector_at(idx))) {
              return failed(name + " t=" + std::to_string(t) + ": identity fails at element pair " +
                            std::to_string(i) + "," + std::to_string(j));
            }
            ++n;
          }
        }
      }
    }
  }
  // Negative control: a corrupted table must be caught.
  const Truncation tr = truncate(fixtures::cons_fixtures()[0].expr, 2);
  const ElementSet elems = generate_elements(tr.group);
  bool detected = false;
  for (const Perm& s : elems) {
    ConsDecomposition ds = decompose(s, tr.meta);
    ds.rho[1] = Perm({1, 0}) * ds.rho[1];
    for (const Perm& u : elems) {
      for (std::size_t idx = 0; idx < tr.meta.vector_count(); ++idx) {
        detected |= !rho_identities_hold(ds, decompose(u, tr.meta), decompose(u * s, tr.meta),
                                         decompose(s.inverse(), tr.meta), tr.meta, tr.meta.vector_at(idx));
      }
    }
  }
  if (!detected) return failed("corrupted table went unnoticed");
  return pass(std::to_string(n) + " (pair, vector) identities; corrupted table detected");
}

// ---------------------------------------------------------------------------
// analysis

inline CheckOutcome analysis_chain(const CheckContext& ctx) {
  for (const GroupExpr& e : {fixtures::pure_set(), fixtures::e2()}) {
    for (const OrbitCounts& c : stable_profile(e, 4)) {
      if (!chain_holds(c)) return failed("chain fails on " + print_expr(e) + " n=" + std::to_string(c.n));
    }
  }
  std::size_t top_link = 0, profiles = 0;
  for (const auto& [name, e] : cons_pool(ctx)) {
    for (const OrbitCounts& c : orbit_profile(truncate(e, 3).group, 3)) {
      if (!(c.os <= c.oi && c.oi <= c.o)) return failed(name + ": os <= oi <= o fails");
      if (c.o > factorial(c.n) * c.os) ++top_link;
      ++profiles;
    }
  }
  return pass("full chain on pure set and E2; lower links on " + std::to_string(profiles) +
              " fixture counts (o > n!*os on " + std::to_string(top_link) + ")");
}

inline CheckOutcome analysis_stable_profile(const CheckContext&) {
  const OrbitProfile pure = stable_profile(fixtures::pure_set(), 5);
  const OrbitProfile e2 = stable_profile(fixtures::e2(), 5);
  const std::uint64_t bell[] = {1, 2, 5, 15, 52};
  const std::uint64_t parts[] = {1, 2, 3, 5, 7};
  for (std::size_t i = 0; i < 5; ++i) {
    if (pure[i].o != bell[i] || pure[i].os != 1) return failed("pure set at n=" + std::to_string(i + 1));
    if (e2[i].os != parts[i]) return failed("E2 os at n=" + std::to_string(i + 1));
  }
  return pass("pure set o = 1,2,5,15,52; E2 os = 1,2,3,5,7");
}

inline CheckOutcome analysis_profile_monotonicity(const CheckContext& ctx) {
  std::size_t n = 0;
  for (const auto& [name, e] : cons_pool(ctx)) {
    const FinPermGroup g = truncate(e, 2).group;
    const FinPermGroup core = truncate(normal_core_expr(cons_of(e)), 2).group;
    if (!subgroup_relation(core, g).is_subgroup) return failed(name + ": core not a subgroup");
    const OrbitProfile pg = orbit_profile(g, 3), pc = orbit_profile(core, 3);
    for (std::size_t i = 0; i < pg.size(); ++i) {
      if (!counts_le(pg[i], pc[i])) return failed(name + ": larger group has more orbits");
    }
    ++n;
  }
  return pass(std::to_string(n) + " core/full pairs");
}

inline CheckOutcome analysis_width_monotonicity(const CheckContext& ctx) {
  std::size_t edges = 0;
  for (const FinPermGroup& g : fixtures::four_point_bases()) {
    const LatticeReport lat = intermediate_groups(g, {ctx.jobs});
    const MonotonicityReport r = width_monotonicity_report(lat);
    if (!r.monotone()) return failed("width increases along a lattice edge");
    edges += lat.edges.size();
  }
  return pass("monotone on " + std::to_string(edges) + " edges of two 4-point lattices");
}

inline CheckOutcome analysis_width_product(const CheckContext& ctx) {
  std::size_t n = 0;
  for (const FinPermGroup& g : fixtures::four_point_bases()) {
    const LatticeReport lat = intermediate_groups(g, {ctx.jobs});
    const ProductBoundReport r = width_product_report(lat, width_monotonicity_report(lat));
    if (!r.holds()) return failed("product width exceeds the sum");
    n += r.rows.size();
  }
  return pass(std::to_string(n) + " lattice pairs");
}

inline CheckOutcome analysis_width_pure_set(const CheckContext&) {
  const std::size_t w3 = width(fixtures::pure_set(), 3).width;
  const std::size_t w4 = width(fixtures::pure_set(), 4).width;
  if (w3 != 2 || w4 != 2) return failed("width " + std::to_string(w3) + " at t=3, " + std::to_string(w4) + " at t=4");
  return pass("width 2 at t=3 and t=4");
}

inline CheckOutcome analysis_estar_lift(const CheckContext& ctx) {
  std::size_t n = 0;
  for (const auto& [name, e] : cons_pool(ctx)) {
    const ConsNode& c = cons_of(e);
    const Truncation tr = truncate(e, 2);
    const std::size_t w = width(e, 2).width;
    for (std::size_t i = 1; i <= tr.meta.k; ++i) {
      const FinPermGroup hi = restrict_inner(c.h, tr.meta.block_base(i), RestrictMode::kSetwise);
      const std::vector<Perm> hx = stabilizer_gens(hi.gens(), hi.degree(), 0);
      for (const Partition& pe : congruences(hx, hi.degree())) {
        std::vector<std::vector<PointLabel>> cls;
        for (const auto& k : pe.classes()) cls.push_back(labels_of(hi, k));
        const Partition lifted = lift_congruence_estar(c, tr, i, hi.domain().front(), cls);
        const FinPermGroup stab(tr.group.domain(),
                                stabilizer_gens(tr.group.gens(), tr.group.degree(),
                                                tr.meta.point_at(tr.meta.block_base(i).front(), 0)));
        if (!is_congruence(stab.gens(), lifted)) return failed(name + ": lift is not a congruence");
        if (pe.num_classes() > w) return failed(name + ": acl exceeds width");
        ++n;
      }
    }
  }
  return pass(std::to_string(n) + " lifts are congruences within the width bound");
}

inline CheckOutcome analysis_hstar_closure(const CheckContext& ctx) {
  std::size_t n = 0;
  for (const auto& [name, e] : cons_pool(ctx)) {
    const ConsNode& c = cons_of(e);
    std::vector<std::vector<Point>> blocks{{}};
    for (const PointLabel& l : c.y0) blocks[0].push_back(c.h.require_index(l));
    for (const FinPermGroup& p : c.parts) {
      blocks.emplace_back();
      for (const PointLabel& l : p.domain()) blocks.back().push_back(c.h.require_index(l));
    }
    std::vector<Perm> extra;
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
    const SubgroupRelation rel = subgroup_relation(cons_normal_part(c), adjoin(c.h, extra));
    if (!rel.is_subgroup || !rel.is_normal || !rel.index) return failed(name);
    ++n;
  }
  return pass(std::to_string(n) + " fixtures: N normal of finite index");
}

inline CheckOutcome analysis_congruences(const CheckContext& ctx) {
  std::size_t n = 0;
  std::vector<FinPermGroup> pool = small_groups();
  for (const auto& [name, e] : cons_pool(ctx)) pool.push_back(truncate(e, 2).group);
  for (const FinPermGroup& g : pool) {
    const std::vector<Partition> cs = congruences(g);
    const std::set<Partition> set(cs.begin(), cs.end());
    if (!set.count(Partition::equality(g.degree())) || !set.count(Partition::universal(g.degree()))) {
      return failed("missing equality or universal partition");
    }
    for (const Partition& a : cs) {
      if (!is_congruence(g.gens(), a)) return failed("listed partition is not a congruence");
      for (const Partition& b : cs) {
        if (!set.count(a.join(b))) return failed("not join-closed");
      }
    }
    n += cs.size();
  }
  return pass(std::to_string(n) + " congruences over " + std::to_string(pool.size()) + " groups");
}

inline CheckOutcome analysis_omega_partition(const CheckContext&) {
  for (const GroupExpr& e : {fixtures::pure_set(), fixtures::e2(), fixtures::cons_fixtures()[4].expr}) {
    const Truncation tr = truncate(e, 3);
    const PartitionReport r = omega_partition_check(tr.group, 3, canonical_candidate(tr.meta));
    if (!r.ok()) return failed("canonical candidate fails: " + r.failure);
  }
  const Truncation pure = truncate(fixtures::pure_set(), 3);
  const PartitionReport r4 =
      omega_partition_check(pure.group, 3, {{}, Partition::universal(3), Partition::universal(3)});
  if (r4.c4) return failed("collapsed Δ passes condition (4)");
  const FinPermGroup diag = fixtures::generated(
      {"x0", "x1", "x2", "y0", "y1", "y2"}, {{{"x0", "x1"}, {"y0", "y1"}}, {{"x0", "x1", "x2"}, {"y0", "y1", "y2"}}});
  const PartitionReport r5 = omega_partition_check(
      diag, 3, {{}, Partition::from_classes(6, {{0, 1, 2}, {3, 4, 5}}), Partition::equality(6)});
  if (r5.c5 || !r5.c4) return failed("diagonal candidate does not fail condition (5) alone");
  return pass("canonical passes on 3 fixtures; corruptions fail (4) and (5)");
}

// ---------------------------------------------------------------------------
// structures

inline CheckOutcome structures_aut_union(const CheckContext&) {
  using namespace fixtures;
  const std::vector<std::vector<RelStruct>> cases{
      {path3(), triangle()}, {directed_cycle3(), edge()}, {equiv2x2(), points(1)}, {a4_ternary()}, {points(2), points(2)}};
  for (const auto& parts : cases) {
    std::vector<FinPermGroup> auts;
    for (const RelStruct& p : parts) auts.push_back(aut_group(p));
    if (!same_group(aut_group(disjoint_union(parts)), direct_product(auts))) return failed("union mismatch");
  }
  return pass(std::to_string(cases.size()) + " unions");
}

inline CheckOutcome structures_aut_copies(const CheckContext&) {
  using namespace fixtures;
  std::size_t n = 0;
  for (const RelStruct& a : {points(1), edge(), path3(), directed_cycle3(), equivalence({1, 2})}) {
    for (std::size_t m = 1; m <= 3; ++m) {
      if (a.size() * m > 9) continue;
      if (!same_group(aut_group(copies_trunc(a, m)), wreath_finite(aut_group(a), m))) return failed("copies mismatch");
      ++n;
    }
  }
  return pass(std::to_string(n) + " (A, m) pairs");
}

inline CheckOutcome structures_aut_en_family(const CheckContext&) {
  for (std::size_t n = 0; n <= 2; ++n) {
    for (std::size_t t = 1; t <= 3; ++t) {
      if (!same_group(aut_group(en_family(n, t)), truncate(e_n_expr(n), t).group)) {
        return failed("n=" + std::to_string(n) + " t=" + std::to_string(t));
      }
    }
  }
  return pass("n <= 2, t <= 3");
}

inline CheckOutcome structures_delta_m_homog(const CheckContext&) {
  std::size_t n = 0;
  for (const RelStruct& a : fixtures::small_structures()) {
    for (std::size_t m : {1u, 2u}) {
      if (!homog_check(a, m, 3).ok) continue;
      if (!homog_check(delta_m(a, m), m, 3).ok) return failed("expansion loses homogenizability");
      ++n;
    }
  }
  return pass(std::to_string(n) + " passing (A, m) kept after expansion");
}

inline CheckOutcome structures_delta_m_aut(const CheckContext&) {
  for (const RelStruct& a : fixtures::small_structures()) {
    if (!same_group(aut_group(delta_m(a, a.max_arity())), aut_group(a))) return failed("Aut changed");
  }
  return pass(std::to_string(fixtures::small_structures().size()) + " structures");
}

inline CheckOutcome structures_finite_index_homog(const CheckContext&) {
  std::size_t n = 0;
  for (const auto& [a, b] : fixtures::index_pairs()) {
    const SubgroupRelation rel = subgroup_relation(aut_group(a), aut_group(b));
    if (!rel.is_subgroup || !rel.index) return failed("not a finite-index pair");
    const std::size_t m = a.max_arity();
    if (homog_check(a, m, 3).ok) {
      if (!homog_check(b, *rel.index * m, 3).ok) return failed("B not homogenizable at d*m");
      ++n;
    }
  }
  return pass(std::to_string(n) + " pairs");
}

inline CheckOutcome structures_type_count(const CheckContext&) {
  for (const auto& [a, b] : fixtures::index_pairs()) {
    const FinPermGroup ga = aut_group(a), gb = aut_group(b);
    const std::size_t d = *subgroup_relation(ga, gb).index;
    for (std::size_t n = 1; n <= 3; ++n) {
      if (max_type_split(ga, gb, n) > d) return failed("orbit splits into more than d types");
    }
  }
  const std::size_t split =
      max_type_split(aut_group(fixtures::directed_cycle3()), aut_group(fixtures::points(3)), 2);
  if (split != 2) return failed("directed 3-cycle split is " + std::to_string(split));
  return pass("splits bounded by the index; directed 3-cycle splits exactly 2");
}

inline CheckOutcome structures_homog_examples(const CheckContext&) {
  if (!homog_check(fixtures::equiv2x2(), 2, 4).ok) return failed("2x2 equivalence fails m=2, n<=4");
  const HomogResult a4 = homog_check(fixtures::a4_ternary(), 2, 3);
  if (a4.ok) return failed("A4 ternary passes m=2, n=3");
  const HomogResult c8 = homog_check(fixtures::cycle_graph(8), 2, 3);
  if (c8.ok) return failed("C8 passes homog_check(m=2, n=3); no counterexample pair exists");
  return pass("equivalence passes; C8 fails at n=" + std::to_string(c8.n));
}

inline CheckOutcome structures_boundedness(const CheckContext&) {
  const BoundsReport r = boundedness_scan(fixtures::points(5), 6);
  if (r.minimal_obstructions.size() != 1 || r.minimal_obstructions[0].size() != 6 || r.b_a != 6 || !r.complete) {
    return failed("pure 5-set scan: " + std::to_string(r.minimal_obstructions.size()) + " obstructions, b=" +
                  std::to_string(r.b_a));
  }
  return pass("one obstruction of size 6, b=6");
}

inline CheckOutcome structures_forb_roundtrip(const CheckContext&) {
  using namespace fixtures;
  const std::vector<std::pair<RelStruct, std::size_t>> cases{{points(5), 6}, {cycle_graph(5), 4}, {equiv2x2(), 4}};
  for (const auto& [a, s] : cases) {
    if (!forb_check(a, boundedness_scan(a, s).minimal_obstructions, s).agree) return failed("scan does not round trip");
  }
  return pass(std::to_string(cases.size()) + " scans round trip");
}

inline CheckOutcome structures_merge(const CheckContext&) {
  using namespace fixtures;
  const RelStruct a = marked_equivalence();
  const RelStruct b = equiv2x2();
  const std::size_t b_a = boundedness_scan(a, 5).b_a;
  std::size_t n = 0;
  for (const RelStruct& c : {b, equivalence({1, 1, 1, 1}), equivalence({4}), equivalence({3, 1}),
                             equivalence({2, 1, 1}), graph(4, {{0, 1}, {2, 3}}, true, "E")}) {
    std::vector<bool> sel(c.size(), false);
    std::fill(sel.begin(), sel.begin() + static_cast<std::ptrdiff_t>(b_a + 1), true);
    const bool member = detail::embeds(c, b);
    do {
      std::vector<PointLabel> marked;
      for (Point i = 0; i < c.size(); ++i) {
        if (sel[i]) marked.push_back(c.domain[i]);
      }
      const MergeReport r = merge_expansions_check(b, a, c, marked, 5);
      if (!r.applicable || !r.agree() || r.lhs != member) return failed("merge disagrees with age membership");
      ++n;
    } while (std::prev_permutation(sel.begin(), sel.end()));
  }
  return pass(std::to_string(n) + " (C, marked) cases agree");
}

// ---------------------------------------------------------------------------
// reducts

inline CheckOutcome reducts_closed(const CheckContext& ctx) {
  std::size_t n = 0;
  for (const FinPermGroup& g : fixtures::four_point_bases()) {
    const LatticeReport lat = intermediate_groups(g, {ctx.jobs});
    const ElementSet base = generate_elements(g);
    for (const FinPermGroup& h : lat.groups) {
      const ElementSet e = generate_elements(h);
      if (!closed(e, h.identity())) return failed("lattice group not closed");
      if (!std::includes(e.begin(), e.end(), base.begin(), base.end())) return failed("lattice group misses base");
      ++n;
    }
  }
  return pass(std::to_string(n) + " groups");
}

inline CheckOutcome reducts_order_insensitive(const CheckContext&) {
  using fixtures::generated;
  const FinPermGroup h = generated({"a", "b", "c", "d"}, {{{"a", "b"}}, {{"c", "d"}}});
  const FinPermGroup h_rev = generated({"a", "b", "c", "d"}, {{{"c", "d"}}, {{"a", "b"}}});
  const std::string one = lattice_to_json(intermediate_groups(h, {1})).dump();
  if (lattice_to_json(intermediate_groups(h_rev, {1})).dump() != one) return failed("generator order changes lattice");
  if (lattice_to_json(intermediate_groups(h, {3})).dump() != one) return failed("job count changes lattice");
  return pass("identical across generator order and job count");
}

inline CheckOutcome reducts_side_by_side(const CheckContext&) {
  std::string detail;
  for (const GroupExpr& e : {fixtures::pure_set(), fixtures::cons_fixtures()[0].expr}) {
    for (const ReductCountRow& row : reduct_counts(e, 2)) {
      detail += "t=" + std::to_string(row.t) + ":" + (row.count ? std::to_string(*row.count) : "cap") + " ";
    }
  }
  detail.pop_back();
  return pass(detail);
}

inline CheckOutcome reducts_examples(const CheckContext& ctx) {
  const std::size_t a = intermediate_groups(fixtures::trivial({"a", "b", "c"}), {ctx.jobs}).count();
  const std::size_t b = intermediate_groups(fixtures::generated({"a", "b", "c"}, {{{"a", "b", "c"}}}), {ctx.jobs}).count();
  if (a != 6 || b != 2) return failed("counts " + std::to_string(a) + ", " + std::to_string(b));
  if (reduct_count(fixtures::points(3)) != 1 || reduct_count(fixtures::directed_cycle3()) != 2) {
    return failed("reduct counts of pure 3-set or directed 3-cycle");
  }
  return pass("trivial(3) -> 6, 3-cycle -> 2");
}

}  // namespace verify

inline std::vector<Check> module_checks() {
  using namespace verify;
  return {
      {"analysis.chain", "os <= oi <= o <= n!*os on profiles", analysis_chain},
      {"analysis.congruences", "congruence lists are join-closed with both bounds", analysis_congruences},
      {"analysis.estar_lift", "E* lifts are congruences; acl bounded by width", analysis_estar_lift},
      {"analysis.hstar_closure", "N normal of finite index in <H, prod H_i>", analysis_hstar_closure},
      {"analysis.omega_partition", "canonical omega-partitions pass; corruptions fail", analysis_omega_partition},
      {"analysis.profile_monotonicity", "larger groups have fewer orbits", analysis_profile_monotonicity},
      {"analysis.stable_profile", "pure-set and E2 profiles", analysis_stable_profile},
      {"analysis.width_monotonicity", "width decreases along lattice edges", analysis_width_monotonicity},
      {"analysis.width_product", "width of a product is at most the sum", analysis_width_product},
      {"analysis.width_pure_set", "pure-set width at t=3,4", analysis_width_pure_set},
      {"construct.decompose_reassemble", "reassemble inverts decompose", construct_decompose_reassemble},
      {"construct.index_identity", "|G_t|/|N_t| = |H|/|N|", construct_index_identity},
      {"construct.oracle_equivalence", "truncation equals the (a)-(d) set", construct_oracle_equivalence},
      {"construct.recover_base", "recover_base returns H", construct_recover_base},
      {"construct.rho_product", "rho product and inverse identities", construct_rho_product},
      {"expr.rank_en", "rank(E_n) = n", expr_rank_en},
      {"expr.rank_product", "rank of a product is the max", expr_rank_product},
      {"expr.rank_wreath", "wreath adds one to rank", expr_rank_wreath},
      {"expr.validate", "builders validate; corruptions are rejected", expr_validate},
      {"permcore.closure", "element sets are closed", permcore_closure},
      {"permcore.orbit_monotonicity", "orbit counts shrink in supergroups", permcore_orbit_monotonicity},
      {"permcore.quotient_hom", "quotient maps are homomorphisms", permcore_quotient_hom},
      {"permcore.restrict_inner", "pointwise restriction inside setwise", permcore_restrict_inner},
      {"permcore.wreath_order", "|G wr m| = |G|^m m!", permcore_wreath_order},
      {"reducts.closed", "lattice groups are closed and contain the base", reducts_closed},
      {"reducts.examples", "lattice sizes of small groups", reducts_examples},
      {"reducts.order_insensitive", "lattice independent of order and jobs", reducts_order_insensitive},
      {"reducts.side_by_side", "reduct counts at t and t+1", reducts_side_by_side},
      {"structures.aut_copies", "Aut of copies is the finite wreath", structures_aut_copies},
      {"structures.aut_en_family", "Aut of E_n(t) is the truncation", structures_aut_en_family},
      {"structures.aut_union", "Aut of a union is the product", structures_aut_union},
      {"structures.boundedness", "obstructions of the pure 5-set", structures_boundedness},
      {"structures.delta_m_aut", "expansion keeps Aut", structures_delta_m_aut},
      {"structures.delta_m_homog", "expansion keeps homogenizability", structures_delta_m_homog},
      {"structures.finite_index_homog", "finite index homogenization", structures_finite_index_homog},
      {"structures.forb_roundtrip", "Forb of the scan gives back the age", structures_forb_roundtrip},
      {"structures.homog_examples", "equivalence passes; C8 fails", structures_homog_examples},
      {"structures.merge", "merge check agrees with age membership", structures_merge},
      {"structures.type_count", "types per orbit bounded by the index", structures_type_count},
  };
}

// Substring match on the check name; empty matches everything.
inline SuiteReport run_checks(const std::vector<Check>& checks, const std::string& filter, const CheckContext& ctx) {
  std::vector<const Check*> chosen;
  for (const Check& c : checks) {
    if (filter.empty() || c.name.find(filter) != std::string::npos) chosen.push_back(&c);
  }
  std::sort(chosen.begin(), chosen.end(), [](const Check* a, const Check* b) { return a->name < b->name; });
  SuiteReport rep;
  rep.results.resize(chosen.size());
  auto run_one = [&](std::size_t i) {
    CheckResult& r = rep.results[i];
    r.name = chosen[i]->name;
    const auto start = std::chrono::steady_clock::now();
    try {
      const CheckOutcome o = chosen[i]->run(ctx);
      r.pass = o.pass;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(ctx.jobs, chosen.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < jobs; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < chosen.size(); i += jobs) run_one(i);
    });
  }
  for (std::thread& t : pool) t.join();
  return rep;
}

}  // namespace hcell
