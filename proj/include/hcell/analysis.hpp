#pragma once

// Orbit growth, congruence lattices, stable algebraic closure, the width
// surrogate, ω-partition checks and the E* congruence lift.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hcell/construct.hpp"
#include "hcell/error.hpp"
#include "hcell/expr.hpp"
#include "hcell/partition.hpp"
#include "hcell/perm_group.hpp"

namespace hcell {

// Upper bound on |Dom|^n for tuple-orbit enumeration (one bit per tuple).
inline constexpr std::uint64_t kTupleBudget = 400'000'000;

struct OrbitCounts {
  std::size_t n = 0;
  std::uint64_t o = 0;   // n-tuples
  std::uint64_t oi = 0;  // injective n-tuples
  std::uint64_t os = 0;  // n-subsets

  friend bool operator==(const OrbitCounts&, const OrbitCounts&) = default;
};

using OrbitProfile = std::vector<OrbitCounts>;

inline std::uint64_t factorial(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

inline bool chain_holds(const OrbitCounts& c) {
  return c.os <= c.oi && c.oi <= c.o && c.o <= factorial(c.n) * c.os;
}

namespace detail {

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

class Bitset {
 public:
  explicit Bitset(std::uint64_t n) : words_((n + 63) / 64, 0) {}
  bool test(std::uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::uint64_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }

 private:
  std::vector<std::uint64_t> words_;
};

// Orbits of the generated group on n-tuples; returns (all, injective).
inline std::pair<std::uint64_t, std::uint64_t> tuple_orbits(std::span<const Perm> gens,
                                                           std::size_t d, std::size_t n) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total *= d;
    if (total > kTupleBudget) {
      fail(ErrorKind::kCapExceeded, "tuple space " + std::to_string(d) + "^" +
                                        std::to_string(n) + " exceeds budget");
    }
  }
  std::vector<std::uint64_t> pow(n, 1);
  for (std::size_t j = 1; j < n; ++j) pow[j] = pow[j - 1] * d;
  Bitset seen(total);
  std::vector<std::uint64_t> stack;
  std::vector<Point> digits(n);
  std::uint64_t all = 0, injective = 0;
  for (std::uint64_t start = 0; start < total; ++start) {
    if (seen.test(start)) continue;
    ++all;
    {
      std::uint64_t c = start;
      std::vector<bool> used(d, false);
      bool inj = true;
      for (std::size_t j = 0; j < n; ++j) {
        const Point p = static_cast<Point>(c % d);
        c /= d;
        if (used[p]) inj = false;
        used[p] = true;
      }
      if (inj) ++injective;
    }
    seen.set(start);
    stack.push_back(start);
    while (!stack.empty()) {
      std::uint64_t c = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < n; ++j) {
        digits[j] = static_cast<Point>(c % d);
        c /= d;
      }
      for (const Perm& g : gens) {
        std::uint64_t img = 0;
        for (std::size_t j = 0; j < n; ++j) img += g[digits[j]] * pow[j];
        if (!seen.test(img)) {
          seen.set(img);
          stack.push_back(img);
        }
      }
    }
  }
  return {all, injective};
}

// Orbits on n-subsets, ranked by the combinatorial number system.
inline std::uint64_t subset_orbits(std::span<const Perm> gens, std::size_t d, std::size_t n) {
  if (n > d) return 0;
  std::vector<std::vector<std::uint64_t>> c(d + 1, std::vector<std::uint64_t>(n + 1, 0));
  for (std::size_t i = 0; i <= d; ++i) {
    for (std::size_t j = 0; j <= n; ++j) c[i][j] = binomial(i, j);
  }
  const std::uint64_t total = c[d][n];
  if (total > kTupleBudget) fail(ErrorKind::kCapExceeded, "subset space exceeds budget");
  auto rank = [&](const std::vector<Point>& s) {
    std::uint64_t r = 0;
    for (std::size_t j = 0; j < n; ++j) r += c[s[j]][j + 1];
    return r;
  };
  auto unrank = [&](std::uint64_t r, std::vector<Point>& s) {
    std::size_t x = d;
    for (std::size_t j = n; j-- > 0;) {
      while (c[x][j + 1] > r) --x;
      s[j] = static_cast<Point>(x);
      r -= c[x][j + 1];
    }
  };
  Bitset seen(total);
  std::vector<std::uint64_t> stack;
  std::vector<Point> s(n), img(n);
  std::uint64_t orbits = 0;
  for (std::uint64_t start = 0; start < total; ++start) {
    if (seen.test(start)) continue;
    ++orbits;
    seen.set(start);
    stack.push_back(start);
    while (!stack.empty()) {
      const std::uint64_t r = stack.back();
      stack.pop_back();
      unrank(r, s);
      for (const Perm& g : gens) {
        for (std::size_t j = 0; j < n; ++j) img[j] = g[s[j]];
        std::sort(img.begin(), img.end());
        const std::uint64_t ir = rank(img);
        if (!seen.test(ir)) {
          seen.set(ir);
          stack.push_back(ir);
        }
      }
    }
  }
  return orbits;
}

}  // namespace detail

inline OrbitCounts orbit_counts(const FinPermGroup& g, std::size_t n) {
  if (n == 0) fail(ErrorKind::kInvalidArgument, "orbit counts start at n = 1");
  const auto [all, inj] = detail::tuple_orbits(g.gens(), g.degree(), n);
  return OrbitCounts{n, all, inj, detail::subset_orbits(g.gens(), g.degree(), n)};
}

inline OrbitProfile orbit_profile(const FinPermGroup& g, std::size_t n_max) {
  OrbitProfile out;
  for (std::size_t n = 1; n <= n_max; ++n) out.push_back(orbit_counts(g, n));
  return out;
}

// Counts for n-tuples computed at t = n and t = n + 1; they must agree.
inline OrbitProfile stable_profile(const GroupExpr& e, std::size_t n_max) {
  if (n_max == 0) fail(ErrorKind::kInvalidArgument, "n_max must be at least 1");
  OrbitProfile out;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const OrbitCounts lo = orbit_counts(truncate(e, n).group, n);
    const OrbitCounts hi = orbit_counts(truncate(e, n + 1).group, n);
    if (!(lo == hi)) {
      fail(ErrorKind::kUnstable, "orbit counts for n = " + std::to_string(n) +
                                     " differ between t = " + std::to_string(n) + " and t = " +
                                     std::to_string(n + 1));
    }
    out.push_back(lo);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Congruences

inline constexpr std::size_t kCongruenceCap = 200'000;

inline std::vector<Partition> congruences(std::span<const Perm> gens, std::size_t degree) {
  std::set<Partition> principal;
  for (Point a = 0; a < degree; ++a) {
    for (Point b = a + 1; b < degree; ++b) {
      DisjointSets seed(degree);
      seed.unite(a, b);
      principal.insert(congruence_closure(gens, std::move(seed)));
    }
  }
  std::set<Partition> all(principal.begin(), principal.end());
  all.insert(Partition::equality(degree));
  std::vector<Partition> frontier(all.begin(), all.end());
  while (!frontier.empty()) {
    std::vector<Partition> next;
    for (const Partition& a : frontier) {
      for (const Partition& p : principal) {
        Partition j = a.join(p);
        if (all.insert(j).second) {
          if (all.size() > kCongruenceCap) fail(ErrorKind::kCapExceeded, "too many congruences");
          next.push_back(std::move(j));
        }
      }
    }
    frontier = std::move(next);
  }
  return {all.begin(), all.end()};
}

inline std::vector<Partition> congruences(const FinPermGroup& g) {
  return congruences(g.gens(), g.degree());
}

inline bool is_congruence(std::span<const Perm> gens, const Partition& e) {
  return std::all_of(gens.begin(), gens.end(), [&](const Perm& g) { return preserves(g, e); });
}

// ---------------------------------------------------------------------------
// Stable algebraic closure

// Stabilized points and a congruence of the stabilizer, given by labels of
// the t-truncation. An empty class list means the equality relation.
struct Site {
  std::vector<PointLabel> points;
  std::vector<std::vector<PointLabel>> classes;
};

struct AclOrbit {
  std::vector<PointLabel> classes;  // least member of each class, at t
  std::size_t size_t0 = 0;
  std::size_t size_t1 = 0;
  bool stable() const noexcept { return size_t0 == size_t1; }
};

struct AclReport {
  std::size_t t = 0;
  std::vector<AclOrbit> orbits;
  std::vector<PointLabel> stable_points;
  std::size_t acl_size = 0;  // classes in stable orbits
};

namespace detail {

inline std::vector<Point> indices_of(const FinPermGroup& g, const std::vector<PointLabel>& ls) {
  std::vector<Point> out;
  for (const PointLabel& l : ls) out.push_back(g.require_index(l));
  return out;
}

// Orbit id of every class under the induced action.
inline std::vector<std::size_t> class_orbits(std::span<const Perm> gens, const Partition& e) {
  DisjointSets sets(e.num_classes());
  for (const Perm& g : gens) {
    for (Point x = 0; x < g.degree(); ++x) sets.unite(e.class_of(x), e.class_of(g[x]));
  }
  std::vector<std::size_t> out(e.num_classes());
  for (Point c = 0; c < out.size(); ++c) out[c] = sets.find(c);
  return out;
}

inline AclReport stable_acl_on(const FinPermGroup& g0, const FinPermGroup& g1, std::size_t t,
                               const std::vector<Point>& pts0, const Partition& e0) {
  std::vector<Point> pts1;
  for (Point p : pts0) pts1.push_back(g1.require_index(g0.domain()[p]));
  const std::vector<Perm> s0 = pointwise_stabilizer_gens(g0.gens(), g0.degree(), pts0);
  const std::vector<Perm> s1 = pointwise_stabilizer_gens(g1.gens(), g1.degree(), pts1);
  if (!is_congruence(s0, e0)) {
    fail(ErrorKind::kNotACongruence, "site relation is not a congruence of the stabilizer");
  }
  std::vector<Point> embed(g0.degree());
  for (Point x = 0; x < g0.degree(); ++x) embed[x] = g1.require_index(g0.domain()[x]);
  DisjointSets seed(g1.degree());
  for (Point x = 0; x < g0.degree(); ++x) {
    for (Point y = x + 1; y < g0.degree(); ++y) {
      if (e0.same(x, y)) seed.unite(embed[x], embed[y]);
    }
  }
  const Partition e1 = congruence_closure(s1, std::move(seed));
  if (e1.restricted(embed) != e0) {
    fail(ErrorKind::kSiteMismatch, "congruence does not transport from t = " + std::to_string(t) +
                                       " to t = " + std::to_string(t + 1));
  }
  const std::vector<std::size_t> orb0 = class_orbits(s0, e0);
  const std::vector<std::size_t> orb1 = class_orbits(s1, e1);
  std::map<std::size_t, std::size_t> count0, count1;
  for (std::size_t o : orb0) ++count0[o];
  for (std::size_t o : orb1) ++count1[o];

  AclReport rep;
  rep.t = t;
  const auto classes = e0.classes();
  std::map<std::size_t, std::size_t> orbit_slot;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    auto [it, inserted] = orbit_slot.emplace(orb0[c], rep.orbits.size());
    if (inserted) {
      AclOrbit o;
      o.size_t0 = count0[orb0[c]];
      o.size_t1 = count1[orb1[e1.class_of(embed[classes[c].front()])]];
      rep.orbits.push_back(o);
    }
    rep.orbits[it->second].classes.push_back(g0.domain()[classes[c].front()]);
  }
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (rep.orbits[orbit_slot[orb0[c]]].stable()) {
      ++rep.acl_size;
      for (Point x : classes[c]) rep.stable_points.push_back(g0.domain()[x]);
    }
  }
  std::sort(rep.stable_points.begin(), rep.stable_points.end());
  return rep;
}

inline Partition site_partition(const FinPermGroup& g, const Site& site) {
  if (site.classes.empty()) return Partition::equality(g.degree());
  std::vector<std::vector<Point>> cls;
  for (const auto& c : site.classes) cls.push_back(indices_of(g, c));
  return Partition::from_classes(g.degree(), cls);
}

}  // namespace detail

inline AclReport stable_acl(const GroupExpr& e, std::size_t t, const Site& site = {}) {
  if (t < 1) fail(ErrorKind::kInvalidArgument, "stable_acl needs t >= 1");
  const Truncation a = truncate(e, t);
  const Truncation b = truncate(e, t + 1);
  return detail::stable_acl_on(a.group, b.group, t, detail::indices_of(a.group, site.points),
                               detail::site_partition(a.group, site));
}

// ---------------------------------------------------------------------------
// Width surrogate

struct WidthWitness {
  PointLabel x;
  Partition e;
  std::size_t acl = 0;
};

struct WidthReport {
  std::size_t t = 0;
  std::size_t width = 0;
  std::vector<WidthWitness> witnesses;
  std::size_t skipped = 0;  // congruences that did not transport to t + 1
};

inline WidthReport width_of(const FinPermGroup& g0, const FinPermGroup& g1, std::size_t t) {
  WidthReport rep;
  rep.t = t;
  const Partition orbits = point_orbits(g0.gens(), g0.degree());
  for (const auto& orbit : orbits.classes()) {
    const Point x = orbit.front();
    const std::vector<Point> pts{x};
    const std::vector<Perm> sx = stabilizer_gens(g0.gens(), g0.degree(), x);
    for (const Partition& e : congruences(sx, g0.degree())) {
      try {
        const AclReport acl = detail::stable_acl_on(g0, g1, t, pts, e);
        rep.width = std::max(rep.width, acl.acl_size);
        rep.witnesses.push_back({g0.domain()[x], e, acl.acl_size});
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::kSiteMismatch) throw;
        ++rep.skipped;
      }
    }
  }
  return rep;
}

inline WidthReport width(const GroupExpr& e, std::size_t t) {
  if (t < 2) fail(ErrorKind::kInvalidArgument, "width needs t >= 2");
  return width_of(truncate(e, t).group, truncate(e, t + 1).group, t);
}

// ---------------------------------------------------------------------------
// ω-partitions

struct OmegaCandidate {
  std::vector<Point> k;  // sorted
  Partition nabla;       // on the whole domain; only classes off K matter
  Partition delta;
};

struct PartitionReport {
  bool c1 = false;  // K setwise fixed
  bool c2 = false;  // ∇, Δ congruences off K with Δ ⊆ ∇
  bool c3 = true;   // finitely many ∇-classes (always, on a finite domain)
  bool c4 = false;  // each ∇-class splits into exactly t Δ-classes
  bool c5 = false;  // G_((C))/Δ is the full symmetric group on C/Δ
  std::size_t nabla_classes = 0;
  std::vector<std::size_t> delta_per_nabla;
  std::string failure;

  bool ok() const noexcept { return c1 && c2 && c3 && c4 && c5; }
};

inline PartitionReport omega_partition_check(const FinPermGroup& g, std::size_t t,
                                             const OmegaCandidate& cand) {
  PartitionReport rep;
  const std::size_t d = g.degree();
  std::vector<bool> in_k(d, false);
  for (Point x : cand.k) in_k[x] = true;
  std::vector<Point> off;
  for (Point x = 0; x < d; ++x) {
    if (!in_k[x]) off.push_back(x);
  }
  rep.c1 = std::all_of(g.gens().begin(), g.gens().end(), [&](const Perm& s) {
    return std::all_of(cand.k.begin(), cand.k.end(), [&](Point x) { return in_k[s[x]]; });
  });
  if (!rep.c1) {
    rep.failure = "(1) K is not fixed setwise";
    rep.c3 = false;
    return rep;
  }
  std::vector<Point> local(d, UINT32_MAX);
  for (std::size_t i = 0; i < off.size(); ++i) local[off[i]] = static_cast<Point>(i);
  std::vector<Perm> gens_off;
  for (const Perm& s : g.gens()) {
    std::vector<Point> image(off.size());
    for (std::size_t i = 0; i < off.size(); ++i) image[i] = local[s[off[i]]];
    gens_off.push_back(Perm::unchecked(std::move(image)));
  }
  const Partition nabla = cand.nabla.restricted(off);
  const Partition delta = cand.delta.restricted(off);
  rep.nabla_classes = nabla.num_classes();
  rep.c2 = is_congruence(gens_off, nabla) && is_congruence(gens_off, delta) && delta.refines(nabla);
  if (!rep.c2) {
    rep.failure = "(2) nabla/delta are not congruences with delta inside nabla";
    return rep;
  }
  rep.c4 = true;
  const auto classes = nabla.classes();
  for (const auto& cls : classes) {
    std::set<Point> ds;
    for (Point x : cls) ds.insert(delta.class_of(x));
    rep.delta_per_nabla.push_back(ds.size());
    if (ds.size() != t) rep.c4 = false;
  }
  if (!rep.c4) rep.failure = "(4) some nabla class does not split into exactly t delta classes";
  rep.c5 = true;
  for (const auto& cls : classes) {
    std::vector<Point> members;
    for (Point x : cls) members.push_back(off[x]);
    const FinPermGroup r = restrict_inner(g, members, RestrictMode::kPointwise);
    const Partition dc = cand.delta.restricted(members);
    const std::size_t m = dc.num_classes();
    const std::size_t order = group_order(quotient_by_congruence(r, dc));
    if (order != factorial(m)) {
      rep.c5 = false;
      if (rep.failure.empty()) {
        rep.failure = "(5) restricted action on delta classes has order " +
                      std::to_string(order) + ", expected " + std::to_string(factorial(m));
      }
      break;
    }
  }
  return rep;
}

inline OmegaCandidate canonical_candidate(const TruncationMeta& m) {
  return {m.y0, m.nabla, m.delta};
}

inline std::vector<OmegaCandidate> omega_partition_find(const FinPermGroup& g, std::size_t t) {
  const Partition orbits = point_orbits(g.gens(), g.degree());
  const auto orbit_list = orbits.classes();
  if (orbit_list.size() > 16) fail(ErrorKind::kCapExceeded, "too many orbits to enumerate K");
  std::vector<OmegaCandidate> out;
  for (std::uint32_t mask = 0; mask < (1U << orbit_list.size()); ++mask) {
    std::vector<Point> k;
    for (std::size_t i = 0; i < orbit_list.size(); ++i) {
      if (mask & (1U << i)) k.insert(k.end(), orbit_list[i].begin(), orbit_list[i].end());
    }
    std::sort(k.begin(), k.end());
    std::vector<bool> in_k(g.degree(), false);
    for (Point x : k) in_k[x] = true;
    std::vector<Point> off;
    for (Point x = 0; x < g.degree(); ++x) {
      if (!in_k[x]) off.push_back(x);
    }
    // Congruences off K, lifted to the whole domain with K as one class.
    std::vector<Point> local(g.degree(), UINT32_MAX);
    for (std::size_t i = 0; i < off.size(); ++i) local[off[i]] = static_cast<Point>(i);
    std::vector<Perm> gens_off;
    for (const Perm& s : g.gens()) {
      std::vector<Point> image(off.size());
      for (std::size_t i = 0; i < off.size(); ++i) image[i] = local[s[off[i]]];
      gens_off.push_back(Perm::unchecked(std::move(image)));
    }
    auto lift = [&](const Partition& p) {
      std::vector<std::size_t> ids(g.degree(), off.size());
      for (std::size_t i = 0; i < off.size(); ++i) ids[off[i]] = p.class_of(static_cast<Point>(i));
      return Partition::from_ids(ids);
    };
    if (off.empty()) {
      OmegaCandidate c{k, Partition::universal(g.degree()), Partition::universal(g.degree())};
      if (omega_partition_check(g, t, c).ok()) out.push_back(std::move(c));
      continue;
    }
    const std::vector<Partition> cong = congruences(gens_off, off.size());
    for (const Partition& nab : cong) {
      for (const Partition& del : cong) {
        if (!del.refines(nab)) continue;
        OmegaCandidate c{k, lift(nab), lift(del)};
        if (omega_partition_check(g, t, c).ok()) out.push_back(std::move(c));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// E* lift

// Builds E* on Ω_t from a congruence E of (H_i)_x on Y_i (given by base
// labels) and validates it against the stabilizer of (x, 0).
inline Partition lift_congruence_estar(const ConsNode& cons, const Truncation& tr,
                                       std::size_t block, const PointLabel& x,
                                       const std::vector<std::vector<PointLabel>>& e_classes) {
  const TruncationMeta& m = tr.meta;
  if (block == 0 || block > m.k) fail(ErrorKind::kInvalidArgument, "block must be in 1..k");
  const Point xb = cons.h.require_index(x);
  if (m.base_block[xb] != block) fail(ErrorKind::kInvalidArgument, "x is not in the chosen block");
  const std::vector<Point> yi = m.block_base(block);
  // E must be a congruence of the stabilizer of x in H_(Y_i).
  const FinPermGroup hi = restrict_inner(cons.h, yi, RestrictMode::kSetwise);
  std::vector<std::vector<Point>> local_classes;
  for (const auto& c : e_classes) {
    std::vector<Point> lc;
    for (const PointLabel& l : c) lc.push_back(hi.require_index(l));
    local_classes.push_back(std::move(lc));
  }
  const Partition e = Partition::from_classes(hi.degree(), local_classes);
  const std::vector<Perm> hx = stabilizer_gens(hi.gens(), hi.degree(), hi.require_index(x));
  if (!is_congruence(hx, e)) {
    fail(ErrorKind::kInvalidArgument, "E is not a congruence of the stabilizer of x");
  }
  std::vector<std::size_t> ids(m.degree());
  std::size_t next = 0;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> id_of;
  auto id_for = [&](std::size_t kind, std::size_t key) {
    auto [it, inserted] = id_of.emplace(std::make_pair(kind, key), next);
    if (inserted) ++next;
    return it->second;
  };
  for (Point p = 0; p < m.degree(); ++p) {
    const CopyCoord c = m.copy_of[p];
    if (c.block == 0) {
      ids[p] = id_for(0, 0);                                  // (a)
    } else if (c.block != block) {
      ids[p] = id_for(1, c.block);                            // (b)
    } else if (c.copy != 0) {
      ids[p] = id_for(2, c.copy);                             // (c)
    } else {
      const Point local = hi.require_index(m.base[c.base]);
      ids[p] = id_for(3, e.class_of(local));                  // (d)
    }
  }
  const Partition estar = Partition::from_ids(ids);
  const Point x0 = m.point_at(xb, 0);
  const std::vector<Perm> gx = stabilizer_gens(tr.group.gens(), tr.group.degree(), x0);
  if (!is_congruence(gx, estar)) {
    fail(ErrorKind::kNotACongruence, "E* is not a congruence of the stabilizer of (x, 0)");
  }
  return estar;
}

}  // namespace hcell
