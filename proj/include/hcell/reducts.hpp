#pragma once

// Intermediate groups between a finite group and the full symmetric group on
// its domain, with width checks along the resulting lattice.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hcell/analysis.hpp"
#include "hcell/construct.hpp"
#include "hcell/error.hpp"
#include "hcell/expr.hpp"
#include "hcell/json_io.hpp"
#include "hcell/perm_group.hpp"
#include "hcell/structures.hpp"

namespace hcell {

inline constexpr std::size_t kLatticeCap = 5000;
inline constexpr std::size_t kLatticeMaxDegree = 6;

struct LatticeOptions {
  std::size_t jobs = 1;
  std::size_t node_cap = kLatticeCap;
};

// Groups are sorted by order, then by element list. Edges are Hasse covers
// (lower, upper) by index.
struct LatticeReport {
  FinPermGroup base;
  std::vector<FinPermGroup> groups;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::size_t count() const noexcept { return groups.size(); }
};

namespace detail {

inline std::vector<Perm> all_permutations(std::size_t n) {
  std::vector<Point> p(n);
  std::iota(p.begin(), p.end(), Point{0});
  std::vector<Perm> out;
  do {
    out.push_back(Perm::unchecked(p));
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline ElementSet close_with(const std::vector<PointLabel>& domain, std::vector<Perm> gens, const Perm& s,
                             std::size_t cap) {
  gens.push_back(s);
  return generate_elements(FinPermGroup(domain, std::move(gens), cap));
}

// One-element extensions of k, one per left coset sK.
inline std::vector<ElementSet> extensions(const std::vector<PointLabel>& domain, const ElementSet& k,
                                          const std::vector<Perm>& sym, std::size_t cap) {
  const std::vector<Perm> gens = FinPermGroup::from_elements(domain, k, cap).gens();
  std::unordered_set<Perm, PermHash> covered(k.begin(), k.end());
  std::set<ElementSet> found;
  for (const Perm& s : sym) {
    if (covered.count(s)) continue;
    for (const Perm& x : k) covered.insert(s * x);
    found.insert(close_with(domain, gens, s, cap));
  }
  return {found.begin(), found.end()};
}

inline std::vector<std::vector<ElementSet>> expand_frontier(const std::vector<PointLabel>& domain,
                                                            const std::vector<ElementSet>& frontier,
                                                            const std::vector<Perm>& sym,
                                                            std::size_t cap, std::size_t jobs) {
  std::vector<std::vector<ElementSet>> out(frontier.size());
  jobs = std::max<std::size_t>(1, std::min(jobs, frontier.size()));
  if (jobs == 1) {
    for (std::size_t i = 0; i < frontier.size(); ++i) out[i] = extensions(domain, frontier[i], sym, cap);
    return out;
  }
  std::vector<std::optional<Error>> errors(jobs);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < jobs; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < frontier.size(); i += jobs) {
          out[i] = extensions(domain, frontier[i], sym, cap);
        }
      } catch (const Error& e) {
        errors[w] = e;
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) throw *e;
  }
  return out;
}

inline std::vector<std::pair<std::size_t, std::size_t>> hasse_edges(const std::vector<ElementSet>& sets) {
  const std::size_t n = sets.size();
  std::vector<std::vector<bool>> below(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      below[i][j] = i != j && sets[i].size() < sets[j].size() &&
                    std::includes(sets[j].begin(), sets[j].end(), sets[i].begin(), sets[i].end());
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!below[i][j]) continue;
      bool cover = true;
      for (std::size_t k = 0; k < n && cover; ++k) cover = !(below[i][k] && below[k][j]);
      if (cover) edges.push_back({i, j});
    }
  }
  return edges;
}

}  // namespace detail

inline LatticeReport intermediate_groups(const FinPermGroup& g, const LatticeOptions& opt = {}) {
  const std::size_t n = g.degree();
  if (factorial(n) > g.elem_cap() || n > kLatticeMaxDegree) {
    fail(ErrorKind::kCapExceeded, "lattice over Sym of " + std::to_string(n) + " points is out of range");
  }
  const std::vector<Perm> sym = detail::all_permutations(n);
  std::set<ElementSet> known{generate_elements(g)};
  std::vector<ElementSet> frontier{*known.begin()};
  while (!frontier.empty()) {
    const auto found = detail::expand_frontier(g.domain(), frontier, sym, g.elem_cap(), opt.jobs);
    std::vector<ElementSet> next;
    for (const auto& list : found) {
      for (const ElementSet& h : list) {
        if (!known.insert(h).second) continue;
        if (known.size() > opt.node_cap) fail(ErrorKind::kCapExceeded, "lattice exceeds node cap");
        next.push_back(h);
      }
    }
    std::sort(next.begin(), next.end());
    frontier = std::move(next);
  }
  std::vector<ElementSet> sets(known.begin(), known.end());
  std::stable_sort(sets.begin(), sets.end(),
                   [](const ElementSet& a, const ElementSet& b) { return a.size() < b.size(); });
  LatticeReport rep;
  rep.base = g;
  for (const ElementSet& s : sets) rep.groups.push_back(FinPermGroup::from_elements(g.domain(), s, g.elem_cap()));
  rep.edges = detail::hasse_edges(sets);
  return rep;
}

inline std::size_t reduct_count(const RelStruct& a, const LatticeOptions& opt = {}) {
  return intermediate_groups(aut_group(a), opt).count();
}

struct ReductCountRow {
  std::size_t t = 0;
  std::optional<std::size_t> count;
  std::string error;
};

// Counts at t and t + 1 for an expression's truncations. No claim is made
// about whether they agree.
inline std::vector<ReductCountRow> reduct_counts(const GroupExpr& e, std::size_t t,
                                                 const LatticeOptions& opt = {}) {
  std::vector<ReductCountRow> out;
  for (std::size_t s : {t, t + 1}) {
    ReductCountRow row{s, std::nullopt, {}};
    try {
      row.count = intermediate_groups(truncate(e, s).group, opt).count();
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::kCapExceeded) throw;
      row.error = err.what();
    }
    out.push_back(std::move(row));
  }
  return out;
}

inline OrderedJson lattice_to_json(const LatticeReport& r) {
  OrderedJson j;
  j["domain"] = labels_to_json(r.base.domain());
  j["count"] = r.count();
  j["groups"] = OrderedJson::array();
  for (std::size_t i = 0; i < r.groups.size(); ++i) {
    OrderedJson gens = OrderedJson::array();
    for (const Perm& s : r.groups[i].gens()) gens.push_back(s.image());
    j["groups"].push_back({{"id", i}, {"order", group_order(r.groups[i])}, {"gens", gens}});
  }
  j["edges"] = OrderedJson::array();
  for (const auto& [lo, hi] : r.edges) j["edges"].push_back({lo, hi});
  return j;
}

inline std::string lattice_to_dot(const LatticeReport& r) {
  std::ostringstream os;
  os << "digraph lattice {\n  rankdir=BT;\n";
  for (std::size_t i = 0; i < r.groups.size(); ++i) {
    os << "  g" << i << " [label=\"" << i << ": order " << group_order(r.groups[i]) << "\"];\n";
  }
  for (const auto& [lo, hi] : r.edges) os << "  g" << lo << " -> g" << hi << ";\n";
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Width along the lattice

// Each lattice group H is measured twice: as the finite expression H (rank 0)
// and embedded as wr(H) (rank 1), both at truncation size t.
struct WidthRow {
  std::size_t id = 0;
  std::size_t order = 0;
  std::size_t finite_width = 0;
  std::size_t wreath_width = 0;
  std::size_t skipped = 0;
};

struct MonotonicityReport {
  std::size_t t = 0;
  std::vector<WidthRow> rows;
  std::vector<std::pair<std::size_t, std::size_t>> violations;  // lattice edges
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> histogram;  // (rank, width) -> groups

  bool monotone() const noexcept { return violations.empty(); }
};

inline MonotonicityReport width_monotonicity_report(const LatticeReport& lat, std::size_t t = 2) {
  MonotonicityReport rep;
  rep.t = t;
  for (std::size_t i = 0; i < lat.groups.size(); ++i) {
    const GroupExpr fin = GroupExpr::finite(lat.groups[i]);
    WidthRow row;
    row.id = i;
    row.order = group_order(lat.groups[i]);
    row.finite_width = width(fin, t).width;
    const WidthReport w = width(GroupExpr::wreath_omega(fin), t);
    row.wreath_width = w.width;
    row.skipped = w.skipped;
    ++rep.histogram[{0, row.finite_width}];
    ++rep.histogram[{1, row.wreath_width}];
    rep.rows.push_back(row);
  }
  for (const auto& [lo, hi] : lat.edges) {
    if (rep.rows[hi].finite_width > rep.rows[lo].finite_width ||
        rep.rows[hi].wreath_width > rep.rows[lo].wreath_width) {
      rep.violations.push_back({lo, hi});
    }
  }
  return rep;
}

inline MonotonicityReport width_monotonicity_report(const FinPermGroup& g, std::size_t t = 2,
                                                    const LatticeOptions& opt = {}) {
  return width_monotonicity_report(intermediate_groups(g, opt), t);
}

struct ProductBoundRow {
  std::size_t left = 0;
  std::size_t right = 0;
  std::size_t product_width = 0;
  std::size_t sum = 0;
};

struct ProductBoundReport {
  std::vector<ProductBoundRow> rows;
  std::size_t over_cap = 0;  // pairs whose product truncation exceeds the element cap

  bool holds() const noexcept {
    return std::all_of(rows.begin(), rows.end(),
                       [](const ProductBoundRow& r) { return r.product_width <= r.sum; });
  }
};

// width(wr(H) x wr(K)) against width(wr(H)) + width(wr(K)) over lattice pairs.
inline ProductBoundReport width_product_report(const LatticeReport& lat, const MonotonicityReport& mono) {
  ProductBoundReport rep;
  for (std::size_t i = 0; i < lat.groups.size(); ++i) {
    for (std::size_t j = i; j < lat.groups.size(); ++j) {
      const GroupExpr dp = GroupExpr::direct_product(
          {GroupExpr::wreath_omega(GroupExpr::finite(lat.groups[i])),
           GroupExpr::wreath_omega(GroupExpr::finite(lat.groups[j]))});
      try {
        const std::size_t w = width(dp, mono.t).width;
        rep.rows.push_back({i, j, w, mono.rows[i].wreath_width + mono.rows[j].wreath_width});
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::kCapExceeded) throw;
        ++rep.over_cap;
      }
    }
  }
  return rep;
}

}  // namespace hcell
