#pragma once

// Small named groups and expressions used by the verify suite, the tests and
// the CLI examples.

#include <string>
#include <utility>
#include <vector>

#include "hcell/expr.hpp"
#include "hcell/label.hpp"
#include "hcell/perm_group.hpp"
#include "hcell/structures.hpp"

namespace hcell::fixtures {

inline FinPermGroup sym(std::initializer_list<std::string_view> names) {
  return FinPermGroup::symmetric(labels(names));
}

inline FinPermGroup trivial(std::initializer_list<std::string_view> names) {
  return FinPermGroup::trivial(labels(names));
}

// Group on the listed labels generated by the given cycles over those labels.
inline FinPermGroup generated(std::initializer_list<std::string_view> names,
                              std::vector<std::vector<std::vector<std::string_view>>> gens) {
  std::vector<PointLabel> dom = labels(names);
  std::vector<Perm> perms;
  for (const auto& cycles : gens) {
    std::vector<Point> image(dom.size());
    for (Point i = 0; i < dom.size(); ++i) image[i] = i;
    for (const auto& cycle : cycles) {
      for (std::size_t j = 0; j < cycle.size(); ++j) {
        const PointLabel from = label(cycle[j]);
        const PointLabel to = label(cycle[(j + 1) % cycle.size()]);
        Point fi = 0, ti = 0;
        for (Point p = 0; p < dom.size(); ++p) {
          if (dom[p] == from) fi = p;
          if (dom[p] == to) ti = p;
        }
        image[fi] = ti;
      }
    }
    perms.push_back(Perm(std::move(image)));
  }
  return FinPermGroup(std::move(dom), std::move(perms));
}

inline GroupExpr pure_set() { return e_n_expr(1); }
inline GroupExpr e2() { return e_n_expr(2); }

struct NamedExpr {
  std::string name;
  GroupExpr expr;
};

// Cons fixtures with |Y| <= 4.
inline std::vector<NamedExpr> cons_fixtures() {
  std::vector<NamedExpr> out;
  out.push_back({"cons.id2_sym2", GroupExpr::cons({}, {trivial({"a", "b"})}, sym({"a", "b"}))});
  out.push_back({"cons.sym2_sym2", GroupExpr::cons({}, {sym({"a", "b"})}, sym({"a", "b"}))});
  out.push_back({"cons.swap_blocks_y0",
                 GroupExpr::cons(labels({"z"}), {trivial({"a"}), trivial({"b"})},
                                 generated({"a", "b", "z"}, {{{"a", "b"}}}))});
  out.push_back({"cons.alt3_sym3",
                 GroupExpr::cons({}, {generated({"a", "b", "c"}, {{{"a", "b", "c"}}})},
                                 sym({"a", "b", "c"}))});
  out.push_back({"cons.y0_mixed",
                 GroupExpr::cons(labels({"z"}), {trivial({"a"}), trivial({"b", "c"})},
                                 generated({"a", "b", "c", "z"}, {{{"b", "c"}}}))});
  out.push_back({"cons.klein_blocks",
                 GroupExpr::cons({}, {trivial({"a", "b"}), trivial({"c", "d"})},
                                 generated({"a", "b", "c", "d"},
                                           {{{"a", "c"}, {"b", "d"}}, {{"a", "b"}, {"c", "d"}}}))});
  return out;
}

// Structures

inline RelStruct points(std::size_t n, const std::string& stem = "v") {
  RelStruct a;
  for (std::size_t i = 0; i < n; ++i) a.domain.push_back(label(stem + std::to_string(i)));
  return a;
}

// Binary relation R on n points; symmetric graphs list each edge once.
inline RelStruct graph(std::size_t n, const std::vector<std::pair<Point, Point>>& edges,
                       bool symmetric = true, const std::string& name = "R") {
  RelStruct a = points(n);
  a.declare(name, 2);
  for (auto [x, y] : edges) {
    a.add(name, {x, y});
    if (symmetric) a.add(name, {y, x});
  }
  return a;
}

inline RelStruct cycle_graph(std::size_t n) {
  std::vector<std::pair<Point, Point>> edges;
  for (Point i = 0; i < n; ++i) edges.push_back({i, static_cast<Point>((i + 1) % n)});
  return graph(n, edges);
}

inline RelStruct directed_cycle3() { return graph(3, {{0, 1}, {1, 2}, {2, 0}}, false); }
inline RelStruct path3() { return graph(3, {{0, 1}, {1, 2}}); }
inline RelStruct triangle() { return cycle_graph(3); }
inline RelStruct edge() { return graph(2, {{0, 1}}); }

// Equivalence relation E with the given class sizes.
inline RelStruct equivalence(const std::vector<std::size_t>& class_sizes) {
  std::size_t n = 0;
  for (std::size_t c : class_sizes) n += c;
  RelStruct a = points(n);
  a.declare("E", 2);
  std::size_t start = 0;
  for (std::size_t c : class_sizes) {
    for (Point x = start; x < start + c; ++x) {
      for (Point y = start; y < start + c; ++y) a.add("E", {x, y});
    }
    start += c;
  }
  return a;
}

inline RelStruct equiv2x2() { return equivalence({2, 2}); }

// One of the two orbits of Alt(4) on injective triples. Alt(4) is
// 2-transitive, so no binary data separates the two orbits.
inline RelStruct a4_ternary() {
  RelStruct a = points(4);
  a.declare("T", 3);
  const FinPermGroup alt4 = generated({"v0", "v1", "v2", "v3"},
                                      {{{"v0", "v1", "v2"}}, {{"v1", "v2", "v3"}}});
  for (const Perm& g : generate_elements(alt4)) a.add("T", {g[0], g[1], g[2]});
  return a;
}

// The 2x2 equivalence with one class marked by a unary P.
inline RelStruct marked_equivalence() {
  RelStruct a = equiv2x2();
  a.declare("P", 1);
  a.add("P", {0});
  a.add("P", {1});
  return a;
}

inline std::vector<RelStruct> small_structures() {
  return {points(3), path3(), directed_cycle3(), triangle(), edge(), equiv2x2(),
          cycle_graph(5), a4_ternary(), equivalence({1, 2}), graph(3, {{0, 1}, {1, 2}}, false)};
}

// Pairs (A, B) on one domain with Aut(A) <= Aut(B) of finite index.
struct IndexPair {
  RelStruct a, b;
};

inline std::vector<IndexPair> index_pairs() {
  return {{directed_cycle3(), points(3)}, {marked_equivalence(), equiv2x2()}, {path3(), points(3)},
          {a4_ternary(), points(4)}};
}

// Sym(2) wr Sym(2) on {a,b,c,d} and a 3-cycle fixing d.
inline std::vector<FinPermGroup> four_point_bases() {
  return {generated({"a", "b", "c", "d"}, {{{"a", "b"}}, {{"a", "c"}, {"b", "d"}}}),
          generated({"a", "b", "c", "d"}, {{{"a", "b", "c"}}})};
}

}  // namespace hcell::fixtures
