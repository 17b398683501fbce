#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "hcell/expr.hpp"
#include "hcell/fixtures.hpp"
#include "hcell/sexpr.hpp"
#include "hcell/signature.hpp"

namespace hcell {
namespace {

using fixtures::cons_fixtures;
using fixtures::generated;
using fixtures::sym;
using fixtures::trivial;

bool has_violation(const GroupExpr& e, const std::string& fragment) {
  for (const Violation& v : validate(e)) {
    if (v.message.find(fragment) != std::string::npos) return true;
  }
  return false;
}

TEST(Validate, AcceptsBasicCons) {
  EXPECT_TRUE(validate(GroupExpr::cons({}, {trivial({"a", "b"})}, sym({"a", "b"}))).empty());
  EXPECT_TRUE(validate(GroupExpr::finite(sym({"x", "y", "z"}))).empty());
}

TEST(Validate, RejectsNonNormalN) {
  // <(a b)> on {a,b,c} against h = <(a c)>: N is not even contained in h.
  const GroupExpr e = GroupExpr::cons({}, {generated({"a", "b", "c"}, {{{"a", "b"}}})},
                                      generated({"a", "b", "c"}, {{{"a", "c"}}}));
  EXPECT_FALSE(validate(e).empty());
  // Contained but not normal.
  const GroupExpr f = GroupExpr::cons({}, {generated({"a", "b", "c"}, {{{"a", "b"}}})},
                                      sym({"a", "b", "c"}));
  EXPECT_TRUE(has_violation(f, "not normal"));
}

TEST(Validate, AcceptsAllFixtures) {
  for (const auto& [name, e] : cons_fixtures()) EXPECT_TRUE(validate(e).empty()) << name;
  EXPECT_TRUE(validate(e_n_expr(3)).empty());
}

TEST(Validate, RejectsSingleFieldCorruptions) {
  for (const auto& [name, e] : cons_fixtures()) {
    const ConsNode& c = *e.as<ConsNode>();
    SCOPED_TRACE(name);
    // y0 gains a label unknown to h.
    std::vector<PointLabel> y0 = c.y0;
    y0.push_back(label("zz"));
    EXPECT_FALSE(validate(GroupExpr::cons(y0, c.parts, c.h)).empty());
    // A part is renamed.
    std::vector<FinPermGroup> parts = c.parts;
    std::vector<PointLabel> dom = parts[0].domain();
    dom[0] = label("renamed");
    parts[0] = FinPermGroup(dom, parts[0].gens());
    EXPECT_FALSE(validate(GroupExpr::cons(c.y0, parts, c.h)).empty());
    // Parts list emptied.
    EXPECT_FALSE(validate(GroupExpr::cons(c.y0, {}, c.h)).empty());
    // h acts on an extra point.
    std::vector<PointLabel> hdom = c.h.domain();
    hdom.push_back(label("zz"));
    std::vector<Perm> hgens;
    for (const Perm& s : c.h.gens()) {
      std::vector<Point> img = s.image();
      img.push_back(static_cast<Point>(img.size()));
      hgens.push_back(Perm(img));
    }
    EXPECT_FALSE(validate(GroupExpr::cons(c.y0, c.parts, FinPermGroup(hdom, hgens))).empty());
  }
}

TEST(Validate, RejectsHMovingY0) {
  const GroupExpr e = GroupExpr::cons(labels({"z"}), {trivial({"a"})}, sym({"a", "z"}));
  EXPECT_TRUE(has_violation(e, "moves y0"));
}

TEST(Validate, ReportsPathIntoTree) {
  const GroupExpr bad = GroupExpr::cons({}, {generated({"a", "b", "c"}, {{{"a", "b"}}})},
                                        sym({"a", "b", "c"}));
  const GroupExpr e = GroupExpr::direct_product({GroupExpr::finite(sym({"x"})), GroupExpr::wreath_omega(bad)});
  const std::vector<Violation> v = validate(e);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v.front().path, "$.parts[1].inner");
  EXPECT_THROW(rank_upper(e), Error);
}

TEST(Rank, Examples) {
  EXPECT_EQ(rank_upper(GroupExpr::finite(sym({"a", "b", "c"}))).rank_upper, 0u);
  for (std::size_t n = 0; n <= 4; ++n) EXPECT_EQ(rank_upper(e_n_expr(n)).rank_upper, n);
  const GroupExpr dp = GroupExpr::direct_product(
      {GroupExpr::wreath_omega(GroupExpr::finite(sym({"a", "b"}))), GroupExpr::finite(sym({"a", "b", "c"}))});
  EXPECT_EQ(rank_upper(dp).rank_upper, 1u);
  EXPECT_EQ(rank_upper(cons_fixtures()[0].expr).rank_upper, 1u);
}

TEST(Rank, WreathAddsOneAndProductTakesMax) {
  std::vector<GroupExpr> pool{GroupExpr::finite(sym({"a"})), e_n_expr(2), cons_fixtures()[3].expr,
                              GroupExpr::direct_product({e_n_expr(1), e_n_expr(3)})};
  for (const GroupExpr& e : pool) {
    EXPECT_EQ(rank_upper(GroupExpr::wreath_omega(e)).rank_upper, rank_upper(e).rank_upper + 1);
    for (const GroupExpr& f : pool) {
      EXPECT_EQ(rank_upper(GroupExpr::direct_product({e, f})).rank_upper,
                std::max(rank_upper(e).rank_upper, rank_upper(f).rank_upper));
    }
  }
}

TEST(BaseDomain, Examples) {
  EXPECT_EQ(base_domain(GroupExpr::finite(sym({"x", "y"}))), labels({"x", "y"}));
  const GroupExpr pt = GroupExpr::finite(trivial({"x"}));
  EXPECT_EQ(base_domain(GroupExpr::direct_product({pt, pt})), labels({"B0/x", "B1/x"}));
  const GroupExpr c = GroupExpr::cons(labels({"z"}), {trivial({"a"})}, trivial({"a", "z"}));
  EXPECT_EQ(base_domain(c), labels({"a", "z"}));
  EXPECT_EQ(base_domain(GroupExpr::wreath_omega(pt)), labels({"x"}));
}

TEST(Signature, SeparatesExamples) {
  const GroupExpr a = GroupExpr::wreath_omega(GroupExpr::finite(trivial({"x"})));
  const GroupExpr b = GroupExpr::wreath_omega(GroupExpr::finite(trivial({"x", "y"})));
  EXPECT_NE(profile_signature(a, 2), profile_signature(b, 2));
  EXPECT_EQ(profile_signature(a, 3), profile_signature(e_n_expr(1), 3));
  const GroupExpr s3 = GroupExpr::finite(sym({"a", "b", "c"}));
  const GroupExpr c3 = GroupExpr::finite(generated({"a", "b", "c"}, {{{"a", "b", "c"}}}));
  EXPECT_NE(profile_signature(s3, 2), profile_signature(c3, 2));
}

TEST(Sexpr, RoundTripsFixtures) {
  std::vector<GroupExpr> pool{e_n_expr(0), e_n_expr(3),
                              GroupExpr::direct_product({e_n_expr(1), GroupExpr::finite(sym({"u", "v"}))})};
  for (const auto& f : cons_fixtures()) pool.push_back(f.expr);
  for (const GroupExpr& e : pool) {
    const std::string text = print_expr(e);
    EXPECT_EQ(print_expr(parse_expr(text)), text);
  }
}

TEST(Sexpr, ParsesWithCommentsAndWhitespace) {
  const std::string text =
      "; pure set\n"
      "(wr\n"
      "  (finite {\"gens\": [], \"domain\": [\"x\"]}))  ; trailing\n";
  const GroupExpr e = parse_expr(text);
  ASSERT_NE(e.as<WreathOmegaNode>(), nullptr);
  EXPECT_EQ(print_expr(e), "(wr (finite {\"domain\":[\"x\"],\"gens\":[]}))");
}

TEST(Sexpr, CanonicalPrintSortsDomain) {
  const GroupExpr e = parse_expr(R"((finite {"domain":["b","a"],"gens":[[1,0]]}))");
  EXPECT_EQ(print_expr(e), R"((finite {"domain":["a","b"],"gens":[[1,0]]}))");
}

TEST(Sexpr, ParsesCons) {
  const GroupExpr e = parse_expr(
      R"((cons :y0 ["z"] :parts [{"domain":["a"],"gens":[]},{"domain":["b"],"gens":[]}] :h {"domain":["a","b","z"],"gens":[[1,0,2]]}))");
  const ConsNode* c = e.as<ConsNode>();
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->y0, labels({"z"}));
  EXPECT_EQ(c->parts.size(), 2u);
  EXPECT_TRUE(validate(e).empty());
}

TEST(Sexpr, ErrorAtEndOfInput) {
  try {
    parse_expr("(wr");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 4u);
    EXPECT_EQ(e.expected(), std::vector<std::string>{"'('"});
  }
}

TEST(Sexpr, ErrorPositionsAndExpectations) {
  try {
    parse_expr("(dp\n  (wr (finite {\"domain\":[\"x\"],\"gens\":[]}))\n  (bogus))");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 4u);
    EXPECT_EQ(e.expected(), (std::vector<std::string>{"finite", "dp", "wr", "cons"}));
  }
  EXPECT_THROW(parse_expr("(finite {\"domain\":[\"x\"],\"gens\":[[1]]})"), ParseError);
  EXPECT_THROW(parse_expr("(finite {\"domain\":[\"x\"]) "), ParseError);
  EXPECT_THROW(parse_expr("(wr (finite {\"domain\":[\"x\"]})) extra"), ParseError);
  EXPECT_THROW(parse_expr("(cons :parts [] :h {\"domain\":[]})"), ParseError);
}

}  // namespace
}  // namespace hcell
