#pragma once

// Symbolic expressions for hereditarily cellular groups: finite groups,
// direct products, wreath products with the infinite symmetric group, and
// the block-and-copy construction over finite constituents.

#include <algorithm>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hcell/error.hpp"
#include "hcell/label.hpp"
#include "hcell/perm_group.hpp"

namespace hcell {

class GroupExpr;

struct FiniteNode {
  FinPermGroup g;
};

struct DirectProductNode {
  std::vector<GroupExpr> parts;
};

struct WreathOmegaNode {
  std::shared_ptr<const GroupExpr> inner;
};

// Data (H; N_0, ..., N_k) with N_0 the trivial group on y0. h acts on
// y0 together with the part domains.
struct ConsNode {
  std::vector<PointLabel> y0;
  std::vector<FinPermGroup> parts;
  FinPermGroup h;
};

class GroupExpr {
 public:
  using Node = std::variant<FiniteNode, DirectProductNode, WreathOmegaNode, ConsNode>;

  GroupExpr() : node_(std::make_shared<const Node>(FiniteNode{})) {}

  static GroupExpr finite(FinPermGroup g) { return GroupExpr(FiniteNode{std::move(g)}); }
  static GroupExpr direct_product(std::vector<GroupExpr> parts) {
    return GroupExpr(DirectProductNode{std::move(parts)});
  }
  static GroupExpr wreath_omega(GroupExpr inner) {
    return GroupExpr(WreathOmegaNode{std::make_shared<const GroupExpr>(std::move(inner))});
  }
  static GroupExpr cons(std::vector<PointLabel> y0, std::vector<FinPermGroup> parts,
                        FinPermGroup h) {
    std::sort(y0.begin(), y0.end());
    return GroupExpr(ConsNode{std::move(y0), std::move(parts), std::move(h)});
  }

  const Node& node() const noexcept { return *node_; }

  template <typename T>
  const T* as() const noexcept {
    return std::get_if<T>(node_.get());
  }

 private:
  explicit GroupExpr(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}

  std::shared_ptr<const Node> node_;
};

struct Violation {
  std::string path;
  std::string message;
};

namespace detail {

inline std::vector<PointLabel> cons_base_labels(const ConsNode& c) {
  std::vector<PointLabel> out = c.y0;
  for (const FinPermGroup& p : c.parts) out.insert(out.end(), p.domain().begin(), p.domain().end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// N = id(y0) x parts[0] x ... as a group on h's domain. Requires the labels
// to line up with h (checked by validate).
inline FinPermGroup cons_normal_part(const ConsNode& c) {
  std::vector<Perm> gens;
  for (const FinPermGroup& part : c.parts) {
    std::vector<Point> local_to_y(part.degree());
    for (std::size_t i = 0; i < part.degree(); ++i) {
      local_to_y[i] = c.h.require_index(part.domain()[i]);
    }
    for (const Perm& s : part.gens()) {
      std::vector<Point> image = c.h.identity().image();
      for (Point x = 0; x < s.degree(); ++x) image[local_to_y[x]] = local_to_y[s[x]];
      gens.push_back(Perm::unchecked(std::move(image)));
    }
  }
  return FinPermGroup(c.h.domain(), std::move(gens), c.h.elem_cap());
}

inline void validate_into(const GroupExpr& e, const std::string& path, std::vector<Violation>& out) {
  if (e.as<FiniteNode>() != nullptr) return;
  if (const auto* dp = e.as<DirectProductNode>()) {
    if (dp->parts.empty()) out.push_back({path, "direct product has no parts"});
    for (std::size_t j = 0; j < dp->parts.size(); ++j) {
      validate_into(dp->parts[j], path + ".parts[" + std::to_string(j) + "]", out);
    }
    return;
  }
  if (const auto* wr = e.as<WreathOmegaNode>()) {
    if (!wr->inner) {
      out.push_back({path, "wreath has no inner expression"});
      return;
    }
    validate_into(*wr->inner, path + ".inner", out);
    return;
  }
  const auto& c = *e.as<ConsNode>();
  if (c.parts.empty()) out.push_back({path, "cons has no parts"});
  for (std::size_t i = 0; i < c.parts.size(); ++i) {
    if (c.parts[i].degree() == 0) {
      out.push_back({path + ".parts[" + std::to_string(i) + "]", "part domain is empty"});
    }
  }
  std::vector<PointLabel> y = detail::cons_base_labels(c);
  if (std::adjacent_find(y.begin(), y.end()) != y.end()) {
    out.push_back({path, "y0 and part domains are not pairwise disjoint"});
    return;
  }
  if (y != c.h.domain()) {
    out.push_back({path + ".h", "h domain differs from y0 plus part domains"});
    return;
  }
  for (std::size_t gi = 0; gi < c.h.gens().size(); ++gi) {
    const Perm& s = c.h.gens()[gi];
    for (const PointLabel& l : c.y0) {
      const PointLabel& img = c.h.domain()[s[c.h.require_index(l)]];
      if (!std::binary_search(c.y0.begin(), c.y0.end(), img)) {
        out.push_back({path + ".h", "generator " + std::to_string(gi) + " moves y0"});
        break;
      }
    }
  }
  try {
    const SubgroupRelation rel = subgroup_relation(cons_normal_part(c), c.h);
    if (!rel.is_subgroup) {
      out.push_back({path, "N is not a subgroup of h"});
    } else if (!rel.is_normal) {
      out.push_back({path, "N is not normal in h"});
    }
  } catch (const Error& err) {
    out.push_back({path, err.what()});
  }
}

inline std::vector<Violation> validate(const GroupExpr& e) {
  std::vector<Violation> out;
  validate_into(e, "$", out);
  return out;
}

inline void require_valid(const GroupExpr& e) {
  const std::vector<Violation> v = validate(e);
  if (!v.empty()) fail(ErrorKind::kInvalidExpr, v.front().path + ": " + v.front().message);
}

struct RankReport {
  std::size_t rank_upper = 0;
};

namespace detail {

inline std::size_t rank_of(const GroupExpr& e) {
  if (e.as<FiniteNode>() != nullptr) return 0;
  if (const auto* dp = e.as<DirectProductNode>()) {
    std::size_t r = 0;
    for (const GroupExpr& p : dp->parts) r = std::max(r, rank_of(p));
    return r;
  }
  if (const auto* wr = e.as<WreathOmegaNode>()) return 1 + rank_of(*wr->inner);
  return 1;
}

inline std::vector<PointLabel> base_of(const GroupExpr& e) {
  if (const auto* f = e.as<FiniteNode>()) return f->g.domain();
  if (const auto* dp = e.as<DirectProductNode>()) {
    std::vector<PointLabel> out;
    for (std::size_t j = 0; j < dp->parts.size(); ++j) {
      for (const PointLabel& l : base_of(dp->parts[j])) out.push_back(l.prefixed(Tag::block(j)));
    }
    return out;
  }
  if (const auto* wr = e.as<WreathOmegaNode>()) return base_of(*wr->inner);
  return e.as<ConsNode>()->h.domain();
}

}  // namespace detail

inline RankReport rank_upper(const GroupExpr& e) {
  require_valid(e);
  return RankReport{detail::rank_of(e)};
}

inline std::vector<PointLabel> base_domain(const GroupExpr& e) {
  require_valid(e);
  std::vector<PointLabel> out = detail::base_of(e);
  std::sort(out.begin(), out.end());
  return out;
}

// Nested wreath expression over the one-point trivial group.
inline GroupExpr e_n_expr(std::size_t n) {
  GroupExpr e = GroupExpr::finite(FinPermGroup::trivial({label("x")}));
  for (std::size_t i = 0; i < n; ++i) e = GroupExpr::wreath_omega(std::move(e));
  return e;
}

// The 𝒩-only expression sharing the constituents of a Cons node (h := N).
inline GroupExpr normal_core_expr(const ConsNode& c) {
  return GroupExpr::cons(c.y0, c.parts, cons_normal_part(c));
}

}  // namespace hcell
