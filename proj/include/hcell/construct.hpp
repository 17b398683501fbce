#pragma once

// Truncations of group expressions (ω replaced by {0..t-1}) and the
// block/copy calculus on the truncated domain.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hcell/error.hpp"
#include "hcell/expr.hpp"
#include "hcell/label.hpp"
#include "hcell/partition.hpp"
#include "hcell/perm.hpp"
#include "hcell/perm_group.hpp"

namespace hcell {

// Position of a truncated point: block 0 is the finite part K.
struct CopyCoord {
  std::size_t block = 0;
  std::size_t copy = 0;
  Point base = 0;  // index into TruncationMeta::base
};

struct TruncationMeta {
  std::size_t t = 1;
  std::size_t k = 0;
  std::vector<PointLabel> base;          // sorted labels of Y
  std::vector<std::size_t> base_block;   // block of each base point
  std::vector<Point> y0;                 // domain points of K
  Partition nabla;
  Partition delta;
  std::vector<CopyCoord> copy_of;        // per domain point

  std::size_t degree() const noexcept { return copy_of.size(); }

  // Domain point at (base point a, copy n); K points only exist at copy 0.
  Point point_at(Point a, std::size_t copy) const {
    const std::size_t idx = a * t + (base_block[a] == 0 ? 0 : copy);
    return locate_[idx];
  }

  std::vector<Point> block_base(std::size_t block) const {
    std::vector<Point> out;
    for (Point a = 0; a < base.size(); ++a) {
      if (base_block[a] == block) out.push_back(a);
    }
    return out;
  }

  std::size_t vector_count() const {
    std::size_t n = 1;
    for (std::size_t i = 0; i < k; ++i) n *= t;
    return n;
  }

  // Copy-vector (n_1, ..., n_k) for a mixed-radix index; entry 0 of the
  // result is block 0's copy (always 0).
  std::vector<std::size_t> vector_at(std::size_t index) const {
    std::vector<std::size_t> v(k + 1, 0);
    for (std::size_t i = k; i >= 1; --i) {
      v[i] = index % t;
      index /= t;
    }
    return v;
  }

  std::size_t index_of_vector(const std::vector<std::size_t>& v) const {
    std::size_t index = 0;
    for (std::size_t i = 1; i <= k; ++i) index = index * t + v[i];
    return index;
  }

  void rebuild_index() {
    locate_.assign(base.size() * t, UINT32_MAX);
    for (Point x = 0; x < copy_of.size(); ++x) {
      locate_[copy_of[x].base * t + copy_of[x].copy] = x;
    }
  }

 private:
  std::vector<Point> locate_;
};

struct Truncation {
  FinPermGroup group;
  TruncationMeta meta;
};

namespace detail {

// Assembles a meta from a labeled point list. `coords` is aligned with
// `labels`; the domain is sorted and coordinates follow.
inline TruncationMeta make_meta(std::size_t t, std::size_t k, std::vector<PointLabel> base,
                                std::vector<std::size_t> base_block,
                                const std::vector<PointLabel>& sorted_domain,
                                const std::vector<PointLabel>& labels,
                                const std::vector<CopyCoord>& coords) {
  TruncationMeta m;
  m.t = t;
  m.k = k;
  m.base = std::move(base);
  m.base_block = std::move(base_block);
  m.copy_of.resize(sorted_domain.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = std::lower_bound(sorted_domain.begin(), sorted_domain.end(), labels[i]);
    m.copy_of[static_cast<std::size_t>(it - sorted_domain.begin())] = coords[i];
  }
  std::vector<std::size_t> nabla_ids(m.copy_of.size()), delta_ids(m.copy_of.size());
  for (Point x = 0; x < m.copy_of.size(); ++x) {
    const CopyCoord& c = m.copy_of[x];
    nabla_ids[x] = c.block;
    delta_ids[x] = c.block * t + c.copy;
    if (c.block == 0) m.y0.push_back(x);
  }
  m.nabla = Partition::from_ids(nabla_ids);
  m.delta = Partition::from_ids(delta_ids);
  m.rebuild_index();
  return m;
}

inline Truncation truncate_node(const GroupExpr& e, std::size_t t);

inline Truncation truncate_finite(const FiniteNode& f, std::size_t t) {
  const FinPermGroup& g = f.g;
  std::vector<CopyCoord> coords;
  for (Point x = 0; x < g.degree(); ++x) coords.push_back({0, 0, x});
  TruncationMeta m = make_meta(t, 0, g.domain(), std::vector<std::size_t>(g.degree(), 0),
                               g.domain(), g.domain(), coords);
  return {g, std::move(m)};
}

inline Truncation truncate_wreath(const WreathOmegaNode& w, std::size_t t) {
  const Truncation inner = truncate_node(*w.inner, t);
  FinPermGroup g = wreath_finite(inner.group, t);
  const std::vector<PointLabel>& y = inner.group.domain();
  std::vector<PointLabel> labels;
  std::vector<CopyCoord> coords;
  for (std::size_t n = 0; n < t; ++n) {
    for (Point a = 0; a < y.size(); ++a) {
      labels.push_back(y[a].prefixed(Tag::copy(n)));
      coords.push_back({1, n, a});
    }
  }
  TruncationMeta m = make_meta(t, 1, y, std::vector<std::size_t>(y.size(), 1), g.domain(),
                               labels, coords);
  return {std::move(g), std::move(m)};
}

inline Truncation truncate_dp(const DirectProductNode& dp, std::size_t t) {
  std::vector<Truncation> parts;
  std::vector<FinPermGroup> groups;
  for (const GroupExpr& p : dp.parts) {
    parts.push_back(truncate_node(p, t));
    groups.push_back(parts.back().group);
  }
  FinPermGroup g = direct_product(groups);
  std::vector<std::pair<PointLabel, std::size_t>> base;  // label, block
  std::vector<PointLabel> labels;
  std::vector<CopyCoord> coords;
  std::vector<std::size_t> block_offset;
  std::size_t k = 0;
  for (const Truncation& p : parts) {
    block_offset.push_back(k);
    k += p.meta.k;
  }
  for (std::size_t j = 0; j < parts.size(); ++j) {
    for (Point a = 0; a < parts[j].meta.base.size(); ++a) {
      const std::size_t b = parts[j].meta.base_block[a];
      base.emplace_back(parts[j].meta.base[a].prefixed(Tag::block(j)),
                        b == 0 ? 0 : b + block_offset[j]);
    }
  }
  std::sort(base.begin(), base.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });
  std::vector<PointLabel> base_labels;
  std::vector<std::size_t> base_block;
  for (auto& [l, b] : base) {
    base_labels.push_back(l);
    base_block.push_back(b);
  }
  for (std::size_t j = 0; j < parts.size(); ++j) {
    const Truncation& p = parts[j];
    for (Point x = 0; x < p.group.degree(); ++x) {
      const CopyCoord c = p.meta.copy_of[x];
      const PointLabel bl = p.meta.base[c.base].prefixed(Tag::block(j));
      const auto it = std::lower_bound(base_labels.begin(), base_labels.end(), bl);
      labels.push_back(p.group.domain()[x].prefixed(Tag::block(j)));
      coords.push_back({c.block == 0 ? 0 : c.block + block_offset[j], c.copy,
                        static_cast<Point>(it - base_labels.begin())});
    }
  }
  TruncationMeta m = make_meta(t, k, std::move(base_labels), std::move(base_block), g.domain(),
                               labels, coords);
  return {std::move(g), std::move(m)};
}

// Block index of each base point of a Cons node: y0 is block 0, parts[i] is
// block i+1.
inline std::vector<std::size_t> cons_blocks(const ConsNode& c) {
  std::vector<std::size_t> block(c.h.degree(), 0);
  for (std::size_t i = 0; i < c.parts.size(); ++i) {
    for (const PointLabel& l : c.parts[i].domain()) block[c.h.require_index(l)] = i + 1;
  }
  return block;
}

inline PointLabel cons_point_label(const PointLabel& base, std::size_t block, std::size_t copy) {
  return base.prefixed({Tag::block(block), Tag::copy(copy)});
}

// Domain and meta of Ω_t for a Cons node, with the point list in meta order.
inline TruncationMeta cons_meta(const ConsNode& c, std::size_t t,
                                std::vector<PointLabel>* sorted_domain) {
  const std::vector<std::size_t> block = cons_blocks(c);
  std::vector<PointLabel> labels;
  std::vector<CopyCoord> coords;
  for (Point a = 0; a < c.h.degree(); ++a) {
    const std::size_t copies = block[a] == 0 ? 1 : t;
    for (std::size_t n = 0; n < copies; ++n) {
      labels.push_back(cons_point_label(c.h.domain()[a], block[a], n));
      coords.push_back({block[a], n, a});
    }
  }
  std::vector<PointLabel> dom = labels;
  std::sort(dom.begin(), dom.end());
  TruncationMeta m = make_meta(t, c.parts.size(), c.h.domain(), block, dom, labels, coords);
  if (sorted_domain != nullptr) *sorted_domain = std::move(dom);
  return m;
}

inline Perm perm_from_map(const TruncationMeta& m,
                          const std::vector<std::pair<Point, Point>>& moves) {
  std::vector<Point> image = Perm::identity(m.degree()).image();
  for (auto [from, to] : moves) image[from] = to;
  return Perm(std::move(image));
}

inline Truncation truncate_cons(const ConsNode& c, std::size_t t) {
  std::vector<PointLabel> dom;
  TruncationMeta m = cons_meta(c, t, &dom);
  std::vector<Perm> gens;
  // T_i: swap copy 0 with copy n in block i.
  for (std::size_t i = 1; i <= m.k; ++i) {
    const std::vector<Point> ys = m.block_base(i);
    for (std::size_t n = 1; n < t; ++n) {
      std::vector<std::pair<Point, Point>> moves;
      for (Point a : ys) {
        moves.emplace_back(m.point_at(a, 0), m.point_at(a, n));
        moves.emplace_back(m.point_at(a, n), m.point_at(a, 0));
      }
      gens.push_back(perm_from_map(m, moves));
    }
  }
  // N_{0,i}: generators of N_i on copy 0 of block i.
  for (std::size_t i = 0; i < c.parts.size(); ++i) {
    const FinPermGroup& part = c.parts[i];
    for (const Perm& s : part.gens()) {
      std::vector<std::pair<Point, Point>> moves;
      for (Point x = 0; x < part.degree(); ++x) {
        const Point a = c.h.require_index(part.domain()[x]);
        const Point b = c.h.require_index(part.domain()[s[x]]);
        moves.emplace_back(m.point_at(a, 0), m.point_at(b, 0));
      }
      gens.push_back(perm_from_map(m, moves));
    }
  }
  // H*: generators of h acting on every copy.
  for (const Perm& s : c.h.gens()) {
    std::vector<std::pair<Point, Point>> moves;
    for (Point x = 0; x < m.degree(); ++x) {
      const CopyCoord cc = m.copy_of[x];
      moves.emplace_back(x, m.point_at(s[cc.base], cc.copy));
    }
    gens.push_back(perm_from_map(m, moves));
  }
  return {FinPermGroup(std::move(dom), std::move(gens), c.h.elem_cap()), std::move(m)};
}

inline Truncation truncate_node(const GroupExpr& e, std::size_t t) {
  if (const auto* f = e.as<FiniteNode>()) return truncate_finite(*f, t);
  if (const auto* dp = e.as<DirectProductNode>()) return truncate_dp(*dp, t);
  if (const auto* w = e.as<WreathOmegaNode>()) return truncate_wreath(*w, t);
  return truncate_cons(*e.as<ConsNode>(), t);
}

}  // namespace detail

inline Truncation truncate(const GroupExpr& e, std::size_t t) {
  if (t == 0) fail(ErrorKind::kInvalidArgument, "truncation size must be at least 1");
  require_valid(e);
  return detail::truncate_node(e, t);
}

// φ, ψ and the ρ-table of a block-respecting permutation.
struct ConsDecomposition {
  Perm phi;                                // on blocks {0..k}
  std::vector<std::vector<std::size_t>> psi;  // psi[i][n] = copy image of (block i, copy n)
  std::vector<Perm> rho;                   // indexed by copy-vector, permutations of Y

  // ψ(σ) applied to a copy-vector: entry φ(i) of the result is ψ_i(n_i).
  std::vector<std::size_t> psi_vector(const std::vector<std::size_t>& v) const {
    std::vector<std::size_t> out(v.size(), 0);
    for (std::size_t i = 1; i < v.size(); ++i) out[phi[static_cast<Point>(i)]] = psi[i][v[i]];
    return out;
  }
};

struct BlockCheck {
  bool fixes_y0 = true;
  bool preserves_relations = true;
};

inline BlockCheck check_block_respecting(const Perm& s, const TruncationMeta& m) {
  BlockCheck out;
  if (s.degree() != m.degree()) {
    out.fixes_y0 = out.preserves_relations = false;
    return out;
  }
  for (Point x : m.y0) {
    if (m.copy_of[s[x]].block != 0) out.fixes_y0 = false;
  }
  out.preserves_relations = preserves(s, m.nabla) && preserves(s, m.delta);
  return out;
}

inline ConsDecomposition decompose(const Perm& s, const TruncationMeta& m) {
  const BlockCheck bc = check_block_respecting(s, m);
  if (!bc.fixes_y0 || !bc.preserves_relations) {
    fail(ErrorKind::kNotBlockRespecting, "permutation does not respect K, nabla and delta");
  }
  ConsDecomposition d;
  std::vector<Point> phi(m.k + 1, 0);
  d.psi.assign(m.k + 1, std::vector<std::size_t>(m.t, 0));
  for (std::size_t i = 1; i <= m.k; ++i) {
    const Point a = m.block_base(i).front();
    phi[i] = static_cast<Point>(m.copy_of[s[m.point_at(a, 0)]].block);
    for (std::size_t n = 0; n < m.t; ++n) d.psi[i][n] = m.copy_of[s[m.point_at(a, n)]].copy;
  }
  d.phi = Perm(std::move(phi));
  d.rho.reserve(m.vector_count());
  for (std::size_t idx = 0; idx < m.vector_count(); ++idx) {
    const std::vector<std::size_t> v = m.vector_at(idx);
    std::vector<Point> image(m.base.size());
    for (Point a = 0; a < m.base.size(); ++a) {
      image[a] = m.copy_of[s[m.point_at(a, v[m.base_block[a]])]].base;
    }
    d.rho.push_back(Perm::unchecked(std::move(image)));
  }
  return d;
}

// Inverse of decompose: σ(a, n) = (ρ_n(σ)(a), ψ_i(n)).
inline Perm reassemble(const ConsDecomposition& d, const TruncationMeta& m) {
  std::vector<Point> image(m.degree());
  for (Point x = 0; x < m.degree(); ++x) {
    const CopyCoord c = m.copy_of[x];
    std::vector<std::size_t> v(m.k + 1, c.copy);
    v[0] = 0;
    const Point a = d.rho[m.index_of_vector(v)][c.base];
    image[x] = m.point_at(a, c.block == 0 ? 0 : d.psi[c.block][c.copy]);
  }
  return Perm(std::move(image));
}

struct MembershipVerdict {
  bool a = false;
  bool b = false;
  bool c = false;
  bool d = false;
  std::optional<std::vector<std::size_t>> failing_vector;

  bool ok() const noexcept { return a && b && c && d; }
  char first_failure() const noexcept {
    if (!a) return 'a';
    if (!b) return 'b';
    if (!c) return 'c';
    if (!d) return 'd';
    return '-';
  }
};

// Evaluates conditions (a)-(d) against fixed Cons data; element sets of H and
// N are enumerated once.
class MembershipOracle {
 public:
  MembershipOracle(const ConsNode& cons, const TruncationMeta& meta)
      : meta_(meta),
        h_(generate_elements(cons.h)),
        n_(generate_elements(cons_normal_part(cons))) {
    if (meta.base != cons.h.domain()) {
      fail(ErrorKind::kDomainMismatch, "meta base differs from the domain of h");
    }
  }

  MembershipVerdict operator()(const Perm& s) const {
    MembershipVerdict v;
    const BlockCheck bc = check_block_respecting(s, meta_);
    v.a = bc.fixes_y0;
    v.b = bc.preserves_relations;
    if (!v.a || !v.b) return v;
    const ConsDecomposition d = decompose(s, meta_);
    v.c = true;
    for (std::size_t idx = 0; idx < d.rho.size(); ++idx) {
      if (!contains(h_, d.rho[idx])) {
        v.c = false;
        v.failing_vector = meta_.vector_at(idx);
        return v;
      }
    }
    v.d = true;
    const Perm r0_inv = d.rho[0].inverse();
    for (std::size_t idx = 1; idx < d.rho.size(); ++idx) {
      if (!contains(n_, r0_inv * d.rho[idx])) {
        v.d = false;
        v.failing_vector = meta_.vector_at(idx);
        return v;
      }
    }
    return v;
  }

 private:
  const TruncationMeta& meta_;
  ElementSet h_;
  ElementSet n_;
};

inline MembershipVerdict membership_abcd(const Perm& s, const ConsNode& cons,
                                         const TruncationMeta& meta) {
  return MembershipOracle(cons, meta)(s);
}

// Points of the copy-0 Δ-class of block i.
inline std::vector<Point> copy_zero_class(const TruncationMeta& m, std::size_t block) {
  std::vector<Point> out;
  for (Point a : m.block_base(block)) out.push_back(m.point_at(a, 0));
  std::sort(out.begin(), out.end());
  return out;
}

// N_1 x ... x N_k read off g as the pointwise restrictions to the copy-0
// classes, presented on Y. Needs a second copy to separate N from H.
inline FinPermGroup derive_normal_part(const FinPermGroup& g, const TruncationMeta& m) {
  if (m.t < 2 && m.k > 0) fail(ErrorKind::kInvalidArgument, "normal part needs t >= 2");
  std::vector<Perm> gens;
  for (std::size_t i = 1; i <= m.k; ++i) {
    const std::vector<Point> cls = copy_zero_class(m, i);
    const FinPermGroup r = restrict_inner(g, cls, RestrictMode::kPointwise);
    for (const Perm& s : generate_elements(r)) {
      if (s.is_identity()) continue;
      std::vector<Point> image = Perm::identity(m.base.size()).image();
      for (std::size_t j = 0; j < cls.size(); ++j) {
        image[m.copy_of[cls[j]].base] = m.copy_of[cls[s[static_cast<Point>(j)]]].base;
      }
      gens.push_back(Perm::unchecked(std::move(image)));
    }
  }
  return FinPermGroup(m.base, std::move(gens), g.elem_cap());
}

// τ*: acts as τ on the base coordinate and keeps the copy index.
inline Perm diagonal_lift(const Perm& tau, const TruncationMeta& m) {
  if (tau.degree() != m.base.size()) {
    fail(ErrorKind::kDomainMismatch, "base permutation has the wrong degree");
  }
  std::vector<Point> image(m.degree());
  for (Point x = 0; x < m.degree(); ++x) {
    const CopyCoord c = m.copy_of[x];
    image[x] = m.point_at(tau[c.base], c.copy);
  }
  return Perm(std::move(image));
}

inline bool maps_blocks_to_blocks(const Perm& tau, const TruncationMeta& m) {
  std::vector<std::size_t> target(m.k + 1, SIZE_MAX);
  for (Point a = 0; a < m.base.size(); ++a) {
    const std::size_t from = m.base_block[a];
    const std::size_t to = m.base_block[tau[a]];
    if ((from == 0) != (to == 0)) return false;
    if (target[from] == SIZE_MAX) {
      target[from] = to;
    } else if (target[from] != to) {
      return false;
    }
  }
  return true;
}

inline FinPermGroup diagonal_extend(const FinPermGroup& g, const TruncationMeta& m,
                                    const Perm& tau) {
  if (g.degree() != m.degree()) fail(ErrorKind::kDomainMismatch, "group and meta differ in size");
  if (tau.degree() != m.base.size() || !maps_blocks_to_blocks(tau, m)) {
    fail(ErrorKind::kNotNormalizing, "tau does not fix y0 or does not map blocks onto blocks");
  }
  for (std::size_t i = 1; i <= m.k; ++i) {
    const std::vector<Point> bi = m.block_base(i);
    const std::size_t to = m.base_block[tau[bi.front()]];
    if (m.block_base(to).size() != bi.size()) {
      fail(ErrorKind::kNotNormalizing, "tau maps a block onto a block of different size");
    }
  }
  const FinPermGroup n = derive_normal_part(g, m);
  const ElementSet n_elems = generate_elements(n);
  const Perm tau_inv = tau.inverse();
  for (const Perm& s : n.gens()) {
    if (!contains(n_elems, tau * s * tau_inv)) {
      fail(ErrorKind::kNotNormalizing, "conjugation by tau does not preserve the normal part");
    }
  }
  const Perm lift = diagonal_lift(tau, m);
  if (lift.is_identity()) return g;
  const std::vector<Perm> extra{lift};
  return adjoin(g, extra);
}

struct RecoveredBase {
  FinPermGroup h;
  FinPermGroup n;
  bool n_checked = false;  // false when t = 1
  bool contains_n = false;
  bool normalizes_n = false;
};

inline RecoveredBase recover_base(const FinPermGroup& g, const TruncationMeta& m) {
  std::vector<Perm> rho0;
  for (const Perm& s : generate_elements(g)) {
    const BlockCheck bc = check_block_respecting(s, m);
    if (!bc.fixes_y0 || !bc.preserves_relations) {
      fail(ErrorKind::kNotBlockRespecting, "group element " + s.str() + " is not block-respecting");
    }
    std::vector<Point> image(m.base.size());
    for (Point a = 0; a < m.base.size(); ++a) image[a] = m.copy_of[s[m.point_at(a, 0)]].base;
    rho0.push_back(Perm::unchecked(std::move(image)));
  }
  RecoveredBase out;
  out.h = FinPermGroup::from_elements(m.base, std::move(rho0), g.elem_cap());
  if (m.t < 2 && m.k > 0) return out;
  out.n = derive_normal_part(g, m);
  out.n_checked = true;
  const SubgroupRelation rel = subgroup_relation(out.n, out.h);
  out.contains_n = rel.is_subgroup;
  out.normalizes_n = rel.is_normal;
  return out;
}

// Identities (i) ρ_v(τσ) = ρ_{ψ(σ)v}(τ) ρ_v(σ) and
// (ii) ρ_v(σ⁻¹) = (ρ_{ψ(σ⁻¹)v}(σ))⁻¹, evaluated on given decompositions.
inline bool rho_identities_hold(const ConsDecomposition& sigma, const ConsDecomposition& tau,
                                const ConsDecomposition& tau_sigma,
                                const ConsDecomposition& sigma_inv, const TruncationMeta& m,
                                const std::vector<std::size_t>& v) {
  const std::size_t idx = m.index_of_vector(v);
  const std::size_t shifted = m.index_of_vector(sigma.psi_vector(v));
  if (tau_sigma.rho[idx] != tau.rho[shifted] * sigma.rho[idx]) return false;
  const std::size_t shifted_inv = m.index_of_vector(sigma_inv.psi_vector(v));
  return sigma_inv.rho[idx] == sigma.rho[shifted_inv].inverse();
}

inline bool rho_compose_check(const Perm& sigma, const Perm& tau, const TruncationMeta& m,
                              const std::vector<std::size_t>& v) {
  return rho_identities_hold(decompose(sigma, m), decompose(tau, m), decompose(tau * sigma, m),
                             decompose(sigma.inverse(), m), m, v);
}

}  // namespace hcell
