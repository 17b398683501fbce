#pragma once

// Finite permutation groups on labeled domains: element enumeration,
// stabilizers, restrictions, quotients and products.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hcell/error.hpp"
#include "hcell/label.hpp"
#include "hcell/partition.hpp"
#include "hcell/perm.hpp"

namespace hcell {

inline constexpr std::size_t kDefaultElemCap = 1'000'000;

class FinPermGroup {
 public:
  FinPermGroup() = default;

  // The domain is sorted on construction and generators are re-indexed to
  // match, so groups built from the same labels agree position-wise.
  FinPermGroup(std::vector<PointLabel> domain, std::vector<Perm> gens,
               std::size_t elem_cap = kDefaultElemCap)
      : elem_cap_(elem_cap) {
    if (elem_cap == 0) fail(ErrorKind::kInvalidArgument, "elem_cap must be positive");
    for (const Perm& g : gens) {
      if (g.degree() != domain.size()) {
        fail(ErrorKind::kInvalidArgument,
             "generator degree " + std::to_string(g.degree()) + " does not match domain size " +
                 std::to_string(domain.size()));
      }
    }
    std::vector<std::size_t> order(domain.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return domain[a] < domain[b]; });
    for (std::size_t i = 1; i < order.size(); ++i) {
      if (domain[order[i - 1]] == domain[order[i]]) {
        fail(ErrorKind::kInvalidArgument, "duplicate label " + domain[order[i]].str());
      }
    }
    std::vector<Point> position(domain.size());
    for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = static_cast<Point>(i);
    domain_.reserve(domain.size());
    for (std::size_t i : order) domain_.push_back(std::move(domain[i]));
    gens_.reserve(gens.size());
    for (const Perm& g : gens) gens_.push_back(relabel(g, order, position));
  }

  static FinPermGroup trivial(std::vector<PointLabel> domain,
                              std::size_t elem_cap = kDefaultElemCap) {
    return FinPermGroup(std::move(domain), {}, elem_cap);
  }

  static FinPermGroup symmetric(std::vector<PointLabel> domain,
                                std::size_t elem_cap = kDefaultElemCap) {
    const std::size_t n = domain.size();
    std::vector<Perm> gens;
    if (n >= 2) {
      std::vector<Point> swap(n), cycle(n);
      for (std::size_t i = 0; i < n; ++i) {
        swap[i] = static_cast<Point>(i);
        cycle[i] = static_cast<Point>((i + 1) % n);
      }
      std::swap(swap[0], swap[1]);
      gens.push_back(Perm::unchecked(std::move(swap)));
      if (n > 2) gens.push_back(Perm::unchecked(std::move(cycle)));
    }
    return FinPermGroup(std::move(domain), std::move(gens), elem_cap);
  }

  // Group presented by a known, closed element set. The set is cached and a
  // small generating set is picked greedily from it in sorted order.
  static FinPermGroup from_elements(std::vector<PointLabel> sorted_domain,
                                    std::vector<Perm> elements,
                                    std::size_t elem_cap = kDefaultElemCap) {
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    FinPermGroup g;
    g.elem_cap_ = elem_cap;
    for (std::size_t i = 1; i < sorted_domain.size(); ++i) {
      if (!(sorted_domain[i - 1] < sorted_domain[i])) {
        fail(ErrorKind::kInvalidArgument, "from_elements expects a sorted, distinct domain");
      }
    }
    g.domain_ = std::move(sorted_domain);
    if (elements.empty()) elements.push_back(Perm::identity(g.domain_.size()));
    g.gens_ = greedy_generators(elements);
    g.elements_ = std::make_shared<const std::vector<Perm>>(std::move(elements));
    return g;
  }

  const std::vector<PointLabel>& domain() const noexcept { return domain_; }
  std::size_t degree() const noexcept { return domain_.size(); }
  const std::vector<Perm>& gens() const noexcept { return gens_; }
  std::size_t elem_cap() const noexcept { return elem_cap_; }
  const std::vector<Perm>* cached_elements() const noexcept { return elements_.get(); }

  FinPermGroup with_elem_cap(std::size_t cap) const {
    FinPermGroup g = *this;
    g.elem_cap_ = cap;
    return g;
  }

  std::optional<Point> index_of(const PointLabel& l) const {
    auto it = std::lower_bound(domain_.begin(), domain_.end(), l);
    if (it == domain_.end() || !(*it == l)) return std::nullopt;
    return static_cast<Point>(it - domain_.begin());
  }

  Point require_index(const PointLabel& l) const {
    auto idx = index_of(l);
    if (!idx) fail(ErrorKind::kInvalidArgument, "label " + l.str() + " not in domain");
    return *idx;
  }

  Perm identity() const { return Perm::identity(domain_.size()); }

 private:
  static Perm relabel(const Perm& g, const std::vector<std::size_t>& order,
                      const std::vector<Point>& position) {
    std::vector<Point> image(g.degree());
    for (std::size_t i = 0; i < order.size(); ++i) image[i] = position[g[static_cast<Point>(order[i])]];
    return Perm::unchecked(std::move(image));
  }

  std::vector<PointLabel> domain_;
  static std::vector<Perm> greedy_generators(const std::vector<Perm>& elements) {
    std::vector<Perm> gens;
    std::unordered_set<Perm, PermHash> span{Perm::identity(elements.front().degree())};
    for (const Perm& e : elements) {
      if (span.count(e)) continue;
      gens.push_back(e);
      std::vector<Perm> queue(span.begin(), span.end());
      while (!queue.empty()) {
        const Perm x = std::move(queue.back());
        queue.pop_back();
        for (const Perm& s : gens) {
          Perm y = s * x;
          if (span.insert(y).second) queue.push_back(std::move(y));
        }
      }
    }
    return gens;
  }

  std::vector<Perm> gens_;
  std::size_t elem_cap_ = kDefaultElemCap;
  std::shared_ptr<const std::vector<Perm>> elements_;
};

// Sorted element list of a group.
using ElementSet = std::vector<Perm>;

inline bool contains(const ElementSet& set, const Perm& p) {
  return std::binary_search(set.begin(), set.end(), p);
}

inline void require_same_domain(const FinPermGroup& a, const FinPermGroup& b) {
  if (a.domain() != b.domain()) fail(ErrorKind::kDomainMismatch, "groups act on different domains");
}

// Breadth-first closure under the generators; the result is sorted.
inline ElementSet generate_elements(const FinPermGroup& g) {
  if (const ElementSet* cached = g.cached_elements()) {
    if (cached->size() > g.elem_cap()) {
      fail(ErrorKind::kCapExceeded, "group has " + std::to_string(cached->size()) +
                                        " elements, cap " + std::to_string(g.elem_cap()));
    }
    return *cached;
  }
  std::unordered_set<Perm, PermHash> seen;
  std::deque<const Perm*> queue;
  auto admit = [&](Perm p) {
    if (seen.size() >= g.elem_cap()) {
      fail(ErrorKind::kCapExceeded,
           "element count exceeds cap " + std::to_string(g.elem_cap()));
    }
    auto [it, inserted] = seen.insert(std::move(p));
    if (inserted) queue.push_back(&*it);
  };
  admit(g.identity());
  while (!queue.empty()) {
    const Perm* e = queue.front();
    queue.pop_front();
    for (const Perm& s : g.gens()) {
      Perm p = s * (*e);
      if (!seen.count(p)) admit(std::move(p));
    }
  }
  ElementSet out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

inline std::size_t group_order(const FinPermGroup& g) { return generate_elements(g).size(); }

// Smallest group containing g's generators and the extra elements.
inline FinPermGroup adjoin(const FinPermGroup& g, std::span<const Perm> extra) {
  std::vector<Perm> gens = g.gens();
  gens.insert(gens.end(), extra.begin(), extra.end());
  return FinPermGroup(g.domain(), std::move(gens), g.elem_cap());
}

inline bool same_group(const FinPermGroup& a, const FinPermGroup& b) {
  return a.domain() == b.domain() && generate_elements(a) == generate_elements(b);
}

struct SubgroupRelation {
  bool is_subgroup = false;
  bool is_normal = false;
  std::optional<std::size_t> index;
};

// Relation of h to g: subgroup, normal subgroup, index.
inline SubgroupRelation subgroup_relation(const FinPermGroup& h, const FinPermGroup& g) {
  require_same_domain(h, g);
  const ElementSet he = generate_elements(h);
  const ElementSet ge = generate_elements(g);
  SubgroupRelation rel;
  rel.is_subgroup = std::all_of(he.begin(), he.end(), [&](const Perm& x) { return contains(ge, x); });
  if (!rel.is_subgroup) return rel;
  rel.index = ge.size() / he.size();
  rel.is_normal = true;
  for (const Perm& s : g.gens()) {
    const Perm s_inv = s.inverse();
    for (const Perm& x : h.gens()) {
      if (!contains(he, s * x * s_inv)) {
        rel.is_normal = false;
        return rel;
      }
    }
  }
  return rel;
}

enum class StabMode { kPointwise, kSetwise };

inline FinPermGroup stabilizer(const FinPermGroup& g, std::span<const Point> points, StabMode mode) {
  std::vector<bool> in_set(g.degree(), false);
  for (Point p : points) {
    if (p >= g.degree()) fail(ErrorKind::kInvalidArgument, "stabilized point out of range");
    in_set[p] = true;
  }
  std::vector<Perm> kept;
  for (const Perm& e : generate_elements(g)) {
    bool ok = true;
    for (Point p : points) {
      if (mode == StabMode::kPointwise ? e[p] != p : !in_set[e[p]]) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(e);
  }
  return FinPermGroup::from_elements(g.domain(), std::move(kept), g.elem_cap());
}

enum class RestrictMode {
  kSetwise,    // G_(Y)  = G_{Y} restricted to Y
  kPointwise,  // G_((Y)) = G_{Dom \ Y} restricted to Y
};

inline FinPermGroup restrict_inner(const FinPermGroup& g, std::span<const Point> subset,
                                   RestrictMode mode) {
  std::vector<Point> ys(subset.begin(), subset.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  std::vector<Point> local(g.degree(), UINT32_MAX);
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (ys[i] >= g.degree()) fail(ErrorKind::kInvalidArgument, "restriction point out of range");
    local[ys[i]] = static_cast<Point>(i);
  }
  std::vector<Point> outside;
  for (Point p = 0; p < g.degree(); ++p) {
    if (local[p] == UINT32_MAX) outside.push_back(p);
  }
  const FinPermGroup stab = mode == RestrictMode::kSetwise
                                ? stabilizer(g, ys, StabMode::kSetwise)
                                : stabilizer(g, outside, StabMode::kPointwise);
  std::vector<Perm> restricted;
  for (const Perm& e : generate_elements(stab)) {
    std::vector<Point> image(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) image[i] = local[e[ys[i]]];
    restricted.push_back(Perm::unchecked(std::move(image)));
  }
  std::vector<PointLabel> dom;
  for (Point y : ys) dom.push_back(g.domain()[y]);
  return FinPermGroup::from_elements(std::move(dom), std::move(restricted), g.elem_cap());
}

// Action of a permutation on the classes of a preserved partition.
inline Perm induced_on_classes(const Perm& g, const Partition& e) {
  std::vector<Point> image(e.num_classes());
  for (Point x = 0; x < g.degree(); ++x) image[e.class_of(x)] = e.class_of(g[x]);
  return Perm::unchecked(std::move(image));
}

// G/E on the E-classes, each class labeled by its least member.
inline FinPermGroup quotient_by_congruence(const FinPermGroup& g, const Partition& e) {
  if (e.size() != g.degree()) fail(ErrorKind::kDomainMismatch, "partition size differs from domain");
  std::vector<Perm> gens;
  for (std::size_t i = 0; i < g.gens().size(); ++i) {
    if (!preserves(g.gens()[i], e)) {
      fail(ErrorKind::kNotACongruence, "generator " + std::to_string(i) + " does not preserve E");
    }
    gens.push_back(induced_on_classes(g.gens()[i], e));
  }
  std::vector<PointLabel> dom;
  for (const auto& cls : e.classes()) dom.push_back(g.domain()[cls.front()]);
  return FinPermGroup(std::move(dom), std::move(gens), g.elem_cap());
}

inline FinPermGroup direct_product(std::span<const FinPermGroup> parts) {
  if (parts.empty()) fail(ErrorKind::kInvalidArgument, "direct product of no groups");
  std::vector<PointLabel> dom;
  std::vector<std::size_t> offset;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    offset.push_back(dom.size());
    for (const PointLabel& l : parts[j].domain()) dom.push_back(l.prefixed(Tag::block(j)));
  }
  std::vector<Perm> gens;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    for (const Perm& s : parts[j].gens()) {
      std::vector<Point> image = Perm::identity(dom.size()).image();
      for (Point x = 0; x < s.degree(); ++x) {
        image[offset[j] + x] = static_cast<Point>(offset[j] + s[x]);
      }
      gens.push_back(Perm::unchecked(std::move(image)));
    }
  }
  return FinPermGroup(std::move(dom), std::move(gens), parts.front().elem_cap());
}

// G wr Sym(m) on Dom(G) x {0..m-1}; labels are "c<n>/<label>".
inline FinPermGroup wreath_finite(const FinPermGroup& g, std::size_t m) {
  if (m == 0) fail(ErrorKind::kInvalidArgument, "wreath_finite needs m >= 1");
  const std::size_t d = g.degree();
  std::vector<PointLabel> dom;
  for (std::size_t c = 0; c < m; ++c) {
    for (const PointLabel& l : g.domain()) dom.push_back(l.prefixed(Tag::copy(c)));
  }
  std::vector<Perm> gens;
  for (const Perm& s : g.gens()) {
    std::vector<Point> image = Perm::identity(dom.size()).image();
    for (Point x = 0; x < d; ++x) image[x] = s[x];
    gens.push_back(Perm::unchecked(std::move(image)));
  }
  for (std::size_t c = 1; c < m; ++c) {
    std::vector<Point> image = Perm::identity(dom.size()).image();
    for (std::size_t x = 0; x < d; ++x) {
      image[x] = static_cast<Point>(c * d + x);
      image[c * d + x] = static_cast<Point>(x);
    }
    gens.push_back(Perm::unchecked(std::move(image)));
  }
  return FinPermGroup(std::move(dom), std::move(gens), g.elem_cap());
}

// Orbits of the group generated by `gens` on points.
inline Partition point_orbits(std::span<const Perm> gens, std::size_t degree) {
  DisjointSets sets(degree);
  for (const Perm& g : gens) {
    for (Point x = 0; x < degree; ++x) sets.unite(x, g[x]);
  }
  return Partition::from_sets(sets);
}

// Generators of the point stabilizer G_x by Schreier's lemma (no element
// enumeration; the list may be redundant but is deduplicated).
inline std::vector<Perm> stabilizer_gens(std::span<const Perm> gens, std::size_t degree, Point x) {
  std::vector<std::optional<Perm>> transversal(degree);
  transversal[x] = Perm::identity(degree);
  std::vector<Point> orbit{x};
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    const Point y = orbit[i];
    for (const Perm& g : gens) {
      const Point z = g[y];
      if (!transversal[z]) {
        transversal[z] = g * (*transversal[y]);
        orbit.push_back(z);
      }
    }
  }
  std::unordered_set<Perm, PermHash> out;
  for (Point y : orbit) {
    const Perm& u = *transversal[y];
    for (const Perm& g : gens) {
      Perm s = transversal[g[y]]->inverse() * g * u;
      if (!s.is_identity()) out.insert(std::move(s));
    }
  }
  std::vector<Perm> result(out.begin(), out.end());
  std::sort(result.begin(), result.end());
  return result;
}

inline std::vector<Perm> pointwise_stabilizer_gens(std::span<const Perm> gens, std::size_t degree,
                                                   std::span<const Point> points) {
  std::vector<Perm> current(gens.begin(), gens.end());
  for (Point p : points) current = stabilizer_gens(current, degree, p);
  return current;
}

}  // namespace hcell
