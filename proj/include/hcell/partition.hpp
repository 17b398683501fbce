#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "hcell/error.hpp"
#include "hcell/perm.hpp"

namespace hcell {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), Point{0});
  }

  Point find(Point x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Returns true when two distinct classes were merged.
  bool unite(Point a, Point b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

  std::size_t size() const noexcept { return parent_.size(); }

 private:
  std::vector<Point> parent_;
};

// An equivalence relation on {0, ..., n-1}, stored as class ids numbered in
// order of first appearance so equal partitions compare equal.
class Partition {
 public:
  Partition() = default;

  static Partition from_ids(std::span<const std::size_t> ids) {
    Partition p;
    p.cls_.resize(ids.size());
    std::vector<std::size_t> remap;
    std::vector<std::size_t> seen_ids;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      auto it = std::find(seen_ids.begin(), seen_ids.end(), ids[i]);
      if (it == seen_ids.end()) {
        seen_ids.push_back(ids[i]);
        p.cls_[i] = static_cast<Point>(seen_ids.size() - 1);
      } else {
        p.cls_[i] = static_cast<Point>(it - seen_ids.begin());
      }
    }
    p.count_ = seen_ids.size();
    return p;
  }

  static Partition from_classes(std::size_t n, const std::vector<std::vector<Point>>& classes) {
    std::vector<std::size_t> ids(n, SIZE_MAX);
    for (std::size_t c = 0; c < classes.size(); ++c) {
      for (Point x : classes[c]) {
        if (x >= n || ids[x] != SIZE_MAX) {
          fail(ErrorKind::kInvalidArgument, "classes do not partition the domain");
        }
        ids[x] = c;
      }
    }
    for (std::size_t id : ids) {
      if (id == SIZE_MAX) fail(ErrorKind::kInvalidArgument, "classes do not cover the domain");
    }
    return from_ids(ids);
  }

  static Partition from_sets(DisjointSets& sets) {
    std::vector<std::size_t> ids(sets.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = sets.find(static_cast<Point>(i));
    return from_ids(ids);
  }

  static Partition equality(std::size_t n) {
    std::vector<std::size_t> ids(n);
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    return from_ids(ids);
  }

  static Partition universal(std::size_t n) {
    std::vector<std::size_t> ids(n, 0);
    return from_ids(ids);
  }

  std::size_t size() const noexcept { return cls_.size(); }
  std::size_t num_classes() const noexcept { return count_; }
  Point class_of(Point x) const { return cls_[x]; }
  const std::vector<Point>& ids() const noexcept { return cls_; }

  // Classes ordered by least member; members ascending.
  std::vector<std::vector<Point>> classes() const {
    std::vector<std::vector<Point>> out(count_);
    for (std::size_t i = 0; i < cls_.size(); ++i) out[cls_[i]].push_back(static_cast<Point>(i));
    return out;
  }

  bool same(Point a, Point b) const { return cls_[a] == cls_[b]; }

  // True when every class of *this lies inside a class of `coarser`.
  bool refines(const Partition& coarser) const {
    std::vector<std::size_t> image(count_, SIZE_MAX);
    for (std::size_t i = 0; i < cls_.size(); ++i) {
      std::size_t& slot = image[cls_[i]];
      if (slot == SIZE_MAX) {
        slot = coarser.cls_[i];
      } else if (slot != coarser.cls_[i]) {
        return false;
      }
    }
    return true;
  }

  Partition join(const Partition& other) const {
    DisjointSets sets(cls_.size());
    merge_into(sets);
    other.merge_into(sets);
    return from_sets(sets);
  }

  void merge_into(DisjointSets& sets) const {
    std::vector<Point> first(count_, UINT32_MAX);
    for (std::size_t i = 0; i < cls_.size(); ++i) {
      Point& f = first[cls_[i]];
      if (f == UINT32_MAX) {
        f = static_cast<Point>(i);
      } else {
        sets.unite(f, static_cast<Point>(i));
      }
    }
  }

  // Restriction to the listed points, re-indexed by position in `points`.
  Partition restricted(std::span<const Point> points) const {
    std::vector<std::size_t> ids(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) ids[i] = cls_[points[i]];
    return from_ids(ids);
  }

  friend bool operator==(const Partition& a, const Partition& b) { return a.cls_ == b.cls_; }
  friend bool operator!=(const Partition& a, const Partition& b) { return a.cls_ != b.cls_; }
  friend bool operator<(const Partition& a, const Partition& b) { return a.cls_ < b.cls_; }

 private:
  std::vector<Point> cls_;
  std::size_t count_ = 0;
};

inline bool preserves(const Perm& g, const Partition& e) {
  std::vector<Point> image(e.num_classes(), UINT32_MAX);
  for (std::size_t i = 0; i < g.degree(); ++i) {
    Point& slot = image[e.class_of(static_cast<Point>(i))];
    const Point target = e.class_of(g[static_cast<Point>(i)]);
    if (slot == UINT32_MAX) {
      slot = target;
    } else if (slot != target) {
      return false;
    }
  }
  return true;
}

// Smallest partition containing `seed` that every generator preserves.
inline Partition congruence_closure(std::span<const Perm> gens, DisjointSets sets) {
  const std::size_t n = sets.size();
  std::vector<std::pair<Point, Point>> pending;
  std::vector<Point> first(n, UINT32_MAX);
  for (std::size_t i = 0; i < n; ++i) {
    const Point r = sets.find(static_cast<Point>(i));
    if (first[r] == UINT32_MAX) {
      first[r] = static_cast<Point>(i);
    } else {
      pending.emplace_back(first[r], static_cast<Point>(i));
    }
  }
  while (!pending.empty()) {
    auto [a, b] = pending.back();
    pending.pop_back();
    for (const Perm& g : gens) {
      if (sets.unite(g[a], g[b])) pending.emplace_back(g[a], g[b]);
    }
  }
  return Partition::from_sets(sets);
}

}  // namespace hcell
