#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "hcell/error.hpp"

namespace hcell {

using Point = std::uint32_t;

// A permutation of {0, ..., n-1}; position i holds the image of point i.
class Perm {
 public:
  Perm() = default;

  explicit Perm(std::vector<Point> image) : image_(std::move(image)) {
    std::vector<bool> seen(image_.size(), false);
    for (Point p : image_) {
      if (p >= image_.size() || seen[p]) {
        fail(ErrorKind::kInvalidArgument, "image array is not a bijection");
      }
      seen[p] = true;
    }
  }

  static Perm unchecked(std::vector<Point> image) {
    Perm p;
    p.image_ = std::move(image);
    return p;
  }

  static Perm identity(std::size_t degree) {
    std::vector<Point> image(degree);
    for (std::size_t i = 0; i < degree; ++i) image[i] = static_cast<Point>(i);
    return unchecked(std::move(image));
  }

  // Builds a permutation from disjoint cycles, e.g. from_cycles(3, {{0, 1, 2}}).
  static Perm from_cycles(std::size_t degree,
                          std::initializer_list<std::initializer_list<Point>> cycles) {
    std::vector<Point> image = identity(degree).image_;
    for (const auto& cycle : cycles) {
      std::vector<Point> c(cycle);
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] >= degree) fail(ErrorKind::kInvalidArgument, "cycle point out of range");
        image[c[i]] = c[(i + 1) % c.size()];
      }
    }
    return Perm(std::move(image));
  }

  std::size_t degree() const noexcept { return image_.size(); }
  const std::vector<Point>& image() const noexcept { return image_; }
  Point operator[](Point x) const { return image_[x]; }

  bool is_identity() const noexcept {
    for (std::size_t i = 0; i < image_.size(); ++i) {
      if (image_[i] != i) return false;
    }
    return true;
  }

  Perm inverse() const {
    std::vector<Point> inv(image_.size());
    for (std::size_t i = 0; i < image_.size(); ++i) inv[image_[i]] = static_cast<Point>(i);
    return unchecked(std::move(inv));
  }

  // Composition a*b = a∘b: b is applied first.
  friend Perm operator*(const Perm& a, const Perm& b) {
    std::vector<Point> out(b.image_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.image_[b.image_[i]];
    return unchecked(std::move(out));
  }

  friend bool operator==(const Perm& a, const Perm& b) { return a.image_ == b.image_; }
  friend bool operator!=(const Perm& a, const Perm& b) { return a.image_ != b.image_; }
  friend bool operator<(const Perm& a, const Perm& b) { return a.image_ < b.image_; }

  std::string str() const {
    std::string out = "[";
    for (std::size_t i = 0; i < image_.size(); ++i) {
      if (i > 0) out += ',';
      out += std::to_string(image_[i]);
    }
    return out + "]";
  }

 private:
  std::vector<Point> image_;
};

struct PermHash {
  std::size_t operator()(const Perm& p) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (Point x : p.image()) {
      h ^= x;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace hcell
