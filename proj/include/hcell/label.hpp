#pragma once

#include <cctype>
#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "hcell/error.hpp"

namespace hcell {

// One component of a point label. Copy and Block tags carry indices; Base
// tags carry a free-form name that must not collide with the c<n>/B<n> forms.
struct Tag {
  enum class Kind : unsigned char { kBase = 0, kCopy = 1, kBlock = 2 };

  Kind kind = Kind::kBase;
  std::string name;
  std::size_t index = 0;

  static Tag base(std::string name);
  static Tag copy(std::size_t index) { return Tag{Kind::kCopy, {}, index}; }
  static Tag block(std::size_t index) { return Tag{Kind::kBlock, {}, index}; }

  std::string str() const {
    switch (kind) {
      case Kind::kCopy: return "c" + std::to_string(index);
      case Kind::kBlock: return "B" + std::to_string(index);
      case Kind::kBase: break;
    }
    return name;
  }

  friend bool operator==(const Tag& a, const Tag& b) {
    return a.kind == b.kind && a.name == b.name && a.index == b.index;
  }
  friend bool operator<(const Tag& a, const Tag& b) {
    return std::tie(a.kind, a.index, a.name) < std::tie(b.kind, b.index, b.name);
  }
};

namespace detail {

inline bool indexed_token(std::string_view token, char prefix, std::size_t* out) {
  if (token.size() < 2 || token[0] != prefix) return false;
  std::size_t value = 0;
  for (std::size_t i = 1; i < token.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(token[i]))) return false;
    value = value * 10 + static_cast<std::size_t>(token[i] - '0');
  }
  if (out != nullptr) *out = value;
  return true;
}

}  // namespace detail

inline Tag Tag::base(std::string name) {
  if (name.empty() || name.find('/') != std::string::npos ||
      detail::indexed_token(name, 'c', nullptr) ||
      detail::indexed_token(name, 'B', nullptr)) {
    fail(ErrorKind::kInvalidArgument, "invalid base tag '" + name + "'");
  }
  return Tag{Kind::kBase, std::move(name), 0};
}

// Label of a domain point: a path of tags, printed joined by '/'
// (e.g. "B0/c2/y1"). Ordering is lexicographic over the tag sequence.
class PointLabel {
 public:
  PointLabel() = default;
  explicit PointLabel(std::vector<Tag> path) : path_(std::move(path)) {}

  static PointLabel parse(std::string_view text) {
    std::vector<Tag> path;
    std::size_t start = 0;
    while (true) {
      const std::size_t slash = text.find('/', start);
      const std::string_view token =
          text.substr(start, slash == std::string_view::npos ? std::string_view::npos
                                                             : slash - start);
      std::size_t index = 0;
      if (detail::indexed_token(token, 'c', &index)) {
        path.push_back(Tag::copy(index));
      } else if (detail::indexed_token(token, 'B', &index)) {
        path.push_back(Tag::block(index));
      } else {
        path.push_back(Tag::base(std::string(token)));
      }
      if (slash == std::string_view::npos) break;
      start = slash + 1;
    }
    return PointLabel(std::move(path));
  }

  const std::vector<Tag>& path() const noexcept { return path_; }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < path_.size(); ++i) {
      if (i > 0) out += '/';
      out += path_[i].str();
    }
    return out;
  }

  PointLabel prefixed(Tag tag) const {
    std::vector<Tag> path;
    path.reserve(path_.size() + 1);
    path.push_back(std::move(tag));
    path.insert(path.end(), path_.begin(), path_.end());
    return PointLabel(std::move(path));
  }

  PointLabel prefixed(std::initializer_list<Tag> tags) const {
    std::vector<Tag> path(tags);
    path.insert(path.end(), path_.begin(), path_.end());
    return PointLabel(std::move(path));
  }

  // Drops the first `count` tags.
  PointLabel suffix(std::size_t count) const {
    return PointLabel(std::vector<Tag>(path_.begin() + static_cast<std::ptrdiff_t>(count),
                                       path_.end()));
  }

  friend bool operator==(const PointLabel& a, const PointLabel& b) {
    return a.path_ == b.path_;
  }
  friend bool operator!=(const PointLabel& a, const PointLabel& b) { return !(a == b); }
  friend bool operator<(const PointLabel& a, const PointLabel& b) {
    return a.path_ < b.path_;
  }

 private:
  std::vector<Tag> path_;
};

inline std::ostream& operator<<(std::ostream& os, const PointLabel& l) { return os << l.str(); }

inline PointLabel label(std::string_view text) { return PointLabel::parse(text); }

inline std::vector<PointLabel> labels(std::initializer_list<std::string_view> texts) {
  std::vector<PointLabel> out;
  out.reserve(texts.size());
  for (auto t : texts) out.push_back(PointLabel::parse(t));
  return out;
}

}  // namespace hcell
