#pragma once

// Finite relational structures: automorphism groups, unions and copies,
// invariant-relation expansions, homogenizability and age scans.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hcell/analysis.hpp"
#include "hcell/error.hpp"
#include "hcell/json_io.hpp"
#include "hcell/label.hpp"
#include "hcell/perm_group.hpp"

namespace hcell {

using Tuple = std::vector<Point>;

struct RelSymbol {
  std::string name;
  std::size_t arity = 1;

  friend bool operator==(const RelSymbol&, const RelSymbol&) = default;
};

// Equality is implicit and never listed in the signature. Tuples hold
// indices into `domain`.
struct RelStruct {
  std::vector<PointLabel> domain;
  std::vector<RelSymbol> sig;
  std::map<std::string, std::set<Tuple>> rels;

  std::size_t size() const noexcept { return domain.size(); }

  const RelSymbol* symbol(const std::string& name) const {
    for (const RelSymbol& r : sig) {
      if (r.name == name) return &r;
    }
    return nullptr;
  }

  void declare(const std::string& name, std::size_t arity) {
    if (arity == 0) fail(ErrorKind::kInvalidArgument, "relation '" + name + "' needs arity >= 1");
    if (const RelSymbol* r = symbol(name)) {
      if (r->arity != arity) fail(ErrorKind::kSignatureClash, "relation '" + name + "' redeclared");
      return;
    }
    sig.push_back({name, arity});
    rels[name];
  }

  void add(const std::string& name, Tuple t) {
    const RelSymbol* r = symbol(name);
    if (!r) fail(ErrorKind::kInvalidArgument, "undeclared relation '" + name + "'");
    if (t.size() != r->arity) fail(ErrorKind::kInvalidArgument, "tuple arity mismatch in '" + name + "'");
    for (Point x : t) {
      if (x >= size()) fail(ErrorKind::kInvalidArgument, "tuple entry outside the domain");
    }
    rels[name].insert(std::move(t));
  }

  bool holds(const std::string& name, const Tuple& t) const {
    auto it = rels.find(name);
    return it != rels.end() && it->second.count(t) > 0;
  }

  Point require_index(const PointLabel& l) const {
    for (Point i = 0; i < size(); ++i) {
      if (domain[i] == l) return i;
    }
    fail(ErrorKind::kInvalidArgument, "label '" + l.str() + "' is not in the structure");
  }

  // m(A): the largest arity, counting equality as binary.
  std::size_t max_arity() const {
    std::size_t m = 2;
    for (const RelSymbol& r : sig) m = std::max(m, r.arity);
    return m;
  }

  RelStruct induced(const std::vector<Point>& points) const {
    std::vector<Point> local(size(), UINT32_MAX);
    RelStruct out;
    for (std::size_t i = 0; i < points.size(); ++i) {
      local[points[i]] = static_cast<Point>(i);
      out.domain.push_back(domain[points[i]]);
    }
    for (const RelSymbol& r : sig) out.declare(r.name, r.arity);
    for (const auto& [name, tuples] : rels) {
      for (const Tuple& t : tuples) {
        Tuple lt;
        for (Point x : t) lt.push_back(local[x]);
        if (std::find(lt.begin(), lt.end(), UINT32_MAX) == lt.end()) out.rels[name].insert(lt);
      }
    }
    return out;
  }
};

inline OrderedJson struct_to_json(const RelStruct& a) {
  OrderedJson j;
  j["domain"] = OrderedJson::array();
  for (const PointLabel& l : a.domain) j["domain"].push_back(l.str());
  j["sig"] = OrderedJson::array();
  j["rels"] = OrderedJson::object();
  for (const RelSymbol& r : a.sig) {
    j["sig"].push_back({{"name", r.name}, {"arity", r.arity}});
    OrderedJson tuples = OrderedJson::array();
    for (const Tuple& t : a.rels.at(r.name)) {
      OrderedJson row = OrderedJson::array();
      for (Point x : t) row.push_back(a.domain[x].str());
      tuples.push_back(std::move(row));
    }
    j["rels"][r.name] = std::move(tuples);
  }
  return j;
}

inline RelStruct struct_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("domain")) {
    fail(ErrorKind::kInvalidArgument, "structure must be an object with a domain");
  }
  RelStruct a;
  a.domain = labels_from_json(j.at("domain"));
  std::set<PointLabel> distinct(a.domain.begin(), a.domain.end());
  if (distinct.size() != a.domain.size()) fail(ErrorKind::kInvalidArgument, "duplicate domain label");
  if (j.contains("sig")) {
    for (const Json& r : j.at("sig")) {
      a.declare(r.at("name").get<std::string>(), r.at("arity").get<std::size_t>());
    }
  }
  if (j.contains("rels")) {
    for (const auto& [name, tuples] : j.at("rels").items()) {
      if (!a.symbol(name)) fail(ErrorKind::kInvalidArgument, "relation '" + name + "' is not in sig");
      for (const Json& row : tuples) {
        Tuple t;
        for (const Json& x : row) t.push_back(a.require_index(label(x.get<std::string>())));
        a.add(name, std::move(t));
      }
    }
  }
  return a;
}

// ---------------------------------------------------------------------------
// Automorphisms

namespace detail {

// All automorphisms, as permutations of the structure's own index order.
inline std::vector<Perm> automorphisms(const RelStruct& a, std::size_t cap) {
  const std::size_t n = a.size();
  // Occurrence counts per (relation, position) plus loops prune the search.
  std::vector<std::vector<std::size_t>> profile(n);
  std::vector<std::vector<std::pair<const std::set<Tuple>*, Tuple>>> closing(n);
  for (const RelSymbol& r : a.sig) {
    const std::set<Tuple>& ts = a.rels.at(r.name);
    std::vector<std::vector<std::size_t>> counts(n, std::vector<std::size_t>(r.arity + 1, 0));
    for (const Tuple& t : ts) {
      for (std::size_t j = 0; j < t.size(); ++j) ++counts[t[j]][j];
      if (std::all_of(t.begin(), t.end(), [&](Point x) { return x == t[0]; })) ++counts[t[0]][r.arity];
      closing[*std::max_element(t.begin(), t.end())].push_back({&ts, t});
    }
    for (Point x = 0; x < n; ++x) profile[x].insert(profile[x].end(), counts[x].begin(), counts[x].end());
  }
  std::vector<Perm> out;
  std::vector<Point> image(n);
  std::vector<bool> used(n, false);
  std::function<void(Point)> extend = [&](Point k) {
    if (k == n) {
      if (out.size() >= cap) fail(ErrorKind::kCapExceeded, "automorphism count exceeds cap");
      out.push_back(Perm::unchecked(image));
      return;
    }
    for (Point y = 0; y < n; ++y) {
      if (used[y] || profile[y] != profile[k]) continue;
      image[k] = y;
      bool ok = true;
      for (const auto& [ts, t] : closing[k]) {
        Tuple mapped;
        for (Point x : t) mapped.push_back(image[x]);
        if (!ts->count(mapped)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      used[y] = true;
      extend(k + 1);
      used[y] = false;
    }
  };
  extend(0);
  if (n == 0) out = {Perm::identity(0)};
  return out;
}

// Position of each structure index in the sorted label order.
inline std::vector<Point> sorted_positions(const std::vector<PointLabel>& domain) {
  std::vector<std::size_t> order(domain.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return domain[x] < domain[y]; });
  std::vector<Point> pos(domain.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<Point>(i);
  return pos;
}

}  // namespace detail

// The group acts on the sorted labels of A.
inline FinPermGroup aut_group(const RelStruct& a, std::size_t cap = kDefaultElemCap) {
  const std::vector<Point> pos = detail::sorted_positions(a.domain);
  std::vector<PointLabel> dom = a.domain;
  std::sort(dom.begin(), dom.end());
  std::vector<Perm> elems;
  for (const Perm& p : detail::automorphisms(a, cap)) {
    std::vector<Point> image(p.degree());
    for (Point x = 0; x < p.degree(); ++x) image[pos[x]] = pos[p[x]];
    elems.push_back(Perm::unchecked(std::move(image)));
  }
  return FinPermGroup::from_elements(std::move(dom), std::move(elems), cap);
}

// ---------------------------------------------------------------------------
// Constructions

inline RelStruct disjoint_union(const std::vector<RelStruct>& parts) {
  if (parts.empty()) fail(ErrorKind::kInvalidArgument, "disjoint_union needs at least one part");
  RelStruct out;
  std::vector<std::string> markers;
  for (std::size_t i = 1; i <= parts.size(); ++i) markers.push_back("U" + std::to_string(i));
  for (const RelStruct& p : parts) {
    for (const RelSymbol& r : p.sig) {
      if (std::find(markers.begin(), markers.end(), r.name) != markers.end()) {
        fail(ErrorKind::kSignatureClash, "part already declares '" + r.name + "'");
      }
      out.declare(r.name, r.arity);
    }
  }
  for (const std::string& u : markers) out.declare(u, 1);
  for (std::size_t j = 0; j < parts.size(); ++j) {
    const Point offset = static_cast<Point>(out.domain.size());
    for (const PointLabel& l : parts[j].domain) out.domain.push_back(l.prefixed(Tag::block(j)));
    for (Point x = 0; x < parts[j].size(); ++x) out.add(markers[j], {offset + x});
    for (const auto& [name, tuples] : parts[j].rels) {
      for (Tuple t : tuples) {
        for (Point& x : t) x += offset;
        out.add(name, std::move(t));
      }
    }
  }
  return out;
}

namespace detail {

inline std::string fresh_name(const RelStruct& a, std::string base) {
  while (a.symbol(base)) base += '\'';
  return base;
}

}  // namespace detail

// m copies of A with a binary E relating points of the same copy.
inline RelStruct copies_trunc(const RelStruct& a, std::size_t m) {
  if (m == 0) fail(ErrorKind::kInvalidArgument, "copies_trunc needs m >= 1");
  RelStruct out;
  for (const RelSymbol& r : a.sig) out.declare(r.name, r.arity);
  const std::string e = detail::fresh_name(a, "E");
  out.declare(e, 2);
  const std::size_t d = a.size();
  for (std::size_t c = 0; c < m; ++c) {
    const Point offset = static_cast<Point>(c * d);
    for (const PointLabel& l : a.domain) out.domain.push_back(l.prefixed(Tag::copy(c)));
    for (const auto& [name, tuples] : a.rels) {
      for (Tuple t : tuples) {
        for (Point& x : t) x += offset;
        out.add(name, std::move(t));
      }
    }
    for (Point x = 0; x < d; ++x) {
      for (Point y = 0; y < d; ++y) out.add(e, {offset + x, offset + y});
    }
  }
  return out;
}

inline constexpr std::size_t kStructureBudget = 1 << 16;

// t^n points labeled c<i_n>/.../c<i_1>/x; E_i relates points that agree
// on every copy index except the last i, so E_n is universal.
inline RelStruct en_family(std::size_t n, std::size_t t) {
  if (t == 0) fail(ErrorKind::kInvalidArgument, "en_family needs t >= 1");
  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) {
    count *= t;
    if (count > kStructureBudget) fail(ErrorKind::kCapExceeded, "en_family domain too large");
  }
  RelStruct out;
  for (std::size_t p = 0; p < count; ++p) {
    PointLabel l = label("x");
    std::size_t rest = p;
    for (std::size_t i = 0; i < n; ++i) {
      l = l.prefixed(Tag::copy(rest % t));
      rest /= t;
    }
    out.domain.push_back(std::move(l));
  }
  std::size_t block = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    block *= t;
    const std::string name = "E" + std::to_string(i);
    out.declare(name, 2);
    for (Point x = 0; x < count; ++x) {
      for (Point y = 0; y < count; ++y) {
        if (x / block == y / block) out.add(name, {x, y});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tuple orbits

namespace detail {

// Orbit id (numbered by first appearance in lexicographic order) of every
// n-tuple; tuples are coded big-endian so codes sort lexicographically.
inline std::vector<std::uint32_t> tuple_orbit_ids(std::span<const Perm> gens, std::size_t d,
                                                  std::size_t n) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total *= d;
    if (total > kTupleBudget / 8) fail(ErrorKind::kCapExceeded, "tuple space exceeds budget");
  }
  std::vector<std::uint32_t> ids(total, UINT32_MAX);
  std::vector<Point> digits(n);
  std::vector<std::uint64_t> stack;
  std::uint32_t next = 0;
  for (std::uint64_t start = 0; start < total; ++start) {
    if (ids[start] != UINT32_MAX) continue;
    ids[start] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      std::uint64_t c = stack.back();
      stack.pop_back();
      for (std::size_t j = n; j-- > 0;) {
        digits[j] = static_cast<Point>(c % d);
        c /= d;
      }
      for (const Perm& g : gens) {
        std::uint64_t img = 0;
        for (std::size_t j = 0; j < n; ++j) img = img * d + g[digits[j]];
        if (ids[img] == UINT32_MAX) {
          ids[img] = next;
          stack.push_back(img);
        }
      }
    }
    ++next;
  }
  return ids;
}

inline Tuple decode(std::uint64_t code, std::size_t d, std::size_t n) {
  Tuple t(n);
  for (std::size_t j = n; j-- > 0;) {
    t[j] = static_cast<Point>(code % d);
    code /= d;
  }
  return t;
}

inline std::uint64_t encode(const Tuple& t, std::size_t d) {
  std::uint64_t c = 0;
  for (Point x : t) c = c * d + x;
  return c;
}

}  // namespace detail

// Expansion by one m-ary relation O<k> per Aut(A)-orbit on A^m, numbered
// by the orbit's lexicographically least tuple in A's index order.
inline RelStruct delta_m(const RelStruct& a, std::size_t m, std::size_t cap = kDefaultElemCap) {
  if (m == 0) fail(ErrorKind::kInvalidArgument, "delta_m needs m >= 1");
  const FinPermGroup g = aut_group(a, cap);
  const std::vector<Point> pos = detail::sorted_positions(a.domain);
  const std::size_t d = a.size();
  const std::vector<std::uint32_t> ids = detail::tuple_orbit_ids(g.gens(), d, m);
  RelStruct out;
  out.domain = a.domain;
  std::map<std::uint32_t, std::string> names;
  std::uint64_t total = ids.size();
  for (std::uint64_t code = 0; code < total; ++code) {
    Tuple t = detail::decode(code, d, m);
    Tuple sorted_t;
    for (Point x : t) sorted_t.push_back(pos[x]);
    const std::uint32_t id = ids[detail::encode(sorted_t, d)];
    auto [it, inserted] = names.emplace(id, "O" + std::to_string(names.size()));
    if (inserted) out.declare(it->second, m);
    out.add(it->second, std::move(t));
  }
  return out;
}

struct HomogResult {
  bool ok = true;
  std::size_t n = 0;  // tuple length of the counterexample
  std::vector<PointLabel> u, v;
};

// For each n <= n_max, every pair of n-tuples in distinct orbits must be
// separated by some projection onto m coordinates. Whether a projection
// separates depends only on the two orbits, so one representative each.
inline HomogResult homog_check_group(const FinPermGroup& g, std::size_t m, std::size_t n_max) {
  if (m == 0) fail(ErrorKind::kInvalidArgument, "homog_check needs m >= 1");
  const std::size_t d = g.degree();
  const std::vector<std::uint32_t> ids_m = detail::tuple_orbit_ids(g.gens(), d, m);
  for (std::size_t n = 1; n <= n_max; ++n) {
    const std::vector<std::uint32_t> ids_n = detail::tuple_orbit_ids(g.gens(), d, n);
    std::uint64_t maps = 1;
    for (std::size_t i = 0; i < m; ++i) maps *= n;
    std::map<std::vector<std::uint32_t>, std::uint64_t> seen;
    std::uint32_t next_orbit = 0;
    for (std::uint64_t code = 0; code < ids_n.size(); ++code) {
      if (ids_n[code] != next_orbit) continue;
      ++next_orbit;
      const Tuple u = detail::decode(code, d, n);
      std::vector<std::uint32_t> signature;
      signature.reserve(maps);
      for (std::uint64_t pi = 0; pi < maps; ++pi) {
        const Tuple coords = detail::decode(pi, n, m);
        Tuple proj;
        for (Point c : coords) proj.push_back(u[c]);
        signature.push_back(ids_m[detail::encode(proj, d)]);
      }
      auto [it, inserted] = seen.emplace(std::move(signature), code);
      if (!inserted) {
        HomogResult r;
        r.ok = false;
        r.n = n;
        for (Point x : detail::decode(it->second, d, n)) r.u.push_back(g.domain()[x]);
        for (Point x : u) r.v.push_back(g.domain()[x]);
        return r;
      }
    }
  }
  return {};
}

inline HomogResult homog_check(const RelStruct& a, std::size_t m, std::size_t n_max,
                               std::size_t cap = kDefaultElemCap) {
  return homog_check_group(aut_group(a, cap), m, n_max);
}

// Largest number of G-orbits inside one H-orbit on n-tuples, for G <= H.
inline std::size_t max_type_split(const FinPermGroup& g, const FinPermGroup& h, std::size_t n) {
  require_same_domain(g, h);
  const std::vector<std::uint32_t> small = detail::tuple_orbit_ids(g.gens(), g.degree(), n);
  const std::vector<std::uint32_t> big = detail::tuple_orbit_ids(h.gens(), h.degree(), n);
  std::map<std::uint32_t, std::set<std::uint32_t>> split;
  for (std::size_t c = 0; c < small.size(); ++c) split[big[c]].insert(small[c]);
  std::size_t out = 0;
  for (const auto& [b, s] : split) out = std::max(out, s.size());
  return out;
}

// ---------------------------------------------------------------------------
// Ages and bounds

namespace detail {

// Whether X embeds into A as an induced substructure. Relations of A that X
// does not declare are empty in X.
inline bool embeds(const RelStruct& x, const RelStruct& a) {
  if (x.size() > a.size()) return false;
  for (const RelSymbol& r : x.sig) {
    const RelSymbol* ra = a.symbol(r.name);
    if (!ra || ra->arity != r.arity) {
      if (!x.rels.at(r.name).empty()) return false;
    }
  }
  const std::size_t k = x.size();
  std::vector<Point> f(k);
  std::vector<bool> used(a.size(), false);
  std::function<bool(Point)> extend = [&](Point i) {
    if (i == k) return true;
    for (Point y = 0; y < a.size(); ++y) {
      if (used[y]) continue;
      f[i] = y;
      bool ok = true;
      // Every tuple over {0..i} that mentions i.
      for (const RelSymbol& r : a.sig) {
        const std::size_t ar = r.arity;
        std::uint64_t count = 1;
        for (std::size_t j = 0; j < ar; ++j) count *= (i + 1);
        for (std::uint64_t c = 0; c < count && ok; ++c) {
          const Tuple t = decode(c, i + 1, ar);
          if (std::find(t.begin(), t.end(), i) == t.end()) continue;
          Tuple img;
          for (Point p : t) img.push_back(f[p]);
          if (x.holds(r.name, t) != a.holds(r.name, img)) ok = false;
        }
        if (!ok) break;
      }
      if (!ok) continue;
      used[y] = true;
      if (extend(i + 1)) return true;
      used[y] = false;
    }
    return false;
  };
  return extend(0);
}

// A structure on {0..k-1} as one bit per possible tuple, relation by
// relation in signature order.
struct Coded {
  std::size_t k = 0;
  std::vector<std::uint8_t> bits;

  friend bool operator<(const Coded& a, const Coded& b) {
    return a.k != b.k ? a.k < b.k : a.bits < b.bits;
  }
  friend bool operator==(const Coded&, const Coded&) = default;
};

inline constexpr std::size_t kMaxCanonicalSize = 7;

class Coder {
 public:
  explicit Coder(std::vector<RelSymbol> sig) : sig_(std::move(sig)) {}

  const std::vector<RelSymbol>& sig() const noexcept { return sig_; }

  std::size_t width(std::size_t k) const {
    std::size_t w = 0;
    for (const RelSymbol& r : sig_) w += power(k, r.arity);
    return w;
  }

  static std::size_t power(std::size_t k, std::size_t e) {
    std::size_t p = 1;
    for (std::size_t i = 0; i < e; ++i) p *= k;
    return p;
  }

  Coded from_struct(const RelStruct& a) const {
    Coded c{a.size(), std::vector<std::uint8_t>(width(a.size()), 0)};
    std::size_t off = 0;
    for (const RelSymbol& r : sig_) {
      auto it = a.rels.find(r.name);
      if (it != a.rels.end()) {
        for (const Tuple& t : it->second) c.bits[off + encode(t, a.size())] = 1;
      }
      off += power(a.size(), r.arity);
    }
    return c;
  }

  RelStruct to_struct(const Coded& c) const {
    RelStruct a;
    for (std::size_t i = 0; i < c.k; ++i) a.domain.push_back(label("p" + std::to_string(i)));
    std::size_t off = 0;
    for (const RelSymbol& r : sig_) {
      a.declare(r.name, r.arity);
      const std::size_t span = power(c.k, r.arity);
      for (std::size_t j = 0; j < span; ++j) {
        if (c.bits[off + j]) a.add(r.name, decode(j, c.k, r.arity));
      }
      off += span;
    }
    return a;
  }

  Coded permuted(const Coded& c, const std::vector<Point>& p) const {
    Coded out{c.k, std::vector<std::uint8_t>(c.bits.size(), 0)};
    std::size_t off = 0;
    for (const RelSymbol& r : sig_) {
      const std::size_t span = power(c.k, r.arity);
      for (std::size_t j = 0; j < span; ++j) {
        if (!c.bits[off + j]) continue;
        Tuple t = decode(j, c.k, r.arity);
        for (Point& x : t) x = p[x];
        out.bits[off + encode(t, c.k)] = 1;
      }
      off += span;
    }
    return out;
  }

  // Least code over all relabelings.
  Coded canonical(const Coded& c) const {
    if (c.k > kMaxCanonicalSize) fail(ErrorKind::kCapExceeded, "canonical forms limited to 7 points");
    const std::vector<std::vector<std::uint32_t>>& maps = bit_maps(c.k);
    Coded best = c;
    std::vector<std::uint8_t> q(c.bits.size());
    for (const auto& map : maps) {
      std::fill(q.begin(), q.end(), 0);
      for (std::size_t j = 0; j < c.bits.size(); ++j) {
        if (c.bits[j]) q[map[j]] = 1;
      }
      if (q < best.bits) best.bits = q;
    }
    return best;
  }

  Coded without_point(const Coded& c, Point drop) const {
    std::vector<Point> keep;
    for (Point i = 0; i < c.k; ++i) {
      if (i != drop) keep.push_back(i);
    }
    return from_struct(to_struct(c).induced(keep));
  }

 private:
  // For each relabeling of k points, where each bit goes.
  const std::vector<std::vector<std::uint32_t>>& bit_maps(std::size_t k) const {
    auto it = maps_.find(k);
    if (it != maps_.end()) return it->second;
    std::vector<std::vector<std::uint32_t>> maps;
    std::vector<Point> p(k);
    std::iota(p.begin(), p.end(), Point{0});
    do {
      std::vector<std::uint32_t> map;
      std::size_t off = 0;
      for (const RelSymbol& r : sig_) {
        const std::size_t span = power(k, r.arity);
        for (std::size_t j = 0; j < span; ++j) {
          Tuple t = decode(j, k, r.arity);
          for (Point& x : t) x = p[x];
          map.push_back(static_cast<std::uint32_t>(off + encode(t, k)));
        }
        off += span;
      }
      maps.push_back(std::move(map));
    } while (std::next_permutation(p.begin(), p.end()));
    return maps_.emplace(k, std::move(maps)).first->second;
  }

  std::vector<RelSymbol> sig_;
  mutable std::map<std::size_t, std::vector<std::vector<std::uint32_t>>> maps_;
};

inline constexpr std::size_t kExtensionBits = 22;

// Members of Age(A) up to size s and the minimal non-members, both as
// canonical codes. Every structure of size k+1 restricts to one of size k,
// so extending members level by level reaches every member and every
// minimal non-member.
struct AgeScan {
  std::vector<std::vector<Coded>> members;  // by size 0..s
  std::vector<Coded> obstructions;
};

inline AgeScan scan_age(const RelStruct& a, const Coder& coder, std::size_t s) {
  if (s > kMaxCanonicalSize) fail(ErrorKind::kCapExceeded, "scan horizon limited to 7");
  AgeScan out;
  out.members.resize(s + 1);
  out.members[0].push_back(Coded{0, {}});
  std::set<Coded> member_set{out.members[0].front()};
  for (std::size_t k = 0; k < s; ++k) {
    // Bits of the (k+1)-structure that involve the new point.
    std::vector<std::size_t> fresh;
    std::vector<std::pair<std::size_t, std::size_t>> kept;  // (old bit, new bit)
    std::size_t off_old = 0, off_new = 0;
    for (const RelSymbol& r : coder.sig()) {
      const std::size_t span = Coder::power(k + 1, r.arity);
      for (std::size_t j = 0; j < span; ++j) {
        const Tuple t = decode(j, k + 1, r.arity);
        if (std::find(t.begin(), t.end(), static_cast<Point>(k)) != t.end()) {
          fresh.push_back(off_new + j);
        } else {
          kept.push_back({off_old + encode(t, k), off_new + j});
        }
      }
      off_old += Coder::power(k, r.arity);
      off_new += span;
    }
    if (fresh.size() > kExtensionBits) {
      fail(ErrorKind::kCapExceeded, "too many one-point extensions at size " + std::to_string(k + 1));
    }
    std::set<Coded> seen;
    for (const Coded& x : out.members[k]) {
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << fresh.size()); ++mask) {
        Coded y{k + 1, std::vector<std::uint8_t>(off_new, 0)};
        for (const auto& [o, nb] : kept) y.bits[nb] = x.bits[o];
        for (std::size_t b = 0; b < fresh.size(); ++b) y.bits[fresh[b]] = (mask >> b) & 1U;
        Coded c = coder.canonical(y);
        if (!seen.insert(c).second) continue;
        if (embeds(coder.to_struct(c), a)) {
          member_set.insert(c);
          out.members[k + 1].push_back(std::move(c));
          continue;
        }
        bool minimal = true;
        for (Point drop = 0; drop <= k && minimal; ++drop) {
          minimal = member_set.count(coder.canonical(coder.without_point(c, drop))) > 0;
        }
        if (minimal) out.obstructions.push_back(std::move(c));
      }
    }
    std::sort(out.members[k + 1].begin(), out.members[k + 1].end());
  }
  std::sort(out.obstructions.begin(), out.obstructions.end());
  return out;
}

}  // namespace detail

struct BoundsReport {
  std::size_t m_a = 2;
  std::vector<RelStruct> minimal_obstructions;
  std::size_t b_a = 2;
  std::size_t scan_size = 0;
  bool complete = false;  // A is finite, so nothing larger than |A|+1 is minimal
};

inline BoundsReport boundedness_scan(const RelStruct& a, std::size_t s) {
  const detail::Coder coder(a.sig);
  const detail::AgeScan scan = detail::scan_age(a, coder, s);
  BoundsReport rep;
  rep.m_a = a.max_arity();
  rep.b_a = rep.m_a;
  rep.scan_size = s;
  rep.complete = s >= a.size() + 1;
  for (const detail::Coded& c : scan.obstructions) {
    rep.minimal_obstructions.push_back(coder.to_struct(c));
    rep.b_a = std::max(rep.b_a, c.k);
  }
  return rep;
}

struct ForbResult {
  bool agree = true;
  std::optional<RelStruct> witness;
  bool witness_in_age = false;
};

// Age(A) and Forb(F) agree up to size s iff no member embeds a structure of
// F and every minimal non-member does.
inline ForbResult forb_check(const RelStruct& a, const std::vector<RelStruct>& forbidden, std::size_t s) {
  const detail::Coder coder(a.sig);
  const detail::AgeScan scan = detail::scan_age(a, coder, s);
  auto hits = [&](const RelStruct& x) {
    return std::any_of(forbidden.begin(), forbidden.end(),
                       [&](const RelStruct& f) { return detail::embeds(f, x); });
  };
  for (std::size_t k = 0; k <= s; ++k) {
    for (const detail::Coded& c : scan.members[k]) {
      RelStruct x = coder.to_struct(c);
      if (hits(x)) return {false, std::move(x), true};
    }
    for (const detail::Coded& c : scan.obstructions) {
      if (c.k != k) continue;
      RelStruct x = coder.to_struct(c);
      if (!hits(x)) return {false, std::move(x), false};
    }
  }
  return {};
}

struct MergeReport {
  bool lhs = false;  // C embeds into B
  bool rhs = false;  // compatible expansions of the one-point deletions exist
  bool applicable = true;
  std::size_t b_a = 0;

  bool agree() const noexcept { return !applicable || lhs == rhs; }
};

inline constexpr std::size_t kExpansionBits = 20;

inline MergeReport merge_expansions_check(const RelStruct& b, const RelStruct& a, const RelStruct& c,
                                          const std::vector<PointLabel>& marked, std::size_t horizon) {
  std::set<PointLabel> da(a.domain.begin(), a.domain.end()), db(b.domain.begin(), b.domain.end());
  if (da != db) fail(ErrorKind::kInvalidArgument, "B and A must share a domain");
  for (const RelSymbol& r : b.sig) {
    const RelSymbol* ra = a.symbol(r.name);
    if (!ra || ra->arity != r.arity) fail(ErrorKind::kInvalidArgument, "B is not a reduct of A");
    std::set<std::vector<PointLabel>> tb, ta;
    for (const Tuple& t : b.rels.at(r.name)) {
      std::vector<PointLabel> ls;
      for (Point x : t) ls.push_back(b.domain[x]);
      tb.insert(ls);
    }
    for (const Tuple& t : a.rels.at(r.name)) {
      std::vector<PointLabel> ls;
      for (Point x : t) ls.push_back(a.domain[x]);
      ta.insert(ls);
    }
    if (ta != tb) fail(ErrorKind::kInvalidArgument, "B and A differ on '" + r.name + "'");
  }
  for (const RelSymbol& r : c.sig) {
    const RelSymbol* rb = b.symbol(r.name);
    if (!rb || rb->arity != r.arity) fail(ErrorKind::kInvalidArgument, "C is not in B's signature");
  }
  const BoundsReport bounds = boundedness_scan(a, horizon);
  if (!bounds.complete) {
    fail(ErrorKind::kHorizonTooSmall, "scan horizon " + std::to_string(horizon) +
                                          " cannot certify b(A); need " + std::to_string(a.size() + 1));
  }
  MergeReport rep;
  rep.b_a = bounds.b_a;
  std::vector<Point> mk;
  for (const PointLabel& l : marked) mk.push_back(c.require_index(l));
  std::set<Point> distinct(mk.begin(), mk.end());
  if (distinct.size() != mk.size()) fail(ErrorKind::kInvalidArgument, "marked points must be distinct");
  if (c.size() > rep.b_a) {
    if (mk.size() != rep.b_a + 1) {
      fail(ErrorKind::kInvalidArgument, "need exactly b(A)+1 = " + std::to_string(rep.b_a + 1) + " marked points");
    }
  } else {
    if (mk.size() != c.size()) fail(ErrorKind::kInvalidArgument, "small C: mark every point");
    rep.applicable = false;
  }
  rep.lhs = detail::embeds(c, b);

  std::vector<RelSymbol> extra;
  for (const RelSymbol& r : a.sig) {
    if (!b.symbol(r.name)) extra.push_back(r);
  }
  // Expansions of C minus a_i, as extra-relation tuples in C's indices.
  using Expansion = std::map<std::string, std::set<Tuple>>;
  std::vector<std::vector<Expansion>> options(mk.size());
  for (std::size_t i = 0; i < mk.size(); ++i) {
    std::vector<Point> keep;
    for (Point x = 0; x < c.size(); ++x) {
      if (x != mk[i]) keep.push_back(x);
    }
    RelStruct ci = c.induced(keep);
    for (const RelSymbol& r : b.sig) ci.declare(r.name, r.arity);
    std::vector<std::pair<std::string, Tuple>> slots;
    for (const RelSymbol& r : extra) {
      ci.declare(r.name, r.arity);
      const std::size_t span = detail::Coder::power(keep.size(), r.arity);
      for (std::size_t j = 0; j < span; ++j) slots.push_back({r.name, detail::decode(j, keep.size(), r.arity)});
    }
    if (slots.size() > kExpansionBits) fail(ErrorKind::kCapExceeded, "too many expansions");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
      RelStruct di = ci;
      Expansion ex;
      for (const RelSymbol& r : extra) ex[r.name];
      for (std::size_t bit = 0; bit < slots.size(); ++bit) {
        if (!((mask >> bit) & 1U)) continue;
        di.add(slots[bit].first, slots[bit].second);
        Tuple global;
        for (Point x : slots[bit].second) global.push_back(keep[x]);
        ex[slots[bit].first].insert(std::move(global));
      }
      if (detail::embeds(di, a)) options[i].push_back(std::move(ex));
    }
  }
  auto compatible = [&](std::size_t i, const Expansion& ei, std::size_t j, const Expansion& ej) {
    for (const RelSymbol& r : extra) {
      auto inside = [&](const Tuple& t) {
        return std::find(t.begin(), t.end(), mk[i]) == t.end() && std::find(t.begin(), t.end(), mk[j]) == t.end();
      };
      for (const Tuple& t : ei.at(r.name)) {
        if (inside(t) && !ej.at(r.name).count(t)) return false;
      }
      for (const Tuple& t : ej.at(r.name)) {
        if (inside(t) && !ei.at(r.name).count(t)) return false;
      }
    }
    return true;
  };
  std::vector<std::size_t> choice(mk.size());
  std::function<bool(std::size_t)> pick = [&](std::size_t i) {
    if (i == mk.size()) return true;
    for (std::size_t o = 0; o < options[i].size(); ++o) {
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) ok = compatible(i, options[i][o], j, options[j][choice[j]]);
      if (!ok) continue;
      choice[i] = o;
      if (pick(i + 1)) return true;
    }
    return false;
  };
  rep.rhs = pick(0);
  return rep;
}

}  // namespace hcell
