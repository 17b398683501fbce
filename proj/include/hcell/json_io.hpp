#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hcell/construct.hpp"
#include "hcell/error.hpp"
#include "hcell/label.hpp"
#include "hcell/partition.hpp"
#include "hcell/perm.hpp"
#include "hcell/perm_group.hpp"

namespace hcell {

using Json = nlohmann::json;
// Keeps insertion order so reports list fields in a fixed, readable order.
using OrderedJson = nlohmann::ordered_json;

inline Json perm_to_json(const Perm& p) { return Json(p.image()); }

inline Perm perm_from_json(const Json& j) {
  if (!j.is_array()) fail(ErrorKind::kInvalidArgument, "permutation must be a JSON array");
  std::vector<Point> image;
  for (const Json& v : j) {
    if (!v.is_number_unsigned()) fail(ErrorKind::kInvalidArgument, "permutation entries must be non-negative integers");
    image.push_back(v.get<Point>());
  }
  return Perm(std::move(image));
}

inline Json labels_to_json(const std::vector<PointLabel>& ls) {
  Json out = Json::array();
  for (const PointLabel& l : ls) out.push_back(l.str());
  return out;
}

inline std::vector<PointLabel> labels_from_json(const Json& j) {
  if (!j.is_array()) fail(ErrorKind::kInvalidArgument, "label list must be a JSON array");
  std::vector<PointLabel> out;
  for (const Json& v : j) {
    if (!v.is_string()) fail(ErrorKind::kInvalidArgument, "labels must be strings");
    out.push_back(PointLabel::parse(v.get<std::string>()));
  }
  return out;
}

inline Json group_to_json(const FinPermGroup& g) {
  Json gens = Json::array();
  for (const Perm& p : g.gens()) gens.push_back(perm_to_json(p));
  return Json{{"domain", labels_to_json(g.domain())}, {"gens", gens}};
}

inline FinPermGroup group_from_json(const Json& j, std::size_t elem_cap = kDefaultElemCap) {
  if (!j.is_object() || !j.contains("domain")) {
    fail(ErrorKind::kInvalidArgument, "group must be an object with a domain");
  }
  std::vector<Perm> gens;
  if (j.contains("gens")) {
    if (!j.at("gens").is_array()) fail(ErrorKind::kInvalidArgument, "gens must be an array");
    for (const Json& p : j.at("gens")) gens.push_back(perm_from_json(p));
  }
  return FinPermGroup(labels_from_json(j.at("domain")), std::move(gens), elem_cap);
}

// Classes as lists of labels.
inline Json partition_to_json(const Partition& p, const std::vector<PointLabel>& domain) {
  Json out = Json::array();
  for (const auto& cls : p.classes()) {
    Json c = Json::array();
    for (Point x : cls) c.push_back(domain[x].str());
    out.push_back(c);
  }
  return out;
}

inline Partition partition_from_json(const Json& j, const FinPermGroup& g) {
  if (!j.is_array()) fail(ErrorKind::kInvalidArgument, "partition must be an array of classes");
  std::vector<std::vector<Point>> classes;
  for (const Json& c : j) {
    std::vector<Point> cls;
    for (const PointLabel& l : labels_from_json(c)) cls.push_back(g.require_index(l));
    classes.push_back(std::move(cls));
  }
  return Partition::from_classes(g.degree(), classes);
}

inline OrderedJson meta_to_json(const TruncationMeta& m, const std::vector<PointLabel>& domain) {
  OrderedJson points = OrderedJson::array();
  for (Point x = 0; x < m.degree(); ++x) {
    const CopyCoord& c = m.copy_of[x];
    points.push_back(OrderedJson{{"label", domain[x].str()},
                                 {"block", c.block},
                                 {"copy", c.copy},
                                 {"base", m.base[c.base].str()}});
  }
  std::vector<PointLabel> y0;
  for (Point x : m.y0) y0.push_back(domain[x]);
  OrderedJson out;
  out["t"] = m.t;
  out["k"] = m.k;
  out["y0"] = OrderedJson(labels_to_json(y0));
  out["base"] = OrderedJson(labels_to_json(m.base));
  out["nabla"] = OrderedJson(partition_to_json(m.nabla, domain));
  out["delta"] = OrderedJson(partition_to_json(m.delta, domain));
  out["points"] = points;
  return out;
}

}  // namespace hcell
