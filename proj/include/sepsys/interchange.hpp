#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sepsys/compactness.hpp"
#include "sepsys/inverse_system.hpp"

// Text interchange documents. A system document has fields `elements`
// (labels), `inverse` (label pairs, a self-pair marking a degenerate
// element) and `leq` (order generator pairs). Only a generating set of the
// order is serialized: the closure under transitivity and order reversal
// is implied, never written out.

namespace sepsys::interchange {

using json = nlohmann::ordered_json;

namespace detail {

// Transitive reduction of the strict order: the covering pairs.
inline std::vector<std::pair<Elem, Elem>> cover_pairs(const SeparationSystem& S) {
  std::vector<std::pair<Elem, Elem>> out;
  for (Elem x = 0; x < S.size(); ++x)
    for (Elem y = 0; y < S.size(); ++y) {
      if (!S.lt(x, y)) continue;
      bool cover = true;
      for (Elem z = 0; z < S.size() && cover; ++z)
        if (S.lt(x, z) && S.lt(z, y)) cover = false;
      if (cover) out.emplace_back(x, y);
    }
  return out;
}

}  // namespace detail

inline json system_to_json(const SeparationSystem& S) {
  json doc;
  doc["elements"] = S.labels();
  json inv = json::array();
  for (Elem x = 0; x < S.size(); ++x)
    if (S.inv(x) >= x) inv.push_back({S.label(x), S.label(S.inv(x))});
  doc["inverse"] = std::move(inv);
  json leq = json::array();
  for (auto [a, b] : detail::cover_pairs(S)) leq.push_back({S.label(a), S.label(b)});
  doc["leq"] = std::move(leq);
  return doc;
}

inline SeparationSystem system_from_json(const json& doc) {
  if (!doc.contains("elements") || !doc.contains("inverse") || !doc.contains("leq"))
    throw ParseError("system document needs elements, inverse, leq");
  std::vector<std::string> labels = doc.at("elements").get<std::vector<std::string>>();
  auto index_of = [&](const std::string& l) -> Elem {
    for (size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == l) return static_cast<Elem>(i);
    throw ParseError("unknown element label " + l);
  };
  std::vector<Elem> inv(labels.size(), kNoElem);
  for (const auto& pair : doc.at("inverse")) {
    if (!pair.is_array() || pair.size() != 2) throw ParseError("inverse entries are pairs");
    Elem a = index_of(pair.at(0).get<std::string>());
    Elem b = index_of(pair.at(1).get<std::string>());
    inv[a] = b;
    inv[b] = a;
  }
  for (size_t i = 0; i < inv.size(); ++i)
    if (inv[i] == kNoElem) throw ParseError("element " + labels[i] + " missing from inverse");
  std::vector<std::pair<Elem, Elem>> gens;
  for (const auto& pair : doc.at("leq")) {
    if (!pair.is_array() || pair.size() != 2) throw ParseError("leq entries are pairs");
    gens.emplace_back(index_of(pair.at(0).get<std::string>()),
                      index_of(pair.at(1).get<std::string>()));
  }
  return SeparationSystem::from_generators(std::move(labels), std::move(inv), gens);
}

inline json inverse_system_to_json(const InverseSystem& IS) {
  json doc;
  json poset;
  std::vector<std::string> points;
  for (Point p = 0; p < IS.points(); ++p) points.push_back(IS.poset().label(p));
  poset["points"] = points;
  json pleq = json::array();
  for (auto [q, p] : IS.poset().covers())
    pleq.push_back({IS.poset().label(p), IS.poset().label(q)});
  poset["leq"] = std::move(pleq);
  doc["poset"] = std::move(poset);

  json levels;
  for (Point p = 0; p < IS.points(); ++p)
    levels[IS.poset().label(p)] = system_to_json(IS.level(p));
  doc["levels"] = std::move(levels);

  json bonds = json::array();
  for (auto [q, p] : IS.poset().covers()) {
    json bond;
    bond["from"] = IS.poset().label(q);
    bond["to"] = IS.poset().label(p);
    json map = json::array();
    for (Elem x = 0; x < IS.level(q).size(); ++x)
      map.push_back({IS.level(q).label(x), IS.level(p).label(IS.bond(q, p, x))});
    bond["map"] = std::move(map);
    bonds.push_back(std::move(bond));
  }
  doc["bonds"] = std::move(bonds);
  return doc;
}

inline InverseSystem inverse_system_from_json(const json& doc) {
  if (!doc.contains("poset") || !doc.contains("levels") || !doc.contains("bonds"))
    throw ParseError("inverse system document needs poset, levels, bonds");
  std::vector<std::string> points =
      doc.at("poset").at("points").get<std::vector<std::string>>();
  auto point_of = [&](const std::string& l) -> Point {
    for (size_t i = 0; i < points.size(); ++i)
      if (points[i] == l) return static_cast<Point>(i);
    throw ParseError("unknown poset point " + l);
  };
  std::vector<std::pair<Point, Point>> gens;
  for (const auto& pair : doc.at("poset").at("leq"))
    gens.emplace_back(point_of(pair.at(0).get<std::string>()),
                      point_of(pair.at(1).get<std::string>()));
  DirectedPoset poset = DirectedPoset::from_generators(points, gens);

  std::vector<SystemPtr> levels;
  for (const auto& l : points) {
    if (!doc.at("levels").contains(l)) throw ParseError("missing level document for " + l);
    levels.push_back(make_system(system_from_json(doc.at("levels").at(l))));
  }

  InverseSystem::BondMap bonds;
  for (const auto& bond : doc.at("bonds")) {
    Point q = point_of(bond.at("from").get<std::string>());
    Point p = point_of(bond.at("to").get<std::string>());
    std::vector<Elem> map(levels[q]->size(), kNoElem);
    for (const auto& entry : bond.at("map")) {
      auto from = levels[q]->find(entry.at(0).get<std::string>());
      auto to = levels[p]->find(entry.at(1).get<std::string>());
      if (!from || !to) throw ParseError("bond references unknown element labels");
      map[*from] = *to;
    }
    for (Elem x = 0; x < levels[q]->size(); ++x)
      if (map[x] == kNoElem)
        throw ParseError("bond from " + points[q] + " is not total");
    bonds[{q, p}] = std::move(map);
  }
  return InverseSystem::build(std::move(poset), std::move(levels), std::move(bonds));
}

// Star family documents: stars as lists of limit element labels, next to a
// serialized inverse system.
inline json star_family_to_json(const InverseSystem& IS, const StarFamily& F) {
  json doc;
  doc["inverse_system"] = inverse_system_to_json(IS);
  json stars = json::array();
  for (const auto& sigma : F.stars) {
    json star = json::array();
    for (Elem x : sigma) star.push_back(IS.limit().label(x));
    stars.push_back(std::move(star));
  }
  doc["stars"] = std::move(stars);
  return doc;
}

struct LoadedStarFamily {
  InverseSystem inverse_system;
  StarFamily family;
};

inline LoadedStarFamily star_family_from_json(const json& doc) {
  if (!doc.contains("inverse_system") || !doc.contains("stars"))
    throw ParseError("star family document needs inverse_system and stars");
  LoadedStarFamily out{inverse_system_from_json(doc.at("inverse_system")), {}};
  std::vector<ElemSet> stars;
  for (const auto& star : doc.at("stars")) {
    ElemSet sigma;
    for (const auto& label : star) {
      auto e = out.inverse_system.limit().find(label.get<std::string>());
      if (!e) throw ParseError("star references unknown limit element");
      sigma.push_back(*e);
    }
    stars.push_back(normalized(std::move(sigma)));
  }
  out.family = validate_star_family(out.inverse_system, std::move(stars));
  return out;
}

}  // namespace sepsys::interchange
