#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sepsys/inverse_system.hpp"

namespace sepsys {

using VertexMask = uint32_t;

// A finite simple graph with labeled vertices.
struct Graph {
  std::vector<std::string> vertices;
  std::vector<std::pair<int, int>> edges;

  int n() const { return static_cast<int>(vertices.size()); }

  static Graph path(int n, const std::string& prefix = "v") {
    Graph g;
    for (int i = 0; i < n; ++i) g.vertices.push_back(prefix + std::to_string(i + 1));
    for (int i = 0; i + 1 < n; ++i) g.edges.emplace_back(i, i + 1);
    return g;
  }

  static Graph star(int leaves) {
    Graph g;
    g.vertices.push_back("z");
    for (int i = 0; i < leaves; ++i) {
      g.vertices.push_back("y" + std::to_string(i + 1));
      g.edges.emplace_back(0, i + 1);
    }
    return g;
  }

  static Graph edgeless(std::vector<std::string> labels) {
    Graph g;
    g.vertices = std::move(labels);
    return g;
  }

  Graph induced(VertexMask p) const {
    Graph g;
    std::vector<int> remap(n(), -1);
    for (int v = 0; v < n(); ++v)
      if ((p >> v) & 1) {
        remap[v] = g.n();
        g.vertices.push_back(vertices[v]);
      }
    for (auto [a, b] : edges)
      if (remap[a] >= 0 && remap[b] >= 0) g.edges.emplace_back(remap[a], remap[b]);
    return g;
  }

  std::optional<int> find(const std::string& label) const {
    for (int v = 0; v < n(); ++v)
      if (vertices[v] == label) return v;
    return std::nullopt;
  }
};

// Parses an adjacency-list document: one line per vertex, "v: n1 n2 ...".
// Isolated vertices list no neighbours.
inline Graph parse_graph(const std::string& text) {
  Graph g;
  std::map<std::string, int> index;
  auto intern = [&](const std::string& name) {
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    index[name] = g.n();
    g.vertices.push_back(name);
    return g.n() - 1;
  };
  std::istringstream in(text);
  std::string line;
  std::vector<std::pair<int, int>> raw;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("expected 'vertex: neighbours' in " + line);
    int v = intern(line.substr(0, colon));
    std::istringstream rest(line.substr(colon + 1));
    std::string nb;
    while (rest >> nb) raw.emplace_back(v, intern(nb));
  }
  for (auto [a, b] : raw) {
    if (a == b) throw ParseError("loop at " + g.vertices[a]);
    bool seen = false;
    for (auto [x, y] : g.edges)
      if ((x == a && y == b) || (x == b && y == a)) seen = true;
    if (!seen) g.edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  return g;
}

// An oriented set separation (A, B) of a graph's vertex set: A and B cover
// the vertices, and no edge runs from A\B to B\A. The order is |A ∩ B|.
struct OrientedSetSep {
  VertexMask a = 0;
  VertexMask b = 0;

  int order() const { return std::popcount(a & b); }
  bool operator==(const OrientedSetSep& o) const { return a == o.a && b == o.b; }
  bool operator<(const OrientedSetSep& o) const { return a != o.a ? a < o.a : b < o.b; }
};

inline bool is_separation(const Graph& g, VertexMask a, VertexMask b) {
  VertexMask all = g.n() == 32 ? ~VertexMask{0} : ((VertexMask{1} << g.n()) - 1);
  if ((a | b) != all) return false;
  VertexMask aonly = a & ~b, bonly = b & ~a;
  for (auto [x, y] : g.edges) {
    bool cross = (((aonly >> x) & 1) && ((bonly >> y) & 1)) ||
                 (((aonly >> y) & 1) && ((bonly >> x) & 1));
    if (cross) return false;
  }
  return true;
}

inline std::string side_label(const Graph& g, VertexMask m) {
  std::string out = "{";
  bool first = true;
  for (int v = 0; v < g.n(); ++v)
    if ((m >> v) & 1) {
      if (!first) out += ",";
      out += g.vertices[v];
      first = false;
    }
  return out + "}";
}

// A separation system together with the set-separation payload of each
// element.
struct GraphSeparationSystem {
  SystemPtr system;
  Graph graph;
  std::vector<OrientedSetSep> sides;  // per element

  std::optional<Elem> find_sides(VertexMask a, VertexMask b) const {
    for (size_t i = 0; i < sides.size(); ++i)
      if (sides[i].a == a && sides[i].b == b) return static_cast<Elem>(i);
    return std::nullopt;
  }
  int order_of(Elem x) const { return sides[x].order(); }
};

// All oriented separations of G of order < k, as a validated separation
// system: involution (A,B) -> (B,A), order (A,B) <= (C,D) iff A ⊆ C and
// B ⊇ D.
inline GraphSeparationSystem enumerate_separations(const Graph& g, int k) {
  if (k < 1) throw BadParams("order bound must be at least 1");
  if (g.n() > 12) throw TooLarge("separation enumeration limited to 12 vertices");

  GraphSeparationSystem out;
  out.graph = g;
  // Vertex assignment: 0 = A only, 1 = B only, 2 = both.
  uint64_t total = 1;
  for (int v = 0; v < g.n(); ++v) total *= 3;
  for (uint64_t code = 0; code < total; ++code) {
    VertexMask a = 0, b = 0;
    uint64_t c = code;
    for (int v = 0; v < g.n(); ++v, c /= 3) {
      int d = static_cast<int>(c % 3);
      if (d == 0 || d == 2) a |= VertexMask{1} << v;
      if (d == 1 || d == 2) b |= VertexMask{1} << v;
    }
    OrientedSetSep s{a, b};
    if (s.order() >= k) continue;
    if (!is_separation(g, a, b)) continue;
    out.sides.push_back(s);
  }
  std::sort(out.sides.begin(), out.sides.end());

  const int n = static_cast<int>(out.sides.size());
  std::vector<std::string> labels;
  std::vector<Elem> inv(n);
  std::map<std::pair<VertexMask, VertexMask>, Elem> where;
  for (int i = 0; i < n; ++i) where[{out.sides[i].a, out.sides[i].b}] = i;
  for (int i = 0; i < n; ++i) {
    labels.push_back(side_label(g, out.sides[i].a) + "|" + side_label(g, out.sides[i].b));
    inv[i] = where.at({out.sides[i].b, out.sides[i].a});
  }
  Relation rel(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if ((out.sides[i].a & ~out.sides[j].a) == 0 && (out.sides[j].b & ~out.sides[i].b) == 0)
        rel.set(i, j);
  out.system = make_system(
      SeparationSystem::from_closed_relation(std::move(labels), std::move(inv), std::move(rel)));
  return out;
}

// (A,B) restricted to a vertex subset p.
inline OrientedSetSep restrict_separation(const OrientedSetSep& s, VertexMask p) {
  return {s.a & p, s.b & p};
}

// The inverse system of the order-<k separation systems of the induced
// subgraphs G[p] over a family of vertex subsets directed by inclusion,
// with restriction as bonding maps.
struct RestrictionSystem {
  InverseSystem inverse_system;
  std::vector<GraphSeparationSystem> level_payload;  // aligned with poset points
};

inline RestrictionSystem build_restriction_system(const Graph& g, int k,
                                                  std::vector<VertexMask> subsets) {
  if (subsets.empty()) throw NotAChain("empty subset family");
  for (size_t i = 0; i < subsets.size(); ++i)
    for (size_t j = 0; j < subsets.size(); ++j)
      if (i != j && subsets[i] == subsets[j]) throw NotAChain("duplicate subset");
  // Directed under inclusion; a chain always is.
  for (size_t i = 0; i < subsets.size(); ++i)
    for (size_t j = 0; j < subsets.size(); ++j) {
      bool bounded = false;
      for (size_t r = 0; r < subsets.size() && !bounded; ++r)
        if ((subsets[i] & ~subsets[r]) == 0 && (subsets[j] & ~subsets[r]) == 0) bounded = true;
      if (!bounded) throw NotAChain("subset family is not directed by inclusion");
    }

  RestrictionSystem out;
  std::vector<std::string> plabels;
  std::vector<std::pair<Point, Point>> pgens;
  for (size_t i = 0; i < subsets.size(); ++i) {
    plabels.push_back(side_label(g, subsets[i]));
    for (size_t j = 0; j < subsets.size(); ++j)
      if (i != j && (subsets[i] & ~subsets[j]) == 0)
        pgens.emplace_back(static_cast<Point>(i), static_cast<Point>(j));
  }
  auto poset = DirectedPoset::from_generators(plabels, pgens);

  std::vector<SystemPtr> levels;
  for (VertexMask p : subsets) {
    // Build on the induced subgraph but keep global vertex indexing.
    Graph sub = g;
    sub.edges.clear();
    for (auto [x, y] : g.edges)
      if (((p >> x) & 1) && ((p >> y) & 1)) sub.edges.emplace_back(x, y);
    GraphSeparationSystem level;
    level.graph = sub;
    uint64_t total = 1;
    if (g.n() > 12) throw TooLarge("separation enumeration limited to 12 vertices");
    for (int v = 0; v < g.n(); ++v) total *= 3;
    for (uint64_t code = 0; code < total; ++code) {
      VertexMask a = 0, b = 0;
      uint64_t c = code;
      bool outside = false;
      for (int v = 0; v < g.n(); ++v, c /= 3) {
        int d = static_cast<int>(c % 3);
        if (!((p >> v) & 1)) {
          if (d != 1) outside = true;  // canonical: vertices outside p sit nowhere
          continue;
        }
        if (d == 0 || d == 2) a |= VertexMask{1} << v;
        if (d == 1 || d == 2) b |= VertexMask{1} << v;
      }
      if (outside) continue;
      b &= p;
      OrientedSetSep s{a, b};
      if (s.order() >= k) continue;
      VertexMask aonly = a & ~b, bonly = b & ~a;
      bool cross = false;
      for (auto [x, y] : sub.edges) {
        if ((((aonly >> x) & 1) && ((bonly >> y) & 1)) ||
            (((aonly >> y) & 1) && ((bonly >> x) & 1)))
          cross = true;
      }
      if ((a | b) != p || cross) continue;
      level.sides.push_back(s);
    }
    std::sort(level.sides.begin(), level.sides.end());
    const int n = static_cast<int>(level.sides.size());
    std::vector<std::string> labels;
    std::vector<Elem> inv(n);
    std::map<std::pair<VertexMask, VertexMask>, Elem> where;
    for (int i = 0; i < n; ++i) where[{level.sides[i].a, level.sides[i].b}] = i;
    for (int i = 0; i < n; ++i) {
      labels.push_back(side_label(g, level.sides[i].a) + "|" + side_label(g, level.sides[i].b));
      inv[i] = where.at({level.sides[i].b, level.sides[i].a});
    }
    Relation rel(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if ((level.sides[i].a & ~level.sides[j].a) == 0 &&
            (level.sides[j].b & ~level.sides[i].b) == 0)
          rel.set(i, j);
    level.system = make_system(
        SeparationSystem::from_closed_relation(std::move(labels), std::move(inv), std::move(rel)));
    levels.push_back(level.system);
    out.level_payload.push_back(std::move(level));
  }

  InverseSystem::BondMap bonds;
  for (size_t qi = 0; qi < subsets.size(); ++qi)
    for (size_t pi = 0; pi < subsets.size(); ++pi) {
      if (qi == pi || (subsets[pi] & ~subsets[qi]) != 0 || subsets[pi] == subsets[qi]) continue;
      std::vector<Elem> map(out.level_payload[qi].sides.size());
      for (size_t x = 0; x < map.size(); ++x) {
        auto restricted = restrict_separation(out.level_payload[qi].sides[x], subsets[pi]);
        auto target = out.level_payload[pi].find_sides(restricted.a, restricted.b);
        if (!target)
          throw InternalError("restriction of a separation is not a separation downstairs");
        map[x] = *target;
      }
      bonds[{static_cast<Point>(qi), static_cast<Point>(pi)}] = std::move(map);
    }

  out.inverse_system = InverseSystem::build(std::move(poset), std::move(levels), std::move(bonds));
  return out;
}

}  // namespace sepsys
