#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "sepsys/graphsep.hpp"
#include "sepsys/normality.hpp"

namespace sepsys::examples {

// ---------------------------------------------------------------------------
// trivialproj: level p is a proper star sigma_p with p elements plus one
// separation s whose forward orientation is trivial with exactly one
// witness t in sigma_p. The bond merges t into s and shifts the star.
//
// Level p elements: s, t, r1..r_{p-1}; sigma_p = {t+, r1+, .., r_{p-1}+}.
// Bond p+1 -> p: s -> s, t -> s, r_j -> r_j (j < p), r_p -> t.

inline SystemPtr trivialproj_level(int p) {
  std::vector<std::string> names{"s", "t"};
  for (int j = 1; j < p; ++j) names.push_back("r" + std::to_string(j));
  std::vector<std::string> labels;
  std::vector<Elem> inv;
  for (const auto& n : names) {
    labels.push_back(n + "+");
    labels.push_back(n + "-");
    inv.push_back(static_cast<Elem>(labels.size()) - 1);
    inv.push_back(static_cast<Elem>(labels.size()) - 2);
  }
  auto fwd = [&](int i) { return 2 * i; };
  std::vector<std::pair<Elem, Elem>> gens;
  // sigma_p is a star: u+ <= v- for distinct members (indices 1..p).
  for (int u = 1; u <= p; ++u)
    for (int v = 1; v <= p; ++v)
      if (u != v) gens.emplace_back(fwd(u), fwd(v) + 1);
  // s+ is trivial with witness t.
  gens.emplace_back(fwd(0), fwd(1));
  gens.emplace_back(fwd(0), fwd(1) + 1);
  return make_system(SeparationSystem::from_generators(std::move(labels), std::move(inv), gens));
}

inline std::vector<Elem> trivialproj_bond(int p) {
  auto fine = trivialproj_level(p + 1);
  auto coarse = trivialproj_level(p);
  std::vector<Elem> map(fine->size());
  for (Elem x = 0; x < fine->size(); ++x) {
    std::string lab = fine->label(x);
    std::string base = lab.substr(0, lab.size() - 1);
    char orient = lab.back();
    std::string target;
    if (base == "s" || base == "t")
      target = "s";
    else if (base == "r" + std::to_string(p))
      target = "t";
    else
      target = base;
    map[x] = *coarse->find(target + orient);
  }
  return map;
}

inline SchematicChain trivialproj_chain() {
  SchematicChain c;
  c.name = "trivialproj";
  c.description =
      "level p: proper star with p elements plus a separation s whose "
      "forward orientation is trivial with unique witness t; bonds merge t into s";
  c.max_depth = 30;
  c.level_builder = trivialproj_level;
  c.bond_builder = trivialproj_bond;
  c.star_of_level = [](const SeparationSystem& S) {
    ElemSet out;
    for (Elem x = 0; x < S.size(); ++x) {
      const std::string& lab = S.label(x);
      if (lab.back() == '+' && lab != "s+") out.push_back(x);
    }
    return out;
  };
  return c;
}

// ---------------------------------------------------------------------------
// splittingnotclosed: level i carries the stage parameter p = i + 2.
// sigma_p is a star with p elements {s, r, a3..ap}; s+ <= s- (small), and
// r+ lies strictly below both orientations of every other member. The
// bond merges the newest a into s.

inline SystemPtr splittingnotclosed_level(int i) {
  const int p = i + 2;
  std::vector<std::string> names{"s", "r"};
  for (int j = 3; j <= p; ++j) names.push_back("a" + std::to_string(j));
  std::vector<std::string> labels;
  std::vector<Elem> inv;
  for (const auto& n : names) {
    labels.push_back(n + "+");
    labels.push_back(n + "-");
    inv.push_back(static_cast<Elem>(labels.size()) - 1);
    inv.push_back(static_cast<Elem>(labels.size()) - 2);
  }
  auto fwd = [&](int idx) { return 2 * idx; };
  const int m = static_cast<int>(names.size());
  std::vector<std::pair<Elem, Elem>> gens;
  for (int u = 0; u < m; ++u)
    for (int v = 0; v < m; ++v)
      if (u != v) gens.emplace_back(fwd(u), fwd(v) + 1);  // star
  gens.emplace_back(fwd(0), fwd(0) + 1);                  // s+ <= s-
  for (int v = 0; v < m; ++v)
    if (v != 1) gens.emplace_back(fwd(1), fwd(v));        // r+ below everything
  return make_system(SeparationSystem::from_generators(std::move(labels), std::move(inv), gens));
}

inline std::vector<Elem> splittingnotclosed_bond(int i) {
  const int p = i + 2;
  auto fine = splittingnotclosed_level(i + 1);
  auto coarse = splittingnotclosed_level(i);
  std::vector<Elem> map(fine->size());
  for (Elem x = 0; x < fine->size(); ++x) {
    std::string lab = fine->label(x);
    std::string base = lab.substr(0, lab.size() - 1);
    char orient = lab.back();
    std::string target = (base == "a" + std::to_string(p + 1)) ? "s" : base;
    map[x] = *coarse->find(target + orient);
  }
  return map;
}

inline SchematicChain splittingnotclosed_chain() {
  SchematicChain c;
  c.name = "splittingnotclosed";
  c.description =
      "level i is the stage-p system with p = i+2: a star {s, r, a3..ap} with s "
      "small and r trivial below everything; the newest a merges into s";
  c.max_depth = 30;
  c.level_builder = splittingnotclosed_level;
  c.bond_builder = splittingnotclosed_bond;
  c.star_of_level = [](const SeparationSystem& S) {
    ElemSet out;
    for (Elem x = 0; x < S.size(); ++x)
      if (S.label(x).back() == '+') out.push_back(x);
    return out;
  };
  return c;
}

// ---------------------------------------------------------------------------
// splittingnotclosed2: the countable star graph with centre z and the
// bespoke order. Level i restricts to q_i = {z, x, y1..yi}. Elements per
// level: z = ({z}, q), a = ({x,z}, q minus x), yj = ({yj,z}, q minus yj),
// plus inverses; the order is inclusion plus the extra pair a+ <= a-.

namespace detail {

// The canonical separations of the countable star graph, represented over
// the working vertex set W = {z, x, y1..y_m}: ({z},W), ({x,z},W\x) and
// ({y_j,z},W\y_j), plus inverses. Bit 0 = z, bit 1 = x, bit 2+j = y_{j+1}.
struct Star2Element {
  VertexMask a, b;
  std::string name;  // canonical name of the forward orientation
};

inline std::vector<Star2Element> star2_canonical(int m) {
  const VertexMask w = (VertexMask{1} << (2 + m)) - 1;
  std::vector<Star2Element> out;
  out.push_back({VertexMask{1}, w, "z"});
  out.push_back({VertexMask{0b11}, w & ~VertexMask{0b10}, "a"});
  for (int j = 1; j <= m; ++j) {
    VertexMask yj = VertexMask{1} << (1 + j);
    out.push_back({VertexMask{1} | yj, w & ~yj, "y" + std::to_string(j)});
  }
  return out;
}

// u <= v in the ambient system: sidewise inclusion, or the one bespoke pair
// ({x,z},W\x) <= (W\x,{x,z}).
inline bool star2_leq(const std::pair<VertexMask, VertexMask>& u,
                      const std::pair<VertexMask, VertexMask>& v, VertexMask w) {
  if ((u.first & ~v.first) == 0 && (v.second & ~u.second) == 0) return true;
  VertexMask ax = VertexMask{0b11}, bx = w & ~VertexMask{0b10};
  return u.first == ax && u.second == bx && v.first == bx && v.second == ax;
}

}  // namespace detail

// Level i: the restrictions of the ambient system to q_i = {z, x, y1..yi},
// with (A,B) <= (C,D) iff some preimages are related upstairs. Colliding
// restrictions are identified (at the smallest
// level ({x,z},q\x) coincides with the inverse of the y1 separation).
// Elements are named after the canonical form of smallest index that
// restricts to them.
inline GraphSeparationSystem splittingnotclosed2_payload(int i) {
  const int extra = 2;  // beyond-horizon representatives; they collapse onto z
  const int m = i + extra;
  const VertexMask w = (VertexMask{1} << (2 + m)) - 1;
  const VertexMask q = (VertexMask{1} << (2 + i)) - 1;
  auto canon = detail::star2_canonical(m);

  std::vector<std::pair<VertexMask, VertexMask>> virt;  // oriented, over W
  for (const auto& c : canon) {
    virt.emplace_back(c.a, c.b);
    virt.emplace_back(c.b, c.a);
  }

  // Distinct restricted pairs, first-seen order; remember a canonical name.
  std::vector<std::pair<VertexMask, VertexMask>> levels;
  std::vector<std::string> names;
  std::vector<std::vector<int>> preimages;  // level elem -> virt indices
  for (size_t vi = 0; vi < virt.size(); ++vi) {
    std::pair<VertexMask, VertexMask> r{virt[vi].first & q, virt[vi].second & q};
    auto it = std::find(levels.begin(), levels.end(), r);
    if (it == levels.end()) {
      levels.push_back(r);
      const auto& c = canon[vi / 2];
      names.push_back(c.name + (vi % 2 ? "-" : "+"));
      preimages.push_back({static_cast<int>(vi)});
    } else {
      preimages[it - levels.begin()].push_back(static_cast<int>(vi));
    }
  }

  const int n = static_cast<int>(levels.size());
  std::vector<Elem> inv(n);
  for (int e = 0; e < n; ++e) {
    std::pair<VertexMask, VertexMask> flipped{levels[e].second, levels[e].first};
    inv[e] = static_cast<Elem>(std::find(levels.begin(), levels.end(), flipped) -
                               levels.begin());
  }
  Relation rel(n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      for (int pu : preimages[u]) {
        bool related = false;
        for (int pv : preimages[v])
          if (detail::star2_leq(virt[pu], virt[pv], w)) related = true;
        if (related) {
          rel.set(u, v);
          break;
        }
      }
  rel.close_transitively();

  GraphSeparationSystem out;
  out.graph = Graph::star(i + 1);  // informational only
  for (int e = 0; e < n; ++e) out.sides.push_back({levels[e].first, levels[e].second});
  out.system =
      make_system(SeparationSystem::from_closed_relation(names, std::move(inv), std::move(rel)));
  return out;
}

inline SystemPtr splittingnotclosed2_level(int i) {
  return splittingnotclosed2_payload(i).system;
}

inline std::vector<Elem> splittingnotclosed2_bond(int i) {
  auto fine = splittingnotclosed2_payload(i + 1);
  auto coarse = splittingnotclosed2_payload(i);
  const VertexMask q = (VertexMask{1} << (2 + i)) - 1;
  std::vector<Elem> map(fine.system->size());
  for (Elem x = 0; x < fine.system->size(); ++x) {
    auto r = restrict_separation(fine.sides[x], q);
    auto target = coarse.find_sides(r.a, r.b);
    if (!target) throw InternalError("restricted pair missing downstairs");
    map[x] = *target;
  }
  return map;
}

inline SchematicChain splittingnotclosed2_chain() {
  SchematicChain c;
  c.name = "splittingnotclosed2";
  c.description =
      "set separations of a countable star with centre z, restricted to "
      "finite subsets containing x and z; inclusion order plus one extra "
      "comparability making ({x,z}, V-x) small";
  c.max_depth = 30;
  c.level_builder = splittingnotclosed2_level;
  c.bond_builder = splittingnotclosed2_bond;
  c.star_of_level = [](const SeparationSystem& S) {
    ElemSet out;
    for (Elem x = 0; x < S.size(); ++x)
      if (S.label(x).back() == '+') out.push_back(x);
    return out;
  };
  return c;
}

// ---------------------------------------------------------------------------
// ray: level i is the order-<k separation system of the path v1..vi, with
// restriction bonds.

inline SystemPtr ray_level(int i, int k) {
  return enumerate_separations(Graph::path(i), k).system;
}

inline std::vector<Elem> ray_bond(int i, int k) {
  auto fine_payload = enumerate_separations(Graph::path(i + 1), k);
  auto coarse_payload = enumerate_separations(Graph::path(i), k);
  const VertexMask p = (VertexMask{1} << i) - 1;
  std::vector<Elem> map(fine_payload.system->size());
  for (Elem x = 0; x < fine_payload.system->size(); ++x) {
    auto r = restrict_separation(fine_payload.sides[x], p);
    auto target = coarse_payload.find_sides(r.a, r.b);
    if (!target) throw InternalError("restriction missing downstairs");
    map[x] = *target;
  }
  return map;
}

inline SchematicChain ray_chain(int k = 2) {
  if (k < 1) throw BadParams("order bound must be positive");
  SchematicChain c;
  c.name = "ray";
  c.description = "order-<" + std::to_string(k) +
                  " separations of growing path prefixes of a ray, with restriction bonds";
  c.max_depth = 12;
  c.level_builder = [k](int i) { return ray_level(i, k); };
  c.bond_builder = [k](int i) { return ray_bond(i, k); };
  return c;
}

// The toward-the-end orientation of the order-<k system of the path
// v1..vn: pick the side containing the last vertex properly; when the last
// vertex sits in the overlap, the end-fragment side is the one contained
// in the other.
inline Orientation ray_toward_end(const GraphSeparationSystem& level, int n_vertices) {
  const VertexMask last = VertexMask{1} << (n_vertices - 1);
  Orientation O;
  for (Elem x = 0; x < level.system->size(); ++x) {
    auto [a, b] = level.sides[x];
    if ((b & ~a) & last) O.push_back(x);
    else if ((a & b & last) && (b & ~a) == 0) O.push_back(x);
  }
  return normalized(std::move(O));
}

// Projections to the top level of the infinite chain (A_j, B_j) with
// A_j = {v1..vj} and B_j = {vj, vj+1, ...}; beyond the horizon these
// collapse onto (V, ∅).
inline ElemSet ray_tail_chain(const GraphSeparationSystem& level, int n_vertices) {
  const VertexMask full = (VertexMask{1} << n_vertices) - 1;
  ElemSet C;
  for (int j = 1; j <= n_vertices; ++j) {
    VertexMask a = (VertexMask{1} << j) - 1;
    VertexMask b = full & ~((VertexMask{1} << (j - 1)) - 1);
    auto e = level.find_sides(a, b);
    if (!e) throw InternalError("tail chain element missing");
    C.push_back(*e);
  }
  auto top = level.find_sides(full, 0);
  if (!top) throw InternalError("(V, empty) missing");
  C.push_back(*top);
  return normalized(std::move(C));
}

// ---------------------------------------------------------------------------
// inconsistentpair: V = A ∪ B ∪ C ∪ X disjoint; the set separations of V
// project to U = C ∪ X, where the inconsistent pair {s*, s'} collapses.

struct InconsistentPairInstance {
  RestrictionSystem rs;
  Elem s_fwd = kNoElem;       // (X∪A, C∪X∪B), a limit element
  Elem s_prime_fwd = kNoElem; // (C∪X∪A, X∪B)
  Point u_point = 0;          // the U level
  Elem collapsed = kNoElem;   // the common projection (C∪X, X) at U
};

inline InconsistentPairInstance gen_inconsistent_pair(int na = 1, int nb = 1, int nc = 1,
                                                      int nx = 1) {
  if (na < 1 || nb < 1 || nc < 1 || nx < 1) throw BadParams("blocks must be nonempty");
  std::vector<std::string> labels;
  VertexMask A = 0, B = 0, C = 0, X = 0;
  int v = 0;
  for (int i = 0; i < na; ++i, ++v) {
    labels.push_back("a" + std::to_string(i + 1));
    A |= VertexMask{1} << v;
  }
  for (int i = 0; i < nb; ++i, ++v) {
    labels.push_back("b" + std::to_string(i + 1));
    B |= VertexMask{1} << v;
  }
  for (int i = 0; i < nc; ++i, ++v) {
    labels.push_back("c" + std::to_string(i + 1));
    C |= VertexMask{1} << v;
  }
  for (int i = 0; i < nx; ++i, ++v) {
    labels.push_back("x" + std::to_string(i + 1));
    X |= VertexMask{1} << v;
  }
  if (v > 8) throw BadParams("at most 8 vertices in total");
  Graph g = Graph::edgeless(std::move(labels));
  VertexMask full = (VertexMask{1} << v) - 1;
  VertexMask U = C | X;

  InconsistentPairInstance out;
  out.rs = build_restriction_system(g, v + 1, {U, full});
  out.u_point = 0;
  const auto& top = out.rs.level_payload[1];
  out.s_fwd = *top.find_sides(X | A, C | X | B);
  out.s_prime_fwd = *top.find_sides(C | X | A, X | B);
  out.collapsed = *out.rs.level_payload[0].find_sides(C | X, X);
  return out;
}

// ---------------------------------------------------------------------------
// Registry.

inline std::vector<std::string> chain_names() {
  return {"trivialproj", "splittingnotclosed", "splittingnotclosed2", "ray"};
}

inline SchematicChain find_chain(const std::string& name, int k = 2) {
  if (name == "trivialproj") return trivialproj_chain();
  if (name == "splittingnotclosed") return splittingnotclosed_chain();
  if (name == "splittingnotclosed2") return splittingnotclosed2_chain();
  if (name == "ray") return ray_chain(k);
  throw UnknownExample("no registered chain named " + name);
}

}  // namespace sepsys::examples
