#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "sepsys/inverse_system.hpp"
#include "sepsys/orientations.hpp"

namespace sepsys::testkit {

// splitmix64: portable and deterministic; identical seeds reproduce
// instances byte for byte.
class Rng {
public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n).
  uint64_t below(uint64_t n) { return n ? next() % n : 0; }

private:
  uint64_t state_;
};

struct Tree {
  int n = 0;  // vertices 0..n-1
  std::vector<std::pair<int, int>> edges;
};

// Uniform random labeled tree via a random Pruefer sequence.
inline Tree random_tree(Rng& rng, int n_edges) {
  if (n_edges < 1 || n_edges > 12) throw BadParams("n_edges must be in [1, 12]");
  const int n = n_edges + 1;
  Tree t;
  t.n = n;
  if (n == 2) {
    t.edges = {{0, 1}};
    return t;
  }
  std::vector<int> pruefer(n - 2);
  for (int& v : pruefer) v = static_cast<int>(rng.below(n));
  std::vector<int> degree(n, 1);
  for (int v : pruefer) ++degree[v];
  std::vector<char> used(n, 0);
  for (int v : pruefer) {
    int leaf = -1;
    for (int u = 0; u < n && leaf < 0; ++u)
      if (degree[u] == 1 && !used[u]) leaf = u;
    t.edges.emplace_back(leaf, v);
    used[leaf] = 1;
    --degree[v];
  }
  int a = -1, b = -1;
  for (int u = 0; u < n; ++u)
    if (degree[u] == 1 && !used[u]) (a < 0 ? a : b) = u;
  t.edges.emplace_back(a, b);
  return t;
}

namespace detail {

// Vertex set of the component of T - e containing `start`.
inline std::vector<char> side_of(const Tree& t, size_t e, int start) {
  std::vector<char> in(t.n, 0);
  in[start] = 1;
  std::vector<int> stack{start};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (size_t i = 0; i < t.edges.size(); ++i) {
      if (i == e) continue;
      auto [a, b] = t.edges[i];
      int other = -1;
      if (a == v) other = b;
      if (b == v) other = a;
      if (other >= 0 && !in[other]) {
        in[other] = 1;
        stack.push_back(other);
      }
    }
  }
  return in;
}

inline bool subset(const std::vector<char>& a, const std::vector<char>& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] && !b[i]) return false;
  return true;
}

}  // namespace detail

// The edge tree set of T. Element 2i is edge i oriented towards its second
// endpoint ("ei+"), element 2i+1 the inverse ("ei-"). The order is the
// usual one: (A1,B1) <= (A2,B2) iff A1 is contained in A2 and B1 contains
// B2, with A the tail-side component and B the head-side component.
inline SeparationSystem edge_tree_set(const Tree& t) {
  const int m = static_cast<int>(t.edges.size());
  std::vector<std::string> labels;
  std::vector<Elem> inv;
  std::vector<std::vector<char>> head(2 * m);
  for (int i = 0; i < m; ++i) {
    labels.push_back("e" + std::to_string(i + 1) + "+");
    labels.push_back("e" + std::to_string(i + 1) + "-");
    inv.push_back(2 * i + 1);
    inv.push_back(2 * i);
    head[2 * i] = detail::side_of(t, i, t.edges[i].second);
    head[2 * i + 1] = detail::side_of(t, i, t.edges[i].first);
  }
  Relation rel(2 * m);
  for (int x = 0; x < 2 * m; ++x)
    for (int y = 0; y < 2 * m; ++y)
      if (detail::subset(head[x ^ 1], head[y ^ 1]) && detail::subset(head[y], head[x]))
        rel.set(x, y);
  return SeparationSystem::from_closed_relation(std::move(labels), std::move(inv),
                                                std::move(rel));
}

// The star of edges at vertex v, all oriented towards v.
inline ElemSet node_star(const Tree& t, int v) {
  ElemSet out;
  for (size_t i = 0; i < t.edges.size(); ++i) {
    if (t.edges[i].second == v) out.push_back(static_cast<Elem>(2 * i));
    if (t.edges[i].first == v) out.push_back(static_cast<Elem>(2 * i + 1));
  }
  return normalized(std::move(out));
}

inline std::vector<ElemSet> node_stars(const Tree& t) {
  std::vector<ElemSet> out;
  for (int v = 0; v < t.n; ++v) out.push_back(node_star(t, v));
  return out;
}

struct TreeSetOptions {
  int planted_trivial = 0;  // extra separations strictly below both orientations of an edge
};

struct RandomTreeSet {
  Tree tree;
  SeparationSystem system;
  ElemSet planted;  // the planted trivial orientations
};

inline RandomTreeSet random_tree_set(uint64_t seed, int n_edges, TreeSetOptions opt = {}) {
  Rng rng(seed);
  RandomTreeSet out;
  out.tree = random_tree(rng, n_edges);
  if (opt.planted_trivial == 0) {
    out.system = edge_tree_set(out.tree);
    return out;
  }
  SeparationSystem base = edge_tree_set(out.tree);
  std::vector<std::string> labels = base.labels();
  std::vector<Elem> inv = base.involution();
  std::vector<std::pair<Elem, Elem>> gens;
  for (Elem x = 0; x < base.size(); ++x)
    for (Elem y = 0; y < base.size(); ++y)
      if (x != y && base.leq(x, y)) gens.emplace_back(x, y);
  for (int j = 0; j < opt.planted_trivial; ++j) {
    Elem witness = static_cast<Elem>(rng.below(base.size()));
    Elem fwd = static_cast<Elem>(labels.size());
    labels.push_back("t" + std::to_string(j + 1) + "+");
    labels.push_back("t" + std::to_string(j + 1) + "-");
    inv.push_back(fwd + 1);
    inv.push_back(fwd);
    gens.emplace_back(fwd, witness);
    gens.emplace_back(fwd, base.inv(witness));
    out.planted.push_back(fwd);
  }
  out.system = SeparationSystem::from_generators(std::move(labels), std::move(inv), gens);
  return out;
}

namespace detail {

struct Contraction {
  Tree tree;                  // contracted tree
  std::vector<int> edge_map;  // old edge -> new edge, -1 for the contracted one
};

inline Contraction contract_edge(const Tree& t, size_t e) {
  auto [cu, cv] = t.edges[e];
  Contraction out;
  out.tree.n = t.n - 1;
  std::vector<int> vmap(t.n);
  int next = 0;
  for (int v = 0; v < t.n; ++v) vmap[v] = (v == cv) ? -1 : next++;
  if (vmap[cv] == -1) vmap[cv] = vmap[cu];
  out.edge_map.assign(t.edges.size(), -1);
  for (size_t i = 0; i < t.edges.size(); ++i) {
    if (i == e) continue;
    out.edge_map[i] = static_cast<int>(out.tree.edges.size());
    out.tree.edges.emplace_back(vmap[t.edges[i].first], vmap[t.edges[i].second]);
  }
  return out;
}

// A bonding hom for a single edge contraction: surviving edges keep their
// orientation, the contracted edge gets the first image (randomly offset)
// that yields a valid homomorphism.
inline std::optional<std::vector<Elem>> contraction_bond(const SeparationSystem& fine,
                                                         const SeparationSystem& coarse,
                                                         const Contraction& c, size_t e,
                                                         Rng& rng) {
  std::vector<Elem> map(fine.size(), kNoElem);
  for (size_t i = 0; i < c.edge_map.size(); ++i) {
    if (c.edge_map[i] < 0) continue;
    map[2 * i] = 2 * c.edge_map[i];
    map[2 * i + 1] = 2 * c.edge_map[i] + 1;
  }
  const Elem fwd = static_cast<Elem>(2 * e);
  const int n = coarse.size();
  const int offset = n ? static_cast<int>(rng.below(n)) : 0;
  for (int k = 0; k < n; ++k) {
    Elem g = static_cast<Elem>((k + offset) % n);
    map[fwd] = g;
    map[fwd + 1] = coarse.inv(g);
    bool ok = true;
    for (Elem x = 0; x < fine.size() && ok; ++x)
      for (Elem y = 0; y < fine.size() && ok; ++y)
        if (fine.leq(x, y) && !coarse.leq(map[x], map[y])) ok = false;
    if (ok) return map;
  }
  return std::nullopt;
}

}  // namespace detail

// A chain of trees under random edge contractions, with the induced edge
// tree set epimorphisms as bonds. Level `levels` (the top) is the full
// tree; each step towards the bottom contracts a random set of edges.
// With n_edges = 0 every level is the empty system of a one-node tree.
inline InverseSystem random_contraction_chain(uint64_t seed, int levels, int n_edges) {
  if (levels < 1 || levels > 5) throw BadParams("levels must be in [1, 5]");
  if (n_edges < 0 || n_edges > 12) throw BadParams("n_edges must be in [0, 12]");
  Rng rng(seed);

  std::vector<Tree> trees(levels);
  if (n_edges == 0) {
    for (auto& t : trees) t.n = 1;
  } else {
    trees[levels - 1] = random_tree(rng, n_edges);
  }

  std::vector<SystemPtr> systems(levels);
  systems[levels - 1] = make_system(edge_tree_set(trees[levels - 1]));
  std::vector<std::vector<Elem>> step_bonds(std::max(0, levels - 1));

  for (int i = levels - 2; i >= 0; --i) {
    Tree cur = trees[i + 1];
    SeparationSystem cur_sys = *systems[i + 1];
    std::vector<Elem> bond(cur_sys.size());
    std::iota(bond.begin(), bond.end(), 0);
    const int want = cur.edges.empty() ? 0 : static_cast<int>(rng.below(cur.edges.size() + 1));
    for (int step = 0; step < want && !cur.edges.empty(); ++step) {
      size_t e = rng.below(cur.edges.size());
      auto contraction = detail::contract_edge(cur, e);
      SeparationSystem next_sys = edge_tree_set(contraction.tree);
      auto step_map = detail::contraction_bond(cur_sys, next_sys, contraction, e, rng);
      if (!step_map) continue;  // keep the level as is
      for (Elem& x : bond) x = (*step_map)[x];
      cur = contraction.tree;
      cur_sys = std::move(next_sys);
    }
    trees[i] = cur;
    systems[i] = make_system(cur_sys);
    step_bonds[i] = std::move(bond);
  }
  return InverseSystem::chain(std::move(systems), std::move(step_bonds));
}

// Random abstract separation systems: n separations with random order
// generators, retried until the closure is antisymmetric. The first
// `degenerate_seps` separations are degenerate (a single self-inverse
// orientation each).
inline SeparationSystem random_system(uint64_t seed, int n_seps, int max_generators = -1,
                                      int degenerate_seps = 0) {
  if (n_seps < 1 || n_seps > 16) throw BadParams("n_seps must be in [1, 16]");
  if (degenerate_seps < 0 || degenerate_seps > n_seps) throw BadParams("bad degenerate count");
  Rng rng(seed);

  auto make_table = [&](std::vector<std::string>& labels, std::vector<Elem>& inv) {
    for (int i = 0; i < degenerate_seps; ++i) {
      labels.push_back("d" + std::to_string(i + 1));
      inv.push_back(static_cast<Elem>(labels.size()) - 1);
    }
    for (int i = degenerate_seps; i < n_seps; ++i) {
      labels.push_back("s" + std::to_string(i + 1) + "+");
      labels.push_back("s" + std::to_string(i + 1) + "-");
      inv.push_back(static_cast<Elem>(labels.size()) - 1);
      inv.push_back(static_cast<Elem>(labels.size()) - 2);
    }
  };

  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<std::string> labels;
    std::vector<Elem> inv;
    make_table(labels, inv);
    const int n = static_cast<int>(labels.size());
    const int gens =
        max_generators >= 0 ? max_generators : static_cast<int>(rng.below(2 * n_seps + 1));
    std::vector<std::pair<Elem, Elem>> g;
    for (int i = 0; i < gens; ++i) {
      Elem a = static_cast<Elem>(rng.below(n));
      Elem b = static_cast<Elem>(rng.below(n));
      if (a == b || std::min(a, inv[a]) == std::min(b, inv[b])) continue;
      g.emplace_back(a, b);
    }
    try {
      return SeparationSystem::from_generators(std::move(labels), std::move(inv), g);
    } catch (const CycleError&) {
      continue;
    }
  }
  // Generator-free fallback; always valid.
  std::vector<std::string> labels;
  std::vector<Elem> inv;
  make_table(labels, inv);
  return SeparationSystem::from_generators(std::move(labels), std::move(inv), {});
}

// ---------------------------------------------------------------------------
// Brute-force oracles. Deliberately naive full enumerations working off the
// raw order relation only; they share no algorithmic code with the library
// operations they are used to check.

inline std::vector<ElemSet> oracle_consistent_orientations(const SeparationSystem& S) {
  std::vector<Elem> seps;
  for (Elem x = 0; x < S.size(); ++x)
    if (S.sep(x) == x) seps.push_back(x);
  if (seps.size() > 20) throw TooLarge("oracle limited to 20 separations");

  std::vector<ElemSet> out;
  const uint64_t total = uint64_t{1} << seps.size();
  for (uint64_t mask = 0; mask < total; ++mask) {
    ElemSet O;
    bool valid = true;
    for (size_t i = 0; i < seps.size(); ++i) {
      Elem x = (mask >> i) & 1 ? S.inv(seps[i]) : seps[i];
      if (S.degenerate(seps[i]) && ((mask >> i) & 1)) {
        valid = false;  // degenerate has a single orientation; skip duplicates
        break;
      }
      O.push_back(x);
    }
    if (!valid) continue;
    bool consistent = true;
    for (Elem x : O)
      for (Elem y : O) {
        if (std::min(x, S.inv(x)) == std::min(y, S.inv(y))) continue;
        if (S.leq(S.inv(x), y)) consistent = false;
      }
    if (consistent) out.push_back(normalized(O));
  }
  return out;
}

inline std::vector<ElemSet> oracle_splitting(const SeparationSystem& S) {
  std::vector<ElemSet> out;
  for (const ElemSet& O : oracle_consistent_orientations(S)) {
    ElemSet sigma;
    for (Elem x : O) {
      bool maximal = true;
      for (Elem y : O)
        if (x != y && S.leq(x, y)) maximal = false;
      if (maximal) sigma.push_back(x);
    }
    bool covered = true;
    for (Elem x : O) {
      bool below = false;
      for (Elem s : sigma)
        if (S.leq(x, s)) below = true;
      if (!below) covered = false;
    }
    if (!covered) continue;
    if (std::find(out.begin(), out.end(), sigma) == out.end()) out.push_back(sigma);
  }
  return out;
}

struct OracleExtension {
  bool extendable = false;              // clause (i)
  int keep_max_orientations = 0;        // clause (ii): count with keep_max maximal
  ElemSet first_orientation;
};

inline OracleExtension oracle_extension(const SeparationSystem& S, const ElemSet& P,
                                        std::optional<Elem> keep_max = std::nullopt) {
  OracleExtension res;
  for (const ElemSet& O : oracle_consistent_orientations(S)) {
    bool extends = true;
    for (Elem x : P)
      if (!contains(O, x)) extends = false;
    if (!extends) continue;
    if (!res.extendable) {
      res.extendable = true;
      res.first_orientation = O;
    }
    if (keep_max) {
      bool maximal = true;
      for (Elem y : O)
        if (*keep_max != y && S.leq(*keep_max, y)) maximal = false;
      if (maximal) ++res.keep_max_orientations;
    }
  }
  return res;
}

// Exhaustive search for a closed nested subset of the limit over F, where
// sigma is "in F" per the supplied membership test on limit subsets.
template <typename MemberFn>
inline std::optional<ElemSet> oracle_nested_over_F(const InverseSystem& IS, MemberFn in_F) {
  const SeparationSystem& L = IS.limit();
  if (L.size() > 12) throw TooLarge("oracle limited to 12 oriented elements");
  const uint64_t total = uint64_t{1} << L.size();
  for (uint64_t mask = 0; mask < total; ++mask) {
    ElemSet tau;
    for (Elem x = 0; x < L.size(); ++x)
      if ((mask >> x) & 1) tau.push_back(x);

    bool nested = true;
    for (Elem x : tau)
      for (Elem y : tau) {
        if (std::min(x, L.inv(x)) == std::min(y, L.inv(y))) continue;
        bool cmp = L.leq(x, y) || L.leq(y, x) || L.leq(x, L.inv(y)) || L.leq(L.inv(y), x) ||
                   L.leq(L.inv(x), y) || L.leq(y, L.inv(x)) || L.leq(L.inv(x), L.inv(y)) ||
                   L.leq(L.inv(y), L.inv(x));
        if (!cmp) nested = false;
      }
    if (!nested) continue;

    // Closed: every limit element whose projections all lie in tau's
    // projections must already be in tau.
    bool closed = true;
    for (Elem x = 0; x < L.size() && closed; ++x) {
      if (contains(tau, x)) continue;
      bool shadowed = true;
      for (Point p = 0; p < IS.points() && shadowed; ++p) {
        bool hit = false;
        for (Elem t : tau)
          if (IS.project(t, p) == IS.project(x, p)) hit = true;
        if (!hit) shadowed = false;
      }
      if (shadowed) closed = false;
    }
    if (!closed) continue;

    // Over F: every splitting star of tau (as its own separation system,
    // i.e. tau closed under inverses) lies in F.
    ElemSet universe = tau;
    for (Elem x : tau) universe.push_back(L.inv(x));
    universe = normalized(std::move(universe));
    std::vector<Elem> seps;
    for (Elem x : universe)
      if (std::min(x, L.inv(x)) == x) seps.push_back(x);
    bool over = true;
    const uint64_t omax = uint64_t{1} << seps.size();
    for (uint64_t om = 0; om < omax && over; ++om) {
      ElemSet O;
      bool skip = false;
      for (size_t i = 0; i < seps.size(); ++i) {
        Elem x = (om >> i) & 1 ? L.inv(seps[i]) : seps[i];
        if (L.degenerate(seps[i]) && ((om >> i) & 1)) skip = true;
        O.push_back(x);
      }
      if (skip) continue;
      bool consistent = true;
      for (Elem x : O)
        for (Elem y : O) {
          if (std::min(x, L.inv(x)) == std::min(y, L.inv(y))) continue;
          if (L.leq(L.inv(x), y)) consistent = false;
        }
      if (!consistent) continue;
      ElemSet sigma;
      for (Elem x : O) {
        bool maximal = true;
        for (Elem y : O)
          if (x != y && L.leq(x, y)) maximal = false;
        if (maximal) sigma.push_back(x);
      }
      bool covered = true;
      for (Elem x : O) {
        bool below = false;
        for (Elem s : sigma)
          if (L.leq(x, s)) below = true;
        if (!below) covered = false;
      }
      if (!covered) continue;
      if (!in_F(normalized(sigma))) over = false;
    }
    if (over) return tau;
  }
  return std::nullopt;
}

}  // namespace sepsys::testkit
