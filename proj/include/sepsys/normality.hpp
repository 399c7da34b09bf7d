#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sepsys/profinite.hpp"

namespace sepsys {

// A finitely described rule producing the levels and bonding maps of an
// infinite chain of separation systems. Level indices are 1-based;
// bond_builder(i) maps level i+1 onto level i. Element names are stable
// across levels so that limit representatives can be tracked.
struct SchematicChain {
  std::string name;
  std::string description;
  int max_depth = 64;
  std::function<SystemPtr(int)> level_builder;
  std::function<std::vector<Elem>(int)> bond_builder;
  // The designated star of a level, when the construction carries one
  // (used by the infinite-star evidence and the non-normality witness).
  std::function<ElemSet(const SeparationSystem&)> star_of_level;
};

// Honest semantics for claims about the infinite object: verified up to a
// probe depth, or refuted at a concrete level.
struct DepthVerdict {
  enum class Status { verified, refuted };
  Status status = Status::verified;
  int depth = 0;
  std::optional<int> refuted_at;
  std::string detail;

  bool ok() const { return status == Status::verified; }

  static DepthVerdict verified(int depth, std::string detail = {}) {
    DepthVerdict v;
    v.depth = depth;
    v.detail = std::move(detail);
    return v;
  }
  static DepthVerdict refuted(int depth, int level, std::string detail) {
    DepthVerdict v;
    v.status = Status::refuted;
    v.depth = depth;
    v.refuted_at = level;
    v.detail = std::move(detail);
    return v;
  }
};

// Levels 1..n of the chain as a validated inverse system.
inline InverseSystem truncate(const SchematicChain& chain, int n) {
  if (n < 1 || n > chain.max_depth) throw BadParams("depth out of range for " + chain.name);
  std::vector<SystemPtr> levels;
  std::vector<std::vector<Elem>> bonds;
  for (int i = 1; i <= n; ++i) {
    try {
      levels.push_back(chain.level_builder(i));
    } catch (const Error& e) {
      throw BuilderError(chain.name + " level " + std::to_string(i) + ": " + e.what());
    }
  }
  for (int i = 1; i < n; ++i) {
    try {
      bonds.push_back(chain.bond_builder(i));
    } catch (const Error& e) {
      throw BuilderError(chain.name + " bond " + std::to_string(i) + ": " + e.what());
    }
  }
  return InverseSystem::chain(std::move(levels), std::move(bonds));
}

// The points of a truncation that stand for the approximated levels of the
// infinite chain: everything below the horizon top.
inline std::vector<Point> probes_below_top(const InverseSystem& IS) {
  std::vector<Point> out;
  for (Point p = 0; p < IS.points(); ++p)
    if (p != IS.max_point()) out.push_back(p);
  return out;
}

// Closure of O with the quantifier restricted to the probe points.
inline ElemSet closure_probed(const InverseSystem& IS, const ElemSet& O,
                              const std::vector<Point>& probes) {
  std::vector<ElemSet> op;
  for (Point p : probes) op.push_back(IS.project_set(O, p));
  ElemSet out;
  for (Elem x = 0; x < IS.limit().size(); ++x) {
    bool in = true;
    for (size_t i = 0; i < probes.size() && in; ++i)
      if (!contains(op[i], IS.project(x, probes[i]))) in = false;
    if (in) out.push_back(x);
  }
  return out;
}

// The greatest-element dichotomy: a consistent orientation with a greatest
// element is closed, or its greatest element is co-small but not
// co-trivial and its inverse lies in the closure.
struct GreatestDichotomy {
  enum class Status { closed, cosmall_greatest, gap };
  Status status = Status::closed;
  Elem greatest = kNoElem;
  // Second branch: for each probe p a member of O projecting like inv(m).
  std::map<Point, Elem> inverse_closure_certificate;

  bool closed() const { return status == Status::closed; }
};

inline GreatestDichotomy check_greatest(const InverseSystem& IS, const Orientation& O_in,
                                        std::optional<std::vector<Point>> probes_in =
                                            std::nullopt) {
  const SeparationSystem& L = IS.limit();
  const Orientation O = normalized(O_in);
  if (!is_consistent(L, O)) throw InconsistentInput("O must be consistent");
  std::vector<Point> probes = probes_in ? *probes_in : all_points(IS);

  GreatestDichotomy res;
  for (Elem x : O) {
    bool greatest = true;
    for (Elem y : O)
      if (x != y && !L.leq(y, x)) greatest = false;
    if (greatest) res.greatest = x;
  }
  if (res.greatest == kNoElem) throw NoGreatest("O has no greatest element");

  ElemSet cl = closure_probed(IS, O, probes);
  if (cl == O) {
    res.status = GreatestDichotomy::Status::closed;
    return res;
  }
  Elem m = res.greatest;
  Elem mi = L.inv(m);
  bool second = L.co_small(m) && !is_co_trivial(L, m) && contains(cl, mi);
  if (!second) {
    res.status = GreatestDichotomy::Status::gap;
    return res;
  }
  res.status = GreatestDichotomy::Status::cosmall_greatest;
  for (Point p : probes) {
    for (Elem y : O)
      if (IS.project(y, p) == IS.project(mi, p)) {
        res.inverse_closure_certificate[p] = y;
        break;
      }
  }
  return res;
}

// Orientations splitting at a star of order >= 2 are closed.
struct BoundedSplitClosed {
  bool closed = false;
  ElemSet sigma;
  ElemSet closure_extra;  // nonempty would contradict the lemma
};

inline BoundedSplitClosed check_bounded_split_closed(const InverseSystem& IS,
                                                     const Orientation& O_in,
                                                     std::optional<std::vector<Point>> probes_in =
                                                         std::nullopt) {
  const SeparationSystem& L = IS.limit();
  const Orientation O = normalized(O_in);
  if (!is_consistent(L, O)) throw PreconditionFailed("O must be consistent");
  auto sigma = splits_at(L, O);
  if (!sigma) throw PreconditionFailed("O does not split");
  if (sigma->size() < 2) throw PreconditionFailed("splitting star must have order >= 2");

  std::vector<Point> probes = probes_in ? *probes_in : all_points(IS);
  BoundedSplitClosed res;
  res.sigma = *sigma;
  ElemSet cl = closure_probed(IS, O, probes);
  res.closed = (cl == O);
  for (Elem x : cl)
    if (!contains(O, x)) res.closure_extra.push_back(x);
  return res;
}

// ---------------------------------------------------------------------------
// Normality certificates for schematic chains.

struct NormalityCertificate {
  enum class Verdict { normal_evidence, abnormal_witness };
  Verdict verdict = Verdict::normal_evidence;
  int depth = 0;

  // Normal evidence: every small element of the limit representation is
  // trivial (the regular-tree-set criterion), with the per-level finitely
  // trivial record of each.
  ElemSet small_elements;
  bool all_small_trivial = false;
  std::map<Elem, FinitelyTrivial> finitely_trivial_record;

  // Infinite-star evidence: sizes of the designated star per level.
  std::vector<int> star_sizes;
  bool star_growth = false;

  // Abnormal witness: s0 is small, not trivial, and lies in the probed
  // closure of sigma minus itself; O splits at {inv(s0)} but is not
  // closed at the probes.
  Elem s0 = kNoElem;
  ElemSet sigma;
  Orientation O;
  std::map<Point, Elem> closure_certificate;  // probe -> witness in O
  DepthVerdict closure_verdict;
};

// Evaluates normality evidence at `depth`: the truncation runs one level
// deeper so all probed levels sit below the horizon.
inline NormalityCertificate normality_certificate(const SchematicChain& chain, int depth) {
  if (depth < 1) throw BadParams("depth must be positive");
  InverseSystem IS = truncate(chain, depth + 1);
  const SeparationSystem& L = IS.limit();
  std::vector<Point> probes = probes_below_top(IS);

  NormalityCertificate out;
  out.depth = depth;

  for (Elem x = 0; x < L.size(); ++x)
    if (L.small(x)) out.small_elements.push_back(x);
  out.all_small_trivial = true;
  for (Elem x : out.small_elements) {
    if (!is_trivial(L, x)) out.all_small_trivial = false;
    out.finitely_trivial_record.emplace(x, is_finitely_trivial(IS, x, probes));
  }

  if (chain.star_of_level) {
    for (Point p = 0; p < IS.points(); ++p)
      out.star_sizes.push_back(static_cast<int>(chain.star_of_level(IS.level(p)).size()));
    out.star_growth = true;
    for (size_t i = 0; i + 1 < out.star_sizes.size(); ++i)
      if (out.star_sizes[i] >= out.star_sizes[i + 1]) out.star_growth = false;
  }

  if (out.all_small_trivial) {
    // All small separations trivial: normal by the regularity criterion.
    out.verdict = NormalityCertificate::Verdict::normal_evidence;
    return out;
  }

  // Abnormal witness via the multiply-hit construction: S'_p is the set of
  // level elements hit by at least two members of the designated star; a
  // limit representative through the S'_p is small and lies in the probed
  // closure of the rest of the star.
  if (!chain.star_of_level) throw UnregisteredChain("chain carries no designated star");
  out.verdict = NormalityCertificate::Verdict::abnormal_witness;
  out.sigma = chain.star_of_level(L);
  if (!is_star(L, out.sigma)) throw InternalError("designated star is not a star");

  Elem s0 = kNoElem;
  for (Elem cand : out.sigma) {
    if (!L.small(cand) || is_trivial(L, cand)) continue;
    bool ok = true;
    for (Point p : probes) {
      int hits = 0;
      for (Elem r : out.sigma)
        if (IS.project(r, p) == IS.project(cand, p)) ++hits;
      if (hits < 2) ok = false;
    }
    if (ok) {
      s0 = cand;
      break;
    }
  }
  if (s0 == kNoElem)
    throw PreconditionFailed(
        "no small nontrivial multiply-hit star member; the certificate is inconclusive");
  out.s0 = s0;

  ElemSet rest;
  for (Elem r : out.sigma)
    if (r != s0) rest.push_back(r);
  if (!contains(closure_probed(IS, rest, probes), s0))
    throw InternalError("s0 must lie in the probed closure of sigma minus s0");

  auto ext = extend_orientation(L, {L.inv(s0)}, L.inv(s0));
  if (!ext.ok()) throw InternalError("inv(s0) must extend with itself maximal");
  out.O = ext.orientation;
  auto split = splits_at(L, out.O);
  if (!split || *split != ElemSet{L.inv(s0)})
    throw InternalError("the witness orientation must split at {inv(s0)}");

  ElemSet cl = closure_probed(IS, out.O, probes);
  if (!contains(cl, s0) || contains(out.O, s0))
    throw InternalError("s0 must lie in the probed closure of O but not in O");
  for (Point p : probes)
    for (Elem y : out.O)
      if (IS.project(y, p) == IS.project(s0, p)) {
        out.closure_certificate[p] = y;
        break;
      }
  out.closure_verdict = DepthVerdict::verified(
      depth, "orientation splits at a singleton but is not closed at the probes");
  return out;
}

// ---------------------------------------------------------------------------
// Isomorphism of separation systems.

// An involution-commuting order isomorphism, found by backtracking with
// invariant pruning. Systems this library meets are small.
inline std::optional<std::vector<Elem>> isomorphism_check(const SeparationSystem& A,
                                                          const SeparationSystem& B) {
  if (A.size() != B.size()) return std::nullopt;
  const int n = A.size();

  auto profile = [](const SeparationSystem& S, Elem x) {
    int down = 0, up = 0;
    for (Elem y = 0; y < S.size(); ++y) {
      if (S.leq(y, x)) ++down;
      if (S.leq(x, y)) ++up;
    }
    return std::tuple(S.degenerate(x), S.small(x), S.co_small(x), is_trivial(S, x),
                      is_co_trivial(S, x), down, up);
  };
  std::vector<decltype(profile(A, 0))> pa, pb;
  for (Elem x = 0; x < n; ++x) pa.push_back(profile(A, x));
  for (Elem x = 0; x < n; ++x) pb.push_back(profile(B, x));

  std::vector<Elem> map(n, kNoElem);
  std::vector<char> used(n, 0);

  auto consistent_so_far = [&](Elem x, Elem y) {
    if (pa[x] != pb[y]) return false;
    for (Elem u = 0; u < n; ++u) {
      if (map[u] == kNoElem) continue;
      if (A.leq(u, x) != B.leq(map[u], y)) return false;
      if (A.leq(x, u) != B.leq(y, map[u])) return false;
    }
    return true;
  };

  auto rec = [&](auto&& self, Elem x) -> bool {
    while (x < n && map[x] != kNoElem) ++x;
    if (x >= n) return true;
    for (Elem y = 0; y < n; ++y) {
      if (used[y]) continue;
      if (!consistent_so_far(x, y)) continue;
      Elem xi = A.inv(x), yi = B.inv(y);
      if (map[xi] != kNoElem && map[xi] != yi) continue;
      if ((x == xi) != (y == yi)) continue;
      if (x != xi && used[yi] && map[xi] != yi) continue;
      if (x != xi && !consistent_so_far(xi, yi)) continue;

      map[x] = y;
      used[y] = 1;
      bool set_inv = (x != xi && map[xi] == kNoElem);
      if (set_inv) {
        map[xi] = yi;
        used[yi] = 1;
      }
      if (self(self, x + 1)) return true;
      map[x] = kNoElem;
      used[y] = 0;
      if (set_inv) {
        map[xi] = kNoElem;
        used[yi] = 0;
      }
    }
    return false;
  };
  if (!rec(rec, 0)) return std::nullopt;
  // Verify: bijective, involution-commuting, order-isomorphic.
  for (Elem x = 0; x < n; ++x) {
    if (map[A.inv(x)] != B.inv(map[x])) throw InternalError("isomorphism check broke involution");
    for (Elem y = 0; y < n; ++y)
      if (A.leq(x, y) != B.leq(map[x], map[y]))
        throw InternalError("isomorphism check broke the order");
  }
  return map;
}

}  // namespace sepsys
