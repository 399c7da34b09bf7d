#pragma once

#include <map>
#include <memory>
#include <tuple>
#include <vector>

#include "sepsys/hom.hpp"
#include "sepsys/orientations.hpp"
#include "sepsys/poset.hpp"

namespace sepsys {

// A finite directed poset of finite separation systems with compatible
// bonding homomorphisms f_qp for q > p, plus the precomputed inverse
// limit. Since the poset has a maximum m, the limit elements correspond
// one-to-one to the elements of the top system; the limit order is the
// coordinatewise one, which validation checks against the top order.
// Immutable after build().
class InverseSystem {
public:
  using BondKey = std::pair<Point, Point>;  // (q, p) with q > p
  using BondMap = std::map<BondKey, std::vector<Elem>>;

  // `bonds` must contain a map for every covering pair (q, p). Maps for
  // non-covering pairs may be supplied; they are checked against the
  // compositions along covers.
  static InverseSystem build(DirectedPoset poset, std::vector<SystemPtr> levels, BondMap bonds) {
    InverseSystem is;
    is.poset_ = std::move(poset);
    is.levels_ = std::move(levels);
    const int n = is.poset_.size();
    if (static_cast<int>(is.levels_.size()) != n)
      throw InconsistentInput("one system per poset point required");
    for (const auto& s : is.levels_)
      if (!s) throw InconsistentInput("null level");

    for (const auto& [key, map] : bonds) {
      auto [q, p] = key;
      if (!is.poset_.lt(p, q)) throw InconsistentInput("bond given for non-ordered pair");
    }
    for (auto [q, p] : is.poset_.covers()) {
      auto it = bonds.find({q, p});
      if (it == bonds.end())
        throw InconsistentInput("missing bond for covering pair " + is.poset_.label(q) + " > " +
                                is.poset_.label(p));
      validate_hom(is.levels_[q], is.levels_[p], it->second);
    }

    // Derive all pairwise bonds along covers, then check compatibility on
    // every composable triple; path-independence failures surface here.
    is.bond_.assign(n, std::vector<std::vector<Elem>>(n));
    is.derived_.assign(n, std::vector<char>(n, 0));
    for (Point q = 0; q < n; ++q)
      for (Point p = 0; p < n; ++p)
        if (is.poset_.lt(p, q)) is.derive_bond(q, p, bonds);

    for (Point r = 0; r < n; ++r)
      for (Point q = 0; q < n; ++q)
        for (Point p = 0; p < n; ++p) {
          if (!(is.poset_.lt(p, q) && is.poset_.lt(q, r))) continue;
          const auto& frp = is.bond_[r][p];
          const auto& frq = is.bond_[r][q];
          const auto& fqp = is.bond_[q][p];
          for (Elem x = 0; x < is.levels_[r]->size(); ++x)
            if (frp[x] != fqp[frq[x]])
              throw IncompatibleBonds("points " + is.poset_.label(p) + " < " +
                                      is.poset_.label(q) + " < " + is.poset_.label(r) +
                                      " at element " + is.levels_[r]->label(x));
        }

    // Supplied non-cover bonds must agree with the derived composites.
    for (const auto& [key, map] : bonds) {
      auto [q, p] = key;
      if (is.bond_[q][p] != map) {
        validate_hom(is.levels_[q], is.levels_[p], map);
        throw IncompatibleBonds("supplied bond " + is.poset_.label(q) + " -> " +
                                is.poset_.label(p) + " differs from cover composition");
      }
    }

    is.compute_limit();
    return is;
  }

  // Convenience: a chain with levels[0] at the bottom and bonds[i] mapping
  // levels[i+1] -> levels[i].
  static InverseSystem chain(std::vector<SystemPtr> levels,
                             std::vector<std::vector<Elem>> step_bonds) {
    if (levels.empty()) throw InconsistentInput("empty chain");
    if (step_bonds.size() + 1 != levels.size())
      throw InconsistentInput("chain needs one bond per adjacent pair");
    BondMap bonds;
    for (size_t i = 0; i + 1 < levels.size(); ++i)
      bonds[{static_cast<Point>(i + 1), static_cast<Point>(i)}] = step_bonds[i];
    const int n = static_cast<int>(levels.size());
    return build(DirectedPoset::chain(n), std::move(levels), std::move(bonds));
  }

  const DirectedPoset& poset() const { return poset_; }
  Point max_point() const { return poset_.max_point(); }
  int points() const { return poset_.size(); }

  const SeparationSystem& level(Point p) const {
    poset_.require(p);
    return *levels_[p];
  }
  SystemPtr level_ptr(Point p) const {
    poset_.require(p);
    return levels_[p];
  }

  Elem bond(Point q, Point p, Elem x) const {
    poset_.require(q);
    poset_.require(p);
    if (q == p) return x;
    if (!poset_.lt(p, q)) throw UnknownPoint("bond requested for non-ordered pair");
    return bond_[q][p][x];
  }

  SystemHom hom(Point q, Point p) const {
    poset_.require(q);
    poset_.require(p);
    if (q == p) return identity_hom(levels_[p]);
    if (!poset_.lt(p, q)) throw UnknownPoint("hom requested for non-ordered pair");
    return SystemHom{levels_[q], levels_[p], bond_[q][p]};
  }

  // The inverse limit. Element i of the limit is the compatible family
  // whose coordinate at the maximum point is element i of the top system.
  const SeparationSystem& limit() const { return *limit_; }
  SystemPtr limit_ptr() const { return limit_; }

  // s|p, the coordinate of limit element x at point p.
  Elem project(Elem x, Point p) const {
    limit_->require(x);
    return bond(max_point(), p, x);
  }

  ElemSet project_set(const ElemSet& xs, Point p) const {
    ElemSet out;
    for (Elem x : xs) out.push_back(project(x, p));
    return normalized(std::move(out));
  }

  SystemHom projection_hom(Point p) const { return hom(max_point(), p); }

  // The image of the limit in level p, as a set of level-p elements.
  ElemSet limit_image(Point p) const {
    ElemSet out;
    for (Elem x = 0; x < limit_->size(); ++x) out.push_back(project(x, p));
    return normalized(std::move(out));
  }

  bool surjective() const {
    for (Point q = 0; q < points(); ++q)
      for (Point p = 0; p < points(); ++p)
        if (poset_.lt(p, q) && !is_epi(hom(q, p))) return false;
    return true;
  }

  bool levels_nested() const {
    for (Point p = 0; p < points(); ++p)
      if (!is_nested(level(p))) return false;
    return true;
  }

  bool levels_degenerate_free() const {
    for (Point p = 0; p < points(); ++p)
      for (Elem x = 0; x < level(p).size(); ++x)
        if (level(p).degenerate(x)) return false;
    return true;
  }

  // Pairs x < y in the limit whose projections to p coincide, i.e. the
  // places where the projection inequality of (*) is weak rather than
  // strict.
  std::vector<std::tuple<Elem, Elem, Point>> projection_collapses() const {
    std::vector<std::tuple<Elem, Elem, Point>> out;
    for (Elem x = 0; x < limit_->size(); ++x)
      for (Elem y = 0; y < limit_->size(); ++y) {
        if (x == y || !limit_->leq(x, y)) continue;
        for (Point p = 0; p < points(); ++p)
          if (project(x, p) == project(y, p)) out.emplace_back(x, y, p);
      }
    return out;
  }

private:
  void derive_bond(Point q, Point p, const BondMap& provided) {
    if (derived_[q][p]) return;
    derived_[q][p] = true;
    bool is_cover = true;
    for (Point r = 0; r < poset_.size() && is_cover; ++r)
      if (poset_.lt(p, r) && poset_.lt(r, q)) is_cover = false;
    if (is_cover) {
      bond_[q][p] = provided.at({q, p});  // existence checked in build()
      return;
    }
    // Compose along the first cover child of q that still dominates p.
    for (Point c = 0; c < poset_.size(); ++c) {
      if (!(poset_.lt(c, q) && poset_.leq(p, c))) continue;
      bool cover = true;
      for (Point r = 0; r < poset_.size() && cover; ++r)
        if (poset_.lt(c, r) && poset_.lt(r, q)) cover = false;
      if (!cover) continue;
      derive_bond(q, c, provided);
      if (c != p) derive_bond(c, p, provided);
      const auto& top = bond_[q][c];
      std::vector<Elem> out(levels_[q]->size());
      for (Elem x = 0; x < levels_[q]->size(); ++x)
        out[x] = (c == p) ? top[x] : bond_[c][p][top[x]];
      bond_[q][p] = std::move(out);
      return;
    }
    throw InternalError("no cover path found between ordered points");
  }

  void compute_limit() {
    const Point m = max_point();
    const SeparationSystem& top = *levels_[m];
    const int n = top.size();
    Relation rel(n);
    for (Elem x = 0; x < n; ++x)
      for (Elem y = 0; y < n; ++y) {
        bool le = true;
        for (Point p = 0; p < points() && le; ++p) {
          Elem xp = (p == m) ? x : bond_[m][p][x];
          Elem yp = (p == m) ? y : bond_[m][p][y];
          if (!levels_[p]->leq(xp, yp)) le = false;
        }
        if (le) rel.set(x, y);
      }
    limit_ = make_system(SeparationSystem::from_closed_relation(top.labels(), top.involution(),
                                                                std::move(rel)));
    // Bonds respect the order, so the coordinatewise order must coincide
    // with the top one.
    for (Elem x = 0; x < n; ++x)
      for (Elem y = 0; y < n; ++y)
        if (limit_->leq(x, y) != top.leq(x, y))
          throw InternalError("limit order deviates from top order despite valid bonds");
  }

  DirectedPoset poset_;
  std::vector<SystemPtr> levels_;
  std::vector<std::vector<std::vector<Elem>>> bond_;
  std::vector<std::vector<char>> derived_;
  SystemPtr limit_;
};

// Replaces every level by the induced system on the image of the limit,
// i.e. the surjective inverse system of the projections. The limit is
// unchanged (checked).
inline InverseSystem surjectivize(const InverseSystem& IS) {
  std::vector<SystemPtr> levels;
  std::vector<InducedSystem> induced;
  for (Point p = 0; p < IS.points(); ++p) {
    induced.push_back(induced_subsystem(IS.level(p), IS.limit_image(p)));
    levels.push_back(make_system(induced.back().system));
  }
  InverseSystem::BondMap bonds;
  for (auto [q, p] : IS.poset().covers()) {
    std::vector<Elem> map(levels[q]->size());
    for (Elem x = 0; x < levels[q]->size(); ++x)
      map[x] = induced[p].to_induced(IS.bond(q, p, induced[q].to_parent[x]));
    bonds[{q, p}] = std::move(map);
  }
  // Rebuild on a copy of the poset.
  std::vector<std::pair<Point, Point>> gens;
  for (Point p = 0; p < IS.points(); ++p)
    for (Point q = 0; q < IS.points(); ++q)
      if (IS.poset().lt(p, q)) gens.emplace_back(p, q);
  std::vector<std::string> plabels;
  for (Point p = 0; p < IS.points(); ++p) plabels.push_back(IS.poset().label(p));
  InverseSystem out = InverseSystem::build(DirectedPoset::from_generators(plabels, gens),
                                           std::move(levels), std::move(bonds));

  const SeparationSystem& a = IS.limit();
  const SeparationSystem& b = out.limit();
  if (a.size() != b.size()) throw InternalError("surjectivize changed the limit");
  for (Elem x = 0; x < a.size(); ++x)
    for (Elem y = 0; y < a.size(); ++y)
      if (a.leq(x, y) != b.leq(x, y)) throw InternalError("surjectivize changed the limit order");
  return out;
}

// Lemma `closed`(i): the closure of O is the set of limit elements all of
// whose projections are projections of O.
inline ElemSet closure(const InverseSystem& IS, const ElemSet& O) {
  std::vector<ElemSet> op(IS.points());
  for (Point p = 0; p < IS.points(); ++p) op[p] = IS.project_set(O, p);
  ElemSet out;
  for (Elem x = 0; x < IS.limit().size(); ++x) {
    bool in = true;
    for (Point p = 0; p < IS.points() && in; ++p)
      if (!contains(op[p], IS.project(x, p))) in = false;
    if (in) out.push_back(x);
  }
  return out;
}

inline bool is_closed(const InverseSystem& IS, const ElemSet& O) {
  return closure(IS, normalized(O)) == normalized(O);
}

namespace detail {

inline void require_chain(const SeparationSystem& L, const ElemSet& C) {
  if (C.empty()) throw NotAChain("empty chain");
  for (Elem x : C)
    for (Elem y : C)
      if (!L.leq(x, y) && !L.leq(y, x))
        throw NotAChain(L.label(x) + " and " + L.label(y) + " are incomparable");
}

}  // namespace detail

// Lemma `lem:chains`: coordinatewise maxima of a chain assemble into a
// compatible family, the supremum, which lies in the chain's closure.
inline Elem chain_sup(const InverseSystem& IS, const ElemSet& C) {
  const SeparationSystem& L = IS.limit();
  detail::require_chain(L, C);

  std::vector<Elem> coord(IS.points(), kNoElem);
  for (Point p = 0; p < IS.points(); ++p) {
    for (Elem x : C) {
      Elem xp = IS.project(x, p);
      if (coord[p] == kNoElem || IS.level(p).leq(coord[p], xp)) coord[p] = xp;
    }
    for (Elem x : C)
      if (!IS.level(p).leq(IS.project(x, p), coord[p]))
        throw InternalError("projected chain has no maximum");
  }
  for (Point q = 0; q < IS.points(); ++q)
    for (Point p = 0; p < IS.points(); ++p)
      if (IS.poset().lt(p, q) && IS.bond(q, p, coord[q]) != coord[p])
        throw InternalError("coordinatewise maxima are not compatible");

  Elem sup = coord[IS.max_point()];
  for (Elem x : C)
    if (!L.leq(x, sup)) throw InternalError("sup is not an upper bound");
  for (Elem u = 0; u < L.size(); ++u) {
    bool upper = true;
    for (Elem x : C)
      if (!L.leq(x, u)) {
        upper = false;
        break;
      }
    if (upper && !L.leq(sup, u)) throw InternalError("sup is not the least upper bound");
  }
  if (!contains(closure(IS, C), sup)) throw InternalError("sup is not in the closure of C");
  return sup;
}

inline Elem chain_inf(const InverseSystem& IS, const ElemSet& C) {
  const SeparationSystem& L = IS.limit();
  detail::require_chain(L, C);

  std::vector<Elem> coord(IS.points(), kNoElem);
  for (Point p = 0; p < IS.points(); ++p) {
    for (Elem x : C) {
      Elem xp = IS.project(x, p);
      if (coord[p] == kNoElem || IS.level(p).leq(xp, coord[p])) coord[p] = xp;
    }
    for (Elem x : C)
      if (!IS.level(p).leq(coord[p], IS.project(x, p)))
        throw InternalError("projected chain has no minimum");
  }
  for (Point q = 0; q < IS.points(); ++q)
    for (Point p = 0; p < IS.points(); ++p)
      if (IS.poset().lt(p, q) && IS.bond(q, p, coord[q]) != coord[p])
        throw InternalError("coordinatewise minima are not compatible");

  Elem inf = coord[IS.max_point()];
  for (Elem x : C)
    if (!L.leq(inf, x)) throw InternalError("inf is not a lower bound");
  for (Elem u = 0; u < L.size(); ++u) {
    bool lower = true;
    for (Elem x : C)
      if (!L.leq(u, x)) {
        lower = false;
        break;
      }
    if (lower && !L.leq(u, inf)) throw InternalError("inf is not the greatest lower bound");
  }
  if (!contains(closure(IS, C), inf)) throw InternalError("inf is not in the closure of C");
  return inf;
}

// Lemma `lem:closedsplitting`: in a closed O, every element sits above a
// minimal and below a maximal element of O. Found by extending a maximal
// chain through s inside O; ties go to the smaller element index.
inline std::pair<Elem, Elem> min_below_max_above(const InverseSystem& IS, const ElemSet& O,
                                                 Elem s) {
  const SeparationSystem& L = IS.limit();
  L.require(s);
  ElemSet Onorm = normalized(O);
  if (!contains(Onorm, s)) throw InconsistentInput("element not in O");
  if (!is_closed(IS, Onorm)) throw NotClosed("O is not closed in the limit");

  Elem lo = s;
  for (;;) {
    Elem next = kNoElem;
    for (Elem y : Onorm)
      if (L.lt(y, lo)) {
        next = y;
        break;
      }
    if (next == kNoElem) break;
    lo = next;
  }
  Elem hi = s;
  for (;;) {
    Elem next = kNoElem;
    for (Elem y : Onorm)
      if (L.lt(hi, y)) {
        next = y;
        break;
      }
    if (next == kNoElem) break;
    hi = next;
  }
  if (!(L.leq(lo, s) && L.leq(s, hi)))
    throw InternalError("chain endpoints do not bracket the element");
  return {lo, hi};
}

}  // namespace sepsys
