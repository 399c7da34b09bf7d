#pragma once

#include <map>
#include <optional>
#include <variant>

#include "sepsys/inverse_system.hpp"

namespace sepsys {

namespace detail {

// Triviality of x inside the separation system that the ambient system
// induces on `universe` (closed under the involution).
inline bool trivial_in_induced(const SeparationSystem& S, const ElemSet& universe, Elem x) {
  auto ind = induced_subsystem(S, universe);
  return is_trivial(ind.system, ind.to_induced(x));
}

}  // namespace detail

// Least point p0 such that for all q >= p0, r|q is trivial in the image
// system S|q with witness s|q. The precondition is that r is trivial in
// the limit with witness sep(s).
inline Point eventual_trivial_projection(const InverseSystem& IS, Elem r, Elem s) {
  const SeparationSystem& L = IS.limit();
  L.require(r);
  L.require(s);
  if (!witnesses_triviality(L, r, s))
    throw NotTrivialWithWitness(L.label(s) + " does not witness the triviality of " +
                                L.label(r));

  auto trivial_at = [&](Point q) {
    auto ind = induced_subsystem(IS.level(q), IS.limit_image(q));
    Elem rq = ind.to_induced(IS.project(r, q));
    Elem sq = ind.to_induced(IS.project(s, q));
    return witnesses_triviality(ind.system, rq, sq);
  };

  for (Point p0 = 0; p0 < IS.points(); ++p0) {
    bool all = true;
    for (Point q = 0; q < IS.points() && all; ++q)
      if (IS.poset().leq(p0, q) && !trivial_at(q)) all = false;
    if (all) return p0;
  }
  throw InternalError("no point found; the top point always qualifies");
}

// Lemma about lifting nontrivial separations through an epimorphism: a
// maximal preimage of a nontrivial element is nontrivial. Ties between
// incomparable maximal preimages go to the smaller element index.
inline Elem lift_nontrivial(const SystemHom& f, Elem rp) {
  if (!is_epi(f)) throw NotEpi("bonding map is not surjective");
  const SeparationSystem& Sq = *f.source;
  const SeparationSystem& Sp = *f.target;
  Sp.require(rp);
  if (is_trivial(Sp, rp)) throw TrivialInput(Sp.label(rp) + " is trivial in the target");

  Elem best = kNoElem;
  for (Elem x = 0; x < Sq.size(); ++x) {
    if (f.map[x] != rp) continue;
    bool maximal = true;
    for (Elem y = 0; y < Sq.size(); ++y)
      if (f.map[y] == rp && Sq.lt(x, y)) maximal = false;
    if (maximal) {
      best = x;
      break;
    }
  }
  if (best == kNoElem) throw InternalError("epi has no preimage");
  if (is_trivial(Sq, best))
    throw InternalError("maximal preimage of a nontrivial element is trivial");
  return best;
}

struct LiftOrderVerdict {
  bool distinct = false;  // r != s as separations of the limit
  bool leq = false;       // r <= s in the limit
};

// Order lifting inside a nested subset tau of the limit: a relation between
// the projections at p lifts to the limit provided the projections are
// distinct and the relevant projections are nontrivial in tau|p.
inline LiftOrderVerdict lift_order(const InverseSystem& IS, const ElemSet& tau, Elem r, Elem s,
                                   Point p) {
  const SeparationSystem& L = IS.limit();
  L.require(r);
  L.require(s);
  IS.poset().require(p);
  if (!contains(tau, r) || !contains(tau, s))
    throw PreconditionFailed("r and s must lie in tau");
  if (!is_nested(L, tau)) throw PreconditionFailed("tau is not nested");

  Elem rp = IS.project(r, p), sp = IS.project(s, p);
  const SeparationSystem& Sp = IS.level(p);
  if (Sp.same_sep(rp, sp)) throw PreconditionFailed("r|p and s|p are the same separation");
  ElemSet tau_p = IS.project_set(tau, p);
  if (detail::trivial_in_induced(Sp, tau_p, rp))
    throw PreconditionFailed("r|p is trivial in tau|p");
  if (detail::trivial_in_induced(Sp, tau_p, Sp.inv(sp)))
    throw PreconditionFailed("inv(s)|p is trivial in tau|p");
  if (!Sp.leq(rp, sp)) throw PreconditionFailed("r|p <= s|p does not hold");

  LiftOrderVerdict v;
  v.distinct = !L.same_sep(r, s);
  v.leq = L.leq(r, s);
  if (!v.distinct || !v.leq)
    throw InternalError("order failed to lift despite the lemma's preconditions");
  return v;
}

struct NestedLift {
  bool levels_nested = false;
  bool limit_nested = false;
  // The implication "levels nested => limit nested"; a false value would
  // be a counterexample to the lemma, i.e. a bug.
  bool ok = false;
};

inline NestedLift check_nested_lift(const InverseSystem& IS) {
  NestedLift r;
  r.levels_nested = IS.levels_nested();
  r.limit_nested = static_cast<bool>(is_nested(IS.limit()));
  r.ok = !r.levels_nested || r.limit_nested;
  if (!r.ok) throw InternalError("nested levels produced a non-nested limit");
  return r;
}

struct SmallLift {
  bool all_coordinates_small = false;
  bool limit_small = false;
  bool ok = false;
};

inline SmallLift check_small_lift(const InverseSystem& IS, Elem r) {
  IS.limit().require(r);
  SmallLift res;
  res.all_coordinates_small = true;
  for (Point p = 0; p < IS.points(); ++p)
    if (!IS.level(p).small(IS.project(r, p))) res.all_coordinates_small = false;
  res.limit_small = IS.limit().small(r);
  res.ok = !res.all_coordinates_small || res.limit_small;
  if (!res.ok) throw InternalError("all-small coordinates produced a non-small limit element");
  return res;
}

// Regularity decomposition: if the limit is regular, the index of a point
// from which on every level is regular; otherwise a small limit element
// whose coordinates are all small.
struct RegularDecomposition {
  std::optional<Point> regular_from;  // set iff the limit is regular
  std::optional<Elem> small_witness;  // set iff it is not
};

inline bool regular_system(const SeparationSystem& S) {
  for (Elem x = 0; x < S.size(); ++x)
    if (S.small(x)) return false;
  return true;
}

inline RegularDecomposition regular_decomposition(const InverseSystem& IS) {
  RegularDecomposition out;
  if (regular_system(IS.limit())) {
    for (Point p0 = 0; p0 < IS.points(); ++p0) {
      if (!regular_system(IS.level(p0))) continue;
      for (Point q = 0; q < IS.points(); ++q)
        if (IS.poset().leq(p0, q) && !regular_system(IS.level(q)))
          throw InternalError("regularity must persist upwards");
      out.regular_from = p0;
      return out;
    }
    throw InternalError("regular limit forces a regular top level");
  }
  for (Elem x = 0; x < IS.limit().size(); ++x) {
    if (!IS.limit().small(x)) continue;
    for (Point p = 0; p < IS.points(); ++p)
      if (!IS.level(p).small(IS.project(x, p)))
        throw InternalError("projections of a small element must be small");
    out.small_witness = x;
    return out;
  }
  throw InternalError("non-regular limit has a small element");
}

// Probe sets express depth-bounded quantification: "for all p" ranges over
// the probe points only. The default probes the whole poset, which is the
// honest semantics for a self-contained finite system; truncations of
// schematic chains probe the points below the horizon instead.
inline std::vector<Point> all_points(const InverseSystem& IS) {
  std::vector<Point> out(IS.points());
  for (Point p = 0; p < IS.points(); ++p) out[p] = p;
  return out;
}

struct FinitelyTrivial {
  bool holds = false;
  // For each probed point p, some probed q >= p whose projection is
  // trivial in S|q.
  std::map<Point, Point> witness_points;
};

// r is finitely trivial iff every (probed) point lies below a probed one
// whose projection of r is trivial in the image system there. Finitely
// trivial elements are small; with restricted probes the probed
// coordinates are checked small instead.
inline FinitelyTrivial is_finitely_trivial(const InverseSystem& IS, Elem r,
                                           std::optional<std::vector<Point>> probes_in =
                                               std::nullopt) {
  IS.limit().require(r);
  const bool full = !probes_in.has_value();
  std::vector<Point> probes = full ? all_points(IS) : *probes_in;
  FinitelyTrivial out;
  out.holds = true;
  std::map<Point, bool> trivial_at;
  for (Point q : probes) {
    auto ind = induced_subsystem(IS.level(q), IS.limit_image(q));
    trivial_at[q] = is_trivial(ind.system, ind.to_induced(IS.project(r, q)));
  }
  for (Point p : probes) {
    bool found = false;
    for (Point q : probes) {
      if (!IS.poset().leq(p, q) || !trivial_at[q]) continue;
      out.witness_points[p] = q;
      found = true;
      break;
    }
    if (!found) out.holds = false;
  }
  if (out.holds) {
    if (full && !IS.limit().small(r))
      throw InternalError("finitely trivial element is not small");
    for (Point p : probes)
      if (!IS.level(p).small(IS.project(r, p)))
        throw InternalError("finitely trivial element has a non-small probed coordinate");
  }
  return out;
}

struct FinitelyInconsistent {
  bool holds = false;
  // For each probed point p, an inconsistent pair (a, b) of limit elements
  // with a|p = r|p = b|p.
  std::map<Point, std::pair<Elem, Elem>> witness_pairs;
};

inline FinitelyInconsistent is_finitely_inconsistent(const InverseSystem& IS, Elem r,
                                                     std::optional<std::vector<Point>> probes_in =
                                                         std::nullopt) {
  const SeparationSystem& L = IS.limit();
  L.require(r);
  const bool full = !probes_in.has_value();
  std::vector<Point> probes = full ? all_points(IS) : *probes_in;
  FinitelyInconsistent out;
  out.holds = true;
  for (Point p : probes) {
    Elem rp = IS.project(r, p);
    bool found = false;
    for (Elem a = 0; a < L.size() && !found; ++a)
      for (Elem b = 0; b < L.size() && !found; ++b) {
        if (L.same_sep(a, b)) continue;
        if (!L.leq(L.inv(a), b)) continue;  // {a, b} inconsistent
        if (IS.project(a, p) == rp && IS.project(b, p) == rp) {
          out.witness_pairs[p] = {a, b};
          found = true;
        }
      }
    if (!found) out.holds = false;
  }
  if (out.holds) {
    if (full && !L.co_small(r))
      throw InternalError("finitely inconsistent element is not co-small");
    for (Point p : probes)
      if (!IS.level(p).co_small(IS.project(r, p)))
        throw InternalError("finitely inconsistent element has a non-co-small probed coordinate");
  }
  return out;
}

// Projection of a splitting star to the levels (the main projection
// lemma). Unless sigma is a singleton whose inverse element is finitely
// trivial, or a degenerate singleton, there is a point p0 from which on
// sigma_p := (sigma|p) restricted to the essential core splits the level,
// witnessed by O_p := (O|p) minus the inverses of sigma|p.
struct ProjectedSplitting {
  enum class Outcome { ok, finitely_trivial, degenerate };
  Outcome outcome = Outcome::ok;
  Point p0 = -1;
  std::map<Point, std::pair<ElemSet, ElemSet>> per_point;  // p -> (sigma_p, O_p)

  bool ok() const { return outcome == Outcome::ok; }
};

inline ProjectedSplitting project_splitting_star(const InverseSystem& IS, const ElemSet& sigma_in,
                                                 const ElemSet& O_in) {
  const SeparationSystem& L = IS.limit();
  const ElemSet sigma = normalized(sigma_in);
  const ElemSet O = normalized(O_in);
  for (Elem x : sigma) L.require(x);

  ProjectedSplitting res;
  // The pathological singleton guards come first; they describe exactly the
  // cases the lemma excludes.
  if (sigma.size() == 1) {
    Elem y = sigma.front();
    if (L.degenerate(y)) {
      res.outcome = ProjectedSplitting::Outcome::degenerate;
      return res;
    }
    if (is_finitely_trivial(IS, L.inv(y)).holds) {
      res.outcome = ProjectedSplitting::Outcome::finitely_trivial;
      return res;
    }
  }

  if (!IS.surjective()) throw NotSurjective("the inverse system must be surjective");
  if (!IS.levels_nested()) throw NotNested("all levels must be nested");
  auto split = splits_at(L, O);
  if (!split || *split != sigma || !is_consistent(L, O))
    throw DoesNotSplit("O does not witness sigma splitting the limit");

  auto level_data = [&](Point p) -> std::optional<std::pair<ElemSet, ElemSet>> {
    const SeparationSystem& Sp = IS.level(p);
    ElemSet core = essential_core_elements(Sp);
    ElemSet sigma_p;
    for (Elem x : IS.project_set(sigma, p))
      if (contains(core, x)) sigma_p.push_back(x);
    // O_p = (O|p) minus the inverses of sigma_p.
    ElemSet inv_sigma_p;
    for (Elem x : sigma_p) inv_sigma_p.push_back(Sp.inv(x));
    inv_sigma_p = normalized(std::move(inv_sigma_p));
    ElemSet O_p;
    for (Elem x : IS.project_set(O, p))
      if (!contains(inv_sigma_p, x)) O_p.push_back(x);

    // O_p must be a consistent orientation of S_p that splits at sigma_p.
    std::vector<char> seen(Sp.size(), 0);
    for (Elem x : O_p) {
      if (seen[Sp.sep(x)]) return std::nullopt;
      seen[Sp.sep(x)] = 1;
    }
    for (Elem r : Sp.separations())
      if (!seen[r]) return std::nullopt;
    if (!is_consistent(Sp, O_p)) return std::nullopt;
    auto sp = splits_at(Sp, O_p);
    if (!sp || *sp != sigma_p) return std::nullopt;
    return std::make_pair(sigma_p, O_p);
  };

  for (Point p0 = 0; p0 < IS.points(); ++p0) {
    bool all = true;
    std::map<Point, std::pair<ElemSet, ElemSet>> data;
    for (Point p = 0; p < IS.points() && all; ++p) {
      if (!IS.poset().leq(p0, p)) continue;
      auto d = level_data(p);
      if (!d)
        all = false;
      else
        data[p] = *d;
    }
    if (all) {
      res.p0 = p0;
      res.per_point = std::move(data);
      return res;
    }
  }
  throw InternalError("no p0 found; the top point always qualifies");
}

// LemmaB: pruning a star around a splitting star.
struct SanitizeReport {
  int case_id = 0;        // 1: sigma antisymmetric, 2: not
  ElemSet sigma_core;     // sigma ∩ S° (case 1) or {s} (case 2)
  ElemSet sigma_minus_set;
  std::optional<Elem> s;  // case 2 only
  // case 1: for each trivial member of sigma, a witness inside sigma_core.
  std::map<Elem, Elem> trivial_witnesses;
};

inline SanitizeReport sanitize_star(const SeparationSystem& S, const ElemSet& sigma_circ_in,
                                    const ElemSet& sigma_in) {
  const ElemSet sigma_circ = normalized(sigma_circ_in);
  const ElemSet sigma = normalized(sigma_in);
  if (!is_nested(S)) throw NotNested("S must be nested");
  if (!is_star(S, sigma)) throw NotAStar("sigma is not a star");
  for (Elem x : sigma_circ)
    if (!contains(sigma, x)) throw InconsistentInput("sigma must contain sigma_circ");
  if (!is_splitting_star(S, sigma_circ)) throw NotSplitting("sigma_circ does not split S");

  SanitizeReport rep;
  rep.sigma_minus_set = sigma_minus(S, sigma);
  if (is_antisymmetric(S, sigma)) {
    rep.case_id = 1;
    ElemSet core = essential_core_elements(S);
    ElemSet inter;
    for (Elem x : sigma)
      if (contains(core, x)) inter.push_back(x);
    rep.sigma_core = sigma_circ;
    if (inter != sigma_circ || rep.sigma_minus_set != sigma_circ)
      throw InternalError("case (i) identities failed");
    for (Elem x : sigma) {
      if (!is_trivial(S, x)) continue;
      auto w = is_trivial_in(S, x, sigma_circ);
      if (!w) throw InternalError("trivial member of sigma has no witness in sigma_circ");
      rep.trivial_witnesses[x] = *w;
    }
  } else {
    rep.case_id = 2;
    if (sigma_circ.size() != 1) throw InternalError("case (ii) needs a singleton sigma_circ");
    Elem s = sigma_circ.front();
    rep.s = s;
    rep.sigma_core = {s};
    if (rep.sigma_minus_set != normalized({s, S.inv(s)}))
      throw InternalError("case (ii): sigma^- != {s, s*}");
  }
  return rep;
}

// LemmaX: lifting a splitting star through an epimorphism of nested,
// degenerate-free systems. Implements both proof branches; the search-free
// construction is checked against splits_at and the projection identities.
struct LiftedStar {
  ElemSet sigma_q;
  Orientation O_q;
  bool co_small_branch = false;
};

inline LiftedStar lift_splitting_star(const SystemHom& f, const ElemSet& sigma_p_in) {
  const SeparationSystem& Sq = *f.source;
  const SeparationSystem& Sp = *f.target;
  const ElemSet sigma_p = normalized(sigma_p_in);
  if (!is_epi(f)) throw NotEpi("f must be surjective");
  for (Elem x = 0; x < Sq.size(); ++x)
    if (Sq.degenerate(x)) throw Degenerate("source has a degenerate element");
  for (Elem x = 0; x < Sp.size(); ++x)
    if (Sp.degenerate(x)) throw Degenerate("target has a degenerate element");
  if (!is_nested(Sq) || !is_nested(Sp)) throw NotNested("both systems must be nested");
  auto O_p = splitting_orientation(Sp, sigma_p);
  if (!O_p) throw DoesNotSplit("sigma_p does not split S_p");

  ElemSet O_q;
  for (Elem x = 0; x < Sq.size(); ++x)
    if (contains(*O_p, f.map[x])) O_q.push_back(x);

  bool co_small = false;
  for (Elem x : sigma_p)
    if (Sp.co_small(x)) co_small = true;

  LiftedStar out;
  out.co_small_branch = co_small;
  if (!co_small) {
    if (!is_consistent(Sq, O_q))
      throw InternalError("preimage orientation inconsistent without a co-small element");
    out.O_q = O_q;
    out.sigma_q = maximal_elements(Sq, O_q);
  } else {
    // sigma_p = {s_p} with s_p co-small. Take a maximal element s1 of
    // M' = M ∩ S_q°, drop the rest of the fibre M, and extend with s1 kept
    // maximal; nestedness makes that orientation unique.
    if (sigma_p.size() != 1)
      throw InternalError("a splitting star with a co-small element is a singleton");
    Elem sp = sigma_p.front();
    ElemSet M;
    for (Elem x = 0; x < Sq.size(); ++x)
      if (f.map[x] == sp) M.push_back(x);
    ElemSet core = essential_core_elements(Sq);
    ElemSet Mprime;
    for (Elem x : M)
      if (contains(core, x)) Mprime.push_back(x);
    if (Mprime.empty()) throw InternalError("M' is empty; the lemma guarantees otherwise");
    Elem s1 = kNoElem;
    for (Elem x : Mprime) {
      bool maximal = true;
      for (Elem y : Mprime)
        if (Sq.lt(x, y)) maximal = false;
      if (maximal) {
        s1 = x;
        break;
      }
    }
    ElemSet Oq_pruned;
    for (Elem x : O_q)
      if (!contains(M, x) || x == s1) Oq_pruned.push_back(x);
    auto ext = extend_orientation(Sq, Oq_pruned, s1);
    if (!ext.ok()) throw InternalError("extension with s1 maximal failed");
    out.O_q = ext.orientation;
    out.sigma_q = maximal_elements(Sq, out.O_q);
  }

  // Re-verify the conclusion.
  auto check = splits_at(Sq, out.O_q);
  if (!check || *check != out.sigma_q || !is_consistent(Sq, out.O_q))
    throw InternalError("lifted star does not split the source");
  ElemSet proj = f.image_of(out.sigma_q);
  ElemSet core_p = essential_core_elements(Sp);
  ElemSet inter;
  for (Elem x : proj)
    if (contains(core_p, x)) inter.push_back(x);
  if (inter != sigma_p || sigma_minus(Sp, proj) != sigma_p)
    throw InternalError("(sigma_q|p) ∩ S_p° = (sigma_q|p)^- = sigma_p failed");
  return out;
}

// The corresponding global statement: lift a splitting star of a level all
// the way to the limit. Requires sigma_p free of co-small separations.
struct LimitLiftedStar {
  ElemSet sigma;
  Orientation O;
};

inline LimitLiftedStar lift_splitting_star_to_limit(const InverseSystem& IS, Point p,
                                                    const ElemSet& sigma_p_in) {
  const ElemSet sigma_p = normalized(sigma_p_in);
  const SeparationSystem& L = IS.limit();
  const SeparationSystem& Sp = IS.level(p);
  if (!IS.surjective()) throw NotSurjective("the inverse system must be surjective");
  if (!IS.levels_nested()) throw NotNested("all levels must be nested");
  if (!IS.levels_degenerate_free()) throw Degenerate("levels must be degenerate-free");
  auto O_p = splitting_orientation(Sp, sigma_p);
  if (!O_p) throw DoesNotSplit("sigma_p does not split S_p");
  for (Elem x : sigma_p)
    if (Sp.co_small(x))
      throw CoSmallMember(Sp.label(x) + " is co-small; the preimage construction may fail");

  LimitLiftedStar out;
  for (Elem x = 0; x < L.size(); ++x)
    if (contains(*O_p, IS.project(x, p))) out.O.push_back(x);
  if (!is_consistent(L, out.O)) throw InternalError("preimage orientation inconsistent");
  out.sigma = maximal_elements(L, out.O);

  auto check = splits_at(L, out.O);
  if (!check || *check != out.sigma) throw InternalError("preimage orientation does not split");
  if (!is_closed(IS, out.O)) throw InternalError("preimage orientation is not closed");
  ElemSet proj = IS.project_set(out.sigma, p);
  ElemSet core_p = essential_core_elements(Sp);
  ElemSet inter;
  for (Elem x : proj)
    if (contains(core_p, x)) inter.push_back(x);
  if (inter != sigma_p || sigma_minus(Sp, proj) != sigma_p)
    throw InternalError("(sigma|p) ∩ S_p° = (sigma|p)^- = sigma_p failed");
  return out;
}

// The closure of a splitting star is a star whose pruning recovers the
// original star.
struct StarClosure {
  ElemSet closure_set;
  bool is_star_ok = false;
  bool minus_ok = false;
};

inline StarClosure closure_of_splitting_star(const InverseSystem& IS,
                                             const ElemSet& sigma_circ_in) {
  const ElemSet sigma_circ = normalized(sigma_circ_in);
  const SeparationSystem& L = IS.limit();
  if (!is_nested(L)) throw NotNested("the limit must be nested");
  for (Elem x = 0; x < L.size(); ++x)
    if (L.degenerate(x)) throw Degenerate("the limit has a degenerate element");
  if (!is_splitting_star(L, sigma_circ)) throw NotSplitting("sigma_circ does not split the limit");

  StarClosure out;
  out.closure_set = closure(IS, sigma_circ);
  out.is_star_ok = is_star(L, out.closure_set);
  out.minus_ok = sigma_minus(L, out.closure_set) == sigma_circ;
  if (!out.is_star_ok || !out.minus_ok)
    throw InternalError("closure of a splitting star must be a star with sigma^- = sigma_circ");
  return out;
}

}  // namespace sepsys
