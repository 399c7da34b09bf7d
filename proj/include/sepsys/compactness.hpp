#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sepsys/profinite.hpp"

namespace sepsys {

// ---------------------------------------------------------------------------
// Power-set inverse systems.

// The inverse system of power sets 2^{S_p} with image maps as bonds.
// Level elements are bitmasks over the level's element table.
class PowerSystem {
public:
  PowerSystem(const InverseSystem& IS, int max_bits) : is_(&IS) {
    for (Point p = 0; p < IS.points(); ++p)
      if (IS.level(p).size() > max_bits)
        throw LevelTooLarge("level " + IS.poset().label(p) + " has " +
                            std::to_string(IS.level(p).size()) + " oriented elements");
  }

  const DirectedPoset& poset() const { return is_->poset(); }
  int bits(Point p) const { return is_->level(p).size(); }

  uint32_t image(Point q, Point p, uint32_t mask) const {
    uint32_t out = 0;
    for (int i = 0; i < bits(q); ++i)
      if ((mask >> i) & 1) out |= uint32_t{1} << is_->bond(q, p, i);
    return out;
  }

  // The family of projections of a subset of the limit; always a limit of
  // the power system.
  std::vector<uint32_t> family_of_subset(const ElemSet& sigma) const {
    std::vector<uint32_t> fam(is_->points(), 0);
    for (Point p = 0; p < is_->points(); ++p)
      for (Elem x : sigma) fam[p] |= uint32_t{1} << is_->project(x, p);
    return fam;
  }

  bool is_limit_family(const std::vector<uint32_t>& fam) const {
    if (static_cast<int>(fam.size()) != is_->points()) return false;
    for (Point q = 0; q < is_->points(); ++q)
      for (Point p = 0; p < is_->points(); ++p)
        if (poset().lt(p, q) && image(q, p, fam[q]) != fam[p]) return false;
    return true;
  }

  // All limits, by scanning the full product of the power levels. Only for
  // tiny instances; the bijection with subsets of the limit is checked by
  // the caller.
  std::vector<std::vector<uint32_t>> enumerate_limits() const {
    double log2_total = 0;
    for (Point p = 0; p < is_->points(); ++p) log2_total += bits(p);
    if (log2_total > 22) throw LevelTooLarge("power-limit enumeration too large");

    std::vector<std::vector<uint32_t>> out;
    std::vector<uint32_t> fam(is_->points(), 0);
    auto rec = [&](auto&& self, Point p) -> void {
      if (p == is_->points()) {
        if (is_limit_family(fam)) out.push_back(fam);
        return;
      }
      for (uint32_t m = 0; m < (uint32_t{1} << bits(p)); ++m) {
        fam[p] = m;
        self(self, p + 1);
      }
    };
    rec(rec, 0);
    return out;
  }

private:
  const InverseSystem* is_;
};

inline PowerSystem power_system(const InverseSystem& IS, int max_bits = 16) {
  return PowerSystem(IS, max_bits);
}

// ---------------------------------------------------------------------------
// Star families.

// A collection F of stars in the limit of an inverse system.
struct StarFamily {
  std::vector<ElemSet> stars;

  bool member(const ElemSet& sigma) const {
    return std::find(stars.begin(), stars.end(), sigma) != stars.end();
  }
};

inline StarFamily validate_star_family(const InverseSystem& IS, std::vector<ElemSet> stars) {
  StarFamily F;
  for (auto& s : stars) {
    ElemSet n = normalized(s);
    if (!is_star(IS.limit(), n))
      throw NotAStar("family member is not a star in the limit");
    if (std::find(F.stars.begin(), F.stars.end(), n) == F.stars.end())
      F.stars.push_back(std::move(n));
  }
  return F;
}

inline std::vector<ElemSet> restrict_family(const InverseSystem& IS, const StarFamily& F,
                                            Point p) {
  std::vector<ElemSet> out;
  for (const auto& sigma : F.stars) {
    ElemSet proj = IS.project_set(sigma, p);
    if (std::find(out.begin(), out.end(), proj) == out.end()) out.push_back(proj);
  }
  return out;
}

// All inconsistent pairs (a, b) of limit elements, i.e. a = s*, b = s' with
// s < s' as distinct separations.
inline std::vector<std::pair<Elem, Elem>> inconsistent_limit_pairs(const InverseSystem& IS) {
  const SeparationSystem& L = IS.limit();
  std::vector<std::pair<Elem, Elem>> out;
  for (Elem a = 0; a < L.size(); ++a)
    for (Elem b = 0; b < L.size(); ++b) {
      if (L.same_sep(a, b)) continue;
      if (L.leq(L.inv(a), b)) out.emplace_back(a, b);
    }
  return out;
}

// L_p: all stars sigma in S_p with sigma^- = {r} for some r that is the
// common projection of an inconsistent pair of the limit.
inline std::vector<ElemSet> compute_Lp(const InverseSystem& IS, Point p) {
  const SeparationSystem& Sp = IS.level(p);
  ElemSet roots;
  for (auto [a, b] : inconsistent_limit_pairs(IS)) {
    Elem ap = IS.project(a, p);
    if (ap == IS.project(b, p)) roots.push_back(ap);
  }
  roots = normalized(std::move(roots));

  std::vector<ElemSet> out;
  for (Elem r : roots) {
    if (Sp.degenerate(r)) continue;  // stars cannot contain degenerates
    // Partners of r in a star: everything below inv(r), except r itself.
    ElemSet pool;
    for (Elem x = 0; x < Sp.size(); ++x)
      if (x != r && !Sp.degenerate(x) && Sp.leq(x, Sp.inv(r))) pool.push_back(x);
    if (pool.size() > 20) throw TooLarge("L_p candidate pool exceeds 20 elements");
    const uint64_t total = uint64_t{1} << pool.size();
    for (uint64_t mask = 0; mask < total; ++mask) {
      ElemSet sigma{r};
      for (size_t i = 0; i < pool.size(); ++i)
        if ((mask >> i) & 1) sigma.push_back(pool[i]);
      sigma = normalized(std::move(sigma));
      if (!is_star(Sp, sigma)) continue;
      if (sigma_minus(Sp, sigma) != ElemSet{r}) continue;
      if (std::find(out.begin(), out.end(), sigma) == out.end()) out.push_back(sigma);
    }
  }
  return out;
}

// F_p = F|p ∪ L_p.
struct AugmentedFamily {
  Point p = -1;
  std::vector<ElemSet> from_F;
  std::vector<ElemSet> lp;

  std::vector<ElemSet> all() const {
    std::vector<ElemSet> out = from_F;
    for (const auto& s : lp)
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    return out;
  }
};

inline AugmentedFamily augmented_family(const InverseSystem& IS, const StarFamily& F, Point p) {
  AugmentedFamily out;
  out.p = p;
  out.from_F = restrict_family(IS, F, p);
  out.lp = compute_Lp(IS, p);
  return out;
}

// The splitting stars of a subset tau of S, where tau is regarded as the
// separation system it induces (tau together with its inverses). Results
// are reported as element sets of S.
inline std::vector<ElemSet> splitting_stars_of_subset(const SeparationSystem& S,
                                                      const ElemSet& tau) {
  auto ind = induced_subsystem(S, tau);
  std::vector<ElemSet> out;
  for (const auto& sigma : splitting_subsets(ind.system)) out.push_back(ind.set_to_parent(sigma));
  return out;
}

// tau_p is essentially over F_p if every splitting star sigma_p of tau_p is
// sigma^- for some sigma in F_p, or sigma_p = {s} with sigma^- = {s, s*}.
// Returns a failing splitting star, or nullopt if the condition holds.
inline std::optional<ElemSet> essentially_over(const SeparationSystem& Sp, const ElemSet& tau_p,
                                               const AugmentedFamily& Fp) {
  if (!is_nested(Sp, tau_p)) throw PreconditionFailed("tau_p must be nested");
  auto members = Fp.all();
  for (const auto& sigma_p : splitting_stars_of_subset(Sp, tau_p)) {
    bool matched = false;
    for (const auto& sigma : members) {
      ElemSet minus = sigma_minus(Sp, sigma);
      if (minus == sigma_p) {
        matched = true;
        break;
      }
      if (sigma_p.size() == 1) {
        Elem s = sigma_p.front();
        if (minus == normalized({s, Sp.inv(s)})) {
          matched = true;
          break;
        }
      }
    }
    if (!matched) return sigma_p;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Essentially closed families.

struct EssentiallyClosed {
  bool ok = true;
  int failed_condition = 0;  // 1, 2 or 3
  ElemSet witness;           // the sigma or singleton that should be in F
};

// The three closure conditions on F, checked exhaustively over the finite
// limit. Condition (1) quantifies over star subsets of the limit.
inline EssentiallyClosed essentially_closed(const InverseSystem& IS, const StarFamily& F,
                                            int max_universe = 16) {
  const SeparationSystem& L = IS.limit();
  if (L.size() > max_universe) throw UniverseTooLarge("limit has too many oriented elements");

  EssentiallyClosed res;

  // Precompute sigma^- of every family member at every point.
  std::vector<std::vector<ElemSet>> member_minus(IS.points());
  for (Point p = 0; p < IS.points(); ++p)
    for (const auto& sigma : F.stars)
      member_minus[p].push_back(sigma_minus(IS.level(p), IS.project_set(sigma, p)));

  // Condition (1).
  const uint64_t total = uint64_t{1} << L.size();
  for (uint64_t mask = 0; mask < total; ++mask) {
    ElemSet sigma;
    for (Elem x = 0; x < L.size(); ++x)
      if ((mask >> x) & 1) sigma.push_back(x);
    if (!is_star(L, sigma)) continue;
    bool matches_everywhere = true;
    for (Point p = 0; p < IS.points() && matches_everywhere; ++p) {
      ElemSet sp_minus = sigma_minus(IS.level(p), IS.project_set(sigma, p));
      bool found = false;
      for (const auto& tm : member_minus[p]) {
        if (tm == sp_minus) {
          found = true;
          break;
        }
        if (sigma.size() == 1) {
          Elem s = sigma.front();
          ElemSet pair = normalized(
              {IS.project(s, p), IS.level(p).inv(IS.project(s, p))});
          if (tm == pair) {
            found = true;
            break;
          }
        }
      }
      if (!found) matches_everywhere = false;
    }
    if (matches_everywhere && !F.member(sigma)) {
      res.ok = false;
      res.failed_condition = 1;
      res.witness = sigma;
      return res;
    }
  }

  // Condition (2): finitely inconsistent singletons.
  for (Elem r = 0; r < L.size(); ++r)
    if (is_finitely_inconsistent(IS, r).holds && !F.member({r})) {
      res.ok = false;
      res.failed_condition = 2;
      res.witness = {r};
      return res;
    }

  // Condition (3): inverses of finitely trivial elements.
  for (Elem r = 0; r < L.size(); ++r)
    if (is_finitely_trivial(IS, L.inv(r)).holds && !F.member({r})) {
      res.ok = false;
      res.failed_condition = 3;
      res.witness = {r};
      return res;
    }
  return res;
}

// Lemma about iterated pruning: (sigma|p)^- = ((sigma|q)^- |p)^-.
inline bool check_iterated_minus(const InverseSystem& IS, const ElemSet& sigma, Point p,
                                 Point q) {
  if (!IS.poset().lt(p, q)) throw PreconditionFailed("requires p < q");
  if (!is_star(IS.limit(), normalized(sigma)))
    throw PreconditionFailed("sigma must be a star in the limit");
  ElemSet lhs = sigma_minus(IS.level(p), IS.project_set(sigma, p));
  ElemSet sq_minus = sigma_minus(IS.level(q), IS.project_set(sigma, q));
  ElemSet pushed;
  for (Elem x : sq_minus) pushed.push_back(IS.bond(q, p, x));
  ElemSet rhs = sigma_minus(IS.level(p), normalized(std::move(pushed)));
  return lhs == rhs;
}

struct CofinalLpVerdict {
  Elem r = kNoElem;  // sigma = {r}, finitely inconsistent
};

// If at every point of P' the pruned projection (sigma|p)^- is an
// L_p-style singleton, then sigma is a singleton {r} that is finitely
// inconsistent relative to the part of the poset in which P' is cofinal,
// i.e. relative to the down-closure of P'.
inline CofinalLpVerdict check_cofinal_Lp(const InverseSystem& IS, const ElemSet& tau,
                                         const ElemSet& sigma_in,
                                         const std::vector<Point>& pprime) {
  const SeparationSystem& L = IS.limit();
  const ElemSet sigma = normalized(sigma_in);
  if (pprime.empty()) throw PreconditionFailed("P' must be nonempty");
  if (!is_nested(L, tau)) throw PreconditionFailed("tau must be nested");
  {
    auto stars = splitting_stars_of_subset(L, tau);
    if (std::find(stars.begin(), stars.end(), sigma) == stars.end())
      throw PreconditionFailed("sigma must be a splitting star of tau");
  }
  auto pairs = inconsistent_limit_pairs(IS);
  for (Point p : pprime) {
    ElemSet minus = sigma_minus(IS.level(p), IS.project_set(sigma, p));
    if (minus.size() != 1)
      throw PreconditionFailed("(sigma|p)^- is not a singleton at a point of P'");
    Elem rp = minus.front();
    bool collapse = false;
    for (auto [a, b] : pairs)
      if (IS.project(a, p) == rp && IS.project(b, p) == rp) collapse = true;
    if (!collapse)
      throw PreconditionFailed("no inconsistent pair collapses onto (sigma|p)^-");
  }

  CofinalLpVerdict v;
  if (sigma.size() != 1) throw InternalError("cofinal L_p premises force |sigma| = 1");
  v.r = sigma.front();
  std::vector<Point> probes;
  for (Point p = 0; p < IS.points(); ++p)
    for (Point q : pprime)
      if (IS.poset().leq(p, q)) {
        probes.push_back(p);
        break;
      }
  if (!is_finitely_inconsistent(IS, v.r, probes).holds)
    throw InternalError("the singleton is not finitely inconsistent below P'");
  return v;
}

// Lemma Lqp: projecting a nested subset essentially over F_q yields a
// nested subset essentially over F_p.
inline ElemSet transfer_tau(const InverseSystem& IS, Point q, Point p, const ElemSet& tau_q,
                            const StarFamily& F) {
  if (!IS.poset().lt(p, q)) throw PreconditionFailed("requires p < q");
  if (!IS.levels_degenerate_free()) throw Degenerate("levels must be degenerate-free");
  auto Fq = augmented_family(IS, F, q);
  if (auto fail = essentially_over(IS.level(q), normalized(tau_q), Fq))
    throw PreconditionFailed("tau_q is not essentially over F_q");

  ElemSet tau_p;
  for (Elem x : tau_q) tau_p.push_back(IS.bond(q, p, x));
  tau_p = normalized(std::move(tau_p));
  if (!is_nested(IS.level(p), tau_p)) throw InternalError("projected tau is not nested");
  auto Fp = augmented_family(IS, F, p);
  if (auto fail = essentially_over(IS.level(p), tau_p, Fp))
    throw InternalError("projected tau is not essentially over F_p");
  return tau_p;
}

// ---------------------------------------------------------------------------
// The tree set compactness construction.

struct CompactnessResult {
  enum class Status { ok, empty_family, no_candidates, no_compatible_family };
  Status status = Status::ok;
  ElemSet tau;             // closed nested subset of the limit, over F
  Point failed_level = -1; // for no_candidates

  bool ok() const { return status == Status::ok; }
};

// Constructive stand-in for the compactness argument: prune to a
// degenerate-free cofinal subposet, collect the nested level subsets that
// are essentially over F_p, and search for a compatible family by
// backtracking top-down in candidate-index order. The returned tau is
// verified closed, nested and over F.
inline CompactnessResult compactness_construct(
    const InverseSystem& IS_in, const StarFamily& F,
    const std::map<Point, std::vector<ElemSet>>* per_level_candidates = nullptr,
    int max_level_bits = 16) {
  const SeparationSystem& L0 = IS_in.limit();
  for (Elem x = 0; x < L0.size(); ++x)
    if (L0.degenerate(x)) throw Degenerate("the limit must be degenerate-free");
  {
    auto ec = essentially_closed(IS_in, F, max_level_bits);
    if (!ec.ok) throw NotEssentiallyClosed("condition " + std::to_string(ec.failed_condition));
  }

  // Cofinal degenerate-free subposet; the top level is always
  // degenerate-free here, so a p0 exists.
  Point p0 = -1;
  for (Point p = 0; p < IS_in.points(); ++p) {
    bool clean = true;
    for (Elem x = 0; x < IS_in.level(p).size() && clean; ++x)
      if (IS_in.level(p).degenerate(x)) clean = false;
    if (clean) {
      p0 = p;
      break;
    }
  }
  if (p0 < 0) throw InternalError("degenerate-free limit forces a degenerate-free level");

  std::vector<Point> pts = IS_in.poset().up_set(p0);

  auto candidates_at = [&](Point p) -> std::vector<ElemSet> {
    if (per_level_candidates) {
      auto it = per_level_candidates->find(p);
      if (it == per_level_candidates->end()) return {};
      std::vector<ElemSet> out;
      for (const auto& c : it->second) out.push_back(normalized(c));
      return out;
    }
    const SeparationSystem& Sp = IS_in.level(p);
    if (Sp.size() > max_level_bits) throw LevelTooLarge("level too large to enumerate");
    std::vector<ElemSet> out;
    const uint64_t total = uint64_t{1} << Sp.size();
    for (uint64_t mask = 0; mask < total; ++mask) {
      ElemSet tau;
      for (Elem x = 0; x < Sp.size(); ++x)
        if ((mask >> x) & 1) tau.push_back(x);
      if (is_nested(Sp, tau)) out.push_back(tau);
    }
    return out;
  };

  CompactnessResult res;

  // T_p: candidates that are nested and essentially over F_p. Evaluated
  // eagerly only at the top; lower levels are checked against the forced
  // projection.
  std::map<Point, AugmentedFamily> fam;
  for (Point p : pts) fam.emplace(p, augmented_family(IS_in, F, p));

  const Point m = IS_in.max_point();
  std::vector<ElemSet> top_candidates = candidates_at(m);
  if (top_candidates.empty()) {
    res.status = CompactnessResult::Status::no_candidates;
    res.failed_level = m;
    return res;
  }

  std::map<Point, std::vector<ElemSet>> lower_lists;
  if (per_level_candidates)
    for (Point p : pts)
      if (p != m) lower_lists[p] = candidates_at(p);

  const SeparationSystem& L = IS_in.limit();
  for (const ElemSet& tau_m : top_candidates) {
    if (!is_nested(IS_in.level(m), tau_m)) continue;
    if (essentially_over(IS_in.level(m), tau_m, fam.at(m))) continue;

    bool family_ok = true;
    for (Point p : pts) {
      if (p == m) continue;
      ElemSet tau_p;
      for (Elem x : tau_m) tau_p.push_back(IS_in.bond(m, p, x));
      tau_p = normalized(std::move(tau_p));
      if (per_level_candidates) {
        const auto& list = lower_lists[p];
        if (std::find(list.begin(), list.end(), tau_p) == list.end()) {
          family_ok = false;
          break;
        }
      }
      if (!is_nested(IS_in.level(p), tau_p) ||
          essentially_over(IS_in.level(p), tau_p, fam.at(p))) {
        family_ok = false;
        break;
      }
    }
    if (!family_ok) continue;

    // tau := the limit of the family; with the maximum in the poset this is
    // exactly the top candidate read as limit elements.
    ElemSet tau = tau_m;
    if (!is_closed(IS_in, tau)) continue;
    if (!is_nested(L, tau)) continue;
    bool over = true;
    for (const auto& sigma : splitting_stars_of_subset(L, tau))
      if (!F.member(sigma)) over = false;
    if (!over) continue;

    res.tau = tau;
    return res;
  }

  res.status = CompactnessResult::Status::no_compatible_family;
  return res;
}

// The essential core of a nested tau, with the splitting-star preservation
// report of the closing remark: every splitting star of tau° still splits
// tau, while tau° itself may fail to be closed.
struct TreeSetExtraction {
  ElemSet tau_core;
  bool stars_preserved = false;
  bool core_closed = false;
  std::vector<ElemSet> core_stars;
};

inline TreeSetExtraction extract_tree_set(const InverseSystem& IS, const ElemSet& tau_in) {
  const SeparationSystem& L = IS.limit();
  const ElemSet tau = normalized(tau_in);
  if (!is_nested(L, tau)) throw PreconditionFailed("tau must be nested");

  auto ind = induced_subsystem(L, tau);
  ElemSet core_local = essential_core_elements(ind.system);
  TreeSetExtraction out;
  ElemSet core_parent;
  for (Elem x : core_local) core_parent.push_back(ind.to_parent[x]);
  core_parent = normalized(std::move(core_parent));
  // Keep only elements of tau itself (the induced system added inverses).
  for (Elem x : core_parent)
    if (contains(tau, x)) out.tau_core.push_back(x);

  out.core_stars = splitting_stars_of_subset(L, out.tau_core);
  out.stars_preserved = true;
  auto tau_ind = induced_subsystem(L, tau);
  for (const auto& sigma : out.core_stars) {
    if (!is_splitting_star(tau_ind.system, tau_ind.set_to_induced(sigma)))
      out.stars_preserved = false;
  }
  out.core_closed = is_closed(IS, out.tau_core);
  return out;
}

}  // namespace sepsys
