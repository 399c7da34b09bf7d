#pragma once

#include <optional>
#include <vector>

#include "sepsys/separation_system.hpp"

namespace sepsys {

// An orientation: exactly one orientation of every separation (degenerate
// elements appear once). A partial orientation orients a subset of them.
using Orientation = ElemSet;

namespace detail {

inline bool consistent_with(const SeparationSystem& S, const ElemSet& chosen, Elem y) {
  for (Elem c : chosen) {
    if (S.same_sep(c, y)) continue;
    if (S.leq(S.inv(c), y) || S.leq(S.inv(y), c)) return false;
  }
  return true;
}

}  // namespace detail

// All consistent orientations, enumerated by backtracking over the
// separations in table order (forward orientation tried first). The
// result order is deterministic.
inline std::vector<Orientation> consistent_orientations(const SeparationSystem& S) {
  std::vector<Elem> seps = S.separations();
  std::vector<Orientation> out;
  ElemSet chosen;

  auto rec = [&](auto&& self, size_t i) -> void {
    if (i == seps.size()) {
      out.push_back(normalized(chosen));
      return;
    }
    Elem r = seps[i];
    Elem candidates[2] = {r, S.inv(r)};
    int ncand = S.degenerate(r) ? 1 : 2;
    for (int c = 0; c < ncand; ++c) {
      if (!detail::consistent_with(S, chosen, candidates[c])) continue;
      chosen.push_back(candidates[c]);
      self(self, i + 1);
      chosen.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

// Outcome of extend_orientation. `unique` reports Extension Lemma (iii):
// when keep_max was requested and the system is nested, the returned
// orientation is the only one with keep_max maximal.
struct ExtendResult {
  enum class Status { ok, co_trivial_member, trivial_keep_max };
  Status status = Status::ok;
  Orientation orientation;
  Elem offender = kNoElem;
  bool unique = false;

  bool ok() const { return status == Status::ok; }
};

// Extension Lemma, all three clauses, by the constructive proof: force the
// inverses of everything strictly above keep_max, then orient the remaining
// separations one at a time, always picking an orientation that keeps the
// partial orientation consistent and free of co-trivial members.
inline ExtendResult extend_orientation(const SeparationSystem& S, const ElemSet& P,
                                       std::optional<Elem> keep_max = std::nullopt) {
  for (Elem x : P) S.require(x);
  for (Elem x : P)
    if (!S.degenerate(x) && contains(P, S.inv(x)))
      throw InconsistentInput("P contains both orientations of " + S.label(x));
  if (auto c = is_consistent(S, P); !c)
    throw InconsistentInput("P is inconsistent: " + S.label(c.violation.first) + ", " +
                            S.label(c.violation.second));
  if (keep_max) {
    S.require(*keep_max);
    if (!contains(P, *keep_max))
      throw InconsistentInput("keep_max is not a member of P");
    for (Elem x : P)
      if (S.lt(*keep_max, x)) throw InconsistentInput("keep_max is not maximal in P");
  }

  ExtendResult res;
  for (Elem x : P) {
    if (is_co_trivial(S, x)) {
      res.status = ExtendResult::Status::co_trivial_member;
      res.offender = x;
      return res;
    }
  }
  if (keep_max && is_trivial(S, *keep_max)) {
    res.status = ExtendResult::Status::trivial_keep_max;
    res.offender = *keep_max;
    return res;
  }

  ElemSet chosen = P;
  std::vector<char> oriented(S.size(), 0);
  auto mark = [&](Elem x) {
    oriented[x] = 1;
    oriented[S.inv(x)] = 1;
  };
  for (Elem x : P) mark(x);

  if (keep_max) {
    // Clause (ii): nothing above keep_max may end up in the orientation.
    for (int x = 0; x < S.size(); ++x) {
      if (oriented[x] || !S.lt(*keep_max, x)) continue;
      chosen.push_back(S.inv(x));
      mark(x);
    }
    if (auto c = is_consistent(S, chosen); !c)
      throw InternalError("forced partial orientation inconsistent");
  }

  for (Elem r : S.separations()) {
    if (oriented[r]) continue;
    Elem candidates[2] = {r, S.inv(r)};
    int ncand = S.degenerate(r) ? 1 : 2;
    Elem pick = kNoElem;
    for (int c = 0; c < ncand && pick == kNoElem; ++c) {
      Elem y = candidates[c];
      if (is_co_trivial(S, y)) continue;
      if (!detail::consistent_with(S, chosen, y)) continue;
      pick = y;
    }
    if (pick == kNoElem)
      throw InternalError("no orientation of " + S.label(r) + " is addable");
    chosen.push_back(pick);
    mark(r);
  }

  res.orientation = normalized(std::move(chosen));
  if (keep_max) res.unique = static_cast<bool>(is_nested(S));
  return res;
}

// Maximal elements of O, i.e. members with nothing of O strictly above.
inline ElemSet maximal_elements(const SeparationSystem& S, const ElemSet& O) {
  ElemSet out;
  for (Elem x : O) {
    bool maximal = true;
    for (Elem y : O)
      if (S.lt(x, y)) {
        maximal = false;
        break;
      }
    if (maximal) out.push_back(x);
  }
  return out;
}

// The splitting subset of O: its set sigma of maximal elements, provided
// O is contained in the down-closure of sigma.
inline std::optional<ElemSet> splits_at(const SeparationSystem& S, const Orientation& O) {
  ElemSet sigma = maximal_elements(S, O);
  ElemSet dcl = down_closure(S, sigma);
  for (Elem x : O)
    if (!contains(dcl, x)) return std::nullopt;
  return sigma;
}

// All splitting subsets, enumerated over the consistent orientations.
inline std::vector<ElemSet> splitting_subsets(const SeparationSystem& S) {
  std::vector<ElemSet> out;
  for (const Orientation& O : consistent_orientations(S)) {
    auto sigma = splits_at(S, O);
    if (!sigma) continue;
    if (std::find(out.begin(), out.end(), *sigma) == out.end()) out.push_back(*sigma);
  }
  return out;
}

// The canonical orientation induced by a splitting subset:
// O = dcl(sigma) minus the inverses of sigma that are not in sigma itself.
// Returns it iff it really is a consistent orientation splitting at sigma.
inline std::optional<Orientation> splitting_orientation(const SeparationSystem& S,
                                                        const ElemSet& sigma_in) {
  const ElemSet sigma = normalized(sigma_in);
  ElemSet O;
  for (Elem x : down_closure(S, sigma)) {
    if (contains(sigma, x)) {
      O.push_back(x);
      continue;
    }
    if (contains(sigma, S.inv(x))) continue;
    O.push_back(x);
  }
  O = normalized(std::move(O));

  std::vector<char> seen(S.size(), 0);
  for (Elem x : O) {
    if (seen[S.sep(x)]) return std::nullopt;  // both orientations present
    seen[S.sep(x)] = 1;
  }
  for (Elem r : S.separations())
    if (!seen[r]) return std::nullopt;  // some separation unoriented
  if (!is_consistent(S, O)) return std::nullopt;
  if (maximal_elements(S, O) != sigma) return std::nullopt;
  auto check = splits_at(S, O);
  if (!check || *check != sigma) return std::nullopt;
  return O;
}

inline bool is_splitting_star(const SeparationSystem& S, const ElemSet& sigma) {
  return splitting_orientation(S, sigma).has_value();
}

}  // namespace sepsys
