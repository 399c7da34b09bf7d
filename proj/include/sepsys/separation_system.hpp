#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sepsys/errors.hpp"

namespace sepsys {

// Index of an oriented separation inside its owning system's element table.
using Elem = int;
constexpr Elem kNoElem = -1;

// Subsets of oriented separations are kept as sorted, duplicate-free vectors.
using ElemSet = std::vector<Elem>;

inline ElemSet normalized(ElemSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline bool contains(const ElemSet& s, Elem x) {
  return std::binary_search(s.begin(), s.end(), x);
}

// Dense reflexive binary relation on {0..n-1}, rows packed into 64-bit words.
class Relation {
public:
  Relation() = default;
  explicit Relation(int n) : n_(n), words_((n + 63) / 64), bits_(static_cast<size_t>(n) * words_, 0) {
    for (int i = 0; i < n; ++i) set(i, i);
  }

  int size() const { return n_; }

  bool get(int i, int j) const {
    return (bits_[static_cast<size_t>(i) * words_ + j / 64] >> (j % 64)) & 1u;
  }

  void set(int i, int j) {
    bits_[static_cast<size_t>(i) * words_ + j / 64] |= (uint64_t{1} << (j % 64));
  }

  // Warshall closure, word-parallel on rows.
  void close_transitively() {
    for (int k = 0; k < n_; ++k) {
      const uint64_t* rk = row(k);
      for (int i = 0; i < n_; ++i) {
        if (!get(i, k)) continue;
        uint64_t* ri = mutable_row(i);
        for (int w = 0; w < words_; ++w) ri[w] |= rk[w];
      }
    }
  }

  bool operator==(const Relation& o) const { return n_ == o.n_ && bits_ == o.bits_; }

private:
  const uint64_t* row(int i) const { return bits_.data() + static_cast<size_t>(i) * words_; }
  uint64_t* mutable_row(int i) { return bits_.data() + static_cast<size_t>(i) * words_; }

  int n_ = 0;
  int words_ = 0;
  std::vector<uint64_t> bits_;
};

// A finite abstract separation system: a finite poset of oriented
// separations with an order-reversing involution *. Values are immutable
// after validation and safe to share across threads.
//
// Invariants held by every constructed instance:
//   - leq is reflexive, transitive and antisymmetric,
//   - inv(inv(x)) == x,
//   - x <= y  iff  inv(y) <= inv(x),
//   - degenerate elements (inv(x) == x) are permitted and flagged.
class SeparationSystem {
public:
  SeparationSystem() = default;

  // Builds the system whose order is the closure of `generators` under
  // transitivity and order reversal. `inv` must be a total involution.
  static SeparationSystem from_generators(std::vector<std::string> labels,
                                          std::vector<Elem> inv,
                                          const std::vector<std::pair<Elem, Elem>>& generators) {
    const int n = static_cast<int>(labels.size());
    check_involution(labels, inv);
    Relation rel(n);
    for (auto [a, b] : generators) {
      if (a < 0 || a >= n || b < 0 || b >= n)
        throw UnknownElement("order generator index out of range");
      rel.set(a, b);
      rel.set(inv[b], inv[a]);
    }
    rel.close_transitively();
    SeparationSystem sys(std::move(labels), std::move(inv), std::move(rel));
    sys.check_antisymmetry();
    return sys;
  }

  // Accepts an already-closed relation and verifies every axiom on it.
  static SeparationSystem from_closed_relation(std::vector<std::string> labels,
                                               std::vector<Elem> inv, Relation rel) {
    const int n = static_cast<int>(labels.size());
    if (rel.size() != n) throw InconsistentInput("relation size does not match element count");
    check_involution(labels, inv);
    for (int i = 0; i < n; ++i) {
      if (!rel.get(i, i)) throw InconsistentInput("relation not reflexive at " + labels[i]);
      for (int j = 0; j < n; ++j) {
        if (!rel.get(i, j)) continue;
        if (!rel.get(inv[j], inv[i]))
          throw OrderReversalError(labels[i] + " <= " + labels[j] + " but not " +
                                   labels[inv[j]] + " <= " + labels[inv[i]]);
        for (int k = 0; k < n; ++k)
          if (rel.get(j, k) && !rel.get(i, k))
            throw InconsistentInput("relation not transitively closed");
      }
    }
    SeparationSystem sys(std::move(labels), std::move(inv), std::move(rel));
    sys.check_antisymmetry();
    return sys;
  }

  int size() const { return static_cast<int>(labels_.size()); }
  bool empty() const { return labels_.empty(); }

  const std::string& label(Elem x) const {
    require(x);
    return labels_[x];
  }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<Elem> find(const std::string& label) const {
    for (int i = 0; i < size(); ++i)
      if (labels_[i] == label) return i;
    return std::nullopt;
  }

  Elem inv(Elem x) const {
    require(x);
    return inv_[x];
  }

  bool leq(Elem x, Elem y) const {
    require(x);
    require(y);
    return leq_.get(x, y);
  }
  bool lt(Elem x, Elem y) const { return x != y && leq(x, y); }

  bool degenerate(Elem x) const { return inv(x) == x; }
  bool small(Elem x) const { return leq(x, inv(x)); }
  bool co_small(Elem x) const { return leq(inv(x), x); }

  // Canonical representative of the unoriented separation {x, x*}.
  Elem sep(Elem x) const { return std::min(x, inv(x)); }
  bool same_sep(Elem x, Elem y) const { return sep(x) == sep(y); }

  // One canonical orientation per separation, in table order.
  std::vector<Elem> separations() const {
    std::vector<Elem> out;
    for (int i = 0; i < size(); ++i)
      if (sep(i) == i) out.push_back(i);
    return out;
  }

  int separation_count() const { return static_cast<int>(separations().size()); }

  ElemSet all_elements() const {
    ElemSet out(size());
    for (int i = 0; i < size(); ++i) out[i] = i;
    return out;
  }

  void require(Elem x) const {
    if (x < 0 || x >= size()) throw UnknownElement("element id " + std::to_string(x));
  }

  const Relation& relation() const { return leq_; }
  const std::vector<Elem>& involution() const { return inv_; }

private:
  SeparationSystem(std::vector<std::string> labels, std::vector<Elem> inv, Relation leq)
      : labels_(std::move(labels)), inv_(std::move(inv)), leq_(std::move(leq)) {}

  static void check_involution(const std::vector<std::string>& labels,
                               const std::vector<Elem>& inv) {
    const int n = static_cast<int>(labels.size());
    if (static_cast<int>(inv.size()) != n)
      throw InvolutionError("involution is not total");
    for (int i = 0; i < n; ++i) {
      if (inv[i] < 0 || inv[i] >= n) throw InvolutionError("image out of range at " + labels[i]);
      if (inv[inv[i]] != i) throw InvolutionError("inv(inv(" + labels[i] + ")) != " + labels[i]);
    }
  }

  void check_antisymmetry() const {
    for (int i = 0; i < size(); ++i)
      for (int j = i + 1; j < size(); ++j)
        if (leq_.get(i, j) && leq_.get(j, i))
          throw CycleError(labels_[i] + " and " + labels_[j] + " are order-equivalent");
  }

  std::vector<std::string> labels_;
  std::vector<Elem> inv_;
  Relation leq_;
};

// ---------------------------------------------------------------------------
// Single-system predicates.

struct Classification {
  bool small = false;
  bool co_small = false;
  bool degenerate = false;
  // Canonical representatives of every witnessing separation.
  std::vector<Elem> trivial_witnesses;
  std::vector<Elem> co_trivial_witnesses;

  bool trivial() const { return !trivial_witnesses.empty(); }
  bool co_trivial() const { return !co_trivial_witnesses.empty(); }
};

// A separation s witnesses the triviality of x iff s != sep(x) and
// x < s_fwd as well as x < s_bkwd.
inline bool witnesses_triviality(const SeparationSystem& S, Elem x, Elem s) {
  Elem t = S.sep(s);
  if (t == S.sep(x)) return false;
  return S.lt(x, t) && S.lt(x, S.inv(t));
}

inline Classification classify(const SeparationSystem& S, Elem x) {
  S.require(x);
  Classification c;
  c.small = S.small(x);
  c.co_small = S.co_small(x);
  c.degenerate = S.degenerate(x);
  for (Elem s : S.separations()) {
    if (witnesses_triviality(S, x, s)) c.trivial_witnesses.push_back(s);
    if (witnesses_triviality(S, S.inv(x), s)) c.co_trivial_witnesses.push_back(s);
  }
  return c;
}

inline bool is_trivial(const SeparationSystem& S, Elem x) {
  for (Elem s : S.separations())
    if (witnesses_triviality(S, x, s)) return true;
  return false;
}

inline bool is_co_trivial(const SeparationSystem& S, Elem x) {
  return is_trivial(S, S.inv(x));
}

// Triviality of x with a witness orientation inside sigma. Returns the
// witnessing member of sigma, if any.
inline std::optional<Elem> is_trivial_in(const SeparationSystem& S, Elem x,
                                         const ElemSet& sigma) {
  S.require(x);
  for (Elem w : sigma) {
    S.require(w);
    if (witnesses_triviality(S, x, w)) return w;
  }
  return std::nullopt;
}

// Two separations are nested iff they have comparable orientations.
inline bool nested_pair(const SeparationSystem& S, Elem x, Elem y) {
  Elem xi = S.inv(x), yi = S.inv(y);
  return S.leq(x, y) || S.leq(y, x) || S.leq(x, yi) || S.leq(yi, x) ||
         S.leq(xi, y) || S.leq(y, xi) || S.leq(xi, yi) || S.leq(yi, xi);
}

struct NestedResult {
  bool nested = true;
  std::pair<Elem, Elem> crossing{kNoElem, kNoElem};
  explicit operator bool() const { return nested; }
};

inline NestedResult is_nested(const SeparationSystem& S, const ElemSet& subset) {
  for (size_t i = 0; i < subset.size(); ++i)
    for (size_t j = i + 1; j < subset.size(); ++j) {
      if (S.same_sep(subset[i], subset[j])) continue;
      if (!nested_pair(S, subset[i], subset[j]))
        return {false, {subset[i], subset[j]}};
    }
  return {};
}

inline NestedResult is_nested(const SeparationSystem& S) {
  return is_nested(S, S.all_elements());
}

inline bool is_antisymmetric(const SeparationSystem& S, const ElemSet& subset) {
  for (Elem x : subset)
    if (!S.degenerate(x) && contains(subset, S.inv(x))) return false;
  return true;
}

// Star: no degenerate member, and distinct members point at each other
// (r <= inv(s) pairwise).
inline bool is_star(const SeparationSystem& S, const ElemSet& subset) {
  for (Elem x : subset)
    if (S.degenerate(x)) return false;
  for (Elem x : subset)
    for (Elem y : subset)
      if (x != y && !S.leq(x, S.inv(y))) return false;
  return true;
}

inline bool is_proper_star(const SeparationSystem& S, const ElemSet& subset) {
  return !subset.empty() && is_star(S, subset) && is_antisymmetric(S, subset);
}

struct ConsistencyResult {
  bool consistent = true;
  // The offending pair (r_bkwd, s_fwd) with r != s and r_fwd <= s_fwd.
  std::pair<Elem, Elem> violation{kNoElem, kNoElem};
  explicit operator bool() const { return consistent; }
};

inline ConsistencyResult is_consistent(const SeparationSystem& S, const ElemSet& subset) {
  for (Elem x : subset)
    for (Elem y : subset) {
      if (S.same_sep(x, y)) continue;
      if (S.leq(S.inv(x), y)) return {false, {x, y}};
    }
  return {};
}

inline ElemSet down_closure(const SeparationSystem& S, const ElemSet& subset) {
  ElemSet out;
  for (int x = 0; x < S.size(); ++x)
    for (Elem y : subset)
      if (S.leq(x, y)) {
        out.push_back(x);
        break;
      }
  return out;
}

// sigma^-: sigma minus its members that are trivial in sigma. For finite
// sigma every deleted member keeps a witness inside sigma^- (a maximal
// witness cannot itself be trivial in sigma); verified here.
inline ElemSet sigma_minus(const SeparationSystem& S, const ElemSet& sigma) {
  ElemSet out;
  for (Elem x : sigma)
    if (!is_trivial_in(S, x, sigma)) out.push_back(x);
  for (Elem x : sigma) {
    if (contains(out, x)) continue;
    if (!is_trivial_in(S, x, out))
      throw InternalError("deleted member of sigma has no witness in sigma^-");
  }
  return out;
}

struct EssentialCore {
  SeparationSystem system;
  // core element id -> parent element id
  std::vector<Elem> to_parent;
  std::optional<Elem> parent_to_core(Elem x) const {
    for (size_t i = 0; i < to_parent.size(); ++i)
      if (to_parent[i] == x) return static_cast<Elem>(i);
    return std::nullopt;
  }
};

// S minus its degenerate, trivial and co-trivial elements, as an induced
// system with a map back into S.
inline EssentialCore essential_core(const SeparationSystem& S) {
  std::vector<Elem> keep;
  for (int x = 0; x < S.size(); ++x) {
    if (S.degenerate(x)) continue;
    if (is_trivial(S, x) || is_co_trivial(S, x)) continue;
    keep.push_back(x);
  }
  std::vector<Elem> to_core(S.size(), kNoElem);
  for (size_t i = 0; i < keep.size(); ++i) to_core[keep[i]] = static_cast<Elem>(i);

  std::vector<std::string> labels;
  std::vector<Elem> inv;
  for (Elem x : keep) {
    labels.push_back(S.label(x));
    inv.push_back(to_core[S.inv(x)]);  // inverse survives with x by symmetry
  }
  Relation rel(static_cast<int>(keep.size()));
  for (size_t i = 0; i < keep.size(); ++i)
    for (size_t j = 0; j < keep.size(); ++j)
      if (S.leq(keep[i], keep[j])) rel.set(static_cast<int>(i), static_cast<int>(j));
  EssentialCore core{SeparationSystem::from_closed_relation(std::move(labels), std::move(inv),
                                                            std::move(rel)),
                     keep};
  return core;
}

// The set of elements of S that survive into the essential core.
inline ElemSet essential_core_elements(const SeparationSystem& S) {
  ElemSet out;
  for (int x = 0; x < S.size(); ++x) {
    if (S.degenerate(x)) continue;
    if (is_trivial(S, x) || is_co_trivial(S, x)) continue;
    out.push_back(x);
  }
  return out;
}

// Induced subsystem on `elements` (closed under the involution first).
struct InducedSystem {
  SeparationSystem system;
  std::vector<Elem> to_parent;
  std::vector<Elem> from_parent;  // parent id -> induced id or kNoElem

  Elem to_induced(Elem parent_elem) const {
    Elem e = from_parent[parent_elem];
    if (e == kNoElem) throw UnknownElement("element not in induced subsystem");
    return e;
  }
  ElemSet set_to_induced(const ElemSet& parent_set) const {
    ElemSet out;
    for (Elem x : parent_set) out.push_back(to_induced(x));
    return normalized(std::move(out));
  }
  ElemSet set_to_parent(const ElemSet& induced_set) const {
    ElemSet out;
    for (Elem x : induced_set) out.push_back(to_parent[x]);
    return normalized(std::move(out));
  }
};

inline InducedSystem induced_subsystem(const SeparationSystem& S, const ElemSet& elements) {
  ElemSet keep = elements;
  for (Elem x : elements) keep.push_back(S.inv(x));
  keep = normalized(std::move(keep));

  std::vector<Elem> from_parent(S.size(), kNoElem);
  for (size_t i = 0; i < keep.size(); ++i) from_parent[keep[i]] = static_cast<Elem>(i);

  std::vector<std::string> labels;
  std::vector<Elem> inv;
  for (Elem x : keep) {
    labels.push_back(S.label(x));
    inv.push_back(from_parent[S.inv(x)]);
  }
  Relation rel(static_cast<int>(keep.size()));
  for (size_t i = 0; i < keep.size(); ++i)
    for (size_t j = 0; j < keep.size(); ++j)
      if (S.leq(keep[i], keep[j])) rel.set(static_cast<int>(i), static_cast<int>(j));
  return {SeparationSystem::from_closed_relation(std::move(labels), std::move(inv), std::move(rel)),
          keep, std::move(from_parent)};
}

}  // namespace sepsys
