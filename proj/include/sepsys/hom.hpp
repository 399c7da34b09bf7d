#pragma once

#include <memory>
#include <vector>

#include "sepsys/separation_system.hpp"

namespace sepsys {

using SystemPtr = std::shared_ptr<const SeparationSystem>;

inline SystemPtr make_system(SeparationSystem sys) {
  return std::make_shared<const SeparationSystem>(std::move(sys));
}

// A homomorphism of separation systems: total, commutes with the
// involutions and respects the order. Need not be injective and need not
// reflect the order.
struct SystemHom {
  SystemPtr source;
  SystemPtr target;
  std::vector<Elem> map;

  Elem operator()(Elem x) const {
    source->require(x);
    return map[x];
  }

  ElemSet image_of(const ElemSet& xs) const {
    ElemSet out;
    for (Elem x : xs) out.push_back((*this)(x));
    return normalized(std::move(out));
  }
};

inline SystemHom validate_hom(SystemPtr source, SystemPtr target, std::vector<Elem> map) {
  const SeparationSystem& A = *source;
  const SeparationSystem& B = *target;
  if (static_cast<int>(map.size()) != A.size())
    throw InvolutionMismatch("map is not total on the source");
  for (Elem x = 0; x < A.size(); ++x)
    if (map[x] < 0 || map[x] >= B.size())
      throw InvolutionMismatch("image of " + A.label(x) + " is out of range");
  for (Elem x = 0; x < A.size(); ++x)
    if (map[A.inv(x)] != B.inv(map[x]))
      throw InvolutionMismatch("does not commute with the involutions at " + A.label(x));
  for (Elem x = 0; x < A.size(); ++x)
    for (Elem y = 0; y < A.size(); ++y)
      if (A.leq(x, y) && !B.leq(map[x], map[y]))
        throw OrderViolation(A.label(x) + " <= " + A.label(y) + " but images are unrelated");
  return SystemHom{std::move(source), std::move(target), std::move(map)};
}

inline SystemHom identity_hom(SystemPtr sys) {
  std::vector<Elem> map(sys->size());
  for (int i = 0; i < sys->size(); ++i) map[i] = i;
  return SystemHom{sys, sys, std::move(map)};
}

// g after f.
inline SystemHom compose(const SystemHom& g, const SystemHom& f) {
  if (f.target.get() != g.source.get())
    throw InconsistentInput("compose: target of f is not source of g");
  std::vector<Elem> map(f.map.size());
  for (size_t i = 0; i < f.map.size(); ++i) map[i] = g.map[f.map[i]];
  return SystemHom{f.source, g.target, std::move(map)};
}

inline bool is_epi(const SystemHom& f) {
  std::vector<char> hit(f.target->size(), 0);
  for (Elem y : f.map) hit[y] = 1;
  for (char h : hit)
    if (!h) return false;
  return true;
}

}  // namespace sepsys
