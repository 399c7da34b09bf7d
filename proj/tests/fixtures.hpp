#pragma once

#include "sepsys/separation_system.hpp"
#include "sepsys/testkit.hpp"

namespace fixtures {

using namespace sepsys;

// One degenerate element d with inv(d) = d.
inline SeparationSystem degenerate_singleton() {
  return SeparationSystem::from_generators({"d"}, {0}, {});
}

// E2: r+ < s+ and r+ < s- (so r+ is trivial with witness s, r- co-trivial).
// Elements: 0 r+, 1 r-, 2 s+, 3 s-.
inline SeparationSystem e2() {
  return SeparationSystem::from_generators({"r+", "r-", "s+", "s-"}, {1, 0, 3, 2},
                                           {{0, 2}, {0, 3}});
}

// Edge tree set of the path a-b-c. Elements: 0 e1+, 1 e1-, 2 e2+, 3 e2-,
// with e1+ <= e2+ (both pointing towards c).
inline SeparationSystem path3() {
  testkit::Tree t;
  t.n = 3;
  t.edges = {{0, 1}, {1, 2}};
  return testkit::edge_tree_set(t);
}

inline testkit::Tree path3_tree() {
  testkit::Tree t;
  t.n = 3;
  t.edges = {{0, 1}, {1, 2}};
  return t;
}

// Edge tree set of the star K_{1,3}: centre 0, leaves 1..3; edge i points
// towards leaf i+1 in its "+" orientation.
inline testkit::Tree k13_tree() {
  testkit::Tree t;
  t.n = 4;
  t.edges = {{0, 1}, {0, 2}, {0, 3}};
  return t;
}

inline SeparationSystem k13() { return testkit::edge_tree_set(k13_tree()); }

}  // namespace fixtures
