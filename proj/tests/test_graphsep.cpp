#include <catch2/catch_amalgamated.hpp>

#include "sepsys/graphsep.hpp"
#include "sepsys/orientations.hpp"

using namespace sepsys;

TEST_CASE("one-vertex graph separations") {
  Graph g = Graph::edgeless({"v"});
  auto gs = enumerate_separations(g, 2);
  // (∅,{v}), ({v},∅), ({v},{v}).
  REQUIRE(gs.system->size() == 3);
  REQUIRE(gs.find_sides(0, 1).has_value());
  REQUIRE(gs.find_sides(1, 0).has_value());
  REQUIRE(gs.find_sides(1, 1).has_value());
  Elem deg = *gs.find_sides(1, 1);
  REQUIRE(gs.system->degenerate(deg));
  REQUIRE(gs.order_of(deg) == 1);
}

TEST_CASE("footnote criterion rejects crossing covers") {
  Graph g = Graph::path(3);  // v1 - v2 - v3
  auto gs = enumerate_separations(g, 2);
  // ({v1},{v1,v2,v3}) is a separation.
  REQUIRE(gs.find_sides(0b001, 0b111).has_value());
  // ({v1,v3},{v2,v3}) leaves the edge v1v2 from A\B to B\A uncovered.
  REQUIRE_FALSE(gs.find_sides(0b101, 0b110).has_value());
  REQUIRE_FALSE(is_separation(g, 0b101, 0b110));
  // (V,∅) is always a separation.
  REQUIRE(gs.find_sides(0b111, 0).has_value());
  // The underlying abstract system is a valid nested-ish system; at least
  // every enumerated pair passes the criterion and the order bound.
  for (const auto& s : gs.sides) {
    REQUIRE(is_separation(g, s.a, s.b));
    REQUIRE(s.order() < 2);
  }
}

TEST_CASE("order relation is coordinatewise inclusion") {
  Graph g = Graph::path(3);
  auto gs = enumerate_separations(g, 2);
  Elem lo = *gs.find_sides(0b001, 0b111);  // ({v1}, V)
  Elem hi = *gs.find_sides(0b111, 0b100);  // (V, {v3})
  REQUIRE(gs.system->leq(lo, hi));
  REQUIRE(gs.system->leq(gs.system->inv(hi), gs.system->inv(lo)));
}

TEST_CASE("restrict_separation") {
  // ({x,a},{c,x,b}) restricted to {c,x} gives ({x},{c,x}).
  Graph g = Graph::edgeless({"a", "b", "c", "x"});
  VertexMask a = 0b1001, b = 0b1110, u = 0b1100;
  auto r = restrict_separation({a, b}, u);
  REQUIRE(r.a == 0b1000);
  REQUIRE(r.b == 0b1100);
  // Restriction to the full set is the identity; to ∅ it is (∅,∅).
  VertexMask all = 0b1111;
  REQUIRE(restrict_separation({a, b}, all) == OrientedSetSep{a, b});
  REQUIRE(restrict_separation({a, b}, 0) == OrientedSetSep{0, 0});
  // Composing restrictions equals restricting to the smaller set.
  VertexMask small = 0b0100;
  REQUIRE(restrict_separation(restrict_separation({a, b}, u), small) ==
          restrict_separation({a, b}, small));
}

TEST_CASE("restriction system over a chain of prefixes") {
  Graph g = Graph::path(4);
  std::vector<VertexMask> chain{0b0001, 0b0011, 0b0111, 0b1111};
  auto rs = build_restriction_system(g, 2, chain);
  REQUIRE(rs.inverse_system.points() == 4);
  // Bonds validated as homomorphisms by construction; limit is the top.
  REQUIRE(rs.inverse_system.limit().size() == rs.level_payload[3].system->size());
}

TEST_CASE("two-level chain on K2 bonds verified") {
  Graph g = Graph::path(2);
  std::vector<VertexMask> chain{0b01, 0b11};
  auto rs = build_restriction_system(g, 2, chain);
  REQUIRE(rs.inverse_system.points() == 2);
  for (Elem x = 0; x < rs.inverse_system.level(1).size(); ++x) {
    auto s = rs.level_payload[1].sides[x];
    auto down = restrict_separation(s, 0b01);
    REQUIRE(rs.level_payload[0].find_sides(down.a, down.b) ==
            rs.inverse_system.bond(1, 0, x));
  }
}

TEST_CASE("single-level chain is the trivial system") {
  Graph g = Graph::path(2);
  auto rs = build_restriction_system(g, 2, {0b11});
  REQUIRE(rs.inverse_system.points() == 1);
  REQUIRE(rs.inverse_system.limit().size() == rs.level_payload[0].system->size());
}

TEST_CASE("subset families must be directed") {
  Graph g = Graph::path(3);
  REQUIRE_THROWS_AS(build_restriction_system(g, 2, {0b001, 0b010}), NotAChain);
  REQUIRE_THROWS_AS(build_restriction_system(g, 2, {}), NotAChain);
}

TEST_CASE("full-lattice limit is isomorphic to direct enumeration") {
  // Limit of restrictions over all subsets equals the
  // order-<k system of G, element-wise via (A,B) = union of coordinates.
  for (int n : {2, 3, 4}) {
    Graph g = Graph::path(n);
    std::vector<VertexMask> lattice;
    for (VertexMask m = 0; m < (VertexMask{1} << n); ++m) lattice.push_back(m);
    auto rs = build_restriction_system(g, 2, lattice);
    auto direct = enumerate_separations(g, 2);

    const auto& L = rs.inverse_system.limit();
    REQUIRE(L.size() == direct.system->size());
    Point top = rs.inverse_system.max_point();
    const auto& top_payload =
        rs.level_payload[static_cast<size_t>(top)];
    for (Elem x = 0; x < L.size(); ++x) {
      // Union of coordinates reconstructs the top-level sides.
      VertexMask ua = 0, ub = 0;
      for (Point p = 0; p < rs.inverse_system.points(); ++p) {
        auto side = rs.level_payload[p].sides[rs.inverse_system.project(x, p)];
        ua |= side.a;
        ub |= side.b;
      }
      REQUIRE(ua == top_payload.sides[x].a);
      REQUIRE(ub == top_payload.sides[x].b);
      Elem y = *direct.find_sides(ua, ub);
      for (Elem x2 = 0; x2 < L.size(); ++x2) {
        VertexMask ua2 = top_payload.sides[x2].a, ub2 = top_payload.sides[x2].b;
        Elem y2 = *direct.find_sides(ua2, ub2);
        REQUIRE(L.leq(x, x2) == direct.system->leq(y, y2));
      }
      REQUIRE(*direct.find_sides(top_payload.sides[L.inv(x)].a,
                                 top_payload.sides[L.inv(x)].b) == direct.system->inv(y));
    }
  }
}

TEST_CASE("graph parsing") {
  auto g = parse_graph("a: b\nb: a c\nc:\n");
  REQUIRE(g.n() == 3);
  REQUIRE(g.edges.size() == 2);
  REQUIRE_THROWS_AS(parse_graph("a a b"), ParseError);
}
