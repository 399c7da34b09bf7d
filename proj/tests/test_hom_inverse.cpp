#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "sepsys/inverse_system.hpp"
#include "sepsys/testkit.hpp"

using namespace sepsys;

namespace {

// P3 -> P2 contraction chain: e1, e2 both map onto the single edge e.
InverseSystem p3_contraction_chain() {
  testkit::Tree p2;
  p2.n = 2;
  p2.edges = {{0, 1}};
  auto bottom = make_system(testkit::edge_tree_set(p2));
  auto top = make_system(fixtures::path3());
  // e1+ -> e1+, e1- -> e1-, e2+ -> e1+, e2- -> e1-.
  return InverseSystem::chain({bottom, top}, {{0, 1, 0, 1}});
}

}  // namespace

TEST_CASE("identity hom is a valid epi") {
  auto S = make_system(fixtures::path3());
  auto id = identity_hom(S);
  REQUIRE(is_epi(id));
  REQUIRE_NOTHROW(validate_hom(S, S, id.map));
}

TEST_CASE("tree contraction is a valid epi") {
  testkit::Tree p2;
  p2.n = 2;
  p2.edges = {{0, 1}};
  auto coarse = make_system(testkit::edge_tree_set(p2));
  auto fine = make_system(fixtures::path3());
  auto f = validate_hom(fine, coarse, {0, 1, 0, 1});
  REQUIRE(is_epi(f));
}

TEST_CASE("order violations and involution mismatches are reported") {
  auto fine = make_system(fixtures::path3());
  auto incomparable = make_system(
      SeparationSystem::from_generators({"a+", "a-", "b+", "b-"}, {1, 0, 3, 2}, {}));
  // e1 -> a, e2 -> b swallows the relation e1+ <= e2+.
  REQUIRE_THROWS_AS(validate_hom(fine, incomparable, {0, 1, 2, 3}), OrderViolation);
  // Does not commute with the involution.
  REQUIRE_THROWS_AS(validate_hom(fine, incomparable, {0, 0, 2, 3}), InvolutionMismatch);
}

TEST_CASE("compose associates") {
  auto A = make_system(fixtures::path3());
  testkit::Tree p2;
  p2.n = 2;
  p2.edges = {{0, 1}};
  auto B = make_system(testkit::edge_tree_set(p2));
  auto f = validate_hom(A, B, {0, 1, 0, 1});
  auto id_b = identity_hom(B);
  auto g = compose(id_b, f);
  REQUIRE(g.map == f.map);
}

TEST_CASE("posets must be directed") {
  REQUIRE_THROWS_AS(DirectedPoset::from_generators({"p", "q"}, {}), NotDirected);
  auto chain = DirectedPoset::chain(3);
  REQUIRE(chain.max_point() == 2);
  REQUIRE(chain.leq(0, 2));
}

TEST_CASE("incompatible bonds are rejected") {
  // Identity chain of E2 with a perturbed long bond.
  auto S = make_system(fixtures::e2());
  std::vector<Elem> id{0, 1, 2, 3};
  std::vector<Elem> swap_s{0, 1, 3, 2};  // s+ <-> s-: a valid hom but not the composite
  REQUIRE_NOTHROW(validate_hom(S, S, swap_s));

  InverseSystem::BondMap bonds;
  bonds[{1, 0}] = id;
  bonds[{2, 1}] = id;
  bonds[{2, 0}] = swap_s;
  REQUIRE_THROWS_AS(InverseSystem::build(DirectedPoset::chain(3), {S, S, S}, bonds),
                    IncompatibleBonds);
}

TEST_CASE("diamond posets check both composition paths") {
  auto S = make_system(fixtures::e2());
  std::vector<Elem> id{0, 1, 2, 3};
  std::vector<Elem> swap_s{0, 1, 3, 2};
  auto poset = DirectedPoset::from_generators({"p", "q1", "q2", "r"},
                                              {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  InverseSystem::BondMap bonds;
  bonds[{1, 0}] = id;
  bonds[{2, 0}] = id;
  bonds[{3, 1}] = id;
  bonds[{3, 2}] = swap_s;  // r -> q2 -> p disagrees with r -> q1 -> p
  REQUIRE_THROWS_AS(
      InverseSystem::build(poset, {S, S, S, S}, bonds), IncompatibleBonds);

  bonds[{3, 2}] = id;
  REQUIRE_NOTHROW(InverseSystem::build(poset, {S, S, S, S}, bonds));
}

TEST_CASE("limit of an identity chain is the top system") {
  auto S = make_system(fixtures::k13());
  std::vector<Elem> id(S->size());
  std::iota(id.begin(), id.end(), 0);
  auto IS = InverseSystem::chain({S, S, S}, {id, id});
  REQUIRE(IS.limit().size() == S->size());
  for (Elem x = 0; x < S->size(); ++x)
    for (Elem y = 0; y < S->size(); ++y) REQUIRE(IS.limit().leq(x, y) == S->leq(x, y));
  REQUIRE(IS.projection_collapses().empty());
  REQUIRE(IS.surjective());
}

TEST_CASE("P3 contraction chain: limit is P3, projections collapse") {
  auto IS = p3_contraction_chain();
  const auto& L = IS.limit();
  REQUIRE(L.size() == 4);
  REQUIRE(L.leq(*L.find("e1+"), *L.find("e2+")));
  // e1+ < e2+ in the limit but both project to e1+ at the bottom.
  auto collapses = IS.projection_collapses();
  REQUIRE_FALSE(collapses.empty());
  bool found = false;
  for (auto [x, y, p] : collapses)
    if (x == *L.find("e1+") && y == *L.find("e2+") && p == 0) found = true;
  REQUIRE(found);
}

TEST_CASE("empty levels give an empty limit") {
  auto empty = make_system(SeparationSystem::from_generators({}, {}, {}));
  auto IS = InverseSystem::chain({empty, empty}, {{}});
  REQUIRE(IS.limit().size() == 0);
}

TEST_CASE("projections satisfy (*) and commute with inversion") {
  for (uint64_t seed = 1; seed <= 25; ++seed) {
    auto IS = testkit::random_contraction_chain(seed, 3, 5);
    const auto& L = IS.limit();
    for (Point p = 0; p < IS.points(); ++p) {
      for (Elem x = 0; x < L.size(); ++x) {
        REQUIRE(IS.project(L.inv(x), p) == IS.level(p).inv(IS.project(x, p)));
        for (Elem y = 0; y < L.size(); ++y)
          if (L.leq(x, y)) REQUIRE(IS.level(p).leq(IS.project(x, p), IS.project(y, p)));
      }
    }
  }
}

TEST_CASE("projections of stars are stars") {
  for (uint64_t seed = 1; seed <= 25; ++seed) {
    auto IS = testkit::random_contraction_chain(seed, 2, 5);
    const auto& L = IS.limit();
    for (const auto& sigma : splitting_subsets(L)) {
      REQUIRE(is_star(L, sigma));
      for (Point p = 0; p < IS.points(); ++p) {
        ElemSet proj = IS.project_set(sigma, p);
        bool degenerate_image = false;
        for (Elem x : proj)
          if (IS.level(p).degenerate(x)) degenerate_image = true;
        if (!degenerate_image) REQUIRE(is_star(IS.level(p), proj));
      }
    }
  }
}

TEST_CASE("surjectivize drops unreached elements and keeps the limit") {
  // Bottom: path3 plus one spare separation never hit from above.
  auto spareed = SeparationSystem::from_generators({"e1+", "e1-", "e2+", "e2-", "x+", "x-"},
                                                   {1, 0, 3, 2, 5, 4}, {{0, 2}});
  auto bottom = make_system(spareed);
  auto top = make_system(fixtures::path3());
  std::vector<Elem> bond{0, 1, 2, 3};  // e1 -> e1, e2 -> e2; x never hit
  auto IS = InverseSystem::chain({bottom, top}, {bond});
  REQUIRE_FALSE(IS.surjective());

  auto SJ = surjectivize(IS);
  REQUIRE(SJ.surjective());
  REQUIRE(SJ.level(0).size() == 4);
  REQUIRE_FALSE(SJ.level(0).find("x+").has_value());
  REQUIRE(SJ.limit().size() == IS.limit().size());

  // Already surjective systems are unchanged.
  auto IS2 = p3_contraction_chain();
  auto SJ2 = surjectivize(IS2);
  for (Point p = 0; p < IS2.points(); ++p)
    REQUIRE(SJ2.level(p).size() == IS2.level(p).size());
}

TEST_CASE("closure basics") {
  auto IS = p3_contraction_chain();
  const auto& L = IS.limit();
  REQUIRE(is_closed(IS, L.all_elements()));
  for (Elem x = 0; x < L.size(); ++x) REQUIRE(is_closed(IS, {x}));
  REQUIRE(closure(IS, {}) == ElemSet{});
}

TEST_CASE("closure is a Kuratowski closure") {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    auto IS = testkit::random_contraction_chain(seed, 3, 4);
    const auto& L = IS.limit();
    testkit::Rng rng(seed * 13 + 5);
    ElemSet A, B;
    for (Elem x = 0; x < L.size(); ++x) {
      if (rng.below(2)) A.push_back(x);
      if (rng.below(2)) B.push_back(x);
    }
    auto cA = closure(IS, A);
    REQUIRE(closure(IS, cA) == cA);  // idempotent
    for (Elem x : A) REQUIRE(contains(cA, x));

    ElemSet AB = normalized([&] {
      ElemSet u = A;
      u.insert(u.end(), B.begin(), B.end());
      return u;
    }());
    auto cAB = closure(IS, AB);
    auto cB = closure(IS, B);
    ElemSet cU = normalized([&] {
      ElemSet u = cA;
      u.insert(u.end(), cB.begin(), cB.end());
      return u;
    }());
    REQUIRE(cAB == cU);  // preserves finite unions
  }
}

TEST_CASE("chain sup and inf") {
  auto IS = p3_contraction_chain();
  const auto& L = IS.limit();
  Elem e1f = *L.find("e1+"), e2f = *L.find("e2+");

  REQUIRE(chain_sup(IS, {e1f}) == e1f);
  REQUIRE(chain_inf(IS, {e1f}) == e1f);
  REQUIRE(chain_sup(IS, {e1f, e2f}) == e2f);
  REQUIRE(chain_inf(IS, {e1f, e2f}) == e1f);
  REQUIRE_THROWS_AS(chain_sup(IS, {}), sepsys::NotAChain);
  REQUIRE_THROWS_AS(chain_sup(IS, ElemSet{e1f, *L.find("e2-")}), sepsys::NotAChain);
}

TEST_CASE("min below and max above in a closed set") {
  auto IS = p3_contraction_chain();
  const auto& L = IS.limit();
  Elem e1f = *L.find("e1+"), e2f = *L.find("e2+");

  auto [lo, hi] = min_below_max_above(IS, L.all_elements(), e1f);
  REQUIRE(lo == e1f);
  REQUIRE(hi == e2f);

  auto [slo, shi] = min_below_max_above(IS, {e1f}, e1f);
  REQUIRE(slo == e1f);
  REQUIRE(shi == e1f);
}

TEST_CASE("maxima of a closed consistent orientation form its splitting star") {
  auto K = make_system(fixtures::k13());
  std::vector<Elem> id(K->size());
  std::iota(id.begin(), id.end(), 0);
  auto IS = InverseSystem::chain({K, K}, {id});
  const auto& L = IS.limit();
  for (const auto& O : consistent_orientations(L)) {
    if (!is_closed(IS, O)) continue;
    auto sigma = splits_at(L, O);
    REQUIRE(sigma.has_value());  // closed consistent orientations split
    ElemSet maxima;
    for (Elem s : O) maxima.push_back(min_below_max_above(IS, O, s).second);
    REQUIRE(normalized(maxima) == *sigma);
  }
}
