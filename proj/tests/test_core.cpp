#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "sepsys/orientations.hpp"
#include "sepsys/separation_system.hpp"

using namespace sepsys;

TEST_CASE("degenerate singleton validates") {
  auto S = fixtures::degenerate_singleton();
  REQUIRE(S.size() == 1);
  REQUIRE(S.degenerate(0));
  REQUIRE(S.small(0));
  REQUIRE(S.co_small(0));
}

TEST_CASE("path closure adds the reversed generator") {
  auto S = fixtures::path3();
  Elem e1f = *S.find("e1+"), e1b = *S.find("e1-");
  Elem e2f = *S.find("e2+"), e2b = *S.find("e2-");
  REQUIRE(S.leq(e1f, e2f));
  REQUIRE(S.leq(e2b, e1b));  // the reversal
  REQUIRE_FALSE(S.leq(e2f, e1f));
  REQUIRE_FALSE(S.leq(e1f, e2b));
  // Hand-closed relation: exactly reflexivity plus these two pairs.
  int related = 0;
  for (Elem x = 0; x < S.size(); ++x)
    for (Elem y = 0; y < S.size(); ++y)
      if (S.leq(x, y)) ++related;
  REQUIRE(related == 4 + 2);
}

TEST_CASE("antisymmetry violations are CycleError") {
  REQUIRE_THROWS_AS(SeparationSystem::from_generators({"e1+", "e1-", "e2+", "e2-"}, {1, 0, 3, 2},
                                                      {{0, 2}, {2, 0}}),
                    CycleError);
}

TEST_CASE("involution must be total and self-inverse") {
  REQUIRE_THROWS_AS(SeparationSystem::from_generators({"a", "b", "c"}, {1, 2, 0}, {}),
                    InvolutionError);
  REQUIRE_THROWS_AS(SeparationSystem::from_generators({"a"}, {}, {}), InvolutionError);
}

TEST_CASE("classify on E2") {
  auto S = fixtures::e2();
  Elem rf = *S.find("r+"), rb = *S.find("r-"), sf = *S.find("s+");

  auto cr = classify(S, rf);
  REQUIRE(cr.trivial());
  REQUIRE(cr.trivial_witnesses == std::vector<Elem>{S.sep(sf)});
  REQUIRE_FALSE(cr.co_trivial());
  REQUIRE(cr.small);  // r+ < s+ <= ... makes r small via reversal
  auto crb = classify(S, rb);
  REQUIRE(crb.co_trivial());
  REQUIRE_FALSE(crb.trivial());

  auto cs = classify(S, sf);
  REQUIRE_FALSE(cs.trivial());
  REQUIRE_FALSE(cs.co_trivial());
  REQUIRE_FALSE(cs.small);
}

TEST_CASE("classify on degenerate and path") {
  auto D = fixtures::degenerate_singleton();
  auto cd = classify(D, 0);
  REQUIRE(cd.small);
  REQUIRE(cd.co_small);
  REQUIRE(cd.degenerate);
  REQUIRE_FALSE(cd.trivial());

  auto S = fixtures::path3();
  auto ce = classify(S, *S.find("e1+"));
  REQUIRE_FALSE(ce.small);
  REQUIRE_FALSE(ce.co_small);
  REQUIRE_FALSE(ce.degenerate);
  REQUIRE_FALSE(ce.trivial());
  REQUIRE_FALSE(ce.co_trivial());

  REQUIRE_THROWS_AS(classify(S, 99), UnknownElement);
}

TEST_CASE("is_trivial_in needs the witness inside sigma") {
  auto S = fixtures::e2();
  Elem rf = *S.find("r+"), sf = *S.find("s+");
  REQUIRE(is_trivial_in(S, rf, {sf}).has_value());
  REQUIRE_FALSE(is_trivial_in(S, rf, {rf}).has_value());
}

TEST_CASE("is_trivial_in inside a star") {
  // Star {r+, s+, t+} with r+ < s+ and r+ < s-.
  auto S = SeparationSystem::from_generators(
      {"r+", "r-", "s+", "s-", "t+", "t-"}, {1, 0, 3, 2, 5, 4},
      {{0, 2}, {0, 3}, {2, 5}, {4, 3}, {0, 5}, {4, 1}});
  Elem rf = *S.find("r+"), sf = *S.find("s+"), tf = *S.find("t+");
  REQUIRE(is_star(S, {rf, sf, tf}));
  auto w = is_trivial_in(S, rf, {rf, sf, tf});
  REQUIRE(w.has_value());
  REQUIRE(S.sep(*w) == S.sep(sf));
}

TEST_CASE("nestedness") {
  auto S = fixtures::path3();
  REQUIRE(is_nested(S));
  REQUIRE(is_nested(S, {}));

  // Two crossing separations: no comparabilities at all.
  auto X = SeparationSystem::from_generators({"a+", "a-", "b+", "b-"}, {1, 0, 3, 2}, {});
  auto r = is_nested(X, {0, 2});
  REQUIRE_FALSE(r.nested);
  REQUIRE(r.crossing == std::pair<Elem, Elem>{0, 2});
}

TEST_CASE("stars and proper stars") {
  auto S = fixtures::path3();
  Elem e1f = *S.find("e1+"), e2b = *S.find("e2-");
  // Edges at node b, both oriented towards b.
  REQUIRE(is_proper_star(S, {e1f, e2b}));

  // {s+, s-} is a star but not proper.
  auto T = SeparationSystem::from_generators({"s+", "s-"}, {1, 0}, {});
  REQUIRE(is_star(T, {0, 1}));
  REQUIRE_FALSE(is_proper_star(T, {0, 1}));
  REQUIRE_FALSE(is_antisymmetric(T, {0, 1}));

  auto D = fixtures::degenerate_singleton();
  REQUIRE_FALSE(is_star(D, {0}));
}

TEST_CASE("consistency") {
  auto S = fixtures::path3();
  Elem e1f = *S.find("e1+"), e1b = *S.find("e1-"), e2f = *S.find("e2+"), e2b = *S.find("e2-");

  REQUIRE(is_consistent(S, {e1f, e2b}));  // a star
  auto bad = is_consistent(S, {e1b, e2f});
  REQUIRE_FALSE(bad.consistent);
  REQUIRE(bad.violation == std::pair<Elem, Elem>{e1b, e2f});
  REQUIRE(is_consistent(S, {e1f}));
  REQUIRE(is_consistent(S, {e2b}));
}

TEST_CASE("every star is consistent") {
  for (uint64_t seed = 1; seed <= 30; ++seed) {
    auto S = testkit::random_system(seed, 4);
    // Enumerate all subsets; stars must be consistent.
    for (uint64_t mask = 0; mask < (uint64_t{1} << S.size()); ++mask) {
      ElemSet sub;
      for (Elem x = 0; x < S.size(); ++x)
        if ((mask >> x) & 1) sub.push_back(x);
      if (is_star(S, sub)) REQUIRE(is_consistent(S, sub).consistent);
    }
  }
}

TEST_CASE("down closure") {
  auto S = fixtures::path3();
  Elem e1f = *S.find("e1+"), e2f = *S.find("e2+");
  REQUIRE(down_closure(S, {e2f}) == ElemSet{e1f, e2f});
  REQUIRE(down_closure(S, {}) == ElemSet{});
  REQUIRE(down_closure(S, S.all_elements()) == S.all_elements());
  // Monotone and idempotent on random instances.
  for (uint64_t seed = 0; seed < 10; ++seed) {
    auto R = testkit::random_system(seed, 4);
    testkit::Rng rng(seed * 7 + 1);
    ElemSet sub;
    for (Elem x = 0; x < R.size(); ++x)
      if (rng.below(2)) sub.push_back(x);
    auto d1 = down_closure(R, sub);
    REQUIRE(down_closure(R, d1) == d1);
    for (Elem x : sub) REQUIRE(contains(d1, x));
  }
}

TEST_CASE("sigma_minus") {
  // sigma = {r+, s+, t+} with r trivial witnessed by s.
  auto S = SeparationSystem::from_generators(
      {"r+", "r-", "s+", "s-", "t+", "t-"}, {1, 0, 3, 2, 5, 4},
      {{0, 2}, {0, 3}, {2, 5}, {4, 3}, {0, 5}, {4, 1}});
  Elem rf = *S.find("r+"), sf = *S.find("s+"), tf = *S.find("t+");
  REQUIRE(sigma_minus(S, {rf, sf, tf}) == ElemSet{sf, tf});

  // A proper star of a tree node is unchanged.
  auto K = fixtures::k13();
  ElemSet centre = testkit::node_star(fixtures::k13_tree(), 0);
  REQUIRE(sigma_minus(K, centre) == centre);

  // {s+, s-} for nondegenerate nontrivial s stays as is (LemmaB(ii) shape).
  auto T = SeparationSystem::from_generators({"s+", "s-"}, {1, 0}, {});
  REQUIRE(sigma_minus(T, {0, 1}) == ElemSet{0, 1});

  // Idempotence on random subsets.
  for (uint64_t seed = 0; seed < 20; ++seed) {
    auto R = testkit::random_system(seed, 4);
    testkit::Rng rng(seed + 99);
    ElemSet sub;
    for (Elem x = 0; x < R.size(); ++x)
      if (rng.below(2)) sub.push_back(x);
    auto m1 = sigma_minus(R, sub);
    REQUIRE(sigma_minus(R, m1) == m1);
  }
}

TEST_CASE("essential core") {
  auto S = fixtures::e2();
  auto core = essential_core(S);
  REQUIRE(core.system.size() == 2);
  REQUIRE(core.system.find("s+").has_value());
  REQUIRE(core.system.find("s-").has_value());
  REQUIRE(core.to_parent == std::vector<Elem>{*S.find("s+"), *S.find("s-")});

  auto K = fixtures::k13();
  REQUIRE(essential_core(K).system.size() == K.size());

  auto D = fixtures::degenerate_singleton();
  REQUIRE(essential_core(D).system.size() == 0);

  // Idempotence.
  for (uint64_t seed = 0; seed < 20; ++seed) {
    auto R = testkit::random_system(seed, 4);
    auto c1 = essential_core(R);
    auto c2 = essential_core(c1.system);
    REQUIRE(c2.system.size() == c1.system.size());
  }
}

TEST_CASE("order reversal holds on every valid system") {
  for (uint64_t seed = 0; seed < 40; ++seed) {
    auto S = testkit::random_system(seed, 5);
    for (Elem x = 0; x < S.size(); ++x)
      for (Elem y = 0; y < S.size(); ++y)
        REQUIRE(S.leq(x, y) == S.leq(S.inv(y), S.inv(x)));
  }
}
