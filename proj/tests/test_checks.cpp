#include <catch2/catch_amalgamated.hpp>

#include "sepsys/checks.hpp"

using namespace sepsys;

// Every registered check passes at reduced instance counts; the acceptance
// binary reruns the relevant ones at full size.
TEST_CASE("registered checks pass at smoke size") {
  for (const auto& c : checks::registry()) {
    checks::CheckOptions opts;
    opts.seed = 3;
    opts.count = 15;
    opts.size = 0;  // suite defaults for sizes, reduced counts
    if (c.name == "greatest-dichotomy") opts.size = 4;
    if (c.name == "extension-lemma") opts.size = 4;
    auto res = checks::run_check(c.name, opts);
    INFO(c.name);
    for (const auto& f : res.failures) INFO(f);
    CHECK(res.ok());
    CHECK(res.instances > 0);
  }
}

TEST_CASE("unknown checks are rejected") {
  REQUIRE_THROWS_AS(checks::run_check("no-such-check", {}), UnknownExample);
}

TEST_CASE("the empty system splits at the empty set") {
  auto empty = SeparationSystem::from_generators({}, {}, {});
  auto orientations = consistent_orientations(empty);
  REQUIRE(orientations == std::vector<Orientation>{{}});
  REQUIRE(splitting_subsets(empty) == std::vector<ElemSet>{{}});
  REQUIRE(is_splitting_star(empty, {}));
}
