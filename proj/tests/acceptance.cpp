// Acceptance suite: every criterion runs at its stated parameters and
// prints one pass/fail line. Exit code 0 iff all criteria pass.

#include <cstdio>
#include <string>
#include <vector>

#include "sepsys/checks.hpp"

using namespace sepsys;

namespace {

struct Criterion {
  std::string title;
  bool pass = false;
  int instances = 0;
  double seconds = 0.0;
  std::vector<std::string> details;
};

Criterion run_named(const std::string& title, const std::string& check, uint64_t seed, int count,
                    int size, double budget_seconds = 0.0) {
  Criterion c;
  c.title = title;
  checks::CheckOptions opts;
  opts.seed = seed;
  opts.count = count;
  opts.size = size;
  try {
    auto res = checks::run_check(check, opts);
    c.pass = res.ok();
    c.instances = res.instances;
    c.seconds = res.seconds;
    c.details = res.failures;
    if (budget_seconds > 0 && res.seconds > budget_seconds) {
      c.pass = false;
      c.details.push_back("runtime " + std::to_string(res.seconds) + " s exceeds budget " +
                          std::to_string(budget_seconds) + " s");
    }
  } catch (const std::exception& e) {
    c.pass = false;
    c.details.push_back(e.what());
  }
  return c;
}

}  // namespace

int main() {
  std::vector<Criterion> results;

  // 1: 200 random trees with at most 8 nodes; orientations biject with
  // nodes and splitting subsets are exactly the node stars. Budget: 10 s.
  results.push_back(
      run_named("1. tree bijection (200 trees, <= 8 nodes)", "tree-bijection", 1, 200, 8, 10.0));

  // 2: extension lemma vs. brute force: 1000 exhaustive instances with at
  // most 3 separations plus 500 random size-5 instances, zero
  // disagreements on clauses (i)-(iii).
  results.push_back(run_named("2. extension lemma oracle equivalence (1000 + 500 instances)",
                              "extension-lemma", 1, 0, 5));

  // 3: transfer-lemma suites, 200 random contraction chains each.
  struct Suite {
    const char* check;
    const char* what;
  };
  const Suite suites[] = {
      {"nested-lift", "nested/small lift"},
      {"lift-nontrivial", "nontrivial preimages"},
      {"lift-order", "order lifting"},
      {"sanitize-star", "star pruning"},
      {"lift-splitting-star", "splitting star lift"},
      {"project-splitting-star", "splitting star projection"},
      {"iterated-minus", "iterated pruning"},
      {"splitting-preimage", "splitting star limit preimage"},
      {"closure-of-splitting-star", "splitting star closure"},
      {"trivial-limit-singleton", "splitting singleton nontriviality"},
  };
  {
    Criterion c;
    c.title = "3. transfer lemma suites (200 chains each)";
    c.pass = true;
    for (const auto& s : suites) {
      auto sub = run_named(s.what, s.check, 1, 200, 10);
      c.instances += sub.instances;
      c.seconds += sub.seconds;
      if (!sub.pass) {
        c.pass = false;
        c.details.push_back(std::string(s.what) + " failed");
        for (const auto& d : sub.details) c.details.push_back("  " + d);
      }
    }
    results.push_back(c);
  }

  // 4: compactness on 100 random instances with at most 12 oriented
  // elements at the top, plus oracle equivalence with ablations on tiny
  // instances. Budget: 60 s.
  results.push_back(
      run_named("4. tree set compactness (100 instances + oracle)", "compactness", 1, 100, 6,
                60.0));

  // 5: trivialproj certificates at depth 12.
  results.push_back(run_named("5. trivialproj certificates (depth 12)",
                              "trivialproj-certificates", 1, 0, 12));

  // 6: splittingnotclosed certificates at depth 10.
  results.push_back(run_named("6. splittingnotclosed certificates (depth 10)",
                              "splittingnotclosed-certificates", 1, 0, 10));

  // 7: splittingnotclosed2 certificates and the isomorphism at matched
  // truncation sizes.
  results.push_back(run_named("7. splittingnotclosed2 certificates and isomorphism",
                              "splittingnotclosed2-certificates", 1, 0, 10));

  // 8: ray certificates at depth 10, order bound 2.
  results.push_back(run_named("8. ray certificates (depth 10, k = 2)", "ray-certificates", 1, 0,
                              10));

  // 9: greatest-element dichotomy, exhaustive over nested limits with at
  // most 6 separations; zero third cases.
  results.push_back(run_named("9. greatest-element dichotomy (exhaustive, <= 6 separations)",
                              "greatest-dichotomy", 1, 0, 6));

  bool all = true;
  for (const auto& c : results) {
    std::printf("[%s] %s - %d instances (%.2f s)\n", c.pass ? "PASS" : "FAIL", c.title.c_str(),
                c.instances, c.seconds);
    for (const auto& d : c.details) std::printf("        %s\n", d.c_str());
    all = all && c.pass;
  }
  std::printf("%s\n", all ? "acceptance: all criteria passed" : "acceptance: FAILURES");
  return all ? 0 : 1;
}
