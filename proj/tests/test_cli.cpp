#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "cli_app.hpp"
#include "fixtures.hpp"

using namespace sepsys;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content) {
    path = std::string("/tmp/sepsys_test_") + name;
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

int run(std::vector<std::string> args) { return cli::run(std::move(args)); }

}  // namespace

TEST_CASE("cli validate") {
  TempFile good("good.json", interchange::system_to_json(fixtures::e2()).dump());
  REQUIRE(run({"validate", good.path}) == 0);

  TempFile cyclic("cyclic.json", R"({"elements": ["a+","a-","b+","b-"],
    "inverse": [["a+","a-"],["b+","b-"]],
    "leq": [["a+","b+"],["b+","a+"]]})");
  REQUIRE(run({"validate", cyclic.path}) == 2);

  REQUIRE(run({"validate", "/nonexistent/file.json"}) == 2);
}

TEST_CASE("cli analyze, orients, stars") {
  TempFile f("e2.json", interchange::system_to_json(fixtures::e2()).dump());
  REQUIRE(run({"analyze", f.path}) == 0);
  REQUIRE(run({"orients", f.path}) == 0);
  REQUIRE(run({"stars", f.path}) == 0);
}

TEST_CASE("cli inverse system commands") {
  auto IS = testkit::random_contraction_chain(4, 2, 3);
  TempFile f("is.json", interchange::inverse_system_to_json(IS).dump());
  REQUIRE(run({"limit", f.path}) == 0);
  std::string label0 = IS.limit().label(0);
  REQUIRE(run({"closure", f.path, "--subset", label0}) == 0);
  REQUIRE(run({"project", f.path, "--at", "1"}) == 0);
  REQUIRE(run({"project", f.path, "--at", "no-such-point"}) == 2);
}

TEST_CASE("cli gen") {
  REQUIRE(run({"gen", "trivialproj", "--depth", "3"}) == 0);
  REQUIRE(run({"gen", "ray", "--depth", "2", "--k", "2"}) == 0);
  REQUIRE(run({"gen", "inconsistentpair"}) == 0);
  REQUIRE(run({"gen", "unknown-example"}) == 2);
}

TEST_CASE("cli graph") {
  TempFile g("graph.txt", "v1: v2\nv2: v3\nv3:\n");
  REQUIRE(run({"graph", g.path, "--order-bound", "2"}) == 0);
  REQUIRE(run({"graph", g.path, "--order-bound", "2", "--chain", "v1;v1,v2;v1,v2,v3"}) == 0);
  REQUIRE(run({"graph", g.path, "--order-bound", "2", "--chain", "v1;v9"}) == 2);
}

TEST_CASE("cli check") {
  REQUIRE(run({"check", "--list"}) == 0);
  REQUIRE(run({"check", "tree-bijection", "--count", "5", "--size", "4"}) == 0);
  REQUIRE(run({"check", "no-such-lemma"}) == 2);
}

TEST_CASE("cli search finds nothing on a sound property") {
  REQUIRE(run({"search", "--property", "remark8", "--count", "10", "--size", "3"}) == 0);
}

TEST_CASE("search shrinks to the minimal failing size") {
  // A synthetic property that fails from size 4 on.
  checks::CheckFn fn = [](const checks::CheckOptions& o, checks::CheckResult& r) {
    ++r.instances;
    if (o.size >= 4) r.failures.push_back("fails at size " + std::to_string(o.size));
  };
  checks::CheckOptions opts;
  opts.size = 9;
  auto res = checks::search_property(fn, "synthetic", opts);
  REQUIRE(res.counterexample);
  REQUIRE(res.minimal_size == 4);
  REQUIRE(res.shrink_steps == 6);  // sizes 8..3, stopping at the first pass
}

TEST_CASE("cli reports are deterministic for fixed seeds") {
  TempFile out1("r1.json", "");
  TempFile out2("r2.json", "");
  REQUIRE(run({"--report", out1.path, "check", "remark8", "--seed", "7", "--count", "10"}) == 0);
  REQUIRE(run({"--report", out2.path, "check", "remark8", "--seed", "7", "--count", "10"}) == 0);
  std::ifstream a(out1.path), b(out2.path);
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  REQUIRE(sa.str() == sb.str());
  REQUIRE_FALSE(sa.str().empty());
}
