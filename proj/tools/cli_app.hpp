#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sepsys/sepsys.hpp"

// The sepsys command line tool. Exit codes: 0 = all checks pass, 1 =
// counterexample or violation found (details in the report), 2 = input or
// usage error.

namespace sepsys::cli {

using interchange::json;

namespace detail {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json load_json(const std::string& path) {
  try {
    return json::parse(slurp(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline uint64_t default_seed() {
  if (const char* env = std::getenv("SEPSYS_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw ParseError("SEPSYS_SEED is not a number");
    }
  }
  return 1;
}

struct Report {
  json doc = json::object();
  std::string to_file;

  void emit(std::ostream& os) const {
    if (to_file.empty()) {
      os << doc.dump(2) << "\n";
    } else {
      std::ofstream out(to_file);
      out << doc.dump(2) << "\n";
    }
  }
};

inline ElemSet parse_subset(const SeparationSystem& S, const std::string& csv) {
  ElemSet out;
  std::istringstream ss(csv);
  std::string label;
  while (std::getline(ss, label, ',')) {
    if (label.empty()) continue;
    auto e = S.find(label);
    if (!e) throw ParseError("unknown element label " + label);
    out.push_back(*e);
  }
  return normalized(std::move(out));
}

inline json label_set(const SeparationSystem& S, const ElemSet& xs) {
  json out = json::array();
  for (Elem x : xs) out.push_back(S.label(x));
  return out;
}

}  // namespace detail

inline int run(std::vector<std::string> args) {
  CLI::App app{"finite and profinite abstract separation systems"};
  app.require_subcommand(1);

  std::string report_path;
  app.add_option("--report", report_path, "write the machine-readable report to a file");

  // validate
  auto* validate = app.add_subcommand("validate", "validate a system or inverse system document");
  std::string validate_file;
  validate->add_option("file", validate_file, "interchange document")->required();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "classification table, nestedness, stars");
  std::string analyze_file;
  analyze->add_option("file", analyze_file, "system document")->required();

  // orients
  auto* orients = app.add_subcommand("orients", "list the consistent orientations");
  std::string orients_file;
  orients->add_option("file", orients_file, "system document")->required();

  // stars
  auto* stars = app.add_subcommand("stars", "list the splitting subsets");
  std::string stars_file;
  stars->add_option("file", stars_file, "system document")->required();

  // limit
  auto* limit = app.add_subcommand("limit", "compute the inverse limit");
  std::string limit_file;
  limit->add_option("file", limit_file, "inverse system document")->required();

  // closure
  auto* closure_cmd = app.add_subcommand("closure", "closure of a subset of the limit");
  std::string closure_file, closure_subset;
  closure_cmd->add_option("file", closure_file, "inverse system document")->required();
  closure_cmd->add_option("--subset", closure_subset, "comma-separated limit element labels")
      ->required();

  // project
  auto* project = app.add_subcommand("project", "project the limit to a level");
  std::string project_file, project_at, project_subset;
  project->add_option("file", project_file, "inverse system document")->required();
  project->add_option("--at", project_at, "poset point label")->required();
  project->add_option("--subset", project_subset, "comma-separated limit element labels");

  // gen
  auto* gen = app.add_subcommand("gen", "emit a registered example construction");
  std::string gen_name;
  int gen_depth = 3;
  int gen_k = 2;
  std::vector<int> gen_blocks;
  gen->add_option("example", gen_name, "trivialproj | splittingnotclosed | splittingnotclosed2 | ray | inconsistentpair")
      ->required();
  gen->add_option("--depth", gen_depth, "number of levels");
  gen->add_option("--k", gen_k, "order bound for the ray example");
  gen->add_option("--blocks", gen_blocks, "block sizes for inconsistentpair (4 numbers)");

  // graph
  auto* graph_cmd = app.add_subcommand("graph", "separations of a graph");
  std::string graph_file, graph_chain;
  int order_bound = 2;
  graph_cmd->add_option("file", graph_file, "adjacency-list document")->required();
  graph_cmd->add_option("--order-bound", order_bound, "enumerate separations of order < k");
  graph_cmd->add_option("--chain", graph_chain,
                        "semicolon-separated vertex subsets (comma-separated labels) for a "
                        "restriction system");

  // check
  auto* check = app.add_subcommand("check", "run a named property suite");
  std::string check_name;
  uint64_t seed = detail::default_seed();
  int count = 0, size = 0;
  bool list_checks = false;
  check->add_option("name", check_name, "lemma suite name");
  check->add_flag("--list", list_checks, "list the available checks");
  check->add_option("--seed", seed, "base seed (default: SEPSYS_SEED or 1)");
  check->add_option("--count", count, "instance count override");
  check->add_option("--size", size, "size parameter override");

  // search
  auto* search = app.add_subcommand("search", "hunt for counterexamples with shrinking");
  std::string search_property_name;
  int search_count = 0, search_size = 8;
  uint64_t search_seed = detail::default_seed();
  search->add_option("--property", search_property_name, "check name")->required();
  search->add_option("--count", search_count, "instances per size");
  search->add_option("--size", search_size, "starting size");
  search->add_option("--seed", search_seed, "base seed");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  detail::Report report;
  report.to_file = report_path;

  try {
    if (*validate) {
      json doc = detail::load_json(validate_file);
      if (doc.contains("poset")) {
        auto IS = interchange::inverse_system_from_json(doc);
        std::cout << "ok: inverse system with " << IS.points() << " levels, limit size "
                  << IS.limit().size() << "\n";
        report.doc = {{"command", "validate"}, {"kind", "inverse_system"},
                      {"points", IS.points()}, {"limit_size", IS.limit().size()}};
      } else {
        auto S = interchange::system_from_json(doc);
        std::cout << "ok: separation system with " << S.size() << " oriented elements\n";
        report.doc = {{"command", "validate"}, {"kind", "system"}, {"elements", S.size()}};
      }
      report.emit(std::cout);
      return 0;
    }

    if (*analyze) {
      auto S = interchange::system_from_json(detail::load_json(analyze_file));
      json table = json::array();
      for (Elem x = 0; x < S.size(); ++x) {
        auto c = classify(S, x);
        json row;
        row["element"] = S.label(x);
        row["small"] = c.small;
        row["co_small"] = c.co_small;
        row["degenerate"] = c.degenerate;
        row["trivial_witnesses"] = detail::label_set(S, c.trivial_witnesses);
        row["co_trivial_witnesses"] = detail::label_set(S, c.co_trivial_witnesses);
        table.push_back(row);
        std::cout << S.label(x) << (c.small ? " small" : "") << (c.co_small ? " co-small" : "")
                  << (c.degenerate ? " degenerate" : "")
                  << (c.trivial() ? " trivial" : "") << (c.co_trivial() ? " co-trivial" : "")
                  << "\n";
      }
      auto nested = is_nested(S);
      std::cout << (nested ? "nested\n" : "not nested\n");
      auto subsets = splitting_subsets(S);
      std::cout << subsets.size() << " splitting subsets\n";
      json star_list = json::array();
      for (const auto& sigma : subsets) star_list.push_back(detail::label_set(S, sigma));
      report.doc = {{"command", "analyze"}, {"classification", table},
                    {"nested", static_cast<bool>(nested)},
                    {"splitting_subsets", star_list}};
      if (!nested)
        report.doc["crossing"] = {S.label(nested.crossing.first),
                                  S.label(nested.crossing.second)};
      report.emit(std::cout);
      return 0;
    }

    if (*orients) {
      auto S = interchange::system_from_json(detail::load_json(orients_file));
      auto all = consistent_orientations(S);
      json out = json::array();
      for (const auto& O : all) {
        out.push_back(detail::label_set(S, O));
        std::cout << detail::label_set(S, O).dump() << "\n";
      }
      report.doc = {{"command", "orients"}, {"orientations", out}};
      report.emit(std::cout);
      return 0;
    }

    if (*stars) {
      auto S = interchange::system_from_json(detail::load_json(stars_file));
      json out = json::array();
      for (const auto& sigma : splitting_subsets(S)) {
        out.push_back(detail::label_set(S, sigma));
        std::cout << detail::label_set(S, sigma).dump() << "\n";
      }
      report.doc = {{"command", "stars"}, {"splitting_subsets", out}};
      report.emit(std::cout);
      return 0;
    }

    if (*limit) {
      auto IS = interchange::inverse_system_from_json(detail::load_json(limit_file));
      json collapses = json::array();
      for (auto [x, y, p] : IS.projection_collapses())
        collapses.push_back({{"below", IS.limit().label(x)},
                             {"above", IS.limit().label(y)},
                             {"point", IS.poset().label(p)}});
      report.doc = {{"command", "limit"},
                    {"limit", interchange::system_to_json(IS.limit())},
                    {"projection_collapses", collapses}};
      std::cout << "limit has " << IS.limit().size() << " oriented elements, "
                << collapses.size() << " strict projection collapses\n";
      report.emit(std::cout);
      return 0;
    }

    if (*closure_cmd) {
      auto IS = interchange::inverse_system_from_json(detail::load_json(closure_file));
      ElemSet O = detail::parse_subset(IS.limit(), closure_subset);
      ElemSet cl = closure(IS, O);
      bool closed = (cl == O);
      std::cout << "closure: " << detail::label_set(IS.limit(), cl).dump()
                << (closed ? " (closed)" : " (not closed)") << "\n";
      report.doc = {{"command", "closure"},
                    {"closure", detail::label_set(IS.limit(), cl)},
                    {"closed", closed}};
      report.emit(std::cout);
      return 0;
    }

    if (*project) {
      auto IS = interchange::inverse_system_from_json(detail::load_json(project_file));
      auto p = IS.poset().find(project_at);
      if (!p) throw ParseError("unknown poset point " + project_at);
      ElemSet subset = project_subset.empty()
                           ? IS.limit().all_elements()
                           : detail::parse_subset(IS.limit(), project_subset);
      ElemSet proj = IS.project_set(subset, *p);
      std::cout << detail::label_set(IS.level(*p), proj).dump() << "\n";
      report.doc = {{"command", "project"}, {"at", project_at},
                    {"projection", detail::label_set(IS.level(*p), proj)}};
      report.emit(std::cout);
      return 0;
    }

    if (*gen) {
      json doc;
      if (gen_name == "inconsistentpair") {
        int na = 1, nb = 1, nc = 1, nx = 1;
        if (!gen_blocks.empty()) {
          if (gen_blocks.size() != 4) throw BadParams("--blocks needs 4 numbers");
          na = gen_blocks[0];
          nb = gen_blocks[1];
          nc = gen_blocks[2];
          nx = gen_blocks[3];
        }
        auto inst = examples::gen_inconsistent_pair(na, nb, nc, nx);
        doc = interchange::inverse_system_to_json(inst.rs.inverse_system);
      } else {
        auto chain = examples::find_chain(gen_name, gen_k);
        doc = interchange::inverse_system_to_json(truncate(chain, gen_depth));
      }
      std::cout << doc.dump(2) << "\n";
      if (!report_path.empty()) {
        report.doc = doc;
        report.emit(std::cout);
      }
      return 0;
    }

    if (*graph_cmd) {
      Graph g = parse_graph(detail::slurp(graph_file));
      if (graph_chain.empty()) {
        auto gs = enumerate_separations(g, order_bound);
        std::cout << interchange::system_to_json(*gs.system).dump(2) << "\n";
      } else {
        std::vector<VertexMask> subsets;
        std::istringstream ss(graph_chain);
        std::string part;
        while (std::getline(ss, part, ';')) {
          VertexMask mask = 0;
          std::istringstream ps(part);
          std::string v;
          while (std::getline(ps, v, ',')) {
            auto idx = g.find(v);
            if (!idx) throw ParseError("unknown vertex " + v);
            mask |= VertexMask{1} << *idx;
          }
          subsets.push_back(mask);
        }
        auto rs = build_restriction_system(g, order_bound, subsets);
        std::cout << interchange::inverse_system_to_json(rs.inverse_system).dump(2) << "\n";
      }
      return 0;
    }

    if (*check) {
      if (list_checks) {
        for (const auto& c : checks::registry())
          std::cout << c.name << "  -  " << c.description << "\n";
        return 0;
      }
      if (check_name.empty()) {
        std::cerr << "usage: check <name> (see check --list)\n";
        return 2;
      }
      checks::CheckOptions opts;
      opts.seed = seed;
      opts.count = count;
      opts.size = size;
      auto res = checks::run_check(check_name, opts);
      std::cout << (res.ok() ? "[PASS] " : "[FAIL] ") << res.name << ": " << res.instances
                << " instances";
      if (!res.ok()) std::cout << ", " << res.failures.size() << " violations";
      std::cout << " (" << res.seconds << " s)\n";
      for (const auto& f : res.failures) std::cout << "  " << f << "\n";
      // Timing stays out of the report so it is deterministic per seed.
      report.doc = {{"command", "check"}, {"name", res.name}, {"ok", res.ok()},
                    {"instances", res.instances}, {"failures", res.failures},
                    {"seed", seed}};
      report.emit(std::cout);
      return res.ok() ? 0 : 1;
    }

    if (*search) {
      checks::CheckOptions opts;
      opts.seed = search_seed;
      opts.count = search_count;
      opts.size = search_size;
      auto res = checks::search_property(search_property_name, opts);
      if (!res.counterexample) {
        std::cout << "no counterexample found for " << search_property_name << "\n";
        report.doc = {{"command", "search"}, {"property", search_property_name},
                      {"counterexample", false}, {"seed", search_seed}};
        report.emit(std::cout);
        return 0;
      }
      std::cout << "counterexample for " << search_property_name << ", minimal size "
                << res.minimal_size << " after " << res.shrink_steps << " shrink steps\n";
      for (const auto& f : res.minimal_failure.failures) std::cout << "  " << f << "\n";
      report.doc = {{"command", "search"}, {"property", search_property_name},
                    {"counterexample", true}, {"minimal_size", res.minimal_size},
                    {"failures", res.minimal_failure.failures}, {"seed", search_seed}};
      report.emit(std::cout);
      return 1;
    }
  } catch (const InternalError& e) {
    std::cerr << "internal violation: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace sepsys::cli
