// Orientations and splitting stars of a random tree edge set, and what a
// contraction does to them.

#include <cstdio>

#include "sepsys/sepsys.hpp"

using namespace sepsys;

namespace {

void print_set(const SeparationSystem& S, const ElemSet& xs) {
  std::printf("{");
  for (size_t i = 0; i < xs.size(); ++i)
    std::printf("%s%s", i ? ", " : "", S.label(xs[i]).c_str());
  std::printf("}");
}

}  // namespace

int main() {
  auto inst = testkit::random_tree_set(/*seed=*/7, /*n_edges=*/4);
  const auto& S = inst.system;

  std::printf("tree with %d nodes, edge tree set with %d oriented separations\n", inst.tree.n,
              S.size());

  auto orientations = consistent_orientations(S);
  std::printf("%zu consistent orientations (one per node):\n", orientations.size());
  for (const auto& O : orientations) {
    std::printf("  ");
    print_set(S, O);
    auto sigma = splits_at(S, O);
    std::printf("  splits at ");
    print_set(S, *sigma);
    std::printf("\n");
  }

  // Lift a splitting star through a random contraction.
  auto chain = testkit::random_contraction_chain(/*seed=*/7, /*levels=*/2, /*n_edges=*/4);
  auto f = chain.hom(1, 0);
  std::printf("\ncontraction chain: %d -> %d oriented separations\n", chain.level(1).size(),
              chain.level(0).size());
  for (const auto& sigma_p : splitting_subsets(chain.level(0))) {
    auto lifted = lift_splitting_star(f, sigma_p);
    std::printf("  ");
    print_set(chain.level(0), sigma_p);
    std::printf("  lifts to  ");
    print_set(chain.level(1), lifted.sigma_q);
    std::printf("\n");
  }
  return 0;
}
