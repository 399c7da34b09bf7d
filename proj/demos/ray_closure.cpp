// The ray example: the orientation towards the end of a growing path, the
// element (V, empty) that lies in its levelwise closure without belonging
// to it, and the supremum of the tail chain.

#include <cstdio>

#include "sepsys/sepsys.hpp"

using namespace sepsys;

int main() {
  const int depth = 6;
  auto chain = examples::ray_chain(/*k=*/2);
  auto IS = truncate(chain, depth + 1);
  const int n = depth + 1;

  auto payload = enumerate_separations(Graph::path(n), 2);
  auto O = examples::ray_toward_end(payload, n);
  const VertexMask full = (VertexMask{1} << n) - 1;
  Elem v_empty = *payload.find_sides(full, 0);

  std::printf("path with %d vertices, %d oriented separations of order < 2\n", n,
              payload.system->size());
  std::printf("toward-the-end orientation O has %zu members; (V, empty) in O: %s\n", O.size(),
              contains(O, v_empty) ? "yes" : "no");

  for (Point p : probes_below_top(IS)) {
    bool in = contains(IS.project_set(O, p), IS.project(v_empty, p));
    std::printf("  level %d: (V, empty) projects into O|p: %s\n", p + 1, in ? "yes" : "no");
  }

  auto C = examples::ray_tail_chain(payload, n);
  Elem sup = chain_sup(IS, C);
  std::printf("supremum of the tail chain: %s\n", IS.limit().label(sup).c_str());
  return 0;
}
