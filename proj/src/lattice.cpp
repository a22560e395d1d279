#include "coilflow/lattice.hpp"

namespace coilflow {

static_assert(d3q27().opposite[19] == 20);
static_assert(lattice::cx[lattice::opposite(7)] == -lattice::cx[7]);

int direction_index(int x, int y, int z) {
  for (int i = 0; i < kQ; ++i) {
    if (lattice::cx[i] == x && lattice::cy[i] == y && lattice::cz[i] == z) return i;
  }
  return -1;
}

}  // namespace coilflow
