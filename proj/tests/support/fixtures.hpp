#pragma once

// Reference example grids, transcribed cell by cell.

#include <vector>

#include "gridshift/grid.hpp"

namespace fixtures {

// The three non-isomorphic rectangle-free 2-colorings of the 4x4 grid
// (1 = red, 2 = white).
inline std::vector<gridshift::Coloring> grid442_representatives() {
  const gridshift::GridSpec s(4, 4, 2);
  return {
      gridshift::Coloring(s, {1, 2, 2, 1, 1, 2, 1, 2, 2, 1, 2, 2, 2, 1, 1, 1}),
      gridshift::Coloring(s, {1, 2, 2, 1, 1, 2, 1, 2, 1, 1, 2, 2, 2, 1, 1, 1}),
      gridshift::Coloring(s, {1, 2, 1, 2, 1, 1, 2, 2, 2, 1, 2, 1, 2, 2, 1, 1}),
  };
}

// 4-subgrid right shift with A..D as colors 1..4: rows ABCD, DABC, CDAB, BCDA.
inline gridshift::Coloring right_shift_4x4() {
  return gridshift::Coloring(gridshift::GridSpec(4, 4, 4), {1, 2, 3, 4, 4, 1, 2, 3, 3, 4, 1, 2, 2, 3, 4, 1});
}

}  // namespace fixtures
