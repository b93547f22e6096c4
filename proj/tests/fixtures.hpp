#pragma once

// Matrices and schemes transcribed from the worked examples, used as golden
// values by the unit and acceptance suites. Run indices are 1-based here.

#include <vector>

#include "circuitrand/circuitrand.hpp"

namespace fixtures {

using circuitrand::IndexSet;
using circuitrand::IntMatrix;
using circuitrand::RandomisationSystem;

inline IntMatrix factorial3_xt() {
  return {{1, 1, 1, 1, 1, 1, 1, 1},
          {1, 1, 1, 1, -1, -1, -1, -1},
          {1, 1, -1, -1, 1, 1, -1, -1},
          {1, -1, 1, -1, 1, -1, 1, -1}};
}

inline IntMatrix factorial3_nonnegative() {
  return {{0, 0, 0, 1, 1, 0, 0, 0}, {0, 0, 1, 0, 0, 1, 0, 0}, {0, 1, 0, 0, 0, 0, 1, 0},
          {0, 1, 1, 0, 1, 0, 0, 1}, {1, 0, 0, 0, 0, 0, 0, 1}, {1, 0, 0, 1, 0, 1, 1, 0}};
}

inline IntMatrix factorial4_x1t() {
  return {{1, 1, 1, 1, 1, 1, 1, 1, -1, -1, -1, -1, -1, -1, -1, -1},
          {1, 1, 1, 1, -1, -1, -1, -1, 1, 1, 1, 1, -1, -1, -1, -1},
          {1, 1, -1, -1, 1, 1, -1, -1, 1, 1, -1, -1, 1, 1, -1, -1},
          {1, -1, 1, -1, 1, -1, 1, -1, 1, -1, 1, -1, 1, -1, 1, -1}};
}

inline IntMatrix anova22_x() { return {{1, 0, 1, 0}, {1, 0, 0, 1}, {0, 1, 1, 0}, {0, 1, 0, 1}}; }

inline IntMatrix anova22_contrast_form() { return {{1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {1, -1, -1}}; }

inline IntMatrix choice2_x() {
  return {{1, 1, 0, 0}, {1, 0, 1, 0}, {1, 0, 0, 1}, {0, 1, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 1}};
}

inline IntMatrix choice2_x1t() {
  return {{-1, 0, 0, 0, 0, 1}, {0, -1, 0, 0, 1, 0}, {0, 0, -1, 1, 0, 0}};
}

inline IntMatrix digraph_incidence() {
  return {{1, 1, 1, 0, 0, 0, 0, 0, -1, 0, -1, 0, -1, 0, 0},
          {-1, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0, -1, 0, -1, 0},
          {0, -1, 0, -1, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0, -1},
          {0, 0, -1, 0, -1, 0, -1, 0, 0, 1, 1, 1, 0, 0, 0},
          {0, 0, 0, 0, 0, -1, 0, -1, 0, -1, 0, 0, 1, 1, 1}};
}

/// Converts 1-based blocks to a system.
inline RandomisationSystem system(std::size_t n, std::vector<std::vector<std::size_t>> blocks) {
  std::vector<IndexSet> b;
  for (auto& blk : blocks) {
    IndexSet s;
    for (auto i : blk) s.push_back(i - 1);
    b.push_back(std::move(s));
  }
  return RandomisationSystem(n, std::move(b));
}

inline RandomisationSystem factorial3_half_fractions() { return system(8, {{1, 4, 6, 7}, {2, 3, 5, 8}}); }
inline RandomisationSystem factorial3_pairs() { return system(8, {{1, 8}, {2, 7}, {3, 6}, {4, 5}}); }

/// The five 4-block systems of the 2^4 design containing {6,7,9,12}.
inline std::vector<RandomisationSystem> factorial4_figure_systems() {
  return {
      system(16, {{6, 7, 9, 12}, {5, 8, 10, 11}, {2, 3, 13, 16}, {1, 4, 14, 15}}),
      system(16, {{6, 7, 9, 12}, {4, 5, 11, 14}, {2, 3, 13, 16}, {1, 8, 10, 15}}),
      system(16, {{6, 7, 9, 12}, {4, 5, 10, 15}, {2, 3, 13, 16}, {1, 8, 11, 14}}),
      system(16, {{6, 7, 9, 12}, {3, 8, 10, 13}, {2, 5, 11, 16}, {1, 4, 14, 15}}),
      system(16, {{6, 7, 9, 12}, {3, 5, 10, 16}, {2, 8, 11, 13}, {1, 4, 14, 15}}),
  };
}

inline RandomisationSystem latin_a_blocks() { return system(9, {{1, 5, 9}, {2, 6, 7}, {3, 4, 8}}); }
inline RandomisationSystem latin_b_blocks() { return system(9, {{1, 6, 8}, {2, 4, 9}, {3, 5, 7}}); }

}  // namespace fixtures
