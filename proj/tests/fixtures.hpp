#pragma once

// Frozen instances shared by the unit and acceptance tests.

#include <string>

#include "bcu/matrix.hpp"
#include "bcu/pda.hpp"

namespace fixtures {

// 6 x 4 array over the 2-subsets of {1,2,3,4}, with delivery integers.
inline const std::string kFourNodePda =
    "pda 6 4 4\n"
    "{1,2} {1,3} {1,4} {2,3} {2,4} {3,4}\n"
    "1 2 3 4\n"
    "* * 0 1\n"
    "* 0 * 2\n"
    "* 1 2 *\n"
    "0 * * 3\n"
    "1 * 3 *\n"
    "2 3 * *\n";

// 9 x 9 array indexed by Z_3^2 rows and (u, v) columns, S = 18.
inline const std::string kGroupingPda =
    "pda 9 9 18\n"
    "(0,0) (0,1) (0,2) (1,0) (1,1) (1,2) (2,0) (2,1) (2,2)\n"
    "(1,0) (1,1) (1,2) (2,0) (2,1) (2,2) (3,0) (3,1) (3,2)\n"
    "* 0 1 * 2 3 * 4 5\n"
    "* 6 7 4 * 8 2 * 9\n"
    "* 10 11 5 9 * 3 8 *\n"
    "4 * 12 * 6 13 0 * 14\n"
    "9 * 15 14 * 10 16 6 *\n"
    "3 * 17 0 16 * * 13 10\n"
    "5 14 * * 15 11 1 12 *\n"
    "2 16 * 1 * 17 * 7 15\n"
    "8 13 * 12 7 * 17 * 11\n";

// Binary 5 x 6 encoder for the four-node placement: I_5 beside an all-ones
// column.
inline bcu::Matrix four_node_encoder() {
  const bcu::Field f(1);
  bcu::Matrix h(f, 5, 6,
                {1, 0, 0, 0, 0, 1,  //
                 0, 1, 0, 0, 0, 1,  //
                 0, 0, 1, 0, 0, 1,  //
                 0, 0, 0, 1, 0, 1,  //
                 0, 0, 0, 0, 1, 1});
  return h.with_labels({bcu::Label::set({1, 2}), bcu::Label::set({1, 3}), bcu::Label::set({1, 4}),
                        bcu::Label::set({2, 3}), bcu::Label::set({2, 4}), bcu::Label::set({3, 4})});
}

}  // namespace fixtures
