#pragma once

#include <utility>
#include <vector>

#include "rankone/clifford.hpp"

namespace rankone::fixture {

// Every well-defined (d, n) with d in {1,2,4,8}, kept small enough for fast tests.
inline std::vector<std::pair<int, int>> all() {
  return {{1, 0}, {2, 0}, {4, 0}, {8, 0}, {1, 1}, {1, 2}, {2, 1}, {2, 2}, {4, 1}, {4, 2}, {8, 1}};
}

inline std::vector<std::pair<int, int>> with_v() {
  return {{1, 1}, {1, 2}, {2, 1}, {2, 2}, {4, 1}, {4, 2}, {8, 1}};
}

}  // namespace rankone::fixture

#define EXPECT_RANKONE_ERROR(stmt, expected)                      \
  do {                                                            \
    try {                                                         \
      stmt;                                                       \
      ADD_FAILURE() << "no error raised by " #stmt;               \
    } catch (const ::rankone::Error& err) {                       \
      EXPECT_EQ(err.code(), expected) << err.what();              \
    }                                                             \
  } while (false)
