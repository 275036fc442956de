#pragma once

// Reference computations over coordinates, written without the codec's
// pair-level shortcuts.

#include "cactus/coords.hpp"
#include "cactus/embedding.hpp"

#include <vector>

namespace oracle {

// Rank of v's ancestor on every level 0..level(v); light-edge dummies sit at 0.
inline std::vector<long> ancestor_ranks(const cactus::Coordinate& c) {
  const long L = c.params.levels_per_super, T = c.params.turnpike_rank;
  std::vector<long> chain;
  for (size_t s = 0; s < c.pairs.size(); ++s) {
    bool last = s + 1 == c.pairs.size();
    for (long j = 0; j < L; ++j) {
      long lvl = c.pairs[s].level;
      if (j < lvl) chain.push_back(T);
      else if (j == lvl) chain.push_back(c.pairs[s].cycle);
      else if (!last) chain.push_back(0);
      if (last && j == lvl) break;
    }
  }
  return chain;
}

// Walks the staircase from s down to the least common cycle and up to t one
// step at a time: every lateral step costs 1, every down step 1, every up
// step P. Intermediate arcs are charged in full.
inline cactus::BigCount staircase_D(const cactus::Coordinate& s, const cactus::Coordinate& t) {
  auto a = ancestor_ranks(s), b = ancestor_ranks(t);
  const long top = s.params.positions_per_arc - 1, P = s.params.positions_per_arc;
  size_t ls = a.size() - 1, lt = b.size() - 1;
  size_t j0 = 0;
  while (j0 < std::min(ls, lt) && a[j0] == b[j0]) ++j0;
  if (a == b) return 0;
  long sc = a[j0], tc = b[j0];
  cactus::BigCount D = 0;
  // an ancestor target lies left of everything below it
  bool leftward = tc < sc || (tc == sc && ls > j0);
  // s side
  if (ls > j0) {
    for (long p = a[ls]; leftward ? p > 0 : p < top; p += leftward ? -1 : 1) D += 1;
    for (size_t lvl = ls - 1; lvl > j0; --lvl)
      for (long k = 0; k < top; ++k) D += 1;
    for (size_t lvl = ls; lvl > j0; --lvl) D += 1;
  }
  for (long p = sc; p != tc; p += leftward ? -1 : 1) D += 1;
  // t side
  if (lt > j0) {
    for (size_t lvl = j0 + 1; lvl < lt; ++lvl)
      for (long k = 0; k < top; ++k) D += 1;
    for (long p = 0; p < b[lt]; ++p) D += 1;
    for (size_t lvl = j0; lvl < lt; ++lvl) D += P;
  }
  return D;
}

}  // namespace oracle
