#pragma once

#include "fedsim/ids.hpp"

#include <cstdint>
#include <vector>

namespace fedsim {

struct EngineConfig {
  int assembly_size = 3;             // seats per community (n)
  Tick term_length = 10;             // rotation term (tau)
  bool child_min_pop_enforced = true;  // non-leaf Join child needs population > n
  std::uint32_t max_children = 0;    // 0 = unlimited out-degree
  bool sortition = false;            // permute the person tie-break order
  std::uint64_t seed = 0;
  std::uint64_t fixpoint_guard_factor = 10;  // pass bound = factor * nodes * seats
};

// Total order over persons used for every tie-break. Default is id-index order,
// which equals lexicographic order of the person names. Sortition replaces it with
// a seeded permutation.
struct PersonOrder {
  std::vector<std::uint32_t> rank;  // empty = identity

  std::uint32_t of(PersonId p) const { return rank.empty() ? p.v : rank[p.v]; }
  bool before(PersonId a, PersonId b) const { return of(a) < of(b); }

  static PersonOrder identity() { return {}; }
  static PersonOrder sortition(std::size_t person_count, std::uint64_t seed);
};

}  // namespace fedsim
