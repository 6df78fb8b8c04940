#pragma once

#include "fedsim/ids.hpp"
#include "fedsim/rational.hpp"

#include <map>

namespace fedsim {

// Exact time-integral bookkeeping for the fairness measures. Every tracked pair is a
// piecewise-constant function of time: the cell stores the integral up to `last` plus
// the value currently in force. Integration is lazy; a cell is brought forward only
// when its value changes or it is read. All arithmetic is exact rationals.

enum class EntityKind : std::uint8_t { Person = 0, Child = 1 };

struct PairKey {
  CommunityId community;  // the community whose assembly is measured
  EntityKind kind;
  std::uint32_t entity;   // PersonId.v or CommunityId.v of a child

  friend bool operator<(const PairKey& a, const PairKey& b) {
    if (a.community != b.community) return a.community < b.community;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.entity < b.entity;
  }
  friend bool operator==(const PairKey& a, const PairKey& b) {
    return a.community == b.community && a.kind == b.kind && a.entity == b.entity;
  }
};

inline PairKey person_pair(PersonId p, CommunityId f) {
  return PairKey{f, EntityKind::Person, p.v};
}
inline PairKey child_pair(CommunityId v, CommunityId f) {
  return PairKey{f, EntityKind::Child, v.v};
}

struct PairCell {
  Rational seat_integral;
  Rational share_integral;
  Rational share_value;   // in force since `last`
  int seat_value = 0;     // 0/1 for persons, |assembly ∩ population(child)| for children
  Tick last = 0;
  bool active = false;    // false once the entity left the community (values pinned 0)
};

class MetricsLedger {
 public:
  // Fetch or create. A new cell starts integrating at `now` with zero history.
  PairCell& cell(const PairKey& key, Tick now);
  const PairCell* find(const PairKey& key) const;

  // integral += value * (t - last). t must not precede last.
  static void bring(PairCell& c, Tick t);

  // Read-only projections to time t (no mutation, usable mid-selection).
  Rational seat_integral_at(const PairKey& key, Tick t) const;
  Rational share_integral_at(const PairKey& key, Tick t) const;

  // seat integral / share integral at t; 1 when the share integral is zero, so a
  // pair with no history yet is tie-neutral.
  Rational ratio_at(const PairKey& key, Tick t) const;

  void finalize(Tick horizon);  // bring every cell forward

  const std::map<PairKey, PairCell>& cells() const { return cells_; }
  std::map<PairKey, PairCell>& cells() { return cells_; }

 private:
  std::map<PairKey, PairCell> cells_;
};

}  // namespace fedsim
