#pragma once

#include "fedsim/ids.hpp"

#include <optional>
#include <vector>

namespace fedsim {

// One assembly seat. color names the child whose floor quota this seat fills;
// nullopt is an unbound seat. start is when the current term began.
struct Seat {
  PersonId person;
  std::optional<CommunityId> color;
  Tick start = 0;
};

// Seats of one community, at most one per person, kept sorted by person so every
// traversal is deterministic.
class ColoredAssembly {
 public:
  bool empty() const { return seats_.empty(); }
  std::size_t size() const { return seats_.size(); }

  bool has(PersonId p) const;
  const Seat* find(PersonId p) const;

  void add(PersonId p, std::optional<CommunityId> color, Tick start);
  Seat remove(PersonId p);
  void renew(PersonId p, Tick start);

  int color_count(CommunityId v) const;
  int uncolored_count() const;

  std::vector<PersonId> members() const;  // sorted
  const std::vector<Seat>& seats() const { return seats_; }

  // Seats whose term has run at least term_length by `now`, in person order.
  std::vector<Seat> due(Tick now, Tick term_length) const;
  // Earliest start+term_length over all seats, if any.
  std::optional<Tick> next_expiry(Tick term_length) const;

 private:
  std::vector<Seat> seats_;
};

}  // namespace fedsim
