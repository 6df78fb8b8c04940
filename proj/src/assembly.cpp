#include "fedsim/assembly.hpp"

#include <algorithm>
#include <stdexcept>

namespace fedsim {

namespace {
auto seat_pos(std::vector<Seat>& seats, PersonId p) {
  return std::lower_bound(seats.begin(), seats.end(), p,
                          [](const Seat& s, PersonId q) { return s.person < q; });
}
auto seat_pos(const std::vector<Seat>& seats, PersonId p) {
  return std::lower_bound(seats.begin(), seats.end(), p,
                          [](const Seat& s, PersonId q) { return s.person < q; });
}
}  // namespace

bool ColoredAssembly::has(PersonId p) const {
  auto it = seat_pos(seats_, p);
  return it != seats_.end() && it->person == p;
}

const Seat* ColoredAssembly::find(PersonId p) const {
  auto it = seat_pos(seats_, p);
  return (it != seats_.end() && it->person == p) ? &*it : nullptr;
}

void ColoredAssembly::add(PersonId p, std::optional<CommunityId> color, Tick start) {
  auto it = seat_pos(seats_, p);
  if (it != seats_.end() && it->person == p)
    throw std::logic_error("assembly: person already seated");
  seats_.insert(it, Seat{p, color, start});
}

Seat ColoredAssembly::remove(PersonId p) {
  auto it = seat_pos(seats_, p);
  if (it == seats_.end() || it->person != p)
    throw std::logic_error("assembly: person not seated");
  Seat out = *it;
  seats_.erase(it);
  return out;
}

void ColoredAssembly::renew(PersonId p, Tick start) {
  auto it = seat_pos(seats_, p);
  if (it == seats_.end() || it->person != p)
    throw std::logic_error("assembly: person not seated");
  it->start = start;
}

int ColoredAssembly::color_count(CommunityId v) const {
  int count = 0;
  for (const Seat& s : seats_)
    if (s.color && *s.color == v) ++count;
  return count;
}

int ColoredAssembly::uncolored_count() const {
  int count = 0;
  for (const Seat& s : seats_)
    if (!s.color) ++count;
  return count;
}

std::vector<PersonId> ColoredAssembly::members() const {
  std::vector<PersonId> out;
  out.reserve(seats_.size());
  for (const Seat& s : seats_) out.push_back(s.person);
  return out;
}

std::vector<Seat> ColoredAssembly::due(Tick now, Tick term_length) const {
  std::vector<Seat> out;
  for (const Seat& s : seats_)
    if (s.start + term_length <= now) out.push_back(s);
  return out;
}

std::optional<Tick> ColoredAssembly::next_expiry(Tick term_length) const {
  std::optional<Tick> best;
  for (const Seat& s : seats_) {
    Tick t = s.start + term_length;
    if (!best || t < *best) best = t;
  }
  return best;
}

}  // namespace fedsim
