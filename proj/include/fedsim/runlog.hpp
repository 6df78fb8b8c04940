#pragma once

#include "fedsim/ids.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fedsim {

enum class EventKind : std::uint8_t { Participate, Federate, Join, Leave, RemoveMember };

// Externally scheduled transition. Field use by kind:
//   Participate:  person, a = new leaf
//   Federate:     a = existing child, b = new parent
//   Join:         a = parent, b = child
//   Leave:        a = parent, b = child
//   RemoveMember: person, a = community
struct TimedEvent {
  Tick t = 0;
  EventKind kind = EventKind::Participate;
  PersonId person{};
  CommunityId a{};
  CommunityId b{};
  int line = 0;  // trace line for error reporting; 0 for synthetic events
};

// Engine-internal maintenance steps, logged in application order.
//   GarbageCollect: community = removed node
//   R1/R2/R3:       community, person, color = color of the removed seat
//   A1:             community, person, color = child whose quota the seat fills
//   A2:             community, person
//   Prune:          community, person, color — seat dropped to restore validity
//   Warning:        community, color = under-quota child with nobody eligible
enum class ActionRule : std::uint8_t { GarbageCollect, R1, R2, R3, A1, A2, Prune, Warning };

struct LogAction {
  Tick t = 0;
  ActionRule rule = ActionRule::GarbageCollect;
  CommunityId community{};
  std::optional<PersonId> person;
  std::optional<CommunityId> color;
};

struct RunLogEntry {
  enum class Type : std::uint8_t { Event, Action };
  Type type = Type::Event;
  TimedEvent event{};
  LogAction action{};

  static RunLogEntry make_event(const TimedEvent& e) { return {Type::Event, e, {}}; }
  static RunLogEntry make_action(const LogAction& a) { return {Type::Action, {}, a}; }
};

// Complete replayable record of a run: configuration, interned id spaces, and the
// ordered transition list. fst is the last structural change; horizon is where
// integration stopped.
struct RunLog {
  int assembly_size = 0;
  Tick term_length = 0;
  bool child_min_pop_enforced = true;
  bool sortition = false;
  std::uint64_t seed = 0;

  IdSpace ids;
  std::vector<RunLogEntry> entries;
  Tick fst = 0;
  Tick horizon = 0;
};

}  // namespace fedsim
