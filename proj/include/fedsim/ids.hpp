#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fedsim {

// Interned identifiers. Tables are built once per run from the full trace, with
// indices assigned in lexicographic order of the id strings, so comparing indices
// is the same as comparing names. Communities are never reused, so an index stays
// valid after the node is garbage-collected.

struct PersonId {
  std::uint32_t v = std::numeric_limits<std::uint32_t>::max();
  friend bool operator==(PersonId a, PersonId b) { return a.v == b.v; }
  friend bool operator!=(PersonId a, PersonId b) { return a.v != b.v; }
  friend bool operator<(PersonId a, PersonId b) { return a.v < b.v; }
};

struct CommunityId {
  std::uint32_t v = std::numeric_limits<std::uint32_t>::max();
  friend bool operator==(CommunityId a, CommunityId b) { return a.v == b.v; }
  friend bool operator!=(CommunityId a, CommunityId b) { return a.v != b.v; }
  friend bool operator<(CommunityId a, CommunityId b) { return a.v < b.v; }
};

inline constexpr std::uint32_t kNoIndex = std::numeric_limits<std::uint32_t>::max();

class IdTable {
 public:
  IdTable() = default;

  // Sorts, dedups, and interns. Index order == lexicographic order afterwards.
  static IdTable build(std::vector<std::string> names);

  std::uint32_t index_of(const std::string& name) const;  // throws std::out_of_range
  std::optional<std::uint32_t> find(const std::string& name) const;
  const std::string& name(std::uint32_t idx) const { return names_.at(idx); }
  std::size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::map<std::string, std::uint32_t> by_name_;
};

struct IdSpace {
  IdTable persons;
  IdTable communities;
};

using Tick = std::uint64_t;

}  // namespace fedsim
