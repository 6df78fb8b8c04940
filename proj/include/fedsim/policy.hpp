#pragma once

#include "fedsim/assembly.hpp"
#include "fedsim/config.hpp"
#include "fedsim/graph.hpp"
#include "fedsim/ledger.hpp"

#include <optional>
#include <vector>

namespace fedsim {

// Greedy selection rules. All are pure functions of the view; given the same state
// they return the same choice. Ties always resolve to the earliest person in the
// fixed order, and children are considered in ascending id order.

struct PolicyView {
  const FederationGraph& graph;
  const std::vector<ColoredAssembly>& assemblies;  // indexed by community id
  const MetricsLedger& ledger;
  const EngineConfig& config;
  const PersonOrder& order;
  Tick now;

  const ColoredAssembly& assembly(CommunityId c) const { return assemblies[c.v]; }
};

// Colored-seat target for child v of f: floor(share) capped by |population(v)|,
// since colored seats are distinct members of v. The cap only matters while
// |population(f)| < assembly size; above that share(v,f) <= |population(v)| holds.
long long colored_quota(const PolicyView& view, CommunityId v, CommunityId f);

struct RemovalChoice {
  PersonId person;
  std::optional<CommunityId> color;
};

// Excess colored seats: first child (ascending id) whose colored count exceeds the
// raw floor; removes its max-ratio holder.
std::optional<RemovalChoice> select_removal_r1(const PolicyView& view, CommunityId f);

// Assembly larger than the seat count: removes the max-ratio unbound seat holder.
std::optional<PersonId> select_removal_r2(const PolicyView& view, CommunityId f);

// Term expiry: among seats due by `now`, the max-ratio holder. Callers only invoke
// this when a replacement candidate exists (|population(f)| > |assembly(f)|).
std::optional<PersonId> select_rotation_r3(const PolicyView& view, CommunityId f);

struct AdditionA1 {
  std::optional<std::pair<PersonId, CommunityId>> pick;  // person and seat color
  std::vector<CommunityId> blocked;  // under-quota children with nobody eligible
};

// Under-quota child fill: first child (ascending id) below its colored quota with an
// unseated member; seats that member with the minimum ratio. Children below quota
// whose members are all seated are reported as blocked and skipped.
AdditionA1 select_addition_a1(const PolicyView& view, CommunityId f);

// Unbound fill up to min(|population(f)|, assembly size): minimum-ratio unseated person.
std::optional<PersonId> select_addition_a2(const PolicyView& view, CommunityId f);

}  // namespace fedsim
