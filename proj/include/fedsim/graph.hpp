#pragma once

#include "fedsim/ids.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace fedsim {

struct ValidityIssue {
  enum class Kind { Cycle, LeafOverlap, AssemblyMembership, AssemblySize };
  Kind kind;
  CommunityId community{};
  CommunityId other{};  // second leaf for LeafOverlap
  PersonId person{};    // offending person where applicable
  std::string detail;
};

struct ValidityReport {
  std::vector<ValidityIssue> violations;
  bool ok() const { return violations.empty(); }
};

// DAG of communities. Edges point parent -> child. Nodes created by add_leaf hold
// people directly; every other node's population is the union of its subtree's leaf
// members. Node indices are never reused: removed nodes stay as tombstones.
class FederationGraph {
 public:
  FederationGraph() = default;
  explicit FederationGraph(std::size_t community_capacity) { reserve(community_capacity); }

  void reserve(std::size_t n);

  bool exists(CommunityId c) const;     // created and not removed
  bool ever_created(CommunityId c) const;

  void add_leaf(CommunityId c, std::vector<PersonId> members);
  void add_node(CommunityId c);
  void add_edge(CommunityId parent, CommunityId child);
  void remove_edge(CommunityId parent, CommunityId child);
  void remove_node(CommunityId c);      // drops incident edges too

  bool has_edge(CommunityId parent, CommunityId child) const;
  const std::vector<CommunityId>& children(CommunityId c) const;
  const std::vector<CommunityId>& parents(CommunityId c) const;
  bool is_leaf(CommunityId c) const { return children(c).empty(); }
  bool holds_members(CommunityId c) const;
  const std::vector<PersonId>& leaf_members(CommunityId c) const;

  // Sorted, deduplicated; memoized until the next structural change.
  const std::vector<PersonId>& population(CommunityId c) const;
  bool in_population(CommunityId c, PersonId p) const;

  // Would adding parent -> child close a cycle (including parent == child)?
  bool would_create_cycle(CommunityId parent, CommunityId child) const;

  std::uint64_t version() const { return version_; }
  std::size_t alive_count() const { return alive_count_; }
  std::vector<CommunityId> alive() const;                // ascending id
  std::vector<CommunityId> topo_children_first() const;  // ties broken by id

 private:
  struct Node {
    bool created = false;
    bool alive = false;
    bool holds_members = false;
    std::vector<PersonId> members;
    std::vector<CommunityId> children;
    std::vector<CommunityId> parents;
  };

  std::vector<Node> nodes_;
  std::uint64_t version_ = 1;
  std::size_t alive_count_ = 0;

  mutable std::vector<std::uint64_t> pop_stamp_;
  mutable std::vector<std::vector<PersonId>> pop_cache_;

  Node& live_node(CommunityId c);
  const Node& live_node(CommunityId c) const;
  void ensure_slot(CommunityId c);
  void touch() { ++version_; }
};

struct AssemblyView {
  CommunityId community;
  std::vector<PersonId> members;  // sorted
};

// Checks acyclicity, leaf population disjointness, assembly membership within
// population, and assembly size == min(|population|, assembly_size).
ValidityReport validate(const FederationGraph& g,
                        const std::vector<AssemblyView>& assemblies,
                        int assembly_size);

}  // namespace fedsim
