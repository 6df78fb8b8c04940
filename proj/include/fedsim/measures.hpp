#pragma once

#include "fedsim/graph.hpp"
#include "fedsim/rational.hpp"

#include <map>
#include <span>

namespace fedsim {

// Instantaneous fairness measures over the current graph. A person's representation
// weight toward a child splits evenly across all children of f that contain them, so
// child weights always partition |population(f)| and child shares always sum to the
// assembly size.

// Number of children of f whose population contains p (the split denominator).
int membership_split(const FederationGraph& g, CommunityId f, PersonId p);

// 1/split if p is in population(v), else 0. v must be a child of f.
Rational weight_person(const FederationGraph& g, PersonId p, CommunityId v, CommunityId f);

// Sum of weight_person over population(v).
Rational weight_child(const FederationGraph& g, CommunityId v, CommunityId f);

// All child weights of f in one pass, keyed by child id.
std::map<CommunityId, Rational> child_weights(const FederationGraph& g, CommunityId f);

// assembly_size * weight(v,f) / |population(f)|.
Rational share_child(const FederationGraph& g, CommunityId v, CommunityId f,
                     int assembly_size);

// min(assembly_size / |population(f)|, 1); p must be in population(f).
Rational share_person(const FederationGraph& g, CommunityId f, int assembly_size);

// Seat counts against a sorted assembly membership list.
int seats_person(std::span<const PersonId> assembly_members, PersonId p);
int seats_child(const FederationGraph& g, std::span<const PersonId> assembly_members,
                CommunityId v);

}  // namespace fedsim
