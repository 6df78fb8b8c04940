#include "fedsim/measures.hpp"

#include <algorithm>
#include <stdexcept>

namespace fedsim {

int membership_split(const FederationGraph& g, CommunityId f, PersonId p) {
  int count = 0;
  for (CommunityId v : g.children(f))
    if (g.in_population(v, p)) ++count;
  return count;
}

Rational weight_person(const FederationGraph& g, PersonId p, CommunityId v, CommunityId f) {
  if (!g.has_edge(f, v)) throw std::logic_error("weight_person: v is not a child of f");
  if (!g.in_population(v, p)) return Rational(0);
  return Rational(1, membership_split(g, f, p));
}

Rational weight_child(const FederationGraph& g, CommunityId v, CommunityId f) {
  if (!g.has_edge(f, v)) throw std::logic_error("weight_child: v is not a child of f");
  Rational total(0);
  for (PersonId p : g.population(v)) total += Rational(1, membership_split(g, f, p));
  return total;
}

std::map<CommunityId, Rational> child_weights(const FederationGraph& g, CommunityId f) {
  std::map<CommunityId, Rational> weights;
  const auto& kids = g.children(f);
  for (CommunityId v : kids) weights.emplace(v, Rational(0));
  // One pass over population(f): each person contributes 1/split to every child
  // that contains them.
  for (PersonId p : g.population(f)) {
    int split = 0;
    for (CommunityId v : kids)
      if (g.in_population(v, p)) ++split;
    if (split == 0) continue;  // unreachable for a well-formed graph
    Rational piece(1, split);
    for (CommunityId v : kids)
      if (g.in_population(v, p)) weights[v] += piece;
  }
  return weights;
}

Rational share_child(const FederationGraph& g, CommunityId v, CommunityId f,
                     int assembly_size) {
  std::size_t pop = g.population(f).size();
  if (pop == 0) throw std::logic_error("share_child: empty parent population");
  return Rational(assembly_size) * weight_child(g, v, f) / Rational((unsigned)pop);
}

Rational share_person(const FederationGraph& g, CommunityId f, int assembly_size) {
  std::size_t pop = g.population(f).size();
  if (pop == 0) throw std::logic_error("share_person: empty population");
  Rational s(assembly_size, (unsigned)pop);
  return s > 1 ? Rational(1) : s;
}

int seats_person(std::span<const PersonId> assembly_members, PersonId p) {
  return std::binary_search(assembly_members.begin(), assembly_members.end(), p) ? 1 : 0;
}

int seats_child(const FederationGraph& g, std::span<const PersonId> assembly_members,
                CommunityId v) {
  int count = 0;
  for (PersonId p : assembly_members)
    if (g.in_population(v, p)) ++count;
  return count;
}

}  // namespace fedsim
