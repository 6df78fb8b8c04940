#include "fedsim/policy.hpp"

#include "fedsim/measures.hpp"

#include <algorithm>

namespace fedsim {

namespace {

// Keeps the argmax/argmin with person-order tie-break. Strict improvement only, so
// the first candidate in the fixed order wins among equals when fed in order; feed
// order is arbitrary because ties compare ranks explicitly.
struct Best {
  bool want_max;
  const PersonOrder& order;
  std::optional<PersonId> person;
  Rational value;

  void offer(PersonId p, const Rational& v) {
    if (!person) {
      person = p;
      value = v;
      return;
    }
    if (v == value) {
      if (order.before(p, *person)) person = p;
      return;
    }
    if (want_max ? v > value : v < value) {
      person = p;
      value = v;
    }
  }
};

}  // namespace

long long colored_quota(const PolicyView& view, CommunityId v, CommunityId f) {
  Rational share = share_child(view.graph, v, f, view.config.assembly_size);
  long long raw = (long long)rational_floor(share);
  long long cap = (long long)view.graph.population(v).size();
  return std::min(raw, cap);
}

std::optional<RemovalChoice> select_removal_r1(const PolicyView& view, CommunityId f) {
  const ColoredAssembly& asm_f = view.assembly(f);
  for (CommunityId v : view.graph.children(f)) {
    Rational share = share_child(view.graph, v, f, view.config.assembly_size);
    long long floor = (long long)rational_floor(share);
    if (asm_f.color_count(v) <= floor) continue;
    Best best{true, view.order, {}, {}};
    for (const Seat& s : asm_f.seats())
      if (s.color && *s.color == v)
        best.offer(s.person, view.ledger.ratio_at(person_pair(s.person, f), view.now));
    if (best.person) return RemovalChoice{*best.person, v};
  }
  return std::nullopt;
}

std::optional<PersonId> select_removal_r2(const PolicyView& view, CommunityId f) {
  const ColoredAssembly& asm_f = view.assembly(f);
  if ((long long)asm_f.size() <= view.config.assembly_size) return std::nullopt;
  Best best{true, view.order, {}, {}};
  for (const Seat& s : asm_f.seats())
    if (!s.color)
      best.offer(s.person, view.ledger.ratio_at(person_pair(s.person, f), view.now));
  return best.person;
}

std::optional<PersonId> select_rotation_r3(const PolicyView& view, CommunityId f) {
  const ColoredAssembly& asm_f = view.assembly(f);
  Best best{true, view.order, {}, {}};
  for (const Seat& s : asm_f.due(view.now, view.config.term_length))
    best.offer(s.person, view.ledger.ratio_at(person_pair(s.person, f), view.now));
  return best.person;
}

AdditionA1 select_addition_a1(const PolicyView& view, CommunityId f) {
  AdditionA1 out;
  const ColoredAssembly& asm_f = view.assembly(f);
  for (CommunityId v : view.graph.children(f)) {
    long long quota = colored_quota(view, v, f);
    if (asm_f.color_count(v) >= quota) continue;
    Best best{false, view.order, {}, {}};
    for (PersonId p : view.graph.population(v))
      if (!asm_f.has(p))
        best.offer(p, view.ledger.ratio_at(person_pair(p, f), view.now));
    if (best.person) {
      out.pick = {*best.person, v};
      return out;
    }
    out.blocked.push_back(v);
  }
  return out;
}

std::optional<PersonId> select_addition_a2(const PolicyView& view, CommunityId f) {
  const ColoredAssembly& asm_f = view.assembly(f);
  const auto& pop = view.graph.population(f);
  std::size_t target = std::min(pop.size(), (std::size_t)view.config.assembly_size);
  if (asm_f.size() >= target) return std::nullopt;
  Best best{false, view.order, {}, {}};
  for (PersonId p : pop)
    if (!asm_f.has(p))
      best.offer(p, view.ledger.ratio_at(person_pair(p, f), view.now));
  return best.person;
}

}  // namespace fedsim
