#include "fedsim/engine.hpp"

#include "fedsim/measures.hpp"
#include "fedsim/policy.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace fedsim {

namespace {

std::string cname(const IdSpace& ids, CommunityId c) { return "'" + ids.communities.name(c.v) + "'"; }
std::string pname(const IdSpace& ids, PersonId p) { return "'" + ids.persons.name(p.v) + "'"; }

}  // namespace

Engine::Engine(IdSpace ids, EngineConfig cfg)
    : ids_(std::move(ids)),
      cfg_(cfg),
      order_(cfg.sortition ? PersonOrder::sortition(ids_.persons.size(), cfg.seed)
                           : PersonOrder::identity()),
      graph_(ids_.communities.size()),
      assemblies_(ids_.communities.size()),
      person_leaf_(ids_.persons.size()) {
  if (cfg_.assembly_size < 1) throw InternalError("assembly size must be at least 1");
  if (cfg_.term_length < 1) throw InternalError("term length must be at least 1");
  log_.assembly_size = cfg_.assembly_size;
  log_.term_length = cfg_.term_length;
  log_.child_min_pop_enforced = cfg_.child_min_pop_enforced;
  log_.sortition = cfg_.sortition;
  log_.seed = cfg_.seed;
  log_.ids = ids_;
}

void Engine::apply_event(const TimedEvent& e) {
  if (e.t < now_) {
    throw TraceError(e.line, "event at t=" + std::to_string(e.t) +
                                 " precedes the current time t=" + std::to_string(now_));
  }
  advance_to(e.t);
  switch (e.kind) {
    case EventKind::Participate:  apply_participate(e); break;
    case EventKind::Federate:     apply_federate(e); break;
    case EventKind::Join:         apply_join(e); break;
    case EventKind::Leave:        apply_leave(e); break;
    case EventKind::RemoveMember: apply_remove_member(e); break;
  }
  maintenance_fixpoint(e.t);
}

void Engine::apply_participate(const TimedEvent& e) {
  if (graph_.ever_created(e.a)) {
    throw TraceError(e.line, "community id " + cname(ids_, e.a) + " was already used");
  }
  if (person_leaf_[e.person.v]) {
    throw TraceError(e.line, "person " + pname(ids_, e.person) + " already belongs to leaf " +
                                 cname(ids_, *person_leaf_[e.person.v]));
  }
  log_.entries.push_back(RunLogEntry::make_event(e));
  graph_.add_leaf(e.a, {e.person});
  person_leaf_[e.person.v] = e.a;
  assemblies_[e.a.v].add(e.person, std::nullopt, e.t);
  mark_structural(e.t);
  refresh_all(e.t);
}

void Engine::apply_federate(const TimedEvent& e) {
  if (!graph_.exists(e.a)) {
    throw TraceError(e.line, "unknown community " + cname(ids_, e.a));
  }
  if (graph_.ever_created(e.b)) {
    throw TraceError(e.line, "community id " + cname(ids_, e.b) + " was already used");
  }
  log_.entries.push_back(RunLogEntry::make_event(e));
  graph_.add_node(e.b);
  graph_.add_edge(e.b, e.a);
  // The new parent starts with a copy of the child's assembly; every copied seat
  // is bound to that sole child and starts a fresh term now.
  const std::vector<Seat> seats = assemblies_[e.a.v].seats();
  for (const Seat& s : seats) assemblies_[e.b.v].add(s.person, e.a, e.t);
  mark_structural(e.t);
  refresh_all(e.t);
}

void Engine::apply_join(const TimedEvent& e) {
  const CommunityId parent = e.a;
  const CommunityId child = e.b;
  if (!graph_.exists(parent)) {
    throw TraceError(e.line, "unknown community " + cname(ids_, parent));
  }
  if (!graph_.exists(child)) {
    throw TraceError(e.line, "unknown community " + cname(ids_, child));
  }
  if (graph_.holds_members(parent)) {
    throw TraceError(e.line, "community " + cname(ids_, parent) +
                                 " holds members directly and cannot take children");
  }
  if (graph_.has_edge(parent, child)) {
    throw TraceError(e.line, cname(ids_, child) + " is already a child of " + cname(ids_, parent));
  }
  if (graph_.would_create_cycle(parent, child)) {
    throw TraceError(e.line, "making " + cname(ids_, child) + " a child of " +
                                 cname(ids_, parent) + " would create a cycle");
  }
  if (cfg_.max_children != 0 &&
      graph_.children(parent).size() >= static_cast<std::size_t>(cfg_.max_children)) {
    throw TraceError(e.line, "community " + cname(ids_, parent) +
                                 " already has the maximum number of children");
  }
  if (cfg_.child_min_pop_enforced && !graph_.holds_members(child) &&
      graph_.population(child).size() <= static_cast<std::size_t>(cfg_.assembly_size)) {
    throw TraceError(e.line, "federation " + cname(ids_, child) +
                                 " needs a population larger than the assembly size to join");
  }
  log_.entries.push_back(RunLogEntry::make_event(e));
  graph_.add_edge(parent, child);
  mark_structural(e.t);
  refresh_all(e.t);
}

void Engine::apply_leave(const TimedEvent& e) {
  const CommunityId parent = e.a;
  const CommunityId child = e.b;
  if (!graph_.exists(parent)) {
    throw TraceError(e.line, "unknown community " + cname(ids_, parent));
  }
  if (!graph_.exists(child)) {
    throw TraceError(e.line, "unknown community " + cname(ids_, child));
  }
  if (!graph_.has_edge(parent, child)) {
    throw TraceError(e.line, cname(ids_, child) + " is not a child of " + cname(ids_, parent));
  }
  log_.entries.push_back(RunLogEntry::make_event(e));
  graph_.remove_edge(parent, child);
  mark_structural(e.t);
  refresh_all(e.t);
  prune_invalid_seats(e.t);
}

void Engine::apply_remove_member(const TimedEvent& e) {
  if (!graph_.exists(e.a)) {
    throw TraceError(e.line, "unknown community " + cname(ids_, e.a));
  }
  if (!assemblies_[e.a.v].has(e.person)) {
    throw TraceError(e.line, "person " + pname(ids_, e.person) + " holds no seat in " +
                                 cname(ids_, e.a));
  }
  log_.entries.push_back(RunLogEntry::make_event(e));
  assemblies_[e.a.v].remove(e.person);
  refresh_member_pairs(e.a, e.person, e.t);
}

void Engine::advance_to(Tick target) {
  if (target < now_) throw InternalError("clock would move backwards");
  while (true) {
    std::optional<Tick> next;
    for (const CommunityId f : graph_.alive()) {
      if (const auto expiry = assemblies_[f.v].next_expiry(cfg_.term_length)) {
        if (!next || *expiry < *next) next = *expiry;
      }
    }
    if (!next || *next > target) break;
    const Tick t = *next;
    if (t < now_) throw InternalError("seat term expired in the past");
    now_ = t;
    for (const CommunityId f : graph_.alive()) {
      while (true) {
        const std::vector<Seat> due = assemblies_[f.v].due(t, cfg_.term_length);
        if (due.empty()) break;
        if (graph_.population(f).size() > assemblies_[f.v].size()) {
          // A replacement candidate exists: rotate the longest-served due seat out
          // and let maintenance seat the fairest replacement.
          const PolicyView view{graph_, assemblies_, ledger_, cfg_, order_, t};
          const auto pick = select_rotation_r3(view, f);
          if (!pick) throw InternalError("no rotation choice despite due seats");
          const Seat removed = assemblies_[f.v].remove(*pick);
          log_action(ActionRule::R3, t, f, *pick, removed.color);
          refresh_member_pairs(f, *pick, t);
          community_fixpoint(f, t);
        } else {
          // Everyone in the population is already seated: terms renew in place.
          for (const Seat& s : due) assemblies_[f.v].renew(s.person, t);
        }
      }
    }
  }
  now_ = std::max(now_, target);
}

void Engine::finalize(Tick horizon) {
  advance_to(horizon);
  ledger_.finalize(horizon);
  log_.fst = fst_;
  log_.horizon = horizon;
}

std::vector<AssemblyView> Engine::assembly_views() const {
  std::vector<AssemblyView> out;
  for (const CommunityId c : graph_.alive()) {
    out.push_back(AssemblyView{c, assemblies_[c.v].members()});
  }
  return out;
}

ValidityReport Engine::validate_now() const {
  return validate(graph_, assembly_views(), cfg_.assembly_size);
}

void Engine::prune_invalid_seats(Tick t) {
  for (const CommunityId f : graph_.alive()) {
    ColoredAssembly& assembly = assemblies_[f.v];
    std::vector<Seat> stale;
    for (const Seat& s : assembly.seats()) {
      bool ok = graph_.in_population(f, s.person);
      if (ok && s.color) {
        ok = graph_.has_edge(f, *s.color) && graph_.in_population(*s.color, s.person);
      }
      if (!ok) stale.push_back(s);
    }
    for (const Seat& s : stale) {
      assembly.remove(s.person);
      log_action(ActionRule::Prune, t, f, s.person, s.color);
      refresh_member_pairs(f, s.person, t);
    }
  }
}

bool Engine::gc_sweep(Tick t) {
  bool collected = false;
  while (true) {
    std::optional<CommunityId> victim;
    for (const CommunityId c : graph_.alive()) {
      if (graph_.is_leaf(c) && assemblies_[c.v].empty()) {
        victim = c;
        break;
      }
    }
    if (!victim) break;
    if (graph_.holds_members(*victim)) {
      for (const PersonId p : graph_.leaf_members(*victim)) person_leaf_[p.v].reset();
    }
    graph_.remove_node(*victim);
    log_action(ActionRule::GarbageCollect, t, *victim, std::nullopt, std::nullopt);
    mark_structural(t);
    refresh_all(t);
    prune_invalid_seats(t);
    collected = true;
  }
  return collected;
}

void Engine::maintenance_fixpoint(Tick t) {
  const std::uint64_t guard =
      cfg_.fixpoint_guard_factor * std::max<std::uint64_t>(1, graph_.alive_count()) *
      std::max<std::uint64_t>(1, static_cast<std::uint64_t>(cfg_.assembly_size));
  const PolicyView view{graph_, assemblies_, ledger_, cfg_, order_, t};
  for (std::uint64_t pass = 0;; ++pass) {
    if (pass > guard) throw InternalError("maintenance rules did not reach a fixpoint");
    bool fired = gc_sweep(t);
    const std::vector<CommunityId> topo = graph_.topo_children_first();
    for (const CommunityId f : topo) {
      while (const auto r = select_removal_r1(view, f)) {
        assemblies_[f.v].remove(r->person);
        log_action(ActionRule::R1, t, f, r->person, r->color);
        refresh_member_pairs(f, r->person, t);
        fired = true;
      }
    }
    for (const CommunityId f : topo) {
      while (const auto p = select_removal_r2(view, f)) {
        const Seat removed = assemblies_[f.v].remove(*p);
        log_action(ActionRule::R2, t, f, *p, removed.color);
        refresh_member_pairs(f, *p, t);
        fired = true;
      }
    }
    for (const CommunityId f : topo) {
      while (true) {
        const AdditionA1 r = select_addition_a1(view, f);
        for (const CommunityId blocked : r.blocked) warn_blocked(f, blocked, t);
        if (!r.pick) break;
        assemblies_[f.v].add(r.pick->first, r.pick->second, t);
        log_action(ActionRule::A1, t, f, r.pick->first, r.pick->second);
        refresh_member_pairs(f, r.pick->first, t);
        fired = true;
      }
    }
    for (const CommunityId f : topo) {
      while (const auto p = select_addition_a2(view, f)) {
        assemblies_[f.v].add(*p, std::nullopt, t);
        log_action(ActionRule::A2, t, f, *p, std::nullopt);
        refresh_member_pairs(f, *p, t);
        fired = true;
      }
    }
    if (!fired) break;
  }
}

void Engine::community_fixpoint(CommunityId f, Tick t) {
  const std::uint64_t guard =
      cfg_.fixpoint_guard_factor *
      std::max<std::uint64_t>(1, static_cast<std::uint64_t>(cfg_.assembly_size));
  const PolicyView view{graph_, assemblies_, ledger_, cfg_, order_, t};
  for (std::uint64_t pass = 0;; ++pass) {
    if (pass > guard) throw InternalError("maintenance rules did not reach a fixpoint");
    bool fired = false;
    while (const auto r = select_removal_r1(view, f)) {
      assemblies_[f.v].remove(r->person);
      log_action(ActionRule::R1, t, f, r->person, r->color);
      refresh_member_pairs(f, r->person, t);
      fired = true;
    }
    while (const auto p = select_removal_r2(view, f)) {
      const Seat removed = assemblies_[f.v].remove(*p);
      log_action(ActionRule::R2, t, f, *p, removed.color);
      refresh_member_pairs(f, *p, t);
      fired = true;
    }
    while (true) {
      const AdditionA1 r = select_addition_a1(view, f);
      for (const CommunityId blocked : r.blocked) warn_blocked(f, blocked, t);
      if (!r.pick) break;
      assemblies_[f.v].add(r.pick->first, r.pick->second, t);
      log_action(ActionRule::A1, t, f, r.pick->first, r.pick->second);
      refresh_member_pairs(f, r.pick->first, t);
      fired = true;
    }
    while (const auto p = select_addition_a2(view, f)) {
      assemblies_[f.v].add(*p, std::nullopt, t);
      log_action(ActionRule::A2, t, f, *p, std::nullopt);
      refresh_member_pairs(f, *p, t);
      fired = true;
    }
    if (!fired) break;
  }
}

void Engine::refresh_all(Tick t) {
  // Detach pairs whose entity no longer belongs to the community; their values
  // pin to zero so the integrals stop growing.
  for (auto& [key, cell] : ledger_.cells()) {
    bool attached = graph_.exists(key.community);
    if (attached) {
      if (key.kind == EntityKind::Child) {
        attached = graph_.has_edge(key.community, CommunityId{key.entity});
      } else {
        attached = graph_.in_population(key.community, PersonId{key.entity});
      }
    }
    if (!attached && cell.active) {
      MetricsLedger::bring(cell, t);
      cell.seat_value = 0;
      cell.share_value = Rational(0);
      cell.active = false;
    }
  }
  // Re-establish current values for every attached pair.
  for (const CommunityId f : graph_.alive()) {
    const auto& pop = graph_.population(f);
    if (pop.empty()) continue;  // childless former parent awaiting collection
    const std::vector<PersonId> members = assemblies_[f.v].members();
    const Rational person_share = share_person(graph_, f, cfg_.assembly_size);
    for (const PersonId p : pop) {
      PairCell& c = ledger_.cell(person_pair(p, f), t);
      MetricsLedger::bring(c, t);
      c.share_value = person_share;
      c.seat_value = seats_person(members, p);
      c.active = true;
    }
    if (!graph_.is_leaf(f)) {
      const auto weights = child_weights(graph_, f);
      const Rational pop_size(static_cast<std::uint64_t>(pop.size()));
      for (const auto& [v, w] : weights) {
        PairCell& c = ledger_.cell(child_pair(v, f), t);
        MetricsLedger::bring(c, t);
        c.share_value = Rational(cfg_.assembly_size) * w / pop_size;
        c.seat_value = seats_child(graph_, members, v);
        c.active = true;
      }
    }
  }
}

void Engine::refresh_member_pairs(CommunityId f, PersonId p, Tick t) {
  const std::vector<PersonId> members = assemblies_[f.v].members();
  PairCell& c = ledger_.cell(person_pair(p, f), t);
  MetricsLedger::bring(c, t);
  c.seat_value = seats_person(members, p);
  for (const CommunityId v : graph_.children(f)) {
    if (!graph_.in_population(v, p)) continue;
    PairCell& cv = ledger_.cell(child_pair(v, f), t);
    MetricsLedger::bring(cv, t);
    cv.seat_value = seats_child(graph_, members, v);
  }
}

void Engine::mark_structural(Tick t) {
  fst_ = t;
  warned_.clear();
}

void Engine::log_action(ActionRule rule, Tick t, CommunityId community,
                        std::optional<PersonId> person, std::optional<CommunityId> color) {
  LogAction a;
  a.t = t;
  a.rule = rule;
  a.community = community;
  a.person = person;
  a.color = color;
  log_.entries.push_back(RunLogEntry::make_action(a));
}

void Engine::warn_blocked(CommunityId f, CommunityId child, Tick t) {
  if (!warned_.emplace(graph_.version(), f.v, child.v).second) return;
  log_action(ActionRule::Warning, t, f, std::nullopt, child);
}

}  // namespace fedsim
