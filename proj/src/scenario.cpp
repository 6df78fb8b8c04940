#include "fedsim/scenario.hpp"

#include "fedsim/engine.hpp"
#include "fedsim/rng.hpp"
#include "fedsim/trace.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace fedsim {

namespace {

std::string padded(char prefix, int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%c%03d", prefix, i);
  return buf;
}

}  // namespace

ScenarioSpec corpus_spec_for_seed(std::uint64_t seed) {
  ScenarioSpec spec;
  spec.seed = seed;
  Rng rng(seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull);
  if (seed % 101 == 0) {
    spec.persons = 200;
    spec.communities = 40;
  } else {
    const std::uint64_t bucket = rng.below(100);
    if (bucket < 60) {
      spec.persons = 4 + static_cast<int>(rng.below(14));
      spec.communities = 4 + static_cast<int>(rng.below(8));
    } else if (bucket < 90) {
      spec.persons = 18 + static_cast<int>(rng.below(42));
      spec.communities = 8 + static_cast<int>(rng.below(16));
    } else {
      spec.persons = 60 + static_cast<int>(rng.below(141));
      spec.communities = 16 + static_cast<int>(rng.below(25));
    }
  }
  spec.events = std::clamp(spec.persons * 2 + static_cast<int>(rng.below(40)), 16, 420);
  spec.assembly_size = 2 + static_cast<int>(rng.below(4));
  spec.term_length = 10;
  spec.child_min_pop_enforced = true;
  return spec;
}

ScenarioSpec parse_scenario_spec(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& ex) {
    throw std::runtime_error(std::string("scenario spec: ") + ex.what());
  }
  ScenarioSpec spec;
  spec.seed = j.value("seed", spec.seed);
  spec.persons = j.value("persons", spec.persons);
  spec.communities = j.value("communities", spec.communities);
  spec.events = j.value("events", spec.events);
  spec.assembly_size = j.value("assembly_size", spec.assembly_size);
  spec.term_length = j.value("term_length", spec.term_length);
  spec.child_min_pop_enforced = j.value("child_min_pop", spec.child_min_pop_enforced);
  spec.w_participate = j.value("w_participate", spec.w_participate);
  spec.w_federate = j.value("w_federate", spec.w_federate);
  spec.w_join = j.value("w_join", spec.w_join);
  spec.w_leave = j.value("w_leave", spec.w_leave);
  spec.w_remove_member = j.value("w_remove_member", spec.w_remove_member);
  spec.w_wait = j.value("w_wait", spec.w_wait);
  if (spec.persons < 1 || spec.persons > 999 || spec.communities < 1 ||
      spec.communities > 999 || spec.events < 0 || spec.assembly_size < 1 ||
      spec.term_length < 1) {
    throw std::runtime_error("scenario spec: values out of range");
  }
  return spec;
}

std::string render_scenario_spec(const ScenarioSpec& spec) {
  nlohmann::json j;
  j["seed"] = spec.seed;
  j["persons"] = spec.persons;
  j["communities"] = spec.communities;
  j["events"] = spec.events;
  j["assembly_size"] = spec.assembly_size;
  j["term_length"] = spec.term_length;
  j["child_min_pop"] = spec.child_min_pop_enforced;
  j["w_participate"] = spec.w_participate;
  j["w_federate"] = spec.w_federate;
  j["w_join"] = spec.w_join;
  j["w_leave"] = spec.w_leave;
  j["w_remove_member"] = spec.w_remove_member;
  j["w_wait"] = spec.w_wait;
  return j.dump(2) + "\n";
}

std::string generate_trace_text(const ScenarioSpec& spec) {
  std::vector<std::string> person_names;
  person_names.reserve(spec.persons);
  for (int i = 0; i < spec.persons; ++i) person_names.push_back(padded('p', i));
  // Every participation consumes a community id for the new leaf, so the pool
  // holds one id per person plus the configured federation head room.
  const int community_pool = std::min(spec.persons + spec.communities, 999);
  std::vector<std::string> community_names;
  community_names.reserve(community_pool);
  for (int i = 0; i < community_pool; ++i) community_names.push_back(padded('c', i));

  IdSpace ids;
  ids.persons = IdTable::build(person_names);
  ids.communities = IdTable::build(community_names);

  EngineConfig cfg;
  cfg.assembly_size = spec.assembly_size;
  cfg.term_length = spec.term_length;
  cfg.child_min_pop_enforced = spec.child_min_pop_enforced;

  Engine shadow(ids, cfg);
  TraceBuilder tb;
  Rng rng(spec.seed ^ 0xd1b54a32d192ed03ull);

  Tick t = 1;
  std::uint32_t next_community = 0;
  int emitted = 0;
  int stall = 0;
  const int churn_start = (spec.events * 3) / 5;  // growth first, then churn

  while (emitted < spec.events && stall < 500) {
    // Bring the shadow state up to the draw time first: a seat that is due to
    // rotate before t must not be offered as a remove-member candidate.
    shadow.advance_to(t);
    const bool churn = emitted >= churn_start;
    const long w_p = spec.w_participate;
    const long w_f = w_p + spec.w_federate;
    const long w_j = w_f + spec.w_join;
    const long w_l = w_j + (churn ? spec.w_leave : 0);
    const long w_r = w_l + (churn ? spec.w_remove_member : 0);
    const long w_total = w_r + spec.w_wait;
    if (w_total <= 0) throw std::runtime_error("scenario spec: weights sum to zero");
    const long roll = static_cast<long>(rng.below(static_cast<std::uint64_t>(w_total)));
    bool moved = false;
    if (roll < w_p) {
      if (next_community < static_cast<std::uint32_t>(community_pool)) {
        std::vector<std::uint32_t> idle;
        for (std::uint32_t p = 0; p < static_cast<std::uint32_t>(spec.persons); ++p) {
          if (!shadow.leaf_of(PersonId{p})) idle.push_back(p);
        }
        if (!idle.empty()) {
          const std::uint32_t p = idle[rng.below(idle.size())];
          const std::uint32_t c = next_community++;
          TimedEvent e;
          e.t = t;
          e.kind = EventKind::Participate;
          e.person = PersonId{p};
          e.a = CommunityId{c};
          shadow.apply_event(e);
          tb.participate(t, ids.persons.name(p), ids.communities.name(c));
          moved = true;
        }
      }
    } else if (roll < w_f) {
      if (next_community < static_cast<std::uint32_t>(community_pool)) {
        const std::vector<CommunityId> alive = shadow.graph().alive();
        if (!alive.empty()) {
          const CommunityId child = alive[rng.below(alive.size())];
          const std::uint32_t c = next_community++;
          TimedEvent e;
          e.t = t;
          e.kind = EventKind::Federate;
          e.a = child;
          e.b = CommunityId{c};
          shadow.apply_event(e);
          tb.federate(t, ids.communities.name(child.v), ids.communities.name(c));
          moved = true;
        }
      }
    } else if (roll < w_j) {
      const std::vector<CommunityId> alive = shadow.graph().alive();
      std::vector<CommunityId> parents;
      for (const CommunityId c : alive) {
        if (!shadow.graph().holds_members(c)) parents.push_back(c);
      }
      if (!parents.empty()) {
        for (int attempt = 0; attempt < 24 && !moved; ++attempt) {
          const CommunityId parent = parents[rng.below(parents.size())];
          const CommunityId child = alive[rng.below(alive.size())];
          if (parent == child) continue;
          if (shadow.graph().has_edge(parent, child)) continue;
          if (shadow.graph().would_create_cycle(parent, child)) continue;
          if (cfg.child_min_pop_enforced && !shadow.graph().holds_members(child) &&
              shadow.graph().population(child).size() <=
                  static_cast<std::size_t>(cfg.assembly_size)) {
            continue;
          }
          TimedEvent e;
          e.t = t;
          e.kind = EventKind::Join;
          e.a = parent;
          e.b = child;
          shadow.apply_event(e);
          tb.join(t, ids.communities.name(parent.v), ids.communities.name(child.v));
          moved = true;
        }
      }
    } else if (roll < w_l) {
      std::vector<std::pair<CommunityId, CommunityId>> edges;
      for (const CommunityId c : shadow.graph().alive()) {
        for (const CommunityId v : shadow.graph().children(c)) edges.emplace_back(c, v);
      }
      if (!edges.empty()) {
        const auto [parent, child] = edges[rng.below(edges.size())];
        // Departures that tear down a parent's last child stay possible but rare.
        if (shadow.graph().children(parent).size() > 1 || rng.chance(300)) {
          TimedEvent e;
          e.t = t;
          e.kind = EventKind::Leave;
          e.a = parent;
          e.b = child;
          shadow.apply_event(e);
          tb.leave(t, ids.communities.name(parent.v), ids.communities.name(child.v));
          moved = true;
        }
      }
    } else if (roll < w_r) {
      std::vector<CommunityId> seated;
      for (const CommunityId c : shadow.graph().alive()) {
        if (!shadow.assembly(c).empty()) seated.push_back(c);
      }
      if (!seated.empty()) {
        const CommunityId f = seated[rng.below(seated.size())];
        const std::vector<PersonId> members = shadow.assembly(f).members();
        const PersonId p = members[rng.below(members.size())];
        // A leaf resignation removes the person from the system; keep it rarer
        // than plain assembly churn.
        if (!shadow.graph().holds_members(f) || rng.chance(250)) {
          TimedEvent e;
          e.t = t;
          e.kind = EventKind::RemoveMember;
          e.person = p;
          e.a = f;
          shadow.apply_event(e);
          tb.remove_member(t, ids.persons.name(p.v), ids.communities.name(f.v));
          moved = true;
        }
      }
    } else {
      t += 1 + rng.below(spec.term_length);
      ++stall;
      continue;
    }
    if (moved) {
      ++emitted;
      stall = 0;
      if (!rng.chance(350)) t += 1 + rng.below(4);
    } else {
      ++stall;
    }
  }
  return tb.text();
}

}  // namespace fedsim
