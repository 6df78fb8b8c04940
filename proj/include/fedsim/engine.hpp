#pragma once

#include "fedsim/assembly.hpp"
#include "fedsim/config.hpp"
#include "fedsim/graph.hpp"
#include "fedsim/ids.hpp"
#include "fedsim/ledger.hpp"
#include "fedsim/runlog.hpp"

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace fedsim {

// A trace asked for something the transition system forbids.
class TraceError : public std::runtime_error {
 public:
  TraceError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// The engine itself broke one of its own invariants; always a bug.
class InternalError : public std::logic_error {
  using std::logic_error::logic_error;
};

// Deterministic simulation core. Applies externally scheduled events in
// timestamp order, fires seat rotations as terms lapse, and after every change
// runs the maintenance rules to a fixpoint so each community's assembly stays
// at target size with every child's seat quota honoured. All bookkeeping is
// exact (rational arithmetic); the full run is captured in a replayable log.
class Engine {
 public:
  Engine(IdSpace ids, EngineConfig cfg);

  // Advances the clock to e.t (processing any due rotations on the way),
  // validates the event against the current state, applies it, and runs
  // maintenance to quiescence. Throws TraceError on an inadmissible event.
  void apply_event(const TimedEvent& e);

  // Advances the clock, firing rotations/renewals due at or before `target`.
  void advance_to(Tick target);

  // advance_to(horizon) + close all metric integrals at the horizon.
  void finalize(Tick horizon);

  const FederationGraph& graph() const { return graph_; }
  const ColoredAssembly& assembly(CommunityId c) const { return assemblies_[c.v]; }
  std::optional<CommunityId> leaf_of(PersonId p) const { return person_leaf_[p.v]; }
  const MetricsLedger& ledger() const { return ledger_; }
  const IdSpace& ids() const { return ids_; }
  const EngineConfig& config() const { return cfg_; }
  const PersonOrder& order() const { return order_; }
  Tick now() const { return now_; }
  Tick fst() const { return fst_; }
  const RunLog& log() const { return log_; }
  RunLog take_log() { return std::move(log_); }

  std::vector<AssemblyView> assembly_views() const;
  ValidityReport validate_now() const;

 private:
  void apply_participate(const TimedEvent& e);
  void apply_federate(const TimedEvent& e);
  void apply_join(const TimedEvent& e);
  void apply_leave(const TimedEvent& e);
  void apply_remove_member(const TimedEvent& e);

  // Removes every seat whose person left the population or whose color is no
  // longer a child of the community. Logged as Prune actions.
  void prune_invalid_seats(Tick t);

  // Removes childless communities with empty assemblies until none remain.
  // Returns whether anything was collected.
  bool gc_sweep(Tick t);

  // GC, then R1/R2/A1/A2 over all communities (children before parents),
  // repeated until no rule fires.
  void maintenance_fixpoint(Tick t);

  // Rule fixpoint for one community. Equivalent to maintenance_fixpoint after
  // a change confined to f's assembly: every rule reads only its own
  // community's assembly, children, and per-person seat history there, so a
  // seat change in f cannot enable a rule anywhere else.
  void community_fixpoint(CommunityId f, Tick t);

  // Recomputes share/seat values and active flags for every pair after a
  // population or edge change.
  void refresh_all(Tick t);

  // Updates the pairs affected by seating or unseating `p` in community `f`.
  void refresh_member_pairs(CommunityId f, PersonId p, Tick t);

  void mark_structural(Tick t);
  void log_action(ActionRule rule, Tick t, CommunityId community,
                  std::optional<PersonId> person, std::optional<CommunityId> color);
  void warn_blocked(CommunityId f, CommunityId child, Tick t);

  IdSpace ids_;
  EngineConfig cfg_;
  PersonOrder order_;
  FederationGraph graph_;
  std::vector<ColoredAssembly> assemblies_;       // indexed by community id
  std::vector<std::optional<CommunityId>> person_leaf_;  // live leaf holding each person
  MetricsLedger ledger_;
  RunLog log_;
  Tick now_ = 0;
  Tick fst_ = 0;
  std::set<std::tuple<std::uint64_t, std::uint32_t, std::uint32_t>> warned_;
};

}  // namespace fedsim
