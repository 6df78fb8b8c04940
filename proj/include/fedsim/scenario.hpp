#pragma once

#include "fedsim/config.hpp"
#include "fedsim/ids.hpp"

#include <cstdint>
#include <string>

namespace fedsim {

// Randomized scenario generation. The same spec always yields the same trace
// text. Events are chosen against a live shadow simulation, so every emitted
// event is admissible by construction. A run has two event phases — growth
// (participate/federate/join only, the first ~60% of events) and churn (all
// five kinds) — followed by the implicit quiet tail: the trace simply ends,
// and the caller's horizon extends the run far past the last change, so a
// stabilization point always exists.

struct ScenarioSpec {
  std::uint64_t seed = 1;
  int persons = 12;     // person id pool (max concurrent participants)
  int communities = 8;  // head room for federation parents, on top of one
                        // community id per person (ids are never reused)
  int events = 40;      // target emitted event count
  int assembly_size = 3;
  Tick term_length = 10;
  bool child_min_pop_enforced = true;
  // Draw weights (relative). A "wait" draw advances the clock without an event.
  int w_participate = 300;
  int w_federate = 110;
  int w_join = 200;
  int w_leave = 90;
  int w_remove_member = 140;
  int w_wait = 160;
};

// Deterministic corpus parameterization: sizes skew small, with a slice of
// runs at the scale caps (200 persons, 40 communities).
ScenarioSpec corpus_spec_for_seed(std::uint64_t seed);

ScenarioSpec parse_scenario_spec(const std::string& json_text);
std::string render_scenario_spec(const ScenarioSpec& spec);

// Trace text, parseable by parse_trace_text.
std::string generate_trace_text(const ScenarioSpec& spec);

}  // namespace fedsim
