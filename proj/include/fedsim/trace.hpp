#pragma once

#include "fedsim/config.hpp"
#include "fedsim/engine.hpp"
#include "fedsim/ids.hpp"
#include "fedsim/runlog.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fedsim {

// Text trace format, one event per line, '#' starts a comment:
//   <t> participate <person> <new-leaf>
//   <t> federate <child> <new-parent>
//   <t> join <parent> <child>
//   <t> leave <parent> <child>
//   <t> remove-member <person> <community>
// Ids are interned over the whole file before any event is decoded, so id
// indices equal the lexicographic rank of the names and are identical no
// matter when an id first appears.

struct ParsedTrace {
  IdSpace ids;
  std::vector<TimedEvent> events;
};

ParsedTrace parse_trace(std::istream& in);
ParsedTrace parse_trace_text(const std::string& text);
ParsedTrace parse_trace_file(const std::string& path);

// Canonical text for a trace; parse_trace_text(format_trace(t)) reproduces t.
std::string format_trace(const ParsedTrace& trace);

// Applies every event in order and integrates metrics up to the horizon.
// Default horizon: 300 terms past the final structural change (never before
// the last event). Throws TraceError on the first inadmissible event.
Engine run_trace(const ParsedTrace& trace, const EngineConfig& cfg,
                 std::optional<Tick> horizon = std::nullopt);

// Convenience for building traces in code (tests, the scenario generator).
class TraceBuilder {
 public:
  TraceBuilder& participate(Tick t, const std::string& person, const std::string& leaf);
  TraceBuilder& federate(Tick t, const std::string& child, const std::string& parent);
  TraceBuilder& join(Tick t, const std::string& parent, const std::string& child);
  TraceBuilder& leave(Tick t, const std::string& parent, const std::string& child);
  TraceBuilder& remove_member(Tick t, const std::string& person, const std::string& community);

  bool empty() const { return lines_.empty(); }
  std::size_t size() const { return lines_.size(); }
  std::string text() const;
  ParsedTrace build() const;  // round-trips through the parser

 private:
  std::vector<std::string> lines_;
};

}  // namespace fedsim
