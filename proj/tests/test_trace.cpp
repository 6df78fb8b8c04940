#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fedsim/trace.hpp"

#include <string>

using fedsim::EventKind;
using fedsim::ParsedTrace;
using fedsim::TraceBuilder;
using fedsim::TraceError;

TEST_CASE("traces parse with comments, blank lines, and stable interning") {
  const std::string text =
      "# seed communities\n"
      "1 participate zoe z1   # trailing comment\n"
      "\n"
      "2 participate abe a1\n"
      "3 federate z1 top\n"
      "4 join top a1\n";
  const ParsedTrace trace = fedsim::parse_trace_text(text);

  REQUIRE(trace.events.size() == 4);
  CHECK(trace.events[0].kind == EventKind::Participate);
  CHECK(trace.events[0].t == 1);
  CHECK(trace.events[0].line == 2);
  CHECK(trace.events[3].kind == EventKind::Join);

  // Ids are interned over the whole file in name order, so abe ranks before
  // zoe even though zoe appears first.
  CHECK(trace.ids.persons.index_of("abe") == 0);
  CHECK(trace.ids.persons.index_of("zoe") == 1);
  CHECK(trace.ids.communities.index_of("a1") == 0);
  CHECK(trace.ids.communities.index_of("top") == 1);
  CHECK(trace.ids.communities.index_of("z1") == 2);
  CHECK(trace.events[0].person.v == 1);  // zoe
  CHECK(trace.events[1].person.v == 0);  // abe
}

TEST_CASE("interning does not depend on event order") {
  const ParsedTrace forward = fedsim::parse_trace_text(
      "1 participate abe a1\n2 participate zoe z1\n");
  const ParsedTrace backward = fedsim::parse_trace_text(
      "1 participate zoe z1\n2 participate abe a1\n");
  CHECK(forward.ids.persons.index_of("abe") == backward.ids.persons.index_of("abe"));
  CHECK(forward.ids.communities.index_of("z1") == backward.ids.communities.index_of("z1"));
}

TEST_CASE("formatting and reparsing reproduces the trace") {
  const ParsedTrace trace = TraceBuilder{}
                                .participate(1, "alice", "a")
                                .participate(2, "bob", "b")
                                .federate(3, "a", "x")
                                .join(4, "x", "b")
                                .leave(9, "x", "b")
                                .remove_member(10, "bob", "b")
                                .build();
  const std::string text = fedsim::format_trace(trace);
  const ParsedTrace again = fedsim::parse_trace_text(text);

  REQUIRE(again.events.size() == trace.events.size());
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    CHECK(again.events[i].t == trace.events[i].t);
    CHECK(again.events[i].kind == trace.events[i].kind);
    CHECK(again.events[i].person == trace.events[i].person);
    CHECK(again.events[i].a == trace.events[i].a);
    CHECK(again.events[i].b == trace.events[i].b);
  }
  CHECK(fedsim::format_trace(again) == text);
}

TEST_CASE("malformed lines are rejected with their line number") {
  const auto line_of = [](const std::string& text) {
    try {
      fedsim::parse_trace_text(text);
    } catch (const TraceError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("1 participate alice\n") == 1);            // missing argument
  CHECK(line_of("# ok\n1 dance alice a\n") == 2);          // unknown verb
  CHECK(line_of("x participate alice a\n") == 1);          // bad timestamp
  CHECK(line_of("-3 participate alice a\n") == 1);         // negative timestamp
  CHECK(line_of("1 participate alice a extra\n") == 1);    // trailing token
  CHECK(line_of("1 join x y\n2 join x\n") == 2);
}

TEST_CASE("running a trace defaults the horizon far past the last change") {
  const ParsedTrace trace = TraceBuilder{}
                                .participate(1, "alice", "a")
                                .federate(4, "a", "x")
                                .build();
  fedsim::EngineConfig cfg;
  cfg.assembly_size = 2;
  cfg.term_length = 10;

  SUBCASE("default horizon = last structural change + 300 terms") {
    const fedsim::Engine engine = fedsim::run_trace(trace, cfg);
    CHECK(engine.fst() == 4);
    CHECK(engine.now() == 4 + 300 * 10);
    CHECK(engine.log().horizon == engine.now());
  }
  SUBCASE("an explicit horizon is honoured") {
    const fedsim::Engine engine = fedsim::run_trace(trace, cfg, 50);
    CHECK(engine.now() == 50);
  }
  SUBCASE("a horizon before the last event is refused") {
    CHECK_THROWS_AS(fedsim::run_trace(trace, cfg, 2), TraceError);
  }
  SUBCASE("an inadmissible event surfaces as a trace error") {
    const ParsedTrace bad = TraceBuilder{}
                                .participate(3, "alice", "a")
                                .participate(1, "bob", "b")  // clock regression
                                .build();
    CHECK_THROWS_AS(fedsim::run_trace(bad, cfg), TraceError);
  }
}

TEST_CASE("builder text matches the canonical format") {
  TraceBuilder b;
  CHECK(b.empty());
  b.participate(1, "alice", "a").federate(2, "a", "x");
  CHECK(b.size() == 2);
  CHECK(b.text() == "1 participate alice a\n2 federate a x\n");
  CHECK(fedsim::format_trace(b.build()) == b.text());
}
