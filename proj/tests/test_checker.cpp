#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fedsim/checker.hpp"
#include "fedsim/engine.hpp"
#include "fedsim/trace.hpp"

#include <algorithm>

using fedsim::ActionRule;
using fedsim::Engine;
using fedsim::EngineConfig;
using fedsim::Finding;
using fedsim::OracleResult;
using fedsim::ParsedTrace;
using fedsim::Rational;
using fedsim::RunLog;
using fedsim::RunLogEntry;
using fedsim::Tick;
using fedsim::TraceBuilder;

namespace {

ParsedTrace two_level_trace() {
  return TraceBuilder{}
      .participate(1, "alice", "a")
      .participate(2, "bob", "b")
      .federate(3, "a", "x")
      .join(4, "x", "b")
      .participate(5, "carol", "c")
      .federate(6, "x", "y")
      .join(7, "y", "c")
      .build();
}

// A run with churn: a leave, a resignation, and rotations over a long window.
ParsedTrace churn_trace() {
  return TraceBuilder{}
      .participate(1, "alice", "a")
      .participate(1, "bob", "b")
      .participate(1, "carol", "c")
      .participate(1, "dan", "d")
      .federate(2, "a", "x")
      .join(2, "x", "b")
      .join(3, "x", "c")
      .join(4, "x", "d")
      .leave(30, "x", "d")
      .remove_member(31, "dan", "d")
      .build();
}

EngineConfig config2() {
  EngineConfig cfg;
  cfg.assembly_size = 2;
  cfg.term_length = 10;
  return cfg;
}

RunLog finished_log(const ParsedTrace& trace, const EngineConfig& cfg, Tick horizon) {
  Engine engine = fedsim::run_trace(trace, cfg, horizon);
  return engine.take_log();
}

bool has_kind(const std::vector<Finding>& findings, Finding::Kind kind) {
  return std::any_of(findings.begin(), findings.end(),
                     [&](const Finding& f) { return f.kind == kind; });
}

}  // namespace

TEST_CASE("the oracle agrees with the engine on lawful runs") {
  for (const ParsedTrace& trace : {two_level_trace(), churn_trace()}) {
    Engine engine = fedsim::run_trace(trace, config2(), 400);
    const OracleResult oracle = fedsim::oracle_recompute(engine.log());
    CHECK(oracle.findings.empty());
    CHECK(fedsim::diff_ledgers(engine.ledger(), oracle, engine.ids()).empty());
  }
}

TEST_CASE("the oracle reconstructs the final state") {
  const ParsedTrace trace = two_level_trace();
  Engine engine = fedsim::run_trace(trace, config2(), 100);
  const OracleResult oracle = fedsim::oracle_recompute(engine.log());

  const auto x = trace.ids.communities.index_of("x");
  const auto y = trace.ids.communities.index_of("y");
  const auto a = trace.ids.communities.index_of("a");
  REQUIRE(oracle.final_pop.count(y) == 1);
  CHECK(oracle.final_pop.at(y) == 3);
  CHECK(oracle.final_pop.at(x) == 2);
  CHECK(oracle.final_children.at(y) == std::vector<std::uint32_t>{trace.ids.communities.index_of("c"), x});
  CHECK(oracle.final_assembly.at(y).size() == 2);
  CHECK(oracle.final_leaf_members.at(a) ==
        std::vector<std::uint32_t>{trace.ids.persons.index_of("alice")});

  // Sample schedule starts at the last structural change and steps by term.
  REQUIRE_FALSE(oracle.sample_times.empty());
  CHECK(oracle.sample_times.front() == engine.fst());
  if (oracle.sample_times.size() > 1) {
    CHECK(oracle.sample_times[1] - oracle.sample_times[0] == config2().term_length);
  }
  CHECK(oracle.sample_times.back() <= engine.log().horizon);

  // Spread covers every community alive at the horizon.
  CHECK(oracle.spread.size() == oracle.final_pop.size());
  for (const auto& [community, values] : oracle.spread) {
    CHECK(values.size() == oracle.sample_times.size());
  }
}

TEST_CASE("tampered logs are caught") {
  const ParsedTrace trace = two_level_trace();
  const RunLog good = finished_log(trace, config2(), 200);
  REQUIRE(fedsim::oracle_recompute(good).findings.empty());

  SUBCASE("dropping a maintenance action breaks replay") {
    RunLog bad = good;
    const auto it = std::find_if(bad.entries.begin(), bad.entries.end(), [](const RunLogEntry& e) {
      return e.type == RunLogEntry::Type::Action && e.action.rule == ActionRule::A1;
    });
    REQUIRE(it != bad.entries.end());
    bad.entries.erase(it);
    const OracleResult r = fedsim::oracle_recompute(bad);
    CHECK_FALSE(r.findings.empty());
  }

  SUBCASE("rewriting who was seated breaks replay or fairness") {
    RunLog bad = good;
    const auto it = std::find_if(bad.entries.begin(), bad.entries.end(), [](const RunLogEntry& e) {
      return e.type == RunLogEntry::Type::Action && e.action.rule == ActionRule::A2;
    });
    REQUIRE(it != bad.entries.end());
    it->action.person = fedsim::PersonId{trace.ids.persons.index_of("carol")};
    const OracleResult r = fedsim::oracle_recompute(bad);
    CHECK_FALSE(r.findings.empty());
  }

  SUBCASE("a wrong settling time is reported") {
    RunLog bad = good;
    bad.fst = bad.fst + 1;
    const OracleResult r = fedsim::oracle_recompute(bad);
    CHECK(has_kind(r.findings, Finding::Kind::Replay));
  }

  SUBCASE("truncating the log is reported") {
    RunLog bad = good;
    REQUIRE(bad.entries.size() > 2);
    bad.entries.resize(bad.entries.size() / 2);
    const OracleResult r = fedsim::oracle_recompute(bad);
    CHECK_FALSE(r.findings.empty());
  }

  SUBCASE("an action the rules would never take is a quota or replay finding") {
    RunLog bad = good;
    // Duplicate the final A2 seat grant: the person is already seated.
    const auto it = std::find_if(bad.entries.rbegin(), bad.entries.rend(), [](const RunLogEntry& e) {
      return e.type == RunLogEntry::Type::Action && e.action.rule == ActionRule::A2;
    });
    REQUIRE(it != bad.entries.rend());
    bad.entries.push_back(*it);
    const OracleResult r = fedsim::oracle_recompute(bad);
    CHECK_FALSE(r.findings.empty());
  }
}

TEST_CASE("ledger corruption is reported as a diff") {
  const ParsedTrace trace = two_level_trace();
  Engine engine = fedsim::run_trace(trace, config2(), 200);
  const OracleResult oracle = fedsim::oracle_recompute(engine.log());

  fedsim::MetricsLedger tampered = engine.ledger();
  REQUIRE_FALSE(tampered.cells().empty());
  auto& [key, cell] = *tampered.cells().begin();
  cell.seat_integral += Rational(1, 7);
  const auto diffs = fedsim::diff_ledgers(tampered, oracle, engine.ids());
  CHECK_FALSE(diffs.empty());
}

TEST_CASE("the stationary example settles exactly on target") {
  // Long after the final structural change the tail window holds whole
  // rotation cycles, so tail-average seats equal tail-average share exactly.
  const ParsedTrace trace = two_level_trace();
  const Tick horizon = 7 + 300 * 10;  // whole cycles: 3-person rotation, term 10
  Engine engine = fedsim::run_trace(trace, config2(), horizon);
  const OracleResult oracle = fedsim::oracle_recompute(engine.log());
  REQUIRE(oracle.findings.empty());

  const auto report = fedsim::summarize_convergence(oracle, engine.log(), Rational(1, 100));
  CHECK(report.max_eep == Rational(0));
  CHECK(report.max_efr == Rational(0));
  CHECK(report.spread_regressions.empty());

  // Every measured person pair is in the report, none above tolerance.
  for (const auto& item : report.eep) CHECK(item.value <= Rational(1, 20));
  for (const auto& item : report.efr) CHECK(item.value <= Rational(1, 20));
}

TEST_CASE("convergence summaries split the spread window into halves") {
  const ParsedTrace trace = churn_trace();
  Engine engine = fedsim::run_trace(trace, config2(), 31 + 200 * 10);
  const OracleResult oracle = fedsim::oracle_recompute(engine.log());
  REQUIRE(oracle.findings.empty());

  const auto report = fedsim::summarize_convergence(oracle, engine.log(), Rational(1, 100));
  CHECK(report.spread_halves.size() == oracle.spread.size());
  for (const auto& [community, halves] : report.spread_halves) {
    CHECK(halves.first >= Rational(0));
    CHECK(halves.second >= Rational(0));
  }
  CHECK(report.spread_regressions.empty());
}
