// Acceptance harness: one verdict line per shipping criterion, tolerances
// pinned in code. Exits nonzero if any criterion fails.

#include "fedsim/checker.hpp"
#include "fedsim/engine.hpp"
#include "fedsim/measures.hpp"
#include "fedsim/scenario.hpp"
#include "fedsim/trace.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

using namespace fedsim;

namespace {

// Pinned tolerances and scale.
const Rational kTailTolerance(1, 20);   // EEP gaps / EFR deficits / example averages
const Rational kSpreadSlack(1, 100);    // allowed spread increase between halves
constexpr int kCorpusSeeds = 500;       // seeded scenarios in the property corpus
constexpr double kReplayBudgetSec = 1.0;
constexpr double kConvergenceBudgetSec = 5.0;

int g_failures = 0;

void verdict(int number, const std::string& name, bool pass, const std::string& note) {
  std::printf("%s  criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
              note.empty() ? "" : " — ", note.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

ParsedTrace running_example() {
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

bool within(const Rational& value, const Rational& target, const Rational& tol) {
  return rational_abs(value - target) <= tol;
}

// ---------------------------------------------------------------------------
// 1. Replay of the running example: structure at t=7, maintenance timing.
// ---------------------------------------------------------------------------
void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::string note;
  bool pass = true;
  try {
    const ParsedTrace trace = running_example();
    EngineConfig cfg;
    cfg.assembly_size = 2;
    cfg.term_length = 10;
    Engine engine(trace.ids, cfg);
    for (const TimedEvent& e : trace.events) engine.apply_event(e);

    const auto pid = [&](const char* n) { return PersonId{trace.ids.persons.index_of(n)}; };
    const auto cid = [&](const char* n) { return CommunityId{trace.ids.communities.index_of(n)}; };

    pass &= engine.now() == 7;
    pass &= engine.graph().population(cid("x")) ==
            std::vector<PersonId>{pid("alice"), pid("bob")};
    pass &= engine.graph().population(cid("c")) == std::vector<PersonId>{pid("carol")};
    pass &= engine.graph().population(cid("y")) ==
            std::vector<PersonId>{pid("alice"), pid("bob"), pid("carol")};
    pass &= engine.assembly(cid("x")).size() == 2;
    pass &= engine.assembly(cid("y")).size() == 2;
    if (!pass) note = "state at t=7 diverges from the expected structure";

    // The quota fill for bob carries the same timestamp as the join event.
    bool bob_fill_at_join = false;
    for (const RunLogEntry& en : engine.log().entries) {
      if (en.type == RunLogEntry::Type::Action && en.action.rule == ActionRule::A1 &&
          en.action.t == 4 && en.action.community == cid("x") &&
          en.action.person == pid("bob")) {
        bob_fill_at_join = true;
      }
    }
    if (!bob_fill_at_join) {
      pass = false;
      note = "no maintenance fill for bob at the join timestamp";
    }
  } catch (const std::exception& e) {
    pass = false;
    note = e.what();
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= kReplayBudgetSec) {
    pass = false;
    note = "exceeded " + fmt_seconds(kReplayBudgetSec);
  }
  if (pass && note.empty()) note = fmt_seconds(elapsed);
  verdict(1, "running example replays to the expected structure", pass, note);
}

// ---------------------------------------------------------------------------
// 2. Long-run child seats in the running example: 4/3 and 2/3 within 1/20.
// ---------------------------------------------------------------------------
void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  std::string note;
  bool pass = true;
  try {
    const ParsedTrace trace = running_example();
    EngineConfig cfg;
    cfg.assembly_size = 2;
    cfg.term_length = 10;
    Engine engine = run_trace(trace, cfg);  // horizon defaults to fst + 300 terms
    const RunLog& log = engine.log();
    const OracleResult oracle = oracle_recompute(log);
    if (!oracle.findings.empty()) {
      pass = false;
      note = "verification findings on the running example";
    }

    const auto cid = [&](const char* n) { return CommunityId{trace.ids.communities.index_of(n)}; };
    const Rational window(static_cast<unsigned long long>(log.horizon - log.fst));
    const auto tail_child_avg = [&](CommunityId v) {
      const auto it = oracle.tail.find(child_pair(v, cid("y")));
      return it == oracle.tail.end() ? Rational(-1) : Rational(it->second.seat / window);
    };
    const Rational x_avg = tail_child_avg(cid("x"));
    const Rational c_avg = tail_child_avg(cid("c"));
    if (!within(x_avg, Rational(4, 3), kTailTolerance) ||
        !within(c_avg, Rational(2, 3), kTailTolerance)) {
      pass = false;
      note = "tail averages " + decimal_string(x_avg) + " / " + decimal_string(c_avg) +
             " outside 4/3, 2/3 ± 1/20";
    }
  } catch (const std::exception& e) {
    pass = false;
    note = e.what();
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= kConvergenceBudgetSec) {
    pass = false;
    note = "exceeded " + fmt_seconds(kConvergenceBudgetSec);
  }
  if (pass && note.empty()) note = fmt_seconds(elapsed);
  verdict(2, "running example converges to child seats 4/3 and 2/3", pass, note);
}

// ---------------------------------------------------------------------------
// 3. Two disjoint three-person children, n=3: one colored seat each plus one
//    unbound seat, and every person averages 1/2 a seat in the long run.
// ---------------------------------------------------------------------------
void criterion_3() {
  const auto t0 = std::chrono::steady_clock::now();
  std::string note;
  bool pass = true;
  try {
    TraceBuilder b;
    for (int i = 1; i <= 3; ++i) b.participate(1, "p" + std::to_string(i), "la" + std::to_string(i));
    for (int i = 4; i <= 6; ++i) b.participate(1, "p" + std::to_string(i), "lb" + std::to_string(i));
    b.federate(2, "la1", "u").join(2, "u", "la2").join(2, "u", "la3");
    b.federate(2, "lb4", "v").join(2, "v", "lb5").join(2, "v", "lb6");
    b.federate(3, "u", "f").join(3, "f", "v");
    const ParsedTrace trace = b.build();

    EngineConfig cfg;
    cfg.assembly_size = 3;
    cfg.term_length = 10;
    cfg.child_min_pop_enforced = false;  // children of size n are admitted here

    // State right after the final join's maintenance settles.
    Engine probe(trace.ids, cfg);
    for (const TimedEvent& e : trace.events) probe.apply_event(e);
    const auto cid = [&](const char* n) { return CommunityId{trace.ids.communities.index_of(n)}; };
    const CommunityId f = cid("f"), u = cid("u"), v = cid("v");
    pass &= share_child(probe.graph(), u, f, 3) == Rational(3, 2);
    pass &= share_child(probe.graph(), v, f, 3) == Rational(3, 2);
    pass &= probe.assembly(f).size() == 3;
    pass &= probe.assembly(f).color_count(u) == 1;
    pass &= probe.assembly(f).color_count(v) == 1;
    pass &= probe.assembly(f).uncolored_count() == 1;
    if (!pass) note = "settled assembly is not one colored seat per child plus one unbound";

    // Long-run per-person averages.
    Engine engine = run_trace(trace, cfg);
    const RunLog& log = engine.log();
    const OracleResult oracle = oracle_recompute(log);
    if (!oracle.findings.empty()) {
      pass = false;
      note = "verification findings on the two-children example";
    }
    const Rational window(static_cast<unsigned long long>(log.horizon - log.fst));
    for (int i = 1; i <= 6 && pass; ++i) {
      const PersonId p{trace.ids.persons.index_of("p" + std::to_string(i))};
      const auto it = oracle.tail.find(person_pair(p, f));
      const Rational avg = it == oracle.tail.end() ? Rational(-1) : Rational(it->second.seat / window);
      if (!within(avg, Rational(1, 2), kTailTolerance)) {
        pass = false;
        note = "person p" + std::to_string(i) + " tail average " + decimal_string(avg) +
               " outside 1/2 ± 1/20";
      }
    }
  } catch (const std::exception& e) {
    pass = false;
    note = e.what();
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= kConvergenceBudgetSec) {
    pass = false;
    note = "exceeded " + fmt_seconds(kConvergenceBudgetSec);
  }
  if (pass && note.empty()) note = fmt_seconds(elapsed);
  verdict(3, "two-children example seats one per child plus one unbound", pass, note);
}

// ---------------------------------------------------------------------------
// 4-8. Property corpus: seeded scenarios, engine + independent recomputation.
// ---------------------------------------------------------------------------
struct CorpusTally {
  std::mutex mu;
  int done = 0;
  int run_errors = 0;
  int replay = 0;
  int validity = 0;
  int size_shape = 0;  // validity findings specifically about assembly size
  int conservation = 0;
  int quota = 0;
  int ledger_mismatches = 0;
  int eep_over = 0;
  int efr_over = 0;
  int regressions = 0;
  Rational max_eep{0};
  Rational max_efr{0};
  std::vector<std::string> samples;

  void note_failure(const std::string& msg) {
    if (samples.size() < 8) samples.push_back(msg);
  }
};

void run_corpus_seed(std::uint64_t seed, CorpusTally& tally) {
  const ScenarioSpec spec = corpus_spec_for_seed(seed);
  EngineConfig cfg;
  cfg.assembly_size = spec.assembly_size;
  cfg.term_length = spec.term_length;
  cfg.child_min_pop_enforced = spec.child_min_pop_enforced;

  const ParsedTrace trace = parse_trace_text(generate_trace_text(spec));
  const Engine engine = run_trace(trace, cfg);  // horizon: fst + 300 terms
  const OracleResult oracle = oracle_recompute(engine.log());
  const std::vector<std::string> diffs = diff_ledgers(engine.ledger(), oracle, engine.ids());
  const ConvergenceReport conv = summarize_convergence(oracle, engine.log(), kSpreadSlack);

  const std::string tag = "seed " + std::to_string(seed) + ": ";
  std::lock_guard<std::mutex> lock(tally.mu);
  ++tally.done;
  for (const Finding& f : oracle.findings) {
    switch (f.kind) {
      case Finding::Kind::Replay: ++tally.replay; break;
      case Finding::Kind::Validity:
        ++tally.validity;
        if (f.what.find("assembly size") != std::string::npos) ++tally.size_shape;
        break;
      case Finding::Kind::Conservation: ++tally.conservation; break;
      case Finding::Kind::Quota: ++tally.quota; break;
    }
    tally.note_failure(tag + f.what);
  }
  if (!diffs.empty()) {
    ++tally.ledger_mismatches;
    tally.note_failure(tag + diffs.front());
  }
  if (conv.max_eep > tally.max_eep) tally.max_eep = conv.max_eep;
  if (conv.max_efr > tally.max_efr) tally.max_efr = conv.max_efr;
  if (conv.max_eep > kTailTolerance) {
    ++tally.eep_over;
    tally.note_failure(tag + "participation gap " + decimal_string(conv.max_eep));
  }
  if (conv.max_efr > kTailTolerance) {
    ++tally.efr_over;
    tally.note_failure(tag + "representation deficit " + decimal_string(conv.max_efr));
  }
  if (!conv.spread_regressions.empty()) {
    tally.regressions += static_cast<int>(conv.spread_regressions.size());
    tally.note_failure(tag + "ratio spread regressed in " +
                       std::to_string(conv.spread_regressions.size()) + " community(ies)");
  }
}

void criteria_4_to_8() {
  CorpusTally tally;
  std::atomic<std::uint64_t> next{1};
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::uint64_t seed = next.fetch_add(1);
        if (seed > kCorpusSeeds) break;
        try {
          run_corpus_seed(seed, tally);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(tally.mu);
          ++tally.run_errors;
          tally.note_failure("seed " + std::to_string(seed) + ": " + e.what());
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();

  const std::string corpus = std::to_string(tally.done) + "/" +
                             std::to_string(kCorpusSeeds) + " scenarios";
  const bool corpus_ok = tally.done == kCorpusSeeds && tally.run_errors == 0;
  const bool replay_ok = corpus_ok && tally.replay == 0;
  if (!replay_ok) {
    for (const std::string& s : tally.samples) std::fprintf(stderr, "  corpus: %s\n", s.c_str());
  }

  verdict(4, "every child's seat floor holds at all sampled instants",
          replay_ok && tally.quota == 0,
          corpus + ", " + std::to_string(tally.quota) + " floor violation(s)");
  verdict(5, "every lasting state passes structural validation",
          replay_ok && tally.validity == 0,
          corpus + ", " + std::to_string(tally.validity) + " validity finding(s)");
  verdict(6, "incremental metrics equal the independent recomputation exactly",
          replay_ok && tally.ledger_mismatches == 0,
          corpus + ", " + std::to_string(tally.ledger_mismatches) + " mismatching run(s)");
  verdict(7, "shares sum to n, weights to 1, assemblies to min(population, n)",
          replay_ok && tally.conservation == 0 && tally.size_shape == 0,
          corpus + ", " + std::to_string(tally.conservation + tally.size_shape) +
              " conservation finding(s)");
  verdict(8, "long-run averages meet targets within 1/20 and spread does not regress",
          replay_ok && tally.eep_over == 0 && tally.efr_over == 0 && tally.regressions == 0,
          corpus + ", max gap " + decimal_string(tally.max_eep) + ", max deficit " +
              decimal_string(tally.max_efr) + ", " + std::to_string(tally.regressions) +
              " regression(s)");
}

// ---------------------------------------------------------------------------
// 9. CLI determinism: the same run command twice produces identical artifacts.
// ---------------------------------------------------------------------------
std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void criterion_9() {
  std::string note;
  bool pass = true;
  try {
    const std::filesystem::path base =
        std::filesystem::temp_directory_path() /
        ("fedsim-acceptance-" + std::to_string(::getpid()));
    std::filesystem::remove_all(base);
    const std::filesystem::path out1 = base / "run1";
    const std::filesystem::path out2 = base / "run2";
    const std::string trace = std::string(FEDSIM_TRACES_DIR) + "/fig1.trace";

    for (const auto& out : {out1, out2}) {
      const std::string cmd = std::string(FEDSIM_CLI_PATH) + " run " + trace +
                              " -n 2 -t 10 -o " + out.string() + " >/dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) {
        pass = false;
        note = "run command failed";
      }
    }
    if (pass) {
      for (const char* name :
           {"run_log.jsonl", "final_state.json", "metrics.csv", "fairness.json"}) {
        const std::string a = slurp(out1 / name);
        const std::string b = slurp(out2 / name);
        if (a.empty() || a != b) {
          pass = false;
          note = std::string(name) + (a.empty() ? " is empty" : " differs between runs");
          break;
        }
      }
    }
    if (pass) note = "4 artifacts byte-identical";
    std::filesystem::remove_all(base);
  } catch (const std::exception& e) {
    pass = false;
    note = e.what();
  }
  verdict(9, "repeated runs emit byte-identical artifacts", pass, note);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criteria_4_to_8();
  criterion_9();
  if (g_failures == 0) {
    std::printf("all 9 criteria passed\n");
    return 0;
  }
  std::printf("%d criterion(s) failed\n", g_failures);
  return 1;
}
