// Command-line front end: run traces to artifacts, validate traces, verify run
// logs, and generate random scenarios.
//
// Exit codes: 0 success, 1 verification failure, 2 trace/usage error,
// 3 internal error.

#include "fedsim/checker.hpp"
#include "fedsim/engine.hpp"
#include "fedsim/export.hpp"
#include "fedsim/rational.hpp"
#include "fedsim/runlog_io.hpp"
#include "fedsim/scenario.hpp"
#include "fedsim/trace.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct EngineOpts {
  int assembly_size = 3;
  fedsim::Tick term_length = 10;
  bool no_min_pop = false;
  std::uint32_t max_children = 0;
  bool sortition = false;
  std::uint64_t seed = 0;
  std::optional<fedsim::Tick> horizon;
};

struct EngineOptionHandles {
  CLI::Option* assembly_size = nullptr;
  CLI::Option* term = nullptr;
  CLI::Option* min_pop = nullptr;
};

EngineOptionHandles add_engine_options(CLI::App* cmd, EngineOpts& opts) {
  EngineOptionHandles h;
  h.assembly_size =
      cmd->add_option("-n,--assembly-size", opts.assembly_size, "Seats per community")
          ->check(CLI::PositiveNumber);
  h.term = cmd->add_option("-t,--term", opts.term_length, "Seat term length in ticks")
               ->check(CLI::PositiveNumber);
  h.min_pop = cmd->add_flag("--no-min-pop", opts.no_min_pop,
                            "Allow joins of non-leaf children with population <= "
                            "assembly size");
  cmd->add_option("--max-children", opts.max_children,
                  "Cap on children per community (0 = unlimited)");
  cmd->add_flag("--sortition", opts.sortition, "Seeded random person tie-break order");
  cmd->add_option("--seed", opts.seed, "Seed for --sortition");
  cmd->add_option("--horizon", opts.horizon,
                  "Integrate metrics up to this tick (default: 300 terms past the "
                  "last structural change)");
  return h;
}

fedsim::EngineConfig to_config(const EngineOpts& opts) {
  fedsim::EngineConfig cfg;
  cfg.assembly_size = opts.assembly_size;
  cfg.term_length = opts.term_length;
  cfg.child_min_pop_enforced = !opts.no_min_pop;
  cfg.max_children = opts.max_children;
  cfg.sortition = opts.sortition;
  cfg.seed = opts.seed;
  return cfg;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void print_findings(const std::vector<fedsim::Finding>& findings,
                    const std::vector<std::string>& ledger_diffs) {
  for (const auto& f : findings) {
    std::cerr << "finding @" << f.t << ": " << f.what << "\n";
  }
  for (const auto& d : ledger_diffs) {
    std::cerr << "ledger mismatch: " << d << "\n";
  }
}

int cmd_run(const std::string& trace_path, const std::string& gen_spec,
            EngineOpts opts, const EngineOptionHandles& handles,
            const std::string& out_dir) {
  fedsim::ParsedTrace trace;
  if (gen_spec.empty()) {
    trace = fedsim::parse_trace_file(trace_path);
  } else {
    std::ifstream in(gen_spec);
    if (!in) throw std::runtime_error("cannot open spec file: " + gen_spec);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    fedsim::ScenarioSpec spec = fedsim::parse_scenario_spec(text);
    if (opts.seed != 0) spec.seed = opts.seed;
    // The scenario was built for its own n/term/min-pop; keep those unless the
    // command line overrides them explicitly.
    if (handles.assembly_size->count() == 0) opts.assembly_size = spec.assembly_size;
    if (handles.term->count() == 0) opts.term_length = spec.term_length;
    if (handles.min_pop->count() == 0) opts.no_min_pop = !spec.child_min_pop_enforced;
    trace = fedsim::parse_trace_text(fedsim::generate_trace_text(spec));
  }
  fedsim::Engine engine = fedsim::run_trace(trace, to_config(opts), opts.horizon);
  const fedsim::RunLog& log = engine.log();

  const fedsim::OracleResult oracle = fedsim::oracle_recompute(log, /*with_series=*/true);
  const std::vector<std::string> diffs =
      fedsim::diff_ledgers(engine.ledger(), oracle, engine.ids());
  const fedsim::ConvergenceReport conv =
      fedsim::summarize_convergence(oracle, log, fedsim::Rational(1, 100));

  // Render everything before touching the filesystem.
  const std::string log_text = fedsim::run_log_to_string(log);
  const std::string state_text = fedsim::render_final_state(engine);
  const std::string metrics_text = fedsim::render_metrics_csv(oracle, log);
  const std::string fairness_text = fedsim::render_fairness_json(oracle, conv, log, diffs);

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "run_log.jsonl", log_text);
  write_file(dir / "final_state.json", state_text);
  write_file(dir / "metrics.csv", metrics_text);
  write_file(dir / "fairness.json", fairness_text);

  std::size_t events = 0;
  std::size_t actions = 0;
  for (const auto& entry : log.entries) {
    (entry.type == fedsim::RunLogEntry::Type::Event ? events : actions) += 1;
  }
  std::cout << "wrote " << out_dir << "/{run_log.jsonl,final_state.json,metrics.csv,"
            << "fairness.json}: " << events << " events, " << actions
            << " actions, last structural change at t=" << log.fst
            << ", horizon t=" << log.horizon << "\n";

  if (!oracle.findings.empty() || !diffs.empty()) {
    print_findings(oracle.findings, diffs);
    return kExitVerification;
  }
  return kExitOk;
}

int cmd_validate(const std::string& trace_path, const EngineOpts& opts) {
  const fedsim::ParsedTrace trace = fedsim::parse_trace_file(trace_path);
  // Dry run: apply every event (each one is validated against the live state)
  // but skip the long metrics tail unless a horizon was asked for explicitly.
  fedsim::Engine engine(trace.ids, to_config(opts));
  for (const fedsim::TimedEvent& e : trace.events) engine.apply_event(e);
  engine.finalize(opts.horizon.value_or(engine.now()));
  const fedsim::ValidityReport report = engine.validate_now();
  if (!report.violations.empty()) {
    for (const auto& v : report.violations) {
      std::cerr << "invalid final state: " << v.detail << "\n";
    }
    return kExitVerification;
  }
  std::cout << "OK: " << trace.events.size() << " events admissible; final state valid ("
            << engine.graph().alive_count() << " communities alive, last structural "
            << "change at t=" << engine.fst() << ")\n";
  return kExitOk;
}

int cmd_check(const std::string& log_path, bool convergence, const std::string& eep_tol,
              const std::string& efr_tol, const std::string& spread_slack,
              const std::string& report_path) {
  const fedsim::RunLog log = fedsim::parse_run_log_file(log_path);

  // Route 1: full replay by the independent oracle.
  const fedsim::OracleResult oracle = fedsim::oracle_recompute(log);

  // Route 2: re-run the engine on the logged events and demand the identical
  // action stream and identical integrals.
  fedsim::Engine engine(log.ids, [&] {
    fedsim::EngineConfig cfg;
    cfg.assembly_size = log.assembly_size;
    cfg.term_length = log.term_length;
    cfg.child_min_pop_enforced = log.child_min_pop_enforced;
    cfg.sortition = log.sortition;
    cfg.seed = log.seed;
    return cfg;
  }());
  std::vector<fedsim::Finding> replay_findings;
  try {
    for (const auto& entry : log.entries) {
      if (entry.type == fedsim::RunLogEntry::Type::Event) engine.apply_event(entry.event);
    }
    engine.finalize(log.horizon);
  } catch (const fedsim::TraceError& ex) {
    replay_findings.push_back({engine.now(), fedsim::Finding::Kind::Replay,
                               std::string("re-run rejected an event: ") + ex.what()});
  }

  std::vector<std::string> diffs;
  if (replay_findings.empty()) {
    fedsim::RunLog regenerated = engine.take_log();
    if (fedsim::run_log_to_string(regenerated) != fedsim::run_log_to_string(log)) {
      replay_findings.push_back({log.horizon, fedsim::Finding::Kind::Replay,
                                 "re-run produced a different action stream than the log"});
    }
    diffs = fedsim::diff_ledgers(engine.ledger(), oracle, log.ids);
  }

  bool failed = !oracle.findings.empty() || !replay_findings.empty() || !diffs.empty();
  print_findings(oracle.findings, diffs);
  print_findings(replay_findings, {});

  const fedsim::Rational slack = fedsim::parse_rational(spread_slack);
  const fedsim::ConvergenceReport conv = fedsim::summarize_convergence(oracle, log, slack);
  if (convergence && !failed) {
    const fedsim::Rational eep = fedsim::parse_rational(eep_tol);
    const fedsim::Rational efr = fedsim::parse_rational(efr_tol);
    if (conv.max_eep > eep) {
      std::cerr << "equal participation gap " << fedsim::decimal_string(conv.max_eep)
                << " exceeds tolerance " << eep_tol << "\n";
      failed = true;
    }
    if (conv.max_efr > efr) {
      std::cerr << "fair representation deficit " << fedsim::decimal_string(conv.max_efr)
                << " exceeds tolerance " << efr_tol << "\n";
      failed = true;
    }
    for (const std::uint32_t c : conv.spread_regressions) {
      std::cerr << "ratio spread of community " << log.ids.communities.name(c)
                << " grew between the two halves of the tail window\n";
      failed = true;
    }
  }
  if (!report_path.empty()) {
    write_file(report_path, fedsim::render_fairness_json(oracle, conv, log, diffs));
  }

  if (failed) return kExitVerification;
  std::cout << "check OK: " << log.entries.size() << " log entries verified"
            << (convergence ? " (convergence within tolerance)" : "") << "\n";
  return kExitOk;
}

struct ScenarioOverrides {
  int persons = 0;
  int communities = 0;
  int events = 0;
  int assembly_size = 0;
  fedsim::Tick term_length = 0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated community simulator: sortition assemblies over a "
               "dynamically evolving federation graph"};
  app.require_subcommand(1);

  // --- run ---
  std::string run_trace_path;
  std::string run_gen_spec;
  std::string run_out_dir = "out";
  EngineOpts run_opts;
  CLI::App* run = app.add_subcommand("run", "Run a trace and write artifacts");
  CLI::Option* run_trace_opt = run->add_option("trace", run_trace_path, "Trace file");
  run->add_option("--gen", run_gen_spec,
                  "Generate the trace from this scenario spec JSON instead of reading "
                  "a file (--seed, if nonzero, overrides the spec's seed)")
      ->excludes(run_trace_opt);
  run->add_option("-o,--out-dir", run_out_dir, "Artifact directory (created if missing)");
  const EngineOptionHandles run_handles = add_engine_options(run, run_opts);

  // --- validate ---
  std::string val_trace_path;
  EngineOpts val_opts;
  CLI::App* validate = app.add_subcommand("validate", "Check a trace for admissibility");
  validate->add_option("trace", val_trace_path, "Trace file")->required();
  add_engine_options(validate, val_opts);

  // --- check ---
  std::string check_log_path;
  bool check_convergence = false;
  std::string check_eep = "1/20";
  std::string check_efr = "1/20";
  std::string check_slack = "1/100";
  std::string check_report;
  CLI::App* check = app.add_subcommand("check", "Independently verify a run log");
  check->add_option("run_log", check_log_path, "run_log.jsonl produced by `run`")->required();
  check->add_flag("--convergence", check_convergence,
                  "Also enforce long-run fairness tolerances");
  check->add_option("--eep-tol", check_eep, "Max |avg seats - avg share| per person pair");
  check->add_option("--efr-tol", check_efr, "Max avg share shortfall per child pair");
  check->add_option("--spread-slack", check_slack,
                    "Allowed growth of the ratio spread between tail halves");
  check->add_option("--report", check_report, "Write the fairness report JSON here");

  // --- gen ---
  std::uint64_t gen_seed = 1;
  bool gen_corpus = false;
  std::string gen_spec_path;
  std::string gen_out_path;
  bool gen_print_spec = false;
  ScenarioOverrides gen_over;
  CLI::App* gen = app.add_subcommand("gen", "Generate a random (but admissible) trace");
  gen->add_option("--seed", gen_seed, "Scenario seed");
  gen->add_flag("--corpus", gen_corpus,
                "Derive sizes from the seed the way the verification corpus does");
  CLI::Option* spec_opt =
      gen->add_option("--spec", gen_spec_path, "Scenario spec JSON file")->excludes("--corpus");
  gen->add_option("-o,--out", gen_out_path, "Write the trace here instead of stdout");
  gen->add_flag("--print-spec", gen_print_spec, "Print the effective spec JSON to stderr");
  CLI::Option* over_persons = gen->add_option("--persons", gen_over.persons, "Person pool size");
  CLI::Option* over_comms =
      gen->add_option("--communities", gen_over.communities, "Community id pool size");
  CLI::Option* over_events = gen->add_option("--events", gen_over.events, "Target event count");
  CLI::Option* over_n =
      gen->add_option("-n,--assembly-size", gen_over.assembly_size, "Seats per community");
  CLI::Option* over_term = gen->add_option("-t,--term", gen_over.term_length, "Term length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed()) {
      if (run_trace_path.empty() && run_gen_spec.empty()) {
        std::cerr << "run: pass a trace file or --gen <spec.json>\n";
        return kExitUsage;
      }
      return cmd_run(run_trace_path, run_gen_spec, run_opts, run_handles, run_out_dir);
    }
    if (validate->parsed()) return cmd_validate(val_trace_path, val_opts);
    if (check->parsed()) {
      return cmd_check(check_log_path, check_convergence, check_eep, check_efr, check_slack,
                       check_report);
    }
    if (gen->parsed()) {
      fedsim::ScenarioSpec spec;
      if (spec_opt->count() > 0) {
        std::ifstream in(gen_spec_path);
        if (!in) throw std::runtime_error("cannot open spec file: " + gen_spec_path);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        spec = fedsim::parse_scenario_spec(text);
      } else if (gen_corpus) {
        spec = fedsim::corpus_spec_for_seed(gen_seed);
      } else {
        spec.seed = gen_seed;
      }
      if (over_persons->count() > 0) spec.persons = gen_over.persons;
      if (over_comms->count() > 0) spec.communities = gen_over.communities;
      if (over_events->count() > 0) spec.events = gen_over.events;
      if (over_n->count() > 0) spec.assembly_size = gen_over.assembly_size;
      if (over_term->count() > 0) spec.term_length = gen_over.term_length;
      if (gen_print_spec) std::cerr << fedsim::render_scenario_spec(spec);
      const std::string text = fedsim::generate_trace_text(spec);
      if (gen_out_path.empty()) {
        std::cout << text;
      } else {
        write_file(gen_out_path, text);
        std::cout << "wrote " << gen_out_path << "\n";
      }
      return kExitOk;
    }
    return kExitUsage;
  } catch (const fedsim::TraceError& ex) {
    std::cerr << "trace error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const fedsim::InternalError& ex) {
    std::cerr << "internal error: " << ex.what() << "\n";
    return kExitInternal;
  } catch (const std::runtime_error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& ex) {
    std::cerr << "internal error: " << ex.what() << "\n";
    return kExitInternal;
  }
}
