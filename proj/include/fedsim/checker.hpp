#pragma once

#include "fedsim/ids.hpp"
#include "fedsim/ledger.hpp"
#include "fedsim/rational.hpp"
#include "fedsim/runlog.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace fedsim {

// Independent verification of a run log. The oracle rebuilds the whole run from
// the log alone — its own state maps, its own population traversal, its own
// weight and integral arithmetic — and checks every state that persists for a
// positive duration (instantaneous intermediate states inside a maintenance
// burst are exempt, as is everything they imply). It never reads engine
// internals, so agreement with the engine's incrementally maintained ledger is
// evidence rather than tautology.

struct Finding {
  // What family of guarantee the finding breaks. Replay covers both malformed
  // logs and engine steps the transition rules would not allow.
  enum class Kind : std::uint8_t { Replay, Validity, Conservation, Quota };
  Tick t = 0;
  Kind kind = Kind::Replay;
  std::string what;
};

struct PairIntegrals {
  Rational seat;
  Rational share;
};

struct OracleResult {
  // Replay inconsistencies, validity violations, seat-quota shortfalls, and
  // share-conservation failures. Empty means the log describes a lawful run.
  std::vector<Finding> findings;

  std::map<PairKey, PairIntegrals> full;  // integrals over [0, horizon)
  std::map<PairKey, PairIntegrals> tail;  // integrals over [fst, horizon)

  // Sample schedule: fst + k * term_length for k = 0.. while within the horizon.
  std::vector<Tick> sample_times;

  // Per community alive at the horizon: max_p |ratio(p,f) - 1| at each sample.
  std::map<std::uint32_t, std::vector<Rational>> spread;

  // Per sample: integral snapshot of every attached pair (recorded only when
  // oracle_recompute is asked for the series; used for the metrics table).
  std::vector<std::map<PairKey, PairIntegrals>> series;

  // Final state at the horizon (raw id indices, vectors sorted).
  std::map<std::uint32_t, std::size_t> final_pop;
  std::map<std::uint32_t, std::vector<std::uint32_t>> final_children;
  std::map<std::uint32_t, std::vector<std::uint32_t>> final_assembly;
  std::map<std::uint32_t, std::vector<std::uint32_t>> final_leaf_members;
};

OracleResult oracle_recompute(const RunLog& log, bool with_series = false);

// Exact equality between the engine's integrals and the oracle's recomputation.
// Returns human-readable mismatches; empty means byte-for-byte agreement.
std::vector<std::string> diff_ledgers(const MetricsLedger& ledger, const OracleResult& oracle,
                                      const IdSpace& ids);

struct ConvergenceItem {
  PairKey key;
  Rational value;
};

// Long-run fairness over the tail window [fst, horizon), restricted to
// communities whose population at the horizon is at least the assembly size
// (below that everyone is permanently seated and the averages are trivially
// on target). Gaps and deficits compare tail-average seats against
// tail-average share in absolute seat units: rotation hands out seats in
// whole-term quanta, so the absolute deviation shrinks like term/window no
// matter how large the population is, while relative deviations do not.
struct ConvergenceReport {
  std::vector<ConvergenceItem> eep;  // person pairs: |avg seats - avg share|
  std::vector<ConvergenceItem> efr;  // child pairs: max(0, avg share - avg seats)
  Rational max_eep{0};
  Rational max_efr{0};
  // Per community: max spread over the first and the second half of the samples.
  std::map<std::uint32_t, std::pair<Rational, Rational>> spread_halves;
  std::vector<std::uint32_t> spread_regressions;  // second half max > first half max + slack
};

ConvergenceReport summarize_convergence(const OracleResult& oracle, const RunLog& log,
                                        const Rational& spread_slack);

}  // namespace fedsim
