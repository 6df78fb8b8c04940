#pragma once

#include "fedsim/checker.hpp"
#include "fedsim/engine.hpp"
#include "fedsim/runlog.hpp"

#include <string>
#include <vector>

namespace fedsim {

// Deterministic artifact rendering. All numbers are exact rationals rendered as
// round-half-even 6-digit decimals (with num/den alongside in JSON), so two runs
// of the same trace produce byte-identical files.

// Full graph + seats at the horizon.
std::string render_final_state(const Engine& engine);

// CSV: t,community,entity,kind,avg_seats,avg_share,ratio — one row per attached
// pair per sample time, averages over [0, t). Requires an oracle run with the
// series recorded.
std::string render_metrics_csv(const OracleResult& oracle, const RunLog& log);

// Verification verdicts + long-run fairness summary.
std::string render_fairness_json(const OracleResult& oracle, const ConvergenceReport& conv,
                                 const RunLog& log, const std::vector<std::string>& ledger_diffs);

}  // namespace fedsim
