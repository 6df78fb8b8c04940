#pragma once

#include "fedsim/runlog.hpp"

#include <iosfwd>
#include <string>

namespace fedsim {

// JSONL serialization of a run log: one header line (configuration + interned
// id tables), one line per event/action in order, one footer line (fst,
// horizon). Parsing rebuilds an equivalent RunLog; write(parse(x)) == x.

void write_run_log(const RunLog& log, std::ostream& out);
std::string run_log_to_string(const RunLog& log);

RunLog parse_run_log(std::istream& in);              // throws std::runtime_error
RunLog parse_run_log_file(const std::string& path);  // throws std::runtime_error

}  // namespace fedsim
