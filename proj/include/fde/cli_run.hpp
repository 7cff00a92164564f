#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fde {

/// Dispatches one command line: result JSON (or table) on `out`, structured
/// logs on `log`.  Returns 0 on pass verdicts, 1 on fail verdicts, 2 on
/// errors.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& log);

}  // namespace fde
