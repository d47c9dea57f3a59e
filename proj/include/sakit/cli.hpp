#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sakit {

/// Exit codes: 0 positive answer or success, 1 negative answer,
/// 2 usage or parse error, 3 budget exceeded.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sakit
