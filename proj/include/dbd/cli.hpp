#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dbd {

/// Entry point behind the `dbdurl` binary; also used directly by tests.
/// Exit codes: 0 success, 1 evaluation below --min-accuracy, 2 usage or
/// input error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dbd
