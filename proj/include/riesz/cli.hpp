#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace riesz {

/// Command-line front end. Without --out the report goes to `out`;
/// diagnostics go to `err`. Returns the process exit code.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace riesz
