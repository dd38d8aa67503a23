#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace uvgb::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 2,
    kDataError = 3,
    kBackendError = 4,
};

/// Entry point shared by the executable and the tests. args[0] is the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace uvgb::cli
