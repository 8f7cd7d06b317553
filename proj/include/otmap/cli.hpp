#pragma once

#include <string>
#include <vector>

namespace otmap::cli {

/// Entry point shared by the binary and the tests.  `args` excludes the
/// program name.  Returns 0 on success, 1 when a verification check fails,
/// 2 on usage or configuration errors.
int run(const std::vector<std::string>& args);

}  // namespace otmap::cli
