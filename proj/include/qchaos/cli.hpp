#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qchaos {

inline constexpr const char* kOutputDirEnv = "QCHAOS_OUTPUT_DIR";

/// Entry point of the qchaos tool. args[0] is the program name.
/// Returns 0 on success, 1 on a computation or config error, 2 on bad usage.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qchaos
