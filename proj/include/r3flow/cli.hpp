#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace r3flow::cli {

inline constexpr const char* kSchemaVersion = "r3flow/1";

enum ExitCode : int {
    kOk = 0,
    kInputError = 2,
    kParseError = 3,
    kIntegrationError = 4,
    kClassMismatch = 5,
};

/// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace r3flow::cli
