#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qcorr::cli {

enum ExitCode : int {
    kOk = 0,
    kVerificationFailed = 1,
    kInputError = 2,
    kInvariantError = 3,
    kIoError = 4,
};

/// Runs the command line `args` (without the program name), writing the
/// document to `out` and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Radians from "0.5", "pi", "pi/6", "3pi/8" or "3*pi/8".
double parse_angle(const std::string& text);

/// Fixed-point text with 9 decimals.
std::string fixed9(double v);

} // namespace qcorr::cli
