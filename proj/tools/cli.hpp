#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ballcone::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kReportSchema = "ballcone.report";
inline constexpr int kReportSchemaVersion = 1;

/// Runs one command line (argv[0] is the program name). Reports and artifacts
/// go to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ballcone::cli
