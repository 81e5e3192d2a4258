#pragma once

namespace agentbom::cli {

inline constexpr int kOk = 0;
inline constexpr int kFindings = 1;
inline constexpr int kInputError = 2;

/// Runs one subcommand (build, audit, scenario, export, validate).
int run(int argc, char** argv);

}  // namespace agentbom::cli
