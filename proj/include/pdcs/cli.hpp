#pragma once

#include <iosfwd>

namespace pdcs {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;      ///< I/O and other runtime failures
inline constexpr int kExitValidation = 2;   ///< bad flags or invalid inputs
inline constexpr int kExitBudget = 3;       ///< rotor budget exhausted under --strict

/// Entry point of the pdcs command-line tool. Subcommands: decompose, circuit, prepare, simulate,
/// compare-trotter, subsets.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pdcs
