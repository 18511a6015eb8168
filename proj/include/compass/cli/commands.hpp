#pragma once

#include <iosfwd>

namespace compass {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitProvider = 3;

/// Entry point behind the `compass` binary:
///   build <manifest>      fit both maps and write the atlas
///   validate [atlas]      check every atlas invariant
///   replot-sim [atlas]    push N mock frames through the replot pipeline
///   serve                 run the exploration service
///   mock-dataset <dir>    write a seeded mock dataset and manifest
/// Global flags: --json, --seed, --data-dir.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace compass
