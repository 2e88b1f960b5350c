#pragma once

#include "thermoporo/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace thermoporo::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;

/// Runs one command line (args excludes the program name) and returns the exit
/// code: 0 success, 1 validation or physics failure, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Geometry generator presets: laminate (fluid fraction f), checkerboard,
/// channel (width w), cube (solid side a), random (seed). `fraction` is f, w or a.
[[nodiscard]] UnitCellGeometry make_preset(const std::string& preset, int dim, int n, double fraction,
                                           std::uint64_t seed);

}  // namespace thermoporo::cli
