#pragma once

#include "thermoporo/macro_solver.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace thermoporo {

/// First line of every medium file.
inline constexpr std::string_view medium_format_tag = "thermoporo-medium v1";

/// Human-readable "key = value" rendering of an effective medium. Tensors are
/// written row by row ("Btheta.row0 = a b c"), all numbers with 17 significant
/// digits, keys in a fixed order, so identical media produce identical bytes.
[[nodiscard]] std::string format_medium(const EffectiveMedium& m);

/// Inverse of format_medium. Throws FormatError when the format tag is missing
/// or wrong, and ConfigError on malformed values, rows of the wrong length,
/// missing keys and unknown keys.
[[nodiscard]] EffectiveMedium parse_medium(std::string_view text, const std::string& source = "<medium>");

void save_medium(const EffectiveMedium& m, const std::filesystem::path& path);
[[nodiscard]] EffectiveMedium load_medium(const std::filesystem::path& path);

}  // namespace thermoporo
