#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace thermoporo {

/// Flat "key = value" configuration. Lines starting with '#' and blank lines are
/// ignored; trailing "# ..." comments are stripped. Every lookup marks the key as
/// consumed so that require_all_consumed() can reject typos.
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    [[nodiscard]] static KeyValueConfig parse(std::string_view text, std::string source = "<string>");
    [[nodiscard]] static KeyValueConfig load(const std::filesystem::path& path);

    [[nodiscard]] bool has(const std::string& key) const;
    void set(const std::string& key, std::string value);

    [[nodiscard]] std::string get_string(const std::string& key) const;
    [[nodiscard]] std::string get_string(const std::string& key, const std::string& fallback) const;
    [[nodiscard]] double get_double(const std::string& key) const;
    [[nodiscard]] double get_double(const std::string& key, double fallback) const;
    [[nodiscard]] int get_int(const std::string& key) const;
    [[nodiscard]] int get_int(const std::string& key, int fallback) const;
    [[nodiscard]] bool get_bool(const std::string& key, bool fallback) const;

    /// Throws ConfigError naming every key never looked up.
    void require_all_consumed() const;

    [[nodiscard]] const std::string& source() const noexcept { return source_; }
    [[nodiscard]] const std::map<std::string, std::string>& entries() const noexcept { return values_; }

private:
    std::string source_ = "<string>";
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> consumed_;
};

}  // namespace thermoporo
