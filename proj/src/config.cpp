#include "thermoporo/config.hpp"

#include "thermoporo/error.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

namespace thermoporo {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text, std::string source) {
    KeyValueConfig cfg;
    cfg.source_ = std::move(source);
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        std::string_view line = text.substr(start, end - start);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto stripped = trim(line);
        if (!stripped.empty()) {
            const auto eq = stripped.find('=');
            if (eq == std::string::npos)
                throw ConfigError(cfg.source_ + ":" + std::to_string(line_no) + ": expected 'key = value'");
            auto key = trim(std::string_view(stripped).substr(0, eq));
            auto value = trim(std::string_view(stripped).substr(eq + 1));
            if (key.empty()) throw ConfigError(cfg.source_ + ":" + std::to_string(line_no) + ": empty key");
            if (cfg.values_.count(key))
                throw ConfigError(cfg.source_ + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
            cfg.values_.emplace(std::move(key), std::move(value));
        }
        if (end == text.size()) break;
        start = end + 1;
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse(text, path.string());
}

bool KeyValueConfig::has(const std::string& key) const { return values_.count(key) != 0; }

void KeyValueConfig::set(const std::string& key, std::string value) { values_[key] = std::move(value); }

std::string KeyValueConfig::get_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError(source_ + ": missing required key '" + key + "'");
    consumed_.insert(key);
    return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

double KeyValueConfig::get_double(const std::string& key) const {
    const auto text = get_string(key);
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || text.empty())
        throw ConfigError(source_ + ": key '" + key + "' expects a number, got '" + text + "'");
    return v;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

int KeyValueConfig::get_int(const std::string& key) const {
    const auto text = get_string(key);
    int v = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || text.empty())
        throw ConfigError(source_ + ": key '" + key + "' expects an integer, got '" + text + "'");
    return v;
}

int KeyValueConfig::get_int(const std::string& key, int fallback) const { return has(key) ? get_int(key) : fallback; }

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto text = get_string(key);
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError(source_ + ": key '" + key + "' expects a boolean, got '" + text + "'");
}

void KeyValueConfig::require_all_consumed() const {
    std::ostringstream unknown;
    bool any = false;
    for (const auto& [key, value] : values_) {
        if (consumed_.count(key)) continue;
        unknown << (any ? ", " : "") << key;
        any = true;
    }
    if (any) throw ConfigError(source_ + ": unknown key(s): " + unknown.str());
}

}  // namespace thermoporo
