#pragma once

// Keyed text configuration: flat `[section]` / `key = value` files with '#'
// or ';' comments. Every lookup records where the winning value came from
// (flag > file > default) so the run report can log each one.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace aircal {

enum class ConfigSource { Default, File, Flag };

const char* to_string(ConfigSource source);

class KeyedConfig {
public:
    KeyedConfig() = default;

    static KeyedConfig parse(std::istream& in, const std::string& origin = "<stream>");
    static KeyedConfig parse_file(const std::filesystem::path& path);

    // Command-line override layer; wins over file values.
    void set_override(const std::string& section, const std::string& key, std::string value);

    bool has(const std::string& section, const std::string& key) const;

    // Typed getters with defaults. Conversion failures throw ConfigError.
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    std::uint64_t get_u64(const std::string& section, const std::string& key,
                          std::uint64_t fallback) const;
    std::vector<double> get_double_list(const std::string& section, const std::string& key,
                                        const std::vector<double>& fallback) const;

    // Getters without defaults; throw ConfigError when the key is missing.
    std::string require_string(const std::string& section, const std::string& key) const;
    double require_double(const std::string& section, const std::string& key) const;

    // Every key looked up so far with its winning value and provenance,
    // sorted by key. Mutable bookkeeping only; lookups stay const.
    struct Provenance {
        std::string value;
        ConfigSource source;
    };
    const std::map<std::string, Provenance>& provenance() const { return provenance_; }

private:
    struct Entry {
        std::string value;
        ConfigSource source;
    };
    std::optional<Entry> lookup(const std::string& section, const std::string& key) const;
    void record(const std::string& section, const std::string& key, const std::string& value,
                ConfigSource source) const;

    std::map<std::string, std::string> file_values_;
    std::map<std::string, std::string> flag_values_;
    mutable std::map<std::string, Provenance> provenance_;
};

} // namespace aircal
