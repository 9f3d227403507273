#include "aircal/run_config.hpp"

#include <fstream>
#include <istream>

#include "aircal/csv.hpp"
#include "aircal/errors.hpp"

namespace aircal {

const char* to_string(ConfigSource source) {
    switch (source) {
        case ConfigSource::Default: return "default";
        case ConfigSource::File: return "file";
        case ConfigSource::Flag: return "flag";
    }
    return "?";
}

namespace {

std::string join_key(const std::string& section, const std::string& key) {
    return section + "." + key;
}

} // namespace

KeyedConfig KeyedConfig::parse(std::istream& in, const std::string& origin) {
    KeyedConfig cfg;
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = csv::trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3) {
                throw Error(ErrorCategory::ConfigError,
                            origin + ":" + std::to_string(line_no) + ": malformed section header");
            }
            section = csv::trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCategory::ConfigError,
                        origin + ":" + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = csv::trim(t.substr(0, eq));
        const std::string value = csv::trim(t.substr(eq + 1));
        if (key.empty()) {
            throw Error(ErrorCategory::ConfigError,
                        origin + ":" + std::to_string(line_no) + ": empty key");
        }
        cfg.file_values_[join_key(section, key)] = value;
    }
    return cfg;
}

KeyedConfig KeyedConfig::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCategory::ConfigError, "cannot open config file " + path.string());
    }
    return parse(in, path.string());
}

void KeyedConfig::set_override(const std::string& section, const std::string& key,
                               std::string value) {
    flag_values_[join_key(section, key)] = std::move(value);
}

std::optional<KeyedConfig::Entry> KeyedConfig::lookup(const std::string& section,
                                                      const std::string& key) const {
    const std::string full = join_key(section, key);
    if (auto it = flag_values_.find(full); it != flag_values_.end()) {
        return Entry{it->second, ConfigSource::Flag};
    }
    if (auto it = file_values_.find(full); it != file_values_.end()) {
        return Entry{it->second, ConfigSource::File};
    }
    return std::nullopt;
}

void KeyedConfig::record(const std::string& section, const std::string& key,
                         const std::string& value, ConfigSource source) const {
    provenance_[join_key(section, key)] = Provenance{value, source};
}

bool KeyedConfig::has(const std::string& section, const std::string& key) const {
    return lookup(section, key).has_value();
}

std::string KeyedConfig::get_string(const std::string& section, const std::string& key,
                                    const std::string& fallback) const {
    if (auto e = lookup(section, key)) {
        record(section, key, e->value, e->source);
        return e->value;
    }
    record(section, key, fallback, ConfigSource::Default);
    return fallback;
}

double KeyedConfig::get_double(const std::string& section, const std::string& key,
                               double fallback) const {
    if (auto e = lookup(section, key)) {
        double v;
        if (!csv::parse_double(e->value, v)) {
            throw Error(ErrorCategory::ConfigError,
                        join_key(section, key) + ": cannot parse number '" + e->value + "'");
        }
        record(section, key, e->value, e->source);
        return v;
    }
    record(section, key, csv::format_double(fallback), ConfigSource::Default);
    return fallback;
}

bool KeyedConfig::get_bool(const std::string& section, const std::string& key,
                           bool fallback) const {
    if (auto e = lookup(section, key)) {
        record(section, key, e->value, e->source);
        if (e->value == "true" || e->value == "1" || e->value == "yes" || e->value == "on") {
            return true;
        }
        if (e->value == "false" || e->value == "0" || e->value == "no" || e->value == "off") {
            return false;
        }
        throw Error(ErrorCategory::ConfigError,
                    join_key(section, key) + ": cannot parse boolean '" + e->value + "'");
    }
    record(section, key, fallback ? "true" : "false", ConfigSource::Default);
    return fallback;
}

std::uint64_t KeyedConfig::get_u64(const std::string& section, const std::string& key,
                                   std::uint64_t fallback) const {
    if (auto e = lookup(section, key)) {
        record(section, key, e->value, e->source);
        try {
            std::size_t pos = 0;
            const std::uint64_t v = std::stoull(e->value, &pos);
            if (pos != e->value.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw Error(ErrorCategory::ConfigError,
                        join_key(section, key) + ": cannot parse integer '" + e->value + "'");
        }
    }
    record(section, key, std::to_string(fallback), ConfigSource::Default);
    return fallback;
}

std::vector<double> KeyedConfig::get_double_list(const std::string& section, const std::string& key,
                                                 const std::vector<double>& fallback) const {
    if (auto e = lookup(section, key)) {
        record(section, key, e->value, e->source);
        std::vector<double> out;
        for (const std::string& token : csv::split_line(e->value)) {
            double v;
            if (!csv::parse_double(token, v)) {
                throw Error(ErrorCategory::ConfigError,
                            join_key(section, key) + ": cannot parse list item '" + token + "'");
            }
            out.push_back(v);
        }
        return out;
    }
    std::string rendered;
    for (std::size_t i = 0; i < fallback.size(); ++i) {
        if (i) rendered += ",";
        rendered += csv::format_double(fallback[i]);
    }
    record(section, key, rendered, ConfigSource::Default);
    return fallback;
}

std::string KeyedConfig::require_string(const std::string& section, const std::string& key) const {
    if (auto e = lookup(section, key)) {
        record(section, key, e->value, e->source);
        return e->value;
    }
    throw Error(ErrorCategory::ConfigError, "missing required config key " + join_key(section, key));
}

double KeyedConfig::require_double(const std::string& section, const std::string& key) const {
    const std::string raw = require_string(section, key);
    double v;
    if (!csv::parse_double(raw, v)) {
        throw Error(ErrorCategory::ConfigError,
                    join_key(section, key) + ": cannot parse number '" + raw + "'");
    }
    return v;
}

} // namespace aircal
