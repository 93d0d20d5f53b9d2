#pragma once

#include <map>

#include "mgq/common.hpp"

namespace mgq {

/// Value in a flat TOML-style config: number, string, boolean, or a
/// homogeneous numeric array.
struct ConfigValue {
    enum class Kind { number, string, boolean, number_array };
    Kind kind = Kind::number;
    Real number = 0.0;
    std::string str;
    bool boolean = false;
    std::vector<Real> array;
    int line = 0;
};

/// Parsed file: section -> key -> value. Single-level sections only.
struct ConfigFile {
    std::string path;
    std::map<std::string, std::map<std::string, ConfigValue>> sections;

    bool has(const std::string& section, const std::string& key) const;
    const ConfigValue* find(const std::string& section, const std::string& key) const;

    Real number(const std::string& section, const std::string& key, Real fallback) const;
    Real require_number(const std::string& section, const std::string& key) const;
    std::string text(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
    bool flag(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<Real> numbers(const std::string& section, const std::string& key) const;
};

/// Parses `key = value` lines under `[section]` headers; `#` starts comments.
/// Throws ConfigError with a file:line anchor on malformed input.
ConfigFile parse_config_file(const std::string& path);
ConfigFile parse_config_text(const std::string& text, const std::string& path = "<config>");

} // namespace mgq
