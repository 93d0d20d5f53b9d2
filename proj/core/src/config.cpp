#include "mgq/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace mgq {

namespace {

std::string strip(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool parse_number(const std::string& tok, Real& out) {
    if (tok.empty()) return false;
    char* end = nullptr;
    out = std::strtod(tok.c_str(), &end);
    return end == tok.c_str() + tok.size();
}

ConfigValue parse_value(const std::string& raw, const std::string& path, int line) {
    ConfigValue v;
    v.line = line;
    const std::string tok = strip(raw);
    if (tok.empty()) throw ConfigError(path, line, "expected a value after '='");

    if (tok.front() == '"') {
        if (tok.size() < 2 || tok.back() != '"')
            throw ConfigError(path, line, "unterminated string");
        v.kind = ConfigValue::Kind::string;
        v.str = tok.substr(1, tok.size() - 2);
        return v;
    }
    if (tok == "true" || tok == "false") {
        v.kind = ConfigValue::Kind::boolean;
        v.boolean = tok == "true";
        return v;
    }
    if (tok.front() == '[') {
        if (tok.back() != ']') throw ConfigError(path, line, "unterminated array");
        v.kind = ConfigValue::Kind::number_array;
        std::string body = tok.substr(1, tok.size() - 2);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = strip(item);
            if (item.empty()) continue;
            Real num = 0.0;
            if (!parse_number(item, num))
                throw ConfigError(path, line, "array element '" + item + "' is not a number");
            v.array.push_back(num);
        }
        return v;
    }
    Real num = 0.0;
    if (!parse_number(tok, num))
        throw ConfigError(path, line, "cannot parse value '" + tok + "'");
    v.kind = ConfigValue::Kind::number;
    v.number = num;
    return v;
}

} // namespace

ConfigFile parse_config_text(const std::string& text, const std::string& path) {
    ConfigFile cfg;
    cfg.path = path;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        const std::string s = strip(raw);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError(path, line, "unterminated section header");
            section = strip(s.substr(1, s.size() - 2));
            if (section.empty()) throw ConfigError(path, line, "empty section name");
            cfg.sections[section];
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(path, line, "expected 'key = value'");
        const std::string key = strip(s.substr(0, eq));
        if (key.empty()) throw ConfigError(path, line, "empty key");
        if (section.empty()) throw ConfigError(path, line, "key outside any [section]");
        cfg.sections[section][key] = parse_value(s.substr(eq + 1), path, line);
    }
    return cfg;
}

ConfigFile parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, 0, "cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

const ConfigValue* ConfigFile::find(const std::string& section, const std::string& key) const {
    auto sit = sections.find(section);
    if (sit == sections.end()) return nullptr;
    auto kit = sit->second.find(key);
    return kit == sit->second.end() ? nullptr : &kit->second;
}

Real ConfigFile::number(const std::string& section, const std::string& key, Real fallback) const {
    const ConfigValue* v = find(section, key);
    if (!v) return fallback;
    if (v->kind != ConfigValue::Kind::number)
        throw ConfigError(path, v->line, "[" + section + "] " + key + " must be a number");
    return v->number;
}

Real ConfigFile::require_number(const std::string& section, const std::string& key) const {
    const ConfigValue* v = find(section, key);
    if (!v) throw ConfigError(path, 0, "missing required key [" + section + "] " + key);
    if (v->kind != ConfigValue::Kind::number)
        throw ConfigError(path, v->line, "[" + section + "] " + key + " must be a number");
    return v->number;
}

std::string ConfigFile::text(const std::string& section, const std::string& key,
                             const std::string& fallback) const {
    const ConfigValue* v = find(section, key);
    if (!v) return fallback;
    if (v->kind != ConfigValue::Kind::string)
        throw ConfigError(path, v->line, "[" + section + "] " + key + " must be a string");
    return v->str;
}

bool ConfigFile::flag(const std::string& section, const std::string& key, bool fallback) const {
    const ConfigValue* v = find(section, key);
    if (!v) return fallback;
    if (v->kind != ConfigValue::Kind::boolean)
        throw ConfigError(path, v->line, "[" + section + "] " + key + " must be true or false");
    return v->boolean;
}

std::vector<Real> ConfigFile::numbers(const std::string& section, const std::string& key) const {
    const ConfigValue* v = find(section, key);
    if (!v) return {};
    if (v->kind == ConfigValue::Kind::number) return {v->number};
    if (v->kind != ConfigValue::Kind::number_array)
        throw ConfigError(path, v->line, "[" + section + "] " + key + " must be a numeric array");
    return v->array;
}

} // namespace mgq
