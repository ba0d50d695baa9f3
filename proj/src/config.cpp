#include "reslab/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "reslab/error.hpp"

namespace reslab {

namespace {

[[noreturn]] void bad(std::string_view key, int line, const std::string& what) {
    throw ConfigError("config key '" + std::string(key) + "' (line " + std::to_string(line) +
                      "): " + what);
}

ConfigValue parse_value(std::string_view s, int line) {
    const std::string t = trim(s);
    ConfigValue out;
    out.line = line;
    if (t.empty()) throw ConfigError("empty value on line " + std::to_string(line));
    if (t.front() == '"') {
        if (t.size() < 2 || t.back() != '"')
            throw ConfigError("unterminated string on line " + std::to_string(line));
        out.v = t.substr(1, t.size() - 2);
        return out;
    }
    if (t.front() == '[') {
        if (t.back() != ']') throw ConfigError("unterminated array on line " + std::to_string(line));
        std::vector<ConfigValue> items;
        const std::string inner = trim(std::string_view(t).substr(1, t.size() - 2));
        if (!inner.empty())
            for (const auto& part : split_top_level(inner)) items.push_back(parse_value(part, line));
        out.v = std::move(items);
        return out;
    }
    if (t == "true" || t == "false") {
        out.v = (t == "true");
        return out;
    }
    char* end = nullptr;
    const double d = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size())
        throw ConfigError("cannot parse value '" + t + "' on line " + std::to_string(line));
    out.v = d;
    return out;
}

}  // namespace

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_top_level(std::string_view s, char sep) {
    std::vector<std::string> parts;
    int depth = 0;
    bool quoted = false;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (c == '"') quoted = !quoted;
        if (quoted) continue;
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == sep && depth == 0) {
            parts.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    parts.push_back(trim(s.substr(start)));
    return parts;
}

ConfigTable parse_config(std::string_view text) {
    ConfigTable table;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        // strip comments outside strings
        bool quoted = false;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] == '"') quoted = !quoted;
            if (raw[i] == '#' && !quoted) {
                raw.resize(i);
                break;
            }
        }
        const std::string l = trim(raw);
        if (l.empty()) continue;
        if (l.front() == '[' && l.find('=') == std::string::npos) {
            if (l.back() != ']') throw ConfigError("bad section header on line " + std::to_string(line));
            section = trim(std::string_view(l).substr(1, l.size() - 2));
            continue;
        }
        const auto eq = l.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value on line " + std::to_string(line));
        std::string key = trim(std::string_view(l).substr(0, eq));
        if (key.empty()) throw ConfigError("empty key on line " + std::to_string(line));
        if (!section.empty()) key = section + "." + key;
        if (table.count(key)) throw ConfigError("duplicate key '" + key + "'");
        table[key] = parse_value(std::string_view(l).substr(eq + 1), line);
    }
    return table;
}

const std::string& ConfigValue::as_string(std::string_view key) const {
    if (!is_string()) bad(key, line, "expected a string");
    return std::get<std::string>(v);
}

double ConfigValue::as_number(std::string_view key) const {
    if (!is_number()) bad(key, line, "expected a number");
    return std::get<double>(v);
}

int ConfigValue::as_int(std::string_view key) const {
    const double d = as_number(key);
    if (d != std::round(d)) bad(key, line, "expected an integer");
    return static_cast<int>(d);
}

bool ConfigValue::as_bool(std::string_view key) const {
    if (!std::holds_alternative<bool>(v)) bad(key, line, "expected true or false");
    return std::get<bool>(v);
}

std::vector<double> ConfigValue::as_numbers(std::string_view key) const {
    if (!is_array()) bad(key, line, "expected an array");
    std::vector<double> out;
    for (const auto& item : std::get<std::vector<ConfigValue>>(v)) out.push_back(item.as_number(key));
    return out;
}

std::vector<std::string> ConfigValue::as_strings(std::string_view key) const {
    if (!is_array()) bad(key, line, "expected an array");
    std::vector<std::string> out;
    for (const auto& item : std::get<std::vector<ConfigValue>>(v)) out.push_back(item.as_string(key));
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace reslab
