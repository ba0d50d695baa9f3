#pragma once

// A small reader for the key = value configuration format used for metric
// and run files:
//   # comment
//   name = "desitter4"
//   dim = 4
//   signature = [1, -1, -1, -1]
//   [section]            (keys below become section.key)
// Values are quoted strings, numbers, booleans or flat arrays of those.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace reslab {

struct ConfigValue {
    std::variant<std::string, double, bool, std::vector<ConfigValue>> v;
    int line = 0;

    bool is_string() const { return std::holds_alternative<std::string>(v); }
    bool is_number() const { return std::holds_alternative<double>(v); }
    bool is_array() const { return std::holds_alternative<std::vector<ConfigValue>>(v); }

    const std::string& as_string(std::string_view key) const;
    double as_number(std::string_view key) const;
    int as_int(std::string_view key) const;
    bool as_bool(std::string_view key) const;
    std::vector<double> as_numbers(std::string_view key) const;
    std::vector<std::string> as_strings(std::string_view key) const;
};

using ConfigTable = std::map<std::string, ConfigValue, std::less<>>;

ConfigTable parse_config(std::string_view text);
std::string read_file(const std::string& path);

// Split on commas that are not nested inside parentheses or brackets.
std::vector<std::string> split_top_level(std::string_view s, char sep = ',');
std::string trim(std::string_view s);

}  // namespace reslab
