#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <string>
#include <variant>

#include "stylecast/error.hpp"

namespace stylecast::toml {

// Minimal TOML subset: [dotted.sections], key = value with basic strings,
// integers, floats, booleans, and # comments. Keys flatten to dotted paths.
// Arrays, inline tables, dates, and multiline strings are out of scope.

using Value = std::variant<std::string, std::int64_t, double, bool>;

struct Table {
    std::map<std::string, Value> entries;

    bool has(const std::string& key) const { return entries.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& fallback = "") const {
        auto it = entries.find(key);
        if (it == entries.end()) return fallback;
        if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
        throw Error("config key is not a string: " + key);
    }

    std::int64_t get_int(const std::string& key, std::int64_t fallback = 0) const {
        auto it = entries.find(key);
        if (it == entries.end()) return fallback;
        if (const auto* v = std::get_if<std::int64_t>(&it->second)) return *v;
        throw Error("config key is not an integer: " + key);
    }

    double get_double(const std::string& key, double fallback = 0.0) const {
        auto it = entries.find(key);
        if (it == entries.end()) return fallback;
        if (const auto* v = std::get_if<double>(&it->second)) return *v;
        if (const auto* i = std::get_if<std::int64_t>(&it->second))
            return static_cast<double>(*i);
        throw Error("config key is not a number: " + key);
    }

    bool get_bool(const std::string& key, bool fallback = false) const {
        auto it = entries.find(key);
        if (it == entries.end()) return fallback;
        if (const auto* v = std::get_if<bool>(&it->second)) return *v;
        throw Error("config key is not a boolean: " + key);
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

[[noreturn]] inline void fail(std::size_t line, const std::string& what) {
    throw Error("config parse error at line " + std::to_string(line) + ": " + what);
}

inline bool valid_key(const std::string& key) {
    if (key.empty()) return false;
    for (char c : key)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.')
            return false;
    return true;
}

inline std::string parse_basic_string(const std::string& raw, std::size_t line) {
    if (raw.size() < 2 || raw.back() != '"') fail(line, "unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
        char c = raw[i];
        if (c != '\\') {
            out += c;
            continue;
        }
        if (i + 2 >= raw.size()) fail(line, "dangling escape");
        char e = raw[++i];
        switch (e) {
            case '"': out += '"'; break;
            case '\\': out += '\\'; break;
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            case 'r': out += '\r'; break;
            default: fail(line, std::string("unsupported escape: \\") + e);
        }
    }
    return out;
}

inline Value parse_value(const std::string& raw, std::size_t line) {
    if (raw.empty()) fail(line, "missing value");
    if (raw.front() == '"') return parse_basic_string(raw, line);
    if (raw == "true") return true;
    if (raw == "false") return false;

    bool integral = true;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        char c = raw[i];
        if (i == 0 && (c == '+' || c == '-')) continue;
        if (!std::isdigit(static_cast<unsigned char>(c))) integral = false;
    }
    std::size_t consumed = 0;
    try {
        if (integral) return static_cast<std::int64_t>(std::stoll(raw, &consumed));
        double d = std::stod(raw, &consumed);
        if (consumed == raw.size()) return d;
    } catch (const std::exception&) {
        fail(line, "unparsable value: " + raw);
    }
    if (consumed != raw.size()) fail(line, "unparsable value: " + raw);
    return 0.0;  // unreachable; stod path returned or failed above
}

// Strips a # comment, honoring quotes.
inline std::string strip_comment(const std::string& s) {
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '"' && (i == 0 || s[i - 1] != '\\')) in_string = !in_string;
        if (c == '#' && !in_string) return s.substr(0, i);
    }
    return s;
}

}  // namespace detail

inline Table parse(const std::string& text) {
    Table table;
    std::string prefix;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? nl : nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        line = detail::trim(detail::strip_comment(line));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') detail::fail(line_no, "unterminated section header");
            std::string name = detail::trim(line.substr(1, line.size() - 2));
            if (!detail::valid_key(name)) detail::fail(line_no, "invalid section name: " + name);
            prefix = name + ".";
            continue;
        }

        std::size_t eq = line.find('=');
        if (eq == std::string::npos) detail::fail(line_no, "expected key = value");
        std::string key = detail::trim(line.substr(0, eq));
        if (!detail::valid_key(key)) detail::fail(line_no, "invalid key: " + key);
        std::string value = detail::trim(line.substr(eq + 1));
        std::string full = prefix + key;
        if (table.entries.count(full)) detail::fail(line_no, "duplicate key: " + full);
        table.entries.emplace(full, detail::parse_value(value, line_no));
    }
    return table;
}

}  // namespace stylecast::toml
