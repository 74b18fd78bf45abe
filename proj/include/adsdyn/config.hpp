#pragma once
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "atlas.hpp"
#include "errors.hpp"

namespace adsdyn {

struct parse_error : usage_error {
    int line;
    parse_error(const std::string& what, int ln) : usage_error(what), line(ln) {}
};

struct Config {
    std::map<std::string, std::string> values;
    std::vector<std::string> warnings;

    bool has(const std::string& k) const { return values.count(k) != 0; }
    std::string get(const std::string& k, const std::string& dflt = "") const {
        auto it = values.find(k);
        return it == values.end() ? dflt : it->second;
    }
    double get_double(const std::string& k, double dflt) const;
    int get_int(const std::string& k, int dflt) const;
};

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (trim(s.substr(pos)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw usage_error("cannot parse number for " + what + ": '" + s + "'");
}

inline std::vector<double> parse_list(const std::string& s, size_t count, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), what));
    if (count && out.size() != count)
        throw usage_error(what + ": expected " + std::to_string(count) + " comma-separated values");
    return out;
}

inline BoundaryTriple parse_alpha(const std::string& s) {
    auto v = parse_list(s, 3, "alpha");
    return {v[0], v[1], v[2]};
}

inline double Config::get_double(const std::string& k, double dflt) const {
    return has(k) ? parse_double(get(k), k) : dflt;
}
inline int Config::get_int(const std::string& k, int dflt) const {
    if (!has(k)) return dflt;
    double v = parse_double(get(k), k);
    if (v != (int)v) throw usage_error(k + " must be an integer");
    return (int)v;
}

// key=value lines, '#' starts a comment, duplicate keys: last one wins
inline Config parse_config(std::istream& in) {
    Config c;
    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        auto h = line.find('#');
        if (h != std::string::npos) line = line.substr(0, h);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw parse_error("config line " + std::to_string(ln) + ": expected key=value", ln);
        std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
        if (k.empty()) throw parse_error("config line " + std::to_string(ln) + ": empty key", ln);
        if (c.has(k)) c.warnings.push_back("config line " + std::to_string(ln) + ": duplicate key '" + k + "', last value wins");
        c.values[k] = v;
    }
    return c;
}

inline Config load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw usage_error("cannot open config file " + path);
    return parse_config(f);
}

}  // namespace adsdyn
