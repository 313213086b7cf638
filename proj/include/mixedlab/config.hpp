#pragma once

// Plain-text key-value experiment configuration. Lines look like
// `key = value` or `key value`; '#' starts a comment. Command-line flags
// override file values (the CLI applies files first, then flags).

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "grid.hpp"

namespace mixedlab {

using ConfigMap = std::map<std::string, std::string>;

inline ConfigMap load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw config_error("cannot open config file " + path);
    ConfigMap out;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string key, eq, value;
        std::istringstream ls(line);
        if (!(ls >> key)) continue;
        if (!(ls >> eq)) throw config_error("config line " + std::to_string(lineno) + ": missing value");
        if (eq == "=") {
            if (!(ls >> value))
                throw config_error("config line " + std::to_string(lineno) + ": missing value");
        } else {
            value = eq;
        }
        std::string rest;
        if (ls >> rest) throw config_error("config line " + std::to_string(lineno) + ": trailing tokens");
        out[key] = value;
    }
    return out;
}

inline void write_manifest(std::ostream& os, const ConfigMap& resolved) {
    for (const auto& [k, v] : resolved) os << k << " = " << v << '\n';
}

} // namespace mixedlab
