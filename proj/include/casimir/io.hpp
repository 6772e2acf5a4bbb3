// Material configuration files, relaxation-parameter tables and number formatting.
//
// Material file: one `key = value` per line, `#` starts a comment.
//   name            = Al
//   omega_p_ev      = 11.5        (or omega_p_rad_s)
//   gamma_ref_ev    = 0.05        (or gamma_ref_rad_s)
//   t_ref_k         = 300
//   debye_t_k       = 428
//   gamma_table_path = al_gamma.csv  (optional, relative to the material file)
//
// Gamma table: CSV with header `T_K,gamma_rad_s`.
#pragma once

#include "casimir/dielectric.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace casimir {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& text, const std::string& where)
{
    const auto t = trim(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw ConfigError(where + ": '" + t + "' is not a number");
    }
    if (used != t.size())
        throw ConfigError(where + ": trailing characters in '" + t + "'");
    return v;
}

} // namespace detail

inline std::vector<GammaSample> parse_gamma_csv(std::istream& in, const std::string& source = "gamma table")
{
    std::string line;
    int lineno = 0;
    bool header = false;
    std::vector<GammaSample> out;
    while (std::getline(in, line)) {
        ++lineno;
        line = detail::trim(line);
        if (line.empty() || line[0] == '#')
            continue;
        if (!header) {
            if (line != "T_K,gamma_rad_s")
                throw ConfigError(source + ": expected header 'T_K,gamma_rad_s'");
            header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ConfigError(source + ":" + std::to_string(lineno) + ": expected two columns");
        const std::string where = source + ":" + std::to_string(lineno);
        out.push_back({detail::parse_number(line.substr(0, comma), where),
                       detail::parse_number(line.substr(comma + 1), where)});
    }
    if (!header)
        throw ConfigError(source + ": empty gamma table");
    return out;
}

inline GammaTable load_gamma_table(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open gamma table " + path.string());
    try {
        return GammaTable(parse_gamma_csv(in, path.string()));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

/// Parses a material description; relative table paths resolve against base_dir.
inline Material parse_material(std::istream& in, const std::filesystem::path& base_dir = ".",
                               const std::string& source = "material")
{
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key = value");
        const auto key = detail::trim(line.substr(0, eq));
        if (kv.count(key))
            throw ConfigError(source + ": duplicate key '" + key + "'");
        kv[key] = detail::trim(line.substr(eq + 1));
    }

    static const char* known[] = {"name",      "omega_p_ev", "omega_p_rad_s", "gamma_ref_ev",
                                  "gamma_ref_rad_s", "t_ref_k", "debye_t_k",   "gamma_table_path"};
    for (const auto& [k, v] : kv) {
        bool ok = false;
        for (const char* name : known)
            ok = ok || k == name;
        if (!ok)
            throw ConfigError(source + ": unknown key '" + k + "'");
    }
    auto number = [&](const std::string& key) { return detail::parse_number(kv.at(key), source + ": " + key); };
    auto one_of = [&](const std::string& ev_key, const std::string& si_key, bool required) {
        const bool has_ev = kv.count(ev_key) > 0, has_si = kv.count(si_key) > 0;
        if (has_ev && has_si)
            throw ConfigError(source + ": give only one of " + ev_key + " and " + si_key);
        if (has_ev)
            return number(ev_key) * ev_to_rad_s;
        if (has_si)
            return number(si_key);
        if (required)
            throw ConfigError(source + ": missing " + ev_key + " (or " + si_key + ")");
        return 0.0;
    };

    Material m;
    if (kv.count("name"))
        m.name = kv["name"];
    m.omega_p = one_of("omega_p_ev", "omega_p_rad_s", true);
    m.gamma_ref = one_of("gamma_ref_ev", "gamma_ref_rad_s", false);
    if (kv.count("t_ref_k"))
        m.T_ref = number("t_ref_k");
    if (kv.count("debye_t_k"))
        m.debye_T = number("debye_t_k");
    if (kv.count("gamma_table_path")) {
        std::filesystem::path p = kv["gamma_table_path"];
        if (p.is_relative())
            p = base_dir / p;
        m.gamma_table = load_gamma_table(p);
    }
    try {
        m.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(source + ": " + e.what());
    }
    return m;
}

/// Loads a material file, or the built-in aluminium for the names "Al"/"al".
inline Material load_material(const std::string& spec)
{
    if (spec == "Al" || spec == "al")
        return Material::aluminium();
    std::ifstream in(spec);
    if (!in)
        throw ConfigError("cannot open material file " + spec);
    return parse_material(in, std::filesystem::path(spec).parent_path(), spec);
}

/// Data-file number format.
inline std::string format_value(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

} // namespace casimir
