// config.hpp
// State specification strings and the key=value config file format.
//
// State specs: a family tag, optionally followed by ':' and
// comma-separated key=value parameters:
//   vacuum
//   cat:nu=0.5,p=0.3
//   tmss:s=0.5,op=none|subtract|add
//   superpos:c0=0.6,c1=0.8          (c0|00> + c1|11>; c1 defaults)
//   coherent:ar=0.5,ai=0.2,br=0,bi=0
//   thermal:na=0.3,nb=0.3
//   file:/path/to/state.txt

#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "eprw/fock_state.hpp"
#include "eprw/state_catalog.hpp"

namespace eprw {

namespace detail {

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    size_t b = s.find_last_not_of(" \t\r\n");
    return (a == std::string::npos) ? "" : s.substr(a, b - a + 1);
}

inline std::map<std::string, std::string> parse_kv_list(const std::string& s) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("state spec: expected key=value, got '" + item + "'");
        kv[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
    }
    return kv;
}

inline double kv_num(const std::map<std::string, std::string>& kv,
                     const std::string& key, double fallback,
                     bool required = false) {
    auto it = kv.find(key);
    if (it == kv.end()) {
        if (required)
            throw std::invalid_argument("state spec: missing parameter '" + key + "'");
        return fallback;
    }
    size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size())
        throw std::invalid_argument("state spec: bad number '" + it->second + "'");
    return v;
}

}  // namespace detail

inline TwoModeState parse_state_spec(const std::string& spec) {
    std::string family = spec, args;
    size_t colon = spec.find(':');
    if (colon != std::string::npos) {
        family = spec.substr(0, colon);
        args = spec.substr(colon + 1);
    }
    family = detail::trim(family);

    if (family == "vacuum") return vacuum_two_mode();
    if (family == "file") return load_state(args);

    auto kv = detail::parse_kv_list(args);
    if (family == "cat") {
        CatSpec c;
        c.nu = detail::kv_num(kv, "nu", 0.0, true);
        c.p = detail::kv_num(kv, "p", 0.0, true);
        return make_dephased_cat(c);
    }
    if (family == "tmss") {
        TmssSpec t;
        t.s = detail::kv_num(kv, "s", 0.0, true);
        auto it = kv.find("op");
        if (it != kv.end()) {
            if (it->second == "none") t.operation = TmssSpec::Operation::None;
            else if (it->second == "subtract") t.operation = TmssSpec::Operation::SubtractBoth;
            else if (it->second == "add") t.operation = TmssSpec::Operation::AddBoth;
            else throw std::invalid_argument("state spec: unknown op '" + it->second + "'");
        }
        return make_tmss(t);
    }
    if (family == "superpos") {
        double c0 = detail::kv_num(kv, "c0", 0.0, true);
        double c1 = detail::kv_num(kv, "c1", std::sqrt(std::max(0.0, 1.0 - c0 * c0)));
        return make_fock_superposition({{0, 0, c0}, {1, 1, c1}});
    }
    if (family == "coherent") {
        complexd a{detail::kv_num(kv, "ar", 0.0), detail::kv_num(kv, "ai", 0.0)};
        complexd b{detail::kv_num(kv, "br", 0.0), detail::kv_num(kv, "bi", 0.0)};
        return coherent_product(a, b);
    }
    if (family == "thermal") {
        double na = detail::kv_num(kv, "na", 0.0, true);
        double nb = detail::kv_num(kv, "nb", na);
        int da = std::max(8, static_cast<int>(std::ceil(8.0 * na + 16.0)));
        int db = std::max(8, static_cast<int>(std::ceil(8.0 * nb + 16.0)));
        TwoModeState s = tensor_product(thermal_state_matrix(da, na),
                                        thermal_state_matrix(db, nb));
        s.refresh_converged();
        return s;
    }
    throw std::invalid_argument("state spec: unknown family '" + family + "'");
}

/// key = value per line; '#' comments.  Later keys override earlier ones.
inline std::map<std::string, std::string> load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("config: cannot open " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(f, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: expected key = value, got '" + line + "'");
        kv[detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
    }
    return kv;
}

}  // namespace eprw
