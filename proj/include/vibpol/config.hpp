#pragma once

// INI-style configuration: flat "key = value" lines, optional [section]
// headers that prefix keys with "section.", '#'/';' comments.  All keys are
// validated against a registry; unknown keys and malformed values are
// reported with their line number.  Inputs use meV / Angstrom / K / fs;
// everything is converted to atomic units here and nowhere else.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "md.hpp"
#include "params.hpp"
#include "units.hpp"
#include "vdmft.hpp"

namespace vibpol {

struct AppConfig {
    ModelParams model;
    MdOptions md;          // matter-chain MD protocol
    VdmftOptions vdmft;    // loop controls; vdmft.md is the impurity protocol
    std::string outdir = "out";
    int threads = 1;
    // key -> final value (after defaulting), echoed into the run manifest
    std::map<std::string, std::string> resolved;
};

namespace detail {

struct RawEntry {
    std::string value;
    int line = 0;
    bool used = false;
};

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

class ConfigReader {
  public:
    explicit ConfigReader(const std::string& text) {
        std::istringstream in(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find_first_of("#;");
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError("config line " + std::to_string(lineno) +
                                      ": malformed section header");
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": expected key = value");
            std::string key = trim(line.substr(0, eq));
            std::string val = trim(line.substr(eq + 1));
            if (key.empty() || val.empty())
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": empty key or value");
            if (!section.empty()) key = section + "." + key;
            if (entries_.count(key))
                throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" +
                                  key + "' (first at line " +
                                  std::to_string(entries_[key].line) + ")");
            entries_[key] = {val, lineno, false};
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::string take_string(const std::string& key, const std::string& def,
                            std::map<std::string, std::string>& resolved) {
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            resolved[key] = def;
            return def;
        }
        it->second.used = true;
        resolved[key] = it->second.value;
        return it->second.value;
    }

    double take_double(const std::string& key, double def,
                       std::map<std::string, std::string>& resolved, bool required = false) {
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            if (required) missing_.push_back(key);
            std::ostringstream os;
            os << def;
            resolved[key] = os.str();
            return def;
        }
        it->second.used = true;
        resolved[key] = it->second.value;
        return parse_number(key, it->second);
    }

    long take_int(const std::string& key, long def,
                  std::map<std::string, std::string>& resolved) {
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            resolved[key] = std::to_string(def);
            return def;
        }
        it->second.used = true;
        resolved[key] = it->second.value;
        double v = parse_number(key, it->second);
        long r = static_cast<long>(v);
        if (static_cast<double>(r) != v)
            throw ConfigError("config line " + std::to_string(it->second.line) + ": key '" +
                              key + "' must be an integer");
        return r;
    }

    void finish() const {
        if (!missing_.empty()) {
            std::string msg = "config: missing required key(s):";
            for (const auto& k : missing_) msg += " " + k;
            throw ConfigError(msg);
        }
        for (const auto& [key, e] : entries_)
            if (!e.used)
                throw ConfigError("config line " + std::to_string(e.line) +
                                  ": unknown key '" + key + "'");
    }

  private:
    static double parse_number(const std::string& key, const RawEntry& e) {
        std::size_t pos = 0;
        double v = 0;
        try {
            v = std::stod(e.value, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != e.value.size())
            throw ConfigError("config line " + std::to_string(e.line) + ": key '" + key +
                              "': cannot parse number from '" + e.value + "'");
        return v;
    }

    std::map<std::string, RawEntry> entries_;
    mutable std::vector<std::string> missing_;
};

}  // namespace detail

inline AppConfig parse_config_text(const std::string& text) {
    detail::ConfigReader rd(text);
    AppConfig cfg;
    auto& rs = cfg.resolved;

    const double nan_marker = -1e308;
    double a_aa = rd.take_double("a_angstrom", nan_marker, rs, true);
    double omm = rd.take_double("omega_m_mev", nan_marker, rs, true);
    double Omm = rd.take_double("Omega_m_mev", nan_marker, rs, true);
    double gx = rd.take_double("g_over_omega_m3", nan_marker, rs, true);
    double T = rd.take_double("temperature_K", nan_marker, rs, true);
    // Defaults below may reference required values; if any of those were
    // missing, finish() throws before the garbage defaults can be used.
    double om0 = rd.take_double("omega_0_mev", omm, rs);
    double eta = rd.take_double("eta", 0.0, rs);
    long nsites = rd.take_int("n_sites", 128, rs);
    long stencil = rd.take_int("stencil_order", 2, rs);

    cfg.md.dt = fs_to_au(rd.take_double("md.dt_fs", au_to_fs(4.0), rs));
    cfg.md.n_equil = static_cast<int>(rd.take_int("md.n_equil", 8192, rs));
    cfg.md.n_prod = static_cast<int>(rd.take_int("md.n_prod", 1 << 15, rs));
    cfg.md.n_traj = static_cast<int>(rd.take_int("md.n_traj", 100, rs));
    cfg.md.friction = rd.take_double("md.friction_per_fs", 2.0e-3 / au_time_in_fs, rs) *
                      au_time_in_fs;
    cfg.md.seed = static_cast<std::uint64_t>(rd.take_int("md.seed", 20230817, rs));
    cfg.md.stride = static_cast<int>(rd.take_int("md.stride", 2, rs));
    std::string win = rd.take_string("md.window", "exponential", rs);
    if (win == "exponential") cfg.md.window = WindowKind::exponential;
    else if (win == "hann") cfg.md.window = WindowKind::hann;
    else if (win == "none") cfg.md.window = WindowKind::none;
    else throw ConfigError("config: md.window must be exponential, hann or none");

    cfg.vdmft.n_omega = static_cast<std::size_t>(rd.take_int("vdmft.n_omega", 4096, rs));
    cfg.vdmft.omega_max = mev_to_ha(rd.take_double("vdmft.omega_max_mev", 3.0 * omm, rs));
    cfg.vdmft.delta = mev_to_ha(rd.take_double("vdmft.delta_mev", 1.0, rs));
    cfg.vdmft.n_bath = static_cast<int>(rd.take_int("vdmft.n_bath", 300, rs));
    cfg.vdmft.mixing = rd.take_double("vdmft.mixing", 0.5, rs);
    cfg.vdmft.max_iter = static_cast<int>(rd.take_int("vdmft.max_iter", 8, rs));
    cfg.vdmft.tol_A = rd.take_double("vdmft.tol_A", 0.05, rs);
    cfg.vdmft.smooth_halfwidth =
        static_cast<int>(rd.take_int("vdmft.smooth_halfwidth", 10, rs));
    cfg.vdmft.smooth_order = static_cast<int>(rd.take_int("vdmft.smooth_order", 3, rs));
    cfg.vdmft.md = cfg.md;
    cfg.vdmft.md.n_traj = static_cast<int>(rd.take_int("vdmft.n_traj", cfg.md.n_traj, rs));

    cfg.outdir = rd.take_string("output.dir", "out", rs);
    cfg.threads = static_cast<int>(rd.take_int("threads", 1, rs));
    cfg.vdmft.threads = cfg.threads;

    rd.finish();

    cfg.model.a = angstrom_to_bohr(a_aa);
    cfg.model.omega_m = mev_to_ha(omm);
    cfg.model.Omega_m = mev_to_ha(Omm);
    cfg.model.g = gx * cfg.model.omega_m * cfg.model.omega_m * cfg.model.omega_m;
    cfg.model.omega_0 = mev_to_ha(om0);
    cfg.model.eta = eta;
    cfg.model.T = T;
    cfg.model.n_sites = static_cast<int>(nsites);
    cfg.model.stencil_order = static_cast<int>(stencil);
    cfg.model.validate();
    if (cfg.md.dt <= 0 || cfg.md.n_prod < 1 || cfg.md.n_traj < 1 || cfg.md.stride < 1)
        throw ConfigError("config: md.* values out of range");
    if (cfg.md.n_prod % cfg.md.stride != 0)
        throw ConfigError("config: md.n_prod must be divisible by md.stride");
    if (cfg.vdmft.mixing <= 0 || cfg.vdmft.mixing > 1)
        throw ConfigError("config: vdmft.mixing must be in (0,1]");
    if (cfg.threads < 1) throw ConfigError("config: threads must be >= 1");
    return cfg;
}

inline AppConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace vibpol
