#include "sasatk/config.hpp"

#include <fmt/format.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "sasatk/errors.hpp"

namespace sasatk::config {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (trim(v.substr(used)).empty()) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError(fmt::format("{}: not a number: '{}'", key, v));
}

std::size_t to_size(const std::string& key, const std::string& v) {
    const double d = to_double(key, v);
    if (d < 0 || d != std::floor(d) || d > 1e12) {
        throw ConfigError(fmt::format("{}: expected a non-negative integer, got '{}'", key, v));
    }
    return static_cast<std::size_t>(d);
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cell = trim(cell);
        if (cell.empty()) throw ConfigError(fmt::format("{}: empty list entry", key));
        out.push_back(to_double(key, cell));
    }
    if (out.empty()) throw ConfigError(fmt::format("{}: empty list", key));
    return out;
}

}  // namespace

void RunConfig::validate() const {
    auto positive = [](const char* name, double v) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(fmt::format("{} must be positive", name));
    };
    positive("ode_tol", tolerances.ode_tol);
    positive("quad_tol", tolerances.quad_tol);
    positive("budget", tolerances.budget);
    positive("mass_rate_tol", mass_rate_tol);
    positive("contamination_tol", contamination_tol);
    positive("sim_half_width", sim.half_width);
    positive("sim_dt", sim.dt);
    positive("M", M);
    positive("signature_half_width", signature_half_width);
    if (!(decay_tol >= 0.0)) throw ConfigError("decay_tol must be >= 0");
    if (k_count < 3) throw ConfigError("k_count must be at least 3");
    if (k_window && !(k_window->first < k_window->second)) throw ConfigError("k_window must satisfy lo < hi");
    if (t_list.empty()) throw ConfigError("t_list must not be empty");
    for (std::size_t i = 0; i < t_list.size(); ++i) {
        if (!(t_list[i] > 0.0)) throw ConfigError("t_list entries must be positive");
        if (i > 0 && !(t_list[i] > t_list[i - 1])) throw ConfigError("t_list must be strictly increasing");
    }
    if (!(edge_fraction > 0.0 && edge_fraction < 0.5)) throw ConfigError("edge_fraction must be in (0, 0.5)");
    if (signature_points < 2) throw ConfigError("signature_points must be at least 2");
    if (gaussian_n < 16) throw ConfigError("gaussian_n must be at least 16");
    if (!(gaussian_x_min < gaussian_x_max)) throw ConfigError("gaussian_x_min must be below gaussian_x_max");
}

RunConfig parse(const std::string& text, const std::string& origin) {
    RunConfig c;
    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Setter> setters = {
        {"profile", [&](auto&, auto& v) { c.profile_path = v; }},
        {"gaussian_x_min", [&](auto& k, auto& v) { c.gaussian_x_min = to_double(k, v); }},
        {"gaussian_x_max", [&](auto& k, auto& v) { c.gaussian_x_max = to_double(k, v); }},
        {"gaussian_n", [&](auto& k, auto& v) { c.gaussian_n = to_size(k, v); }},
        {"amplitude_scale", [&](auto& k, auto& v) { c.amplitude_scale = to_double(k, v); }},
        {"decay_tol", [&](auto& k, auto& v) { c.decay_tol = to_double(k, v); }},
        {"k_window",
         [&](auto& k, auto& v) {
             const auto l = to_list(k, v);
             if (l.size() != 2) throw ConfigError("k_window needs two values");
             c.k_window = std::make_pair(l[0], l[1]);
         }},
        {"k_count", [&](auto& k, auto& v) { c.k_count = to_size(k, v); }},
        {"zeta", [&](auto& k, auto& v) { c.zeta = to_double(k, v); }},
        {"zetas", [&](auto& k, auto& v) { c.zetas = to_list(k, v); }},
        {"t_list", [&](auto& k, auto& v) { c.t_list = to_list(k, v); }},
        {"M", [&](auto& k, auto& v) { c.M = to_double(k, v); }},
        {"sim_half_width", [&](auto& k, auto& v) { c.sim.half_width = to_double(k, v); }},
        {"sim_n_modes", [&](auto& k, auto& v) { c.sim.n_modes = to_size(k, v); }},
        {"sim_dt", [&](auto& k, auto& v) { c.sim.dt = to_double(k, v); }},
        {"mass_rate_tol", [&](auto& k, auto& v) { c.mass_rate_tol = to_double(k, v); }},
        {"contamination_tol", [&](auto& k, auto& v) { c.contamination_tol = to_double(k, v); }},
        {"edge_fraction", [&](auto& k, auto& v) { c.edge_fraction = to_double(k, v); }},
        {"ode_tol", [&](auto& k, auto& v) { c.tolerances.ode_tol = to_double(k, v); }},
        {"quad_tol", [&](auto& k, auto& v) { c.tolerances.quad_tol = to_double(k, v); }},
        {"budget", [&](auto& k, auto& v) { c.tolerances.budget = to_double(k, v); }},
        {"modelcheck_nu", [&](auto& k, auto& v) { c.modelcheck_nu = to_list(k, v); }},
        {"modelcheck_r", [&](auto& k, auto& v) { c.modelcheck_r = to_list(k, v); }},
        {"signature_half_width", [&](auto& k, auto& v) { c.signature_half_width = to_double(k, v); }},
        {"signature_points", [&](auto& k, auto& v) { c.signature_points = to_size(k, v); }},
        {"threads", [&](auto& k, auto& v) { c.threads = static_cast<unsigned>(to_size(k, v)); }},
    };

    std::stringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(fmt::format("{}:{}: expected `key = value`", origin, lineno));
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError(fmt::format("{}:{}: unknown key '{}'", origin, lineno, key));
        if (value.empty()) throw ConfigError(fmt::format("{}:{}: empty value for '{}'", origin, lineno, key));
        try {
            it->second(key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(fmt::format("{}:{}: {}", origin, lineno, e.what()));
        }
    }
    c.validate();
    return c;
}

RunConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    RunConfig c = parse(ss.str(), path);
    if (c.profile_path != "gaussian") {
        std::filesystem::path p(c.profile_path);
        if (p.is_relative()) c.profile_path = (std::filesystem::path(path).parent_path() / p).string();
    }
    return c;
}

scattering::InitialProfile make_profile(const RunConfig& cfg) {
    scattering::InitialProfile p;
    if (cfg.profile_path == "gaussian") {
        p = scattering::InitialProfile::gaussian(1.0, cfg.gaussian_x_min, cfg.gaussian_x_max, cfg.gaussian_n,
                                                 cfg.decay_tol);
    } else {
        p = scattering::InitialProfile::read_csv(cfg.profile_path, cfg.decay_tol);
    }
    for (auto& z : p.u0) z *= cfg.amplitude_scale;
    p.validate();
    return p;
}

std::pair<double, double> table_window(const RunConfig& cfg) {
    if (cfg.k_window) return *cfg.k_window;
    const auto zs = cfg.compare_zetas();
    double zmax = cfg.zeta;
    for (double z : zs) zmax = std::max(zmax, z);
    const double k0 = std::sqrt(std::max(zmax, 0.0) / 12.0);
    return {-(3.0 * k0 + 1.0), 3.0 * k0 + 1.0};
}

}  // namespace sasatk::config
