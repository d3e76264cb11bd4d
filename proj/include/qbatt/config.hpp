// config.hpp — Sweep configuration: flat `key = value` text format, parameter
// resolution and the mapping onto model/reservoir/state objects.
//
//   equation = redfield            # or lindblad-pheno
//   statistics = boson             # or fermion
//   initial_state = eg             # eg | ge | plus | minus | plus_i | minus_i | bloch | amps:...
//   F = 0.5
//   axis1 = delta:-4:4:121         # name:min:max:points
//
// CSV outputs carry the same lines prefixed by "# meta: ", so a CSV file is
// itself a valid configuration.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qbatt/error.hpp"
#include "qbatt/model.hpp"
#include "qbatt/reservoir.hpp"

#ifndef QBATT_VERSION
#define QBATT_VERSION "1.0.0"
#endif

namespace qbatt {

inline constexpr std::string_view kVersion = QBATT_VERSION;

enum class SweepEquation { lindblad_pheno, redfield };

inline std::string_view to_string(SweepEquation e) {
    return e == SweepEquation::redfield ? "redfield" : "lindblad-pheno";
}

struct Axis {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    std::size_t points = 2;

    double value(std::size_t k) const {
        if (k + 1 == points) return max;
        return min + (max - min) * static_cast<double>(k) / static_cast<double>(points - 1);
    }
};

using ParamMap = std::map<std::string, double>;

struct SweepConfig {
    SweepEquation equation = SweepEquation::redfield;
    Statistics statistics = Statistics::boson;
    std::string initial_state = "eg";
    ParamMap fixed;
    std::vector<Axis> axes;
    double tau = 20000.0;
    double gap_tol = 1e-8;
    std::string output;
    std::size_t threads = 0; // 0: hardware concurrency
    std::string preset;      // informational

    std::size_t point_count() const {
        std::size_t n = 1;
        for (const auto& a : axes) n *= a.points;
        return n;
    }
};

namespace params {

// Names that may be swept.
inline const std::set<std::string, std::less<>>& sweepable() {
    static const std::set<std::string, std::less<>> s{"delta", "delta_bar", "F",   "T_bar",
                                                      "dT",    "mu_bar",    "dmu", "T",
                                                      "mu",    "theta",     "phi"};
    return s;
}

// Every parameter with its default. T and mu are aliases: when present they
// override T_bar and mu_bar.
inline const ParamMap& defaults() {
    static const ParamMap d{{"delta", 0.0},   {"delta_bar", 0.0}, {"F", 0.5},      {"T_bar", 1.0},
                            {"dT", 0.0},      {"mu_bar", 0.0},    {"dmu", 0.0},    {"theta", 0.0},
                            {"phi", 0.0},     {"alpha", 0.1},     {"omega_c", 5.0}, {"omega_d", 5.0},
                            {"omega", 1.0},   {"offset", 0.0}};
    return d;
}

inline bool known(std::string_view name) {
    return defaults().count(std::string(name)) != 0 || name == "T" || name == "mu";
}

} // namespace params

// Shortest decimal text that parses back to the identical double.
inline std::string format_exact(double v) {
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

inline std::string format_sig9(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_number(std::string_view text, std::string_view what) {
    const std::string t = trim(text);
    // Symbolic multiples of pi keep presets and hand-written configs readable.
    auto pi_factor = [](std::string_view s) -> std::optional<double> {
        if (s == "pi") return std::numbers::pi;
        if (s == "-pi") return -std::numbers::pi;
        for (std::string_view suffix : {"*pi", "pi"}) {
            if (s.size() > suffix.size() && s.ends_with(suffix)) {
                const std::string head(s.substr(0, s.size() - suffix.size()));
                char* end = nullptr;
                const double f = std::strtod(head.c_str(), &end);
                if (end && *end == '\0') return f * std::numbers::pi;
            }
        }
        return std::nullopt;
    };
    if (auto v = pi_factor(t)) return *v;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end == nullptr || *end != '\0' || !std::isfinite(v)) {
        throw ConfigError("invalid number for " + std::string(what) + ": '" + t + "'");
    }
    return v;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

} // namespace detail

inline Axis parse_axis(std::string_view text) {
    const auto parts = detail::split(text, ':');
    if (parts.size() != 4) throw ConfigError("axis must be name:min:max:points, got '" + std::string(text) + "'");
    Axis a;
    a.name = parts[0];
    if (!params::sweepable().contains(a.name)) throw ConfigError("parameter '" + a.name + "' cannot be swept");
    a.min = detail::parse_number(parts[1], "axis min");
    a.max = detail::parse_number(parts[2], "axis max");
    const double pts = detail::parse_number(parts[3], "axis points");
    if (pts < 2 || pts != std::floor(pts)) throw ConfigError("axis '" + a.name + "' needs an integer >= 2 points");
    a.points = static_cast<std::size_t>(pts);
    return a;
}

inline std::string format_axis(const Axis& a) {
    return a.name + ":" + format_exact(a.min) + ":" + format_exact(a.max) + ":" + std::to_string(a.points);
}

inline void validate_initial_state(std::string_view s) {
    static const std::set<std::string, std::less<>> named{"eg", "ge", "plus", "minus", "plus_i", "minus_i", "bloch"};
    if (named.contains(s)) return;
    if (s.starts_with("amps:")) {
        const auto parts = detail::split(s.substr(5), ':');
        if (parts.size() != 8) throw ConfigError("amps: needs 8 numbers (re, im for 4 amplitudes)");
        for (const auto& p : parts) detail::parse_number(p, "amplitude");
        return;
    }
    throw ConfigError("unknown initial_state '" + std::string(s) + "'");
}

// Applies one `key = value` assignment.
inline void set_config_value(SweepConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "equation") {
        if (value == "redfield") cfg.equation = SweepEquation::redfield;
        else if (value == "lindblad-pheno") cfg.equation = SweepEquation::lindblad_pheno;
        else throw ConfigError("equation must be redfield or lindblad-pheno");
    } else if (key == "statistics") {
        if (value == "boson") cfg.statistics = Statistics::boson;
        else if (value == "fermion") cfg.statistics = Statistics::fermion;
        else throw ConfigError("statistics must be boson or fermion");
    } else if (key == "initial_state") {
        validate_initial_state(value);
        cfg.initial_state = value;
    } else if (key == "axis1" || key == "axis2") {
        const std::size_t slot = key == "axis1" ? 0 : 1;
        if (cfg.axes.size() < slot) throw ConfigError("axis2 given without axis1");
        Axis a = parse_axis(value);
        if (cfg.axes.size() == slot) cfg.axes.push_back(std::move(a));
        else cfg.axes[slot] = std::move(a);
    } else if (key == "tau") {
        cfg.tau = detail::parse_number(value, key);
        if (cfg.tau < 0.0) throw ConfigError("tau must be non-negative");
    } else if (key == "gap_tol") {
        cfg.gap_tol = detail::parse_number(value, key);
    } else if (key == "output") {
        cfg.output = value;
    } else if (key == "threads") {
        const double t = detail::parse_number(value, key);
        if (t < 0 || t != std::floor(t)) throw ConfigError("threads must be a non-negative integer");
        cfg.threads = static_cast<std::size_t>(t);
    } else if (key == "preset") {
        cfg.preset = value;
    } else if (key == "version") {
        // recorded by CSV metadata; informational
    } else if (params::known(key)) {
        cfg.fixed[key] = detail::parse_number(value, key);
    } else {
        throw ConfigError("unknown configuration key '" + key + "'");
    }
}

inline void validate_config(const SweepConfig& cfg) {
    if (cfg.axes.empty() || cfg.axes.size() > 2) throw ConfigError("a sweep needs one or two axes");
    if (cfg.axes.size() == 2 && cfg.axes[0].name == cfg.axes[1].name) {
        throw ConfigError("the two axes must sweep different parameters");
    }
    if (!(cfg.gap_tol > 0.0)) throw ConfigError("gap_tol must be positive");
}

// Parses configuration text. If any "# meta:" line is present only those lines
// are read (the text is a CSV produced by run_sweep).
inline SweepConfig parse_config(std::string_view text) {
    static constexpr std::string_view kMeta = "# meta:";
    const bool csv_mode = text.find(kMeta) != std::string_view::npos;
    SweepConfig cfg;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string body;
        if (csv_mode) {
            if (!line.starts_with(kMeta)) continue;
            body = line.substr(kMeta.size());
        } else {
            body = line.substr(0, line.find('#'));
        }
        body = detail::trim(body);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        set_config_value(cfg, detail::trim(body.substr(0, eq)), detail::trim(body.substr(eq + 1)));
    }
    validate_config(cfg);
    return cfg;
}

inline SweepConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

// Fixed parameters with every default made explicit; swept names excluded.
inline ParamMap resolved_fixed(const SweepConfig& cfg) {
    ParamMap out = params::defaults();
    for (const auto& [k, v] : cfg.fixed) out[k] = v;
    for (const auto& a : cfg.axes) out.erase(a.name);
    // Aliases in play shadow their canonical parameter.
    for (const auto& [alias, canon] : {std::pair{"T", "T_bar"}, std::pair{"mu", "mu_bar"}}) {
        const bool alias_used = out.count(alias) || std::any_of(cfg.axes.begin(), cfg.axes.end(),
                                                                [&](const Axis& a) { return a.name == alias; });
        if (alias_used) out.erase(canon);
    }
    return out;
}

// Configuration lines that reproduce `cfg` (threads and output excluded: they
// never change the numbers).
inline std::vector<std::string> config_lines(const SweepConfig& cfg) {
    std::vector<std::string> lines;
    lines.push_back("version = " + std::string(kVersion));
    if (!cfg.preset.empty()) lines.push_back("preset = " + cfg.preset);
    lines.push_back("equation = " + std::string(to_string(cfg.equation)));
    lines.push_back("statistics = " + std::string(to_string(cfg.statistics)));
    lines.push_back("initial_state = " + cfg.initial_state);
    lines.push_back("tau = " + format_exact(cfg.tau));
    lines.push_back("gap_tol = " + format_exact(cfg.gap_tol));
    for (const auto& [k, v] : resolved_fixed(cfg)) lines.push_back(k + " = " + format_exact(v));
    for (std::size_t i = 0; i < cfg.axes.size(); ++i) {
        lines.push_back("axis" + std::to_string(i + 1) + " = " + format_axis(cfg.axes[i]));
    }
    return lines;
}

// ---------------------------------------------------------------------------
// Parameter resolution for one grid point.

struct PointSetup {
    ModelParams model;
    BathPair baths;
    StateSpec state = StateSpec::product_eg();
    ParamMap values; // every resolved parameter, for reporting
};

inline StateSpec make_state(std::string_view name, double theta, double phi) {
    using std::numbers::pi;
    if (name == "eg") return StateSpec::product_eg();
    if (name == "ge") return StateSpec::product_ge();
    if (name == "plus") return StateSpec::bloch(pi / 4, 0.0);
    if (name == "minus") return StateSpec::bloch(pi / 4, pi);
    if (name == "plus_i") return StateSpec::bloch(pi / 4, pi / 2);
    if (name == "minus_i") return StateSpec::bloch(pi / 4, -pi / 2);
    if (name == "bloch") return StateSpec::bloch(theta, phi);
    if (name.starts_with("amps:")) {
        const auto parts = detail::split(name.substr(5), ':');
        Amplitudes a{};
        for (std::size_t k = 0; k < kDim; ++k) {
            a[k] = {detail::parse_number(parts[2 * k], "amplitude"), detail::parse_number(parts[2 * k + 1], "amplitude")};
        }
        double n = 0.0;
        for (const auto& z : a) n += std::norm(z);
        for (auto& z : a) z /= std::sqrt(n);
        return StateSpec::explicit_amplitudes(a);
    }
    throw ConfigError("unknown initial_state '" + std::string(name) + "'");
}

inline PointSetup resolve_point(const SweepConfig& cfg, const std::vector<double>& axis_values) {
    if (axis_values.size() != cfg.axes.size()) throw ConfigError("axis value count does not match axes");
    ParamMap v = params::defaults();
    for (const auto& [k, x] : cfg.fixed) v[k] = x;
    for (std::size_t i = 0; i < cfg.axes.size(); ++i) v[cfg.axes[i].name] = axis_values[i];
    if (v.count("T")) v["T_bar"] = v["T"];
    if (v.count("mu")) v["mu_bar"] = v["mu"];

    PointSetup s;
    s.model = ModelParams::from_detuning(v["delta"], v["delta_bar"], v["F"]);
    s.model.omega_d = v["omega_d"];
    s.model.omega_battery = v["omega"];

    ReservoirSpec r;
    r.statistics = cfg.statistics;
    r.alpha = v["alpha"];
    r.cutoff = v["omega_c"];
    r.frequency_offset = v["offset"];
    s.baths.charger = r;
    s.baths.battery = r;
    s.baths.charger.temperature = v["T_bar"] + 0.5 * v["dT"];
    s.baths.battery.temperature = v["T_bar"] - 0.5 * v["dT"];
    if (cfg.statistics == Statistics::fermion) {
        s.baths.charger.chemical_potential = v["mu_bar"] + 0.5 * v["dmu"];
        s.baths.battery.chemical_potential = v["mu_bar"] - 0.5 * v["dmu"];
    }
    s.state = make_state(cfg.initial_state, v["theta"], v["phi"]);
    s.values = std::move(v);
    return s;
}

} // namespace qbatt
