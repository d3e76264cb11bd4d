// qbatt.cpp — Command-line front end: run sweeps from config files or named
// presets, list presets, and dump a single point in detail.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qbatt/qbatt.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

int emit(const qbatt::SweepResult& res, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        qbatt::write_csv(std::cout, res);
    } else {
        std::ofstream f(out_path);
        if (!f) throw qbatt::ConfigError("cannot write '" + out_path + "'");
        qbatt::write_csv(f, res);
    }
    int failed = 0;
    for (const auto& p : res.points) {
        if (p.ok) continue;
        ++failed;
        std::cerr << "point";
        for (std::size_t a = 0; a < p.axis_values.size(); ++a) {
            std::cerr << ' ' << res.config.axes[a].name << '=' << qbatt::format_exact(p.axis_values[a]);
        }
        std::cerr << ": " << p.error << '\n';
    }
    if (failed) {
        std::cerr << failed << " of " << res.points.size() << " points failed\n";
        return kExitNumeric;
    }
    return kExitOk;
}

void apply_overrides(qbatt::SweepConfig& cfg, const std::vector<std::string>& sets) {
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw qbatt::ConfigError("--set expects key=value, got '" + kv + "'");
        qbatt::set_config_value(cfg, qbatt::detail::trim(kv.substr(0, eq)), qbatt::detail::trim(kv.substr(eq + 1)));
    }
    qbatt::validate_config(cfg);
}

std::string fmt_c(qbatt::cplx z) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "% .10e %+.10ei", z.real(), z.imag());
    return buf;
}

void dump_matrix(const char* title, const qbatt::CMatrix& m) {
    std::cout << title << ":\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::cout << "  ";
        for (std::size_t j = 0; j < m.cols(); ++j) std::cout << fmt_c(m(i, j)) << (j + 1 < m.cols() ? "  " : "\n");
    }
}

int point(const qbatt::SweepConfig& cfg, const std::string& at) {
    std::vector<double> values(cfg.axes.size());
    std::vector<bool> seen(cfg.axes.size(), false);
    for (const auto& kv : qbatt::detail::split(at, ',')) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw qbatt::ConfigError("--at expects name=value pairs");
        const std::string name = qbatt::detail::trim(kv.substr(0, eq));
        bool matched = false;
        for (std::size_t a = 0; a < cfg.axes.size(); ++a) {
            if (cfg.axes[a].name == name) {
                values[a] = qbatt::detail::parse_number(kv.substr(eq + 1), name);
                seen[a] = matched = true;
            }
        }
        if (!matched) throw qbatt::ConfigError("--at: '" + name + "' is not a sweep axis");
    }
    for (std::size_t a = 0; a < cfg.axes.size(); ++a) {
        if (!seen[a]) throw qbatt::ConfigError("--at: missing value for axis '" + cfg.axes[a].name + "'");
    }

    const auto setup = qbatt::resolve_point(cfg, values);
    std::cout << "parameters:\n";
    for (const auto& [k, v] : setup.values) std::cout << "  " << k << " = " << qbatt::format_exact(v) << '\n';
    const auto r = qbatt::run_point(cfg, values);
    if (!r.ok) {
        std::cerr << "error: " << r.error << '\n';
        return kExitNumeric;
    }
    std::cout << "spectrum (descending real part):\n";
    for (const auto& z : r.spectrum) std::cout << "  " << fmt_c(z) << '\n';
    std::cout << "gap = " << qbatt::format_exact(r.gap) << "\nkernel_dim = " << r.kernel_dim
              << "\nbistable = " << (r.bistable ? "yes" : "no") << '\n';
    if (r.steady.size()) dump_matrix("steady state (Liouvillian basis)", r.steady);
    dump_matrix("rho(tau), bare basis", r.rho);
    std::cout << "energy = " << qbatt::format_exact(r.metrics.energy)
              << "\nergotropy = " << qbatt::format_exact(r.metrics.ergotropy)
              << "\nefficiency = " << qbatt::format_exact(r.metrics.efficiency)
              << "\nconcurrence = " << qbatt::format_exact(r.concurrence)
              << "\nmin_eig = " << qbatt::format_exact(r.min_eigenvalue) << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Driven two-qubit quantum battery: master-equation sweeps"};
    app.set_version_flag("--version", std::string(qbatt::kVersion));
    app.require_subcommand(1);

    std::string config_path, out_path, at;
    std::size_t threads = 0;
    std::vector<std::string> sets;

    auto* run = app.add_subcommand("run", "run a sweep from a config file (or a CSV produced by this tool)");
    run->add_option("--config", config_path, "configuration file")->required();
    run->add_option("--out", out_path, "output CSV (default: stdout or config 'output')");
    run->add_option("--threads", threads, "worker threads (0: all cores)");
    run->add_option("--set", sets, "override key=value (repeatable)");

    std::string preset_name;
    std::optional<double> panel;
    std::optional<double> tau, gap_tol;
    auto* pre = app.add_subcommand("preset", "run a named figure preset");
    pre->add_option("name", preset_name, "preset name (see list-presets)")->required();
    pre->add_option("--out", out_path, "output CSV (default: stdout)");
    pre->add_option("--threads", threads, "worker threads (0: all cores)");
    pre->add_option("--panel", panel, "value of the preset's panel parameter");
    pre->add_option("--tau", tau, "evolution time");
    pre->add_option("--gap-tol", gap_tol, "gap threshold for bistability");
    pre->add_option("--set", sets, "override key=value (repeatable)");

    auto* list = app.add_subcommand("list-presets", "list the available presets");

    auto* pt = app.add_subcommand("point", "evaluate one grid point and dump the full spectrum and state");
    pt->add_option("--config", config_path, "configuration file")->required();
    pt->add_option("--at", at, "axis values, e.g. delta=0.5,dT=1")->required();
    pt->add_option("--set", sets, "override key=value (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*list) {
            for (const auto& p : qbatt::preset_catalog()) {
                std::printf("%-6s  panel %-6s (default %s; figure uses %s)  %s\n", std::string(p.name).c_str(),
                            std::string(p.panel).c_str(), qbatt::format_exact(p.panel_default).c_str(),
                            std::string(p.panel_values).c_str(), std::string(p.description).c_str());
            }
            return kExitOk;
        }
        if (*run) {
            auto cfg = qbatt::load_config(config_path);
            apply_overrides(cfg, sets);
            cfg.threads = threads ? threads : cfg.threads;
            return emit(qbatt::run_sweep(cfg), out_path.empty() ? cfg.output : out_path);
        }
        if (*pre) {
            auto cfg = qbatt::preset(preset_name, panel);
            if (tau) qbatt::set_config_value(cfg, "tau", qbatt::format_exact(*tau));
            if (gap_tol) qbatt::set_config_value(cfg, "gap_tol", qbatt::format_exact(*gap_tol));
            apply_overrides(cfg, sets);
            cfg.threads = threads;
            return emit(qbatt::run_sweep(cfg), out_path);
        }
        if (*pt) {
            auto cfg = qbatt::load_config(config_path);
            apply_overrides(cfg, sets);
            return point(cfg, at);
        }
    } catch (const qbatt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const qbatt::UnknownPreset& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitOk;
}
