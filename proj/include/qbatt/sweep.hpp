// sweep.hpp — Single-point pipeline (Liouvillian -> spectrum -> evolution ->
// metrics) and threaded parameter sweeps with deterministic CSV output.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qbatt/config.hpp"
#include "qbatt/liouville.hpp"
#include "qbatt/observe.hpp"
#include "qbatt/spectra.hpp"

namespace qbatt {

struct PointResult {
    std::vector<double> axis_values;
    bool ok = false;
    std::string error; // set when !ok

    double gap = 0.0;
    bool bistable = false;
    std::size_t kernel_dim = 0;
    BatteryMetrics metrics{};
    double concurrence = 0.0;
    double min_eigenvalue = 0.0; // of rho(tau); negative values flag positivity loss
    Tomogram tomo{};
    std::vector<cplx> spectrum;
    CMatrix rho;        // bare basis, Schrodinger frame
    CMatrix steady;     // eigen/bare basis of the Liouvillian, empty if bistable
};

inline Superoperator build_liouvillian(const SweepConfig& cfg, const PointSetup& s) {
    return cfg.equation == SweepEquation::redfield ? redfield_general(s.model, s.baths)
                                                   : lindblad_pheno(s.model, s.baths);
}

inline PointResult run_point(const SweepConfig& cfg, const std::vector<double>& axis_values) {
    PointResult r;
    r.axis_values = axis_values;
    try {
        const PointSetup s = resolve_point(cfg, axis_values);
        const Superoperator l = build_liouvillian(cfg, s);
        const SpectralReport rep = analyze(l, {.gap_tol = cfg.gap_tol});
        r.gap = rep.gap;
        r.bistable = rep.bistable;
        r.kernel_dim = rep.kernel_dim;
        r.spectrum = rep.eigenvalues;
        if (rep.steady_state) r.steady = *rep.steady_state;

        const Amplitudes psi = l.basis == Basis::eigen ? to_eigen_basis(s.state, l.frame) : s.state.amplitudes();
        const CMatrix rho_t = evolve_to(l, density(psi), cfg.tau);
        const CMatrix u1 = frame_phase(cfg.tau);
        r.rho = l.basis == Basis::eigen ? to_bare_frame(rho_t, l.frame, cfg.tau) : u1 * rho_t * u1.adjoint();
        if (!r.rho.all_finite()) throw NonConvergence("run_point: non-finite state");

        r.metrics = battery_metrics(r.rho, s.model.omega_battery);
        r.concurrence = concurrence(r.rho);
        r.min_eigenvalue = eig_hermitian(0.5 * (r.rho + r.rho.adjoint())).values.front();
        r.tomo = tomogram(r.rho);
        r.ok = true;
    } catch (const std::exception& e) {
        r.ok = false;
        r.error = e.what();
    }
    return r;
}

// Flat index k -> axis values, first axis outermost.
inline std::vector<double> grid_point(const SweepConfig& cfg, std::size_t k) {
    std::vector<double> v(cfg.axes.size());
    for (std::size_t a = cfg.axes.size(); a-- > 0;) {
        const std::size_t n = cfg.axes[a].points;
        v[a] = cfg.axes[a].value(k % n);
        k /= n;
    }
    return v;
}

struct SweepResult {
    SweepConfig config;
    std::vector<PointResult> points; // grid order
    std::size_t failures() const {
        return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const auto& p) { return !p.ok; }));
    }
};

// Points are distributed over threads through a shared counter; each result is
// written to its own slot, so the output never depends on scheduling.
inline SweepResult run_sweep(const SweepConfig& cfg) {
    validate_config(cfg);
    SweepResult out{cfg, std::vector<PointResult>(cfg.point_count())};
    std::size_t nthreads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    nthreads = std::min(nthreads, out.points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < out.points.size();) {
            out.points[k] = run_point(cfg, grid_point(cfg, k));
        }
    };
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(nthreads);
        for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV

inline std::vector<std::string> csv_columns(const SweepConfig& cfg) {
    std::vector<std::string> cols;
    for (const auto& a : cfg.axes) cols.push_back(a.name);
    for (const char* c : {"gap", "bistable", "energy", "ergotropy", "efficiency", "concurrence"}) cols.emplace_back(c);
    for (std::size_t i = 0; i < kDim; ++i)
        for (std::size_t j = 0; j < kDim; ++j) cols.push_back(Tomogram::label(i, j));
    cols.emplace_back("min_eig");
    cols.emplace_back("status");
    return cols;
}

inline std::string csv_status(const PointResult& p) {
    if (p.ok) return p.min_eigenvalue < -1e-9 ? "nonpositive" : "ok";
    std::string msg = "error: " + p.error;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    return msg;
}

inline void write_csv(std::ostream& os, const SweepResult& res) {
    for (const auto& line : config_lines(res.config)) os << "# meta: " << line << '\n';
    const auto cols = csv_columns(res.config);
    for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c];
    os << '\n';
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& p : res.points) {
        for (double v : p.axis_values) os << format_sig9(v) << ',';
        auto num = [&](double v) { os << format_sig9(p.ok ? v : nan) << ','; };
        num(p.gap);
        os << (p.ok ? (p.bistable ? "1" : "0") : "nan") << ',';
        num(p.metrics.energy);
        num(p.metrics.ergotropy);
        num(p.metrics.efficiency);
        num(p.concurrence);
        for (double t : p.tomo.magnitudes) num(t);
        num(p.min_eigenvalue);
        os << csv_status(p) << '\n';
    }
}

inline std::string to_csv(const SweepResult& res) {
    std::ostringstream ss;
    write_csv(ss, res);
    return ss.str();
}

} // namespace qbatt
