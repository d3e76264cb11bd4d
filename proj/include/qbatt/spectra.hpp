// spectra.hpp — Liouvillian spectrum, gap, steady state / bistability and
// time evolution (spectral propagator plus an RK4 cross-check).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "qbatt/error.hpp"
#include "qbatt/liouville.hpp"
#include "qbatt/matcore.hpp"

namespace qbatt {

struct SpectralOptions {
    double gap_tol = 1e-8;     // gap below this counts as closed (units of lambda)
    double kernel_tol = 1e-10; // relative singular-value threshold for the kernel
    EigOptions eig{};
};

struct SpectralReport {
    std::vector<cplx> eigenvalues; // descending real part; eigenvalues[0] is the steady mode
    double gap = 0.0;              // |Re lambda_1|
    std::size_t kernel_dim = 0;
    std::optional<CMatrix> steady_state; // present iff kernel_dim == 1
    bool bistable = false;
    bool diagonalizable = true;
};

inline void sort_by_real_part(std::vector<cplx>& ev) {
    std::stable_sort(ev.begin(), ev.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() < b.imag();
    });
}

inline SpectralReport analyze(const Superoperator& l, const SpectralOptions& opt = {}) {
    const auto dec = eig_general(l.matrix, opt.eig);
    SpectralReport rep;
    rep.eigenvalues = dec.values();
    sort_by_real_part(rep.eigenvalues);
    rep.diagonalizable = dec.diagonalizable;
    rep.gap = rep.eigenvalues.size() > 1 ? std::abs(rep.eigenvalues[1].real()) : 0.0;

    const auto kernel = null_space(l.matrix, opt.kernel_tol);
    rep.kernel_dim = kernel.size();
    rep.bistable = rep.kernel_dim >= 2 || rep.gap < opt.gap_tol;
    if (rep.kernel_dim == 1) {
        const std::size_t n = static_cast<std::size_t>(std::lround(std::sqrt(l.matrix.rows())));
        CMatrix rho = devectorize(kernel.front(), n);
        rho *= cplx{1.0, 0.0} / rho.trace();
        rep.steady_state = 0.5 * (rho + rho.adjoint());
    }
    return rep;
}

inline CMatrix evolve_to(const Superoperator& l, const CMatrix& rho0, double tau,
                         const PropagatorOptions& opt = {}) {
    if (tau < 0.0) throw std::invalid_argument("evolve_to: negative time");
    return devectorize(propagator(l.matrix, tau, opt) * vectorize(rho0), rho0.rows());
}

// Fixed-step classical RK4 on d vec(rho)/dt = L vec(rho); requires
// dt <= 0.1 / ||L||_F. The last step is shortened to land on tau.
inline CMatrix rk4_evolve(const Superoperator& l, const CMatrix& rho0, double tau, double dt) {
    if (tau < 0.0 || !(dt > 0.0)) throw std::invalid_argument("rk4_evolve: need tau >= 0, dt > 0");
    const double nrm = l.matrix.norm_fro();
    if (nrm > 0.0 && dt > 0.1 / nrm) throw StepTooLarge("rk4_evolve: dt exceeds 0.1/||L||");
    const std::size_t n = l.matrix.rows();
    const CMatrix v0 = vectorize(rho0);
    std::vector<cplx> y(v0.data().begin(), v0.data().end());
    std::vector<cplx> k1(n), k2(n), k3(n), k4(n), tmp(n);
    auto apply = [&](const std::vector<cplx>& in, std::vector<cplx>& out) {
        for (std::size_t i = 0; i < n; ++i) {
            cplx s{};
            for (std::size_t j = 0; j < n; ++j) s += l.matrix(i, j) * in[j];
            out[i] = s;
        }
    };
    const auto steps = static_cast<std::size_t>(std::ceil(tau / dt - 1e-9));
    for (std::size_t s = 0; s < steps; ++s) {
        const double h = std::min(dt, tau - static_cast<double>(s) * dt);
        apply(y, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        apply(tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        apply(tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
        apply(tmp, k4);
        for (std::size_t i = 0; i < n; ++i) y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return devectorize(CMatrix(n, 1, std::move(y)), rho0.rows());
}

} // namespace qbatt
