// observe.hpp — Battery figures of merit evaluated on the bare-basis state:
// reduced battery state, energy, ergotropy (closed form and passive-state
// construction), efficiency, Wootters concurrence and tomogram magnitudes.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>

#include "qbatt/error.hpp"
#include "qbatt/matcore.hpp"
#include "qbatt/model.hpp"

namespace qbatt {

struct BatteryMetrics {
    double energy = 0.0;     // E_B, units of omega
    double ergotropy = 0.0;  // extractable work, units of omega
    double efficiency = 0.0; // ergotropy / energy
    double n_pop = 0.0;      // <sigma_z> of the battery
    cplx coh{0.0, 0.0};      // M12 + M34
};

// Battery marginal in {|e>, |g>}: trace over the charger.
inline CMatrix reduce_battery(const CMatrix& rho) {
    return CMatrix{{rho(EE, EE) + rho(GE, GE), rho(EE, EG) + rho(GE, GG)},
                   {rho(EG, EE) + rho(GG, GE), rho(GG, GG) + rho(EG, EG)}};
}

inline CMatrix battery_hamiltonian(double omega) { return CMatrix{{omega, 0.0}, {0.0, 0.0}}; }

// Energy of the passive state: populations in descending order paired with
// energies in ascending order.
inline double passive_energy(const CMatrix& rho, const CMatrix& h, double hermitian_tol = 1e-10) {
    if (rho.rows() != h.rows()) throw std::invalid_argument("passive_energy: dimension mismatch");
    auto r = eig_hermitian(rho, hermitian_tol).values;
    const auto e = eig_hermitian(h, hermitian_tol).values;
    std::sort(r.begin(), r.end(), std::greater<>());
    double sum = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) sum += r[k] * e[k];
    return sum;
}

inline double ergotropy(const CMatrix& rho, const CMatrix& h) {
    return (h * rho).trace().real() - passive_energy(rho, h);
}

inline BatteryMetrics battery_metrics(const CMatrix& rho, double omega = 1.0) {
    BatteryMetrics m;
    m.n_pop = (rho(EE, EE) + rho(GE, GE) - rho(EG, EG) - rho(GG, GG)).real();
    m.coh = rho(EE, EG) + rho(GE, GG);
    m.energy = 0.5 * omega * (m.n_pop + 1.0);
    m.ergotropy = 0.5 * omega * (std::sqrt(m.n_pop * m.n_pop + 4.0 * std::norm(m.coh)) + m.n_pop);
    m.efficiency = m.energy <= 1e-12 ? 0.0 : m.ergotropy / m.energy;
    return m;
}

// Wootters concurrence; the eigenvalues of rho (sy sy) rho* (sy sy) are taken
// from the Hermitian form sqrt(rho) rho~ sqrt(rho).
inline double concurrence(const CMatrix& rho_in) {
    const CMatrix rho = 0.5 * (rho_in + rho_in.adjoint());
    const CMatrix yy = kron(ops::sigma_y(), ops::sigma_y());
    const CMatrix flipped = yy * rho.conj() * yy;

    const auto er = eig_hermitian(rho);
    std::array<cplx, kDim> root{};
    for (std::size_t k = 0; k < kDim; ++k) root[k] = std::sqrt(std::max(er.values[k], 0.0));
    const CMatrix sq = er.vectors * CMatrix::diagonal(root) * er.vectors.adjoint();
    CMatrix r = sq * flipped * sq;
    r = 0.5 * (r + r.adjoint());

    auto l = eig_hermitian(r).values;
    std::array<double, kDim> s{};
    for (std::size_t k = 0; k < kDim; ++k) s[k] = std::sqrt(std::max(l[k], 0.0));
    std::sort(s.begin(), s.end(), std::greater<>());
    return std::clamp(s[0] - s[1] - s[2] - s[3], 0.0, 1.0);
}

struct Tomogram {
    std::array<double, kDim * kDim> magnitudes{}; // row-major |M_ij|

    double operator()(std::size_t i, std::size_t j) const { return magnitudes[i * kDim + j]; }

    static std::string label(std::size_t i, std::size_t j) {
        static constexpr std::array<std::string_view, kDim> names{"ee", "eg", "ge", "gg"};
        return "t_" + std::string(names[i]) + "_" + std::string(names[j]);
    }
};

inline Tomogram tomogram(const CMatrix& rho) {
    Tomogram t;
    for (std::size_t i = 0; i < kDim; ++i)
        for (std::size_t j = 0; j < kDim; ++j) t.magnitudes[i * kDim + j] = std::abs(rho(i, j));
    return t;
}

} // namespace qbatt
