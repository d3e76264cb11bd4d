// model.hpp — Driven charger-battery Hamiltonian in the rotating frame, its
// eigensystem (closed form at resonance, numeric otherwise) and the basis
// changes between bare and dressed frames.
//
// Basis order everywhere: |ee>, |eg>, |ge>, |gg>, charger first.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <variant>

#include "qbatt/error.hpp"
#include "qbatt/matcore.hpp"

namespace qbatt {

inline constexpr std::size_t kDim = 4;

enum BareIndex : std::size_t { EE = 0, EG = 1, GE = 2, GG = 3 };

using Amplitudes = std::array<cplx, kDim>;

namespace ops {

inline CMatrix identity2() { return CMatrix::identity(2); }
inline CMatrix sigma_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
inline CMatrix sigma_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline CMatrix sigma_y() { return {{0.0, -I_UNIT}, {I_UNIT, 0.0}}; }
// sigma_+ = |e><g| with |e> first.
inline CMatrix sigma_plus() { return {{0.0, 1.0}, {0.0, 0.0}}; }
inline CMatrix sigma_minus() { return {{0.0, 0.0}, {1.0, 0.0}}; }

inline CMatrix on_charger(const CMatrix& op) { return kron(op, identity2()); }
inline CMatrix on_battery(const CMatrix& op) { return kron(identity2(), op); }

// |i><j| in whatever basis the caller is working in.
inline CMatrix projector(std::size_t i, std::size_t j, std::size_t n = kDim) {
    CMatrix t(n, n);
    t(i, j) = 1.0;
    return t;
}

} // namespace ops

// All frequencies in units of the charger-battery coupling.
struct ModelParams {
    double delta1 = 0.0;        // charger detuning omega_1 - omega_d
    double delta2 = 0.0;        // battery detuning omega_2 - omega_d
    double coupling = 1.0;      // exchange coupling lambda
    double drive = 0.5;         // driving strength F
    double omega_d = 5.0;       // drive frequency (frame bookkeeping)
    double omega_battery = 1.0; // energy scale of the battery Hamiltonian

    double delta() const noexcept { return delta1 - delta2; }
    double delta_bar() const noexcept { return 0.5 * (delta1 + delta2); }

    static ModelParams from_detuning(double delta, double delta_bar, double drive,
                                     double coupling = 1.0) {
        ModelParams p;
        p.delta1 = delta_bar + 0.5 * delta;
        p.delta2 = delta_bar - 0.5 * delta;
        p.drive = drive;
        p.coupling = coupling;
        return p;
    }

    bool resonant() const noexcept { return delta1 == 0.0 && delta2 == 0.0; }

    void validate() const {
        if (!(coupling > 0.0)) throw DomainError("ModelParams: coupling must be positive");
        if (!(drive >= 0.0)) throw DomainError("ModelParams: drive must be non-negative");
        if (!(omega_battery > 0.0)) throw DomainError("ModelParams: omega_battery must be positive");
    }
};

// H = (D1/2) sz(1) + (D2/2) sz(2) + lambda (s+ s- + s- s+) + (F/2) sx(1)
inline CMatrix hamiltonian(const ModelParams& p) {
    using namespace ops;
    CMatrix h = 0.5 * p.delta1 * on_charger(sigma_z());
    h += 0.5 * p.delta2 * on_battery(sigma_z());
    h += p.coupling * (kron(sigma_plus(), sigma_minus()) + kron(sigma_minus(), sigma_plus()));
    h += 0.5 * p.drive * on_charger(sigma_x());
    return h;
}

// Dressed eigensystem. Row i of u is the eigen-bra <E_i| in the bare basis, so
// |E_i> = sum_b conj(u[i,b]) |b>, rho_eigen = u rho_bare u^dagger.
struct EigenSystem {
    std::array<double, kDim> energies{}; // descending
    CMatrix u = CMatrix::identity(kDim);

    CMatrix to_eigen(const CMatrix& bare_op) const { return u * bare_op * u.adjoint(); }
    CMatrix to_bare(const CMatrix& eigen_op) const { return u.adjoint() * eigen_op * u; }

    // |E_i> as a column in the bare basis.
    CMatrix ket(std::size_t i) const {
        CMatrix k(kDim, 1);
        for (std::size_t b = 0; b < kDim; ++b) k[b] = std::conj(u(i, b));
        return k;
    }

    double spacing(std::size_t m, std::size_t n) const { return energies[m] - energies[n]; }
};

// Closed-form quantities of the resonant spectrum.
struct ResonantConstants {
    double omega_plus;
    double omega_minus;
    double g_plus;
    double g_minus;
    double k_plus;
    double k_minus;
    double m; // sqrt(F^2 + lambda^2)
};

inline ResonantConstants resonant_constants(const ModelParams& p) {
    const double lam = p.coupling, f = p.drive;
    const double m = std::sqrt(f * f + lam * lam);
    const double wp = 0.5 * (m + lam), wm = 0.5 * (m - lam);
    return {wp,
            wm,
            std::sqrt(f * f + lam * lam + lam * m),
            std::sqrt(f * f + lam * lam - lam * m),
            std::sqrt(f * f + 2.0 * lam * wp),
            std::sqrt(f * f - 2.0 * lam * wm),
            m};
}

inline EigenSystem diagonalize_resonant(const ModelParams& p) {
    if (!p.resonant()) {
        throw ResonanceRequired("diagonalize_resonant: requires delta1 == delta2 == 0");
    }
    p.validate();
    if (p.drive == 0.0) {
        throw DegenerateSpectrum("diagonalize_resonant: F = 0 leaves E2 == E3");
    }
    const auto c = resonant_constants(p);
    const double f2 = 0.5 * p.drive;
    EigenSystem es;
    es.energies = {c.omega_plus, c.omega_minus, -c.omega_minus, -c.omega_plus};
    es.u = CMatrix{
        {f2 / c.g_plus, c.omega_plus / c.g_plus, c.omega_plus / c.g_plus, f2 / c.g_plus},
        {-f2 / c.g_minus, c.omega_minus / c.g_minus, -c.omega_minus / c.g_minus, f2 / c.g_minus},
        {f2 / c.g_minus, -c.omega_minus / c.g_minus, -c.omega_minus / c.g_minus, f2 / c.g_minus},
        {-f2 / c.g_plus, -c.omega_plus / c.g_plus, c.omega_plus / c.g_plus, f2 / c.g_plus},
    };
    return es;
}

// Numeric diagonalization. Each eigen-bra gets the phase that makes its largest
// component real positive; among components tied within 1e-9 the last wins,
// which reproduces the closed-form matrix at resonance.
inline EigenSystem diagonalize_general(const ModelParams& p, double degeneracy_tol = 1e-10) {
    p.validate();
    const auto eh = eig_hermitian(hamiltonian(p));
    EigenSystem es;
    for (std::size_t i = 0; i < kDim; ++i) {
        const std::size_t k = kDim - 1 - i; // ascending -> descending
        es.energies[i] = eh.values[k];
        double big = 0.0;
        for (std::size_t b = 0; b < kDim; ++b) big = std::max(big, std::abs(eh.vectors(b, k)));
        std::size_t pick = 0;
        for (std::size_t b = 0; b < kDim; ++b) {
            if (std::abs(eh.vectors(b, k)) >= big - 1e-9) pick = b;
        }
        const cplx z = eh.vectors(pick, k);
        const cplx phase = std::abs(z) / z;
        for (std::size_t b = 0; b < kDim; ++b) es.u(i, b) = std::conj(phase * eh.vectors(b, k));
    }
    for (std::size_t i = 0; i + 1 < kDim; ++i) {
        if (es.energies[i] - es.energies[i + 1] < degeneracy_tol) {
            throw DegenerateSpectrum("diagonalize_general: coinciding eigen energies");
        }
    }
    return es;
}

// Pure initial states.
class StateSpec {
public:
    struct ProductEG {};
    struct ProductGE {};
    struct Bloch {
        double theta;
        double phi;
    };

    static StateSpec product_eg() { return StateSpec(ProductEG{}); }
    static StateSpec product_ge() { return StateSpec(ProductGE{}); }
    // cos(theta)|eg> + sin(theta) e^{i phi}|ge>
    static StateSpec bloch(double theta, double phi) { return StateSpec(Bloch{theta, phi}); }

    static StateSpec explicit_amplitudes(const Amplitudes& a) {
        double n = 0.0;
        for (const auto& z : a) n += std::norm(z);
        if (std::abs(n - 1.0) > 1e-12) {
            throw DomainError("StateSpec: amplitudes are not normalized");
        }
        return StateSpec(a);
    }

    Amplitudes amplitudes() const {
        Amplitudes a{};
        if (std::holds_alternative<ProductEG>(kind_)) {
            a[EG] = 1.0;
        } else if (std::holds_alternative<ProductGE>(kind_)) {
            a[GE] = 1.0;
        } else if (const auto* b = std::get_if<Bloch>(&kind_)) {
            a[EG] = std::cos(b->theta);
            a[GE] = std::sin(b->theta) * std::exp(I_UNIT * b->phi);
        } else {
            a = std::get<Amplitudes>(kind_);
        }
        return a;
    }

    const std::variant<ProductEG, ProductGE, Bloch, Amplitudes>& kind() const { return kind_; }

private:
    template <class K>
    explicit StateSpec(K k) : kind_(std::move(k)) {}

    std::variant<ProductEG, ProductGE, Bloch, Amplitudes> kind_;
};

// a_i = sum_b u[i,b] c_b = <E_i|psi>
inline Amplitudes to_eigen_basis(const Amplitudes& bare, const EigenSystem& es) {
    Amplitudes out{};
    for (std::size_t i = 0; i < kDim; ++i)
        for (std::size_t b = 0; b < kDim; ++b) out[i] += es.u(i, b) * bare[b];
    return out;
}

inline Amplitudes to_eigen_basis(const StateSpec& s, const EigenSystem& es) {
    return to_eigen_basis(s.amplitudes(), es);
}

inline Amplitudes to_bare_basis(const Amplitudes& eigen, const EigenSystem& es) {
    Amplitudes out{};
    for (std::size_t b = 0; b < kDim; ++b)
        for (std::size_t i = 0; i < kDim; ++i) out[b] += std::conj(es.u(i, b)) * eigen[i];
    return out;
}

inline CMatrix density(const Amplitudes& psi) {
    CMatrix rho(kDim, kDim);
    for (std::size_t i = 0; i < kDim; ++i)
        for (std::size_t j = 0; j < kDim; ++j) rho(i, j) = psi[i] * std::conj(psi[j]);
    return rho;
}

// U1(tau) = exp[i (sz(1) + sz(2)) tau] = diag(e^{2i tau}, 1, 1, e^{-2i tau}).
inline CMatrix frame_phase(double tau) {
    CMatrix u1 = CMatrix::identity(kDim);
    u1(EE, EE) = std::exp(2.0 * I_UNIT * tau);
    u1(GG, GG) = std::exp(-2.0 * I_UNIT * tau);
    return u1;
}

// rho_bare = U1(tau) u^dagger rho_eigen u U1(tau)^dagger
inline CMatrix to_bare_frame(const CMatrix& rho_eigen, const EigenSystem& es, double tau) {
    const CMatrix u1 = frame_phase(tau);
    return u1 * es.to_bare(rho_eigen) * u1.adjoint();
}

} // namespace qbatt
