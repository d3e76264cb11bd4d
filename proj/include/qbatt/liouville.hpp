// liouville.hpp — 16x16 Liouvillians of the charger-battery system acting on
// column-stacked vec(rho):
//   * phenomenological Lindblad equation with local dissipators (bare basis),
//   * resonant Redfield equation in closed form (eigen basis),
//   * general Redfield equation beyond the secular approximation (eigen basis).

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string_view>

#include "qbatt/error.hpp"
#include "qbatt/matcore.hpp"
#include "qbatt/model.hpp"
#include "qbatt/reservoir.hpp"

namespace qbatt {

inline constexpr std::size_t kLiouvilleDim = kDim * kDim;

enum class Basis { bare, eigen };
enum class EquationKind { lindblad_pheno, redfield_resonant, redfield_general };

inline std::string_view to_string(EquationKind k) {
    switch (k) {
    case EquationKind::lindblad_pheno: return "lindblad-pheno";
    case EquationKind::redfield_resonant: return "redfield-resonant";
    case EquationKind::redfield_general: return "redfield-general";
    }
    return "?";
}

struct Superoperator {
    CMatrix matrix;
    Basis basis = Basis::bare;
    EquationKind kind = EquationKind::lindblad_pheno;
    // Frame the matrix is expressed in; identity transform for bare-basis builders.
    EigenSystem frame{};
};

// Resonant Redfield rates, all evaluated at the level spacing M.
struct RateSet {
    double gamma1 = 0.0; // charger absorption  (lambda^2/M^2) J N
    double gamma2 = 0.0; // battery absorption
    double Gamma1 = 0.0; // charger emission    (lambda^2/M^2) J (N or 1-N partner)
    double Gamma2 = 0.0; // battery emission
};

// ---------------------------------------------------------------------------
// Vectorization: vec(rho)[i + n j] = rho(i, j), so vec(A rho B) = (B^T (x) A) vec(rho).

inline CMatrix vectorize(const CMatrix& rho) {
    const std::size_t n = rho.rows();
    CMatrix v(n * rho.cols(), 1);
    for (std::size_t j = 0; j < rho.cols(); ++j)
        for (std::size_t i = 0; i < n; ++i) v[i + n * j] = rho(i, j);
    return v;
}

inline CMatrix devectorize(const CMatrix& v, std::size_t n = kDim) {
    if (v.size() != n * n) throw std::invalid_argument("devectorize: length is not n^2");
    CMatrix rho(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) rho(i, j) = v[i + n * j];
    return rho;
}

namespace superop {

// rho -> A rho
inline CMatrix left(const CMatrix& a) { return kron(CMatrix::identity(a.rows()), a); }
// rho -> rho B
inline CMatrix right(const CMatrix& b) { return kron(b.transpose(), CMatrix::identity(b.rows())); }
// rho -> A rho B
inline CMatrix sandwich(const CMatrix& a, const CMatrix& b) { return kron(b.transpose(), a); }
// rho -> -i [H, rho]
inline CMatrix commutator(const CMatrix& h) { return -I_UNIT * (left(h) - right(h)); }
// rho -> 2 A rho A^dag - A^dag A rho - rho A^dag A
inline CMatrix dissipator(const CMatrix& a) {
    const CMatrix ad = a.adjoint();
    const CMatrix ada = ad * a;
    return 2.0 * sandwich(a, ad) - left(ada) - right(ada);
}

} // namespace superop

// ---------------------------------------------------------------------------
// Phenomenological Lindblad equation. Bath functions are sampled at the bare
// transition frequencies omega_i = Delta_i + omega_d.

inline Superoperator lindblad_pheno(const ModelParams& p, const BathPair& baths) {
    p.validate();
    baths.validate();
    using namespace ops;
    CMatrix l = superop::commutator(hamiltonian(p));
    const std::array<double, 2> omega{p.delta1 + p.omega_d, p.delta2 + p.omega_d};
    const std::array<CMatrix, 2> raise{on_charger(sigma_plus()), on_battery(sigma_plus())};
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& r = baths[i];
        if (r.statistics == Statistics::boson && omega[i] <= 0.0) {
            throw DomainError("lindblad_pheno: bare transition frequency must be positive for bosons");
        }
        const double j = spectral_density(r, omega[i]);
        if (j == 0.0) continue;
        l += (j * occupation(r, omega[i])) * superop::dissipator(raise[i]);
        l += (j * co_occupation(r, omega[i])) * superop::dissipator(raise[i].adjoint());
    }
    return {std::move(l), Basis::bare, EquationKind::lindblad_pheno, EigenSystem{}};
}

// ---------------------------------------------------------------------------
// Resonant Redfield equation.

inline RateSet resonant_rates(const ModelParams& p, const BathPair& baths) {
    const double m = std::hypot(p.drive, p.coupling);
    const double pre = (p.coupling * p.coupling) / (m * m);
    const double j1 = spectral_density(baths.charger, m);
    const double j2 = spectral_density(baths.battery, m);
    return {pre * j1 * occupation(baths.charger, m), pre * j2 * occupation(baths.battery, m),
            pre * j1 * co_occupation(baths.charger, m), pre * j2 * co_occupation(baths.battery, m)};
}

// Closed-form dissipator in the dressed basis. Only the 1<->3 and 2<->4
// transitions (spacing M) couple to the reservoirs; the last two lines are the
// non-secular terms that vanish for identical reservoirs.
inline Superoperator redfield_resonant(const ModelParams& p, const BathPair& baths) {
    if (!p.resonant()) {
        throw ResonanceRequired("redfield_resonant: requires delta1 == delta2 == 0");
    }
    baths.validate();
    const EigenSystem es = diagonalize_resonant(p);
    const RateSet r = resonant_rates(p, baths);
    using ops::projector;
    using namespace superop;
    auto t = [](std::size_t i, std::size_t j) { return projector(i - 1, j - 1); };

    std::array<cplx, kDim> e{};
    for (std::size_t i = 0; i < kDim; ++i) e[i] = es.energies[i];
    CMatrix l = commutator(CMatrix::diagonal(e));

    const CMatrix upper = t(1, 1) + t(2, 2);
    const CMatrix lower = t(3, 3) + t(4, 4);
    l += (r.Gamma1 + r.Gamma2) *
         (2.0 * (sandwich(t(3, 1), t(1, 3)) + sandwich(t(4, 2), t(2, 4))) - left(upper) - right(upper));
    l += (r.gamma1 + r.gamma2) *
         (2.0 * (sandwich(t(1, 3), t(3, 1)) + sandwich(t(2, 4), t(4, 2))) - left(lower) - right(lower));
    l += (-2.0 * (r.gamma1 - r.gamma2)) * (sandwich(t(1, 3), t(4, 2)) + sandwich(t(2, 4), t(3, 1)));
    l += (-2.0 * (r.Gamma1 - r.Gamma2)) * (sandwich(t(3, 1), t(2, 4)) + sandwich(t(4, 2), t(1, 3)));
    return {std::move(l), Basis::eigen, EquationKind::redfield_resonant, es};
}

// ---------------------------------------------------------------------------
// General Redfield equation.

using RealMatrix4 = std::array<std::array<double, kDim>, kDim>;

// chi[m][i][j] = <E_i| sigma_x^(m) |E_j>, m = 0 charger, 1 battery.
inline std::array<RealMatrix4, 2> chi_coefficients(const EigenSystem& es) {
    using namespace ops;
    const std::array<CMatrix, 2> sx{on_charger(sigma_x()), on_battery(sigma_x())};
    std::array<RealMatrix4, 2> chi{};
    for (std::size_t m = 0; m < 2; ++m) {
        const CMatrix c = es.to_eigen(sx[m]);
        for (std::size_t i = 0; i < kDim; ++i)
            for (std::size_t j = 0; j < kDim; ++j) {
                if (std::abs(c(i, j).imag()) > 1e-10) {
                    throw DomainError("chi_coefficients: eigenbasis is not real");
                }
                chi[m][i][j] = c(i, j).real();
            }
    }
    return chi;
}

namespace detail {

// Accumulators for terms built from dressed-basis projectors |a><b|.
struct ProjectorTerms {
    CMatrix& s;

    static std::size_t idx(std::size_t row, std::size_t col) { return row + kDim * col; }

    // rho -> c |a><b| rho |c'><d|  contributes rho(b, c') to output (a, d)
    void sandwich(std::size_t a, std::size_t b, std::size_t c, std::size_t d, cplx coef) {
        s(idx(a, d), idx(b, c)) += coef;
    }
    // rho -> c |a><b| rho
    void left(std::size_t a, std::size_t b, cplx coef) {
        for (std::size_t y = 0; y < kDim; ++y) s(idx(a, y), idx(b, y)) += coef;
    }
    // rho -> c rho |a><b|
    void right(std::size_t a, std::size_t b, cplx coef) {
        for (std::size_t x = 0; x < kDim; ++x) s(idx(x, b), idx(x, a)) += coef;
    }
};

} // namespace detail

// Dissipators D1 (emission-weighted) and D2 (absorption-weighted), summed over
// both reservoirs, all pairs i < j and m < n, with bath functions evaluated at
// the spacing eps_mn = E_m - E_n > 0.
inline Superoperator redfield_general(const ModelParams& p, const BathPair& baths) {
    baths.validate();
    const EigenSystem es = diagonalize_general(p);
    const auto chi = chi_coefficients(es);

    CMatrix l(kLiouvilleDim, kLiouvilleDim);
    detail::ProjectorTerms acc{l};
    for (std::size_t a = 0; a < kDim; ++a) {
        acc.left(a, a, -I_UNIT * es.energies[a]);
        acc.right(a, a, I_UNIT * es.energies[a]);
    }

    for (std::size_t alpha = 0; alpha < 2; ++alpha) {
        const auto& bath = baths[alpha];
        const auto& x = chi[alpha];
        for (std::size_t m = 0; m < kDim; ++m) {
            for (std::size_t n = m + 1; n < kDim; ++n) {
                const double eps = es.spacing(m, n);
                if (!(eps > 0.0)) throw DomainError("redfield_general: non-positive level spacing");
                const double jw = spectral_density(bath, eps);
                if (jw == 0.0) continue;
                const double emit = jw * co_occupation(bath, eps);
                const double absorb = jw * occupation(bath, eps);
                for (std::size_t i = 0; i < kDim; ++i) {
                    for (std::size_t j = i + 1; j < kDim; ++j) {
                        const double c1 = emit * x[j][i] * x[m][n];
                        const double c2 = absorb * x[i][j] * x[n][m];
                        if (c1 != 0.0) {
                            // tau_ji rho tau_mn - rho tau_mn tau_ji, plus its adjoint
                            acc.sandwich(j, i, m, n, c1);
                            if (n == j) acc.right(m, i, -c1);
                            acc.sandwich(n, m, i, j, c1);
                            if (j == n) acc.left(i, m, -c1);
                        }
                        if (c2 != 0.0) {
                            // tau_ij rho tau_nm - rho tau_nm tau_ij, plus its adjoint
                            acc.sandwich(i, j, n, m, c2);
                            if (m == i) acc.right(n, j, -c2);
                            acc.sandwich(m, n, j, i, c2);
                            if (i == m) acc.left(j, n, -c2);
                        }
                    }
                }
            }
        }
    }
    return {std::move(l), Basis::eigen, EquationKind::redfield_general, es};
}

} // namespace qbatt
