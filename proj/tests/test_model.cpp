// test_model.cpp — Hamiltonian, closed-form vs numeric dressed basis, operator
// expansion coefficients and basis/frame transforms.

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <numbers>
#include <random>

#include "qbatt/liouville.hpp"
#include "qbatt/model.hpp"
#include "test_util.hpp"

using namespace qbatt;

namespace {

ModelParams resonant(double f, double lam = 1.0) { return ModelParams::from_detuning(0.0, 0.0, f, lam); }

} // namespace

TEST(Model, RaisingProductMovesExcitation) {
    const CMatrix op = kron(ops::sigma_plus(), ops::sigma_minus());
    CMatrix ge(4, 1);
    ge[GE] = 1.0;
    const CMatrix out = op * ge;
    for (std::size_t b = 0; b < 4; ++b) EXPECT_EQ(out[b], cplx(b == EG ? 1.0 : 0.0, 0.0));
}

TEST(Model, HamiltonianIsHermitian) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 50; ++k) {
        const auto p = ModelParams::from_detuning(u(rng), u(rng), std::abs(u(rng)));
        EXPECT_LE(hermiticity_defect(hamiltonian(p)), 1e-14);
    }
}

TEST(Model, ResonantSpectrumValues) {
    // lambda = 1, F = 0.5: omega_pm = (sqrt(1.25) pm 1)/2
    const auto es = diagonalize_general(resonant(0.5));
    EXPECT_NEAR(es.energies[0], 1.0590169943749475, 1e-12);
    EXPECT_NEAR(es.energies[1], 0.0590169943749474, 1e-12);
    EXPECT_NEAR(es.energies[2], -0.0590169943749474, 1e-12);
    EXPECT_NEAR(es.energies[3], -1.0590169943749475, 1e-12);
}

TEST(Model, ClosedFormIsUnitaryAndDiagonalizes) {
    for (double f : {0.05, 0.5, 1.0, 3.0}) {
        const auto p = resonant(f);
        const auto es = diagonalize_resonant(p);
        EXPECT_LT((es.u * es.u.adjoint() - CMatrix::identity(4)).max_abs(), 1e-12);
        const CMatrix d = es.to_eigen(hamiltonian(p));
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                EXPECT_NEAR(std::abs(d(i, j) - (i == j ? cplx(es.energies[i]) : cplx{})), 0.0, 1e-12);
    }
}

TEST(Model, NumericMatchesClosedFormIncludingPhases) {
    for (double f : {0.05, 0.3, 0.5, 1.7, 3.0}) {
        const auto a = diagonalize_resonant(resonant(f));
        const auto b = diagonalize_general(resonant(f));
        for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(a.energies[i], b.energies[i], 1e-12);
        EXPECT_LT((a.u - b.u).max_abs(), 1e-10) << "F = " << f;
    }
}

TEST(Model, GeneralReconstructsHamiltonian) {
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int k = 0; k < 50; ++k) {
        const auto p = ModelParams::from_detuning(u(rng), u(rng), 0.05 + std::abs(u(rng)));
        const auto es = diagonalize_general(p);
        std::array<cplx, 4> e{};
        for (std::size_t i = 0; i < 4; ++i) e[i] = es.energies[i];
        EXPECT_LT((es.to_bare(CMatrix::diagonal(e)) - hamiltonian(p)).max_abs(), 1e-9);
        // oracle: Eigen's Hermitian solver
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ref(test::to_eigen(hamiltonian(p)));
        for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(es.energies[i], ref.eigenvalues()[3 - i], 1e-12);
    }
}

TEST(Model, DegenerateSpectrumRejected) {
    EXPECT_THROW(diagonalize_resonant(resonant(0.0)), DegenerateSpectrum);
    EXPECT_THROW(diagonalize_general(resonant(0.0)), DegenerateSpectrum);
    EXPECT_THROW(diagonalize_resonant(ModelParams::from_detuning(0.5, 0.0, 0.5)), ResonanceRequired);
}

TEST(Model, OperatorExpansionAtResonance) {
    const double f = 0.5, m = std::hypot(f, 1.0);
    const auto chi = chi_coefficients(diagonalize_general(resonant(f)));
    // charger: (F/M)(t11 + t22 - t33 - t44) + (1/M)(t13 - t24 + h.c.)
    RealMatrix4 c1{}, c2{};
    c1[0][0] = c1[1][1] = f / m;
    c1[2][2] = c1[3][3] = -f / m;
    c1[0][2] = c1[2][0] = 1.0 / m;
    c1[1][3] = c1[3][1] = -1.0 / m;
    // battery: (F/M)(t11 - t22 - t33 + t44) + (1/M)(t13 + t24 + h.c.)
    c2[0][0] = c2[3][3] = f / m;
    c2[1][1] = c2[2][2] = -f / m;
    c2[0][2] = c2[2][0] = 1.0 / m;
    c2[1][3] = c2[3][1] = 1.0 / m;
    double norm1 = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            EXPECT_NEAR(chi[0][i][j], c1[i][j], 1e-10) << i << j;
            EXPECT_NEAR(chi[1][i][j], c2[i][j], 1e-10) << i << j;
            norm1 += chi[0][i][j] * chi[0][i][j];
        }
    EXPECT_NEAR(norm1, 4.0, 1e-12);
}

TEST(Model, EgInEigenBasis) {
    const auto p = resonant(0.5);
    const auto c = resonant_constants(p);
    const auto a = to_eigen_basis(StateSpec::product_eg(), diagonalize_general(p));
    EXPECT_NEAR(std::abs(a[0] - c.omega_plus / c.g_plus), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(a[1] - c.omega_minus / c.g_minus), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(a[2] + c.omega_minus / c.g_minus), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(a[3] + c.omega_plus / c.g_plus), 0.0, 1e-12);
}

TEST(Model, EigenBasisRoundTripAndNorm) {
    std::mt19937 rng(13);
    const auto es = diagonalize_general(ModelParams::from_detuning(1.3, -0.4, 0.8));
    for (std::size_t i = 0; i < 4; ++i) {
        Amplitudes bare{};
        const CMatrix k = es.ket(i);
        for (std::size_t b = 0; b < 4; ++b) bare[b] = k[b];
        const auto e = to_eigen_basis(bare, es);
        for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(e[j] - (i == j ? 1.0 : 0.0)), 0.0, 1e-12);
    }
    const CMatrix r = test::random_matrix(4, 1, rng);
    Amplitudes a{};
    for (std::size_t b = 0; b < 4; ++b) a[b] = r[b] / r.norm_fro();
    const auto e = to_eigen_basis(a, es);
    double n = 0.0;
    for (const auto& z : e) n += std::norm(z);
    EXPECT_NEAR(n, 1.0, 1e-12);
    const auto back = to_bare_basis(e, es);
    for (std::size_t b = 0; b < 4; ++b) EXPECT_NEAR(std::abs(back[b] - a[b]), 0.0, 1e-12);
}

TEST(Model, SymmetricStateAtZeroDrive) {
    // F = 0: the symmetric single-excitation state is an eigenstate.
    const auto p = ModelParams::from_detuning(0.0, 0.0, 0.0);
    const auto eh = eig_hermitian(hamiltonian(p));
    Amplitudes s{};
    s[EG] = s[GE] = 1.0 / std::sqrt(2.0);
    const CMatrix h = hamiltonian(p);
    CMatrix v(4, 1);
    for (std::size_t b = 0; b < 4; ++b) v[b] = s[b];
    EXPECT_LT((h * v - 1.0 * v).max_abs(), 1e-14);
    EXPECT_NEAR(eh.values.back(), 1.0, 1e-12);
}

TEST(Model, StateSpecs) {
    const auto b = StateSpec::bloch(std::numbers::pi / 4, std::numbers::pi / 2).amplitudes();
    EXPECT_NEAR(std::abs(b[EG] - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(b[GE] - cplx(0.0, 1.0 / std::sqrt(2.0))), 0.0, 1e-15);
    EXPECT_THROW(StateSpec::explicit_amplitudes({1.0, 1.0, 0.0, 0.0}), DomainError);
    const auto rho = density(StateSpec::product_ge().amplitudes());
    EXPECT_EQ(rho(GE, GE), cplx(1.0, 0.0));
}

TEST(Model, FramePhaseProperties) {
    std::mt19937 rng(14);
    const CMatrix rho = test::random_density(4, rng);
    const auto es = diagonalize_general(ModelParams::from_detuning(0.7, 0.0, 0.5));
    const CMatrix at0 = to_bare_frame(rho, es, 0.0);
    EXPECT_LT((at0 - es.to_bare(rho)).max_abs(), 1e-14);
    const double coh0 = std::abs(at0(EE, EG) + at0(GE, GG));
    for (double tau : {0.3, 17.0, 20000.0}) {
        const CMatrix r = to_bare_frame(rho, es, tau);
        EXPECT_NEAR(std::abs(r.trace() - 1.0), 0.0, 1e-13);
        EXPECT_NEAR(std::abs(r(EE, EG) + r(GE, GG)), coh0, 1e-12);
        const auto e1 = eig_hermitian(0.5 * (r + r.adjoint())).values;
        const auto e0 = eig_hermitian(0.5 * (rho + rho.adjoint())).values;
        for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(e1[k], e0[k], 1e-12);
    }
}
