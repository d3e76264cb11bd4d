// test_spectra.cpp — Liouvillian spectrum, gap, steady state, propagation and
// the RK4 cross-check.

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "qbatt/spectra.hpp"
#include "test_util.hpp"

using namespace qbatt;

namespace {

BathPair bosons(double t1, double t2) {
    BathPair b;
    b.charger.temperature = t1;
    b.battery.temperature = t2;
    return b;
}

} // namespace

TEST(Spectra, SortOrder) {
    std::vector<cplx> v{{-1.0, 0.0}, {0.0, 0.0}, {-0.5, 1.0}, {-0.5, -1.0}};
    sort_by_real_part(v);
    EXPECT_EQ(v[0], cplx(0.0, 0.0));
    EXPECT_EQ(v[1], cplx(-0.5, -1.0));
    EXPECT_EQ(v[2], cplx(-0.5, 1.0));
}

TEST(Spectra, ResonantRedfieldIsBistable) {
    const auto l = redfield_general(ModelParams::from_detuning(0.0, 0.0, 0.5), bosons(1.0, 1.0));
    const auto rep = analyze(l);
    EXPECT_LT(rep.gap, 1e-8);
    EXPECT_GE(rep.kernel_dim, 2u);
    EXPECT_TRUE(rep.bistable);
    EXPECT_FALSE(rep.steady_state.has_value());
}

TEST(Spectra, DetunedRedfieldHasUniqueSteadyState) {
    const auto l = redfield_general(ModelParams::from_detuning(1.0, 0.0, 0.5), bosons(1.5, 0.5));
    const auto rep = analyze(l);
    EXPECT_GT(rep.gap, 1e-3);
    ASSERT_EQ(rep.kernel_dim, 1u);
    ASSERT_TRUE(rep.steady_state);
    const CMatrix& ss = *rep.steady_state;
    EXPECT_NEAR(std::abs(ss.trace() - 1.0), 0.0, 1e-12);
    EXPECT_LT(devectorize(l.matrix * vectorize(ss)).max_abs(), 1e-10);
    EXPECT_GT(eig_hermitian(ss).values.front(), -1e-10);
}

TEST(Spectra, SpectrumMatchesEigen) {
    const auto l = redfield_general(ModelParams::from_detuning(-1.3, 0.2, 0.7), bosons(0.8, 1.6));
    auto mine = analyze(l).eigenvalues;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ref(test::to_eigen(l.matrix));
    std::vector<cplx> theirs(ref.eigenvalues().data(), ref.eigenvalues().data() + 16);
    sort_by_real_part(theirs);
    for (std::size_t k = 0; k < 16; ++k) EXPECT_NEAR(mine[k].real(), theirs[k].real(), 1e-9);
}

TEST(Spectra, EvolveMatchesEigenExponential) {
    std::mt19937 rng(31);
    const auto l = redfield_general(ModelParams::from_detuning(0.6, 0.0, 0.5), bosons(1.2, 0.9));
    const CMatrix rho0 = test::random_density(4, rng);
    const CMatrix mine = evolve_to(l, rho0, 7.5);
    const Eigen::MatrixXcd prop = (7.5 * test::to_eigen(l.matrix)).exp();
    const CMatrix ref = devectorize(test::from_eigen(prop * test::to_eigen(vectorize(rho0))));
    EXPECT_LT((mine - ref).max_abs(), 1e-10);
    EXPECT_EQ(evolve_to(l, rho0, 0.0), rho0);
}

TEST(Spectra, Rk4AgreesWithPropagator) {
    std::mt19937 rng(32);
    const auto l = lindblad_pheno(ModelParams::from_detuning(0.4, 0.1, 0.5), bosons(1.0, 0.7));
    const CMatrix rho0 = test::random_density(4, rng);
    const double dt = 0.05 / l.matrix.norm_fro();
    EXPECT_LT((rk4_evolve(l, rho0, 10.0, dt) - evolve_to(l, rho0, 10.0)).max_abs(), 1e-8);
    EXPECT_THROW(rk4_evolve(l, rho0, 1.0, 1.0), StepTooLarge);
}

TEST(Spectra, LongTimeReachesSteadyState) {
    const auto l = redfield_general(ModelParams::from_detuning(2.0, 0.0, 0.5), bosons(1.0, 1.0));
    const auto rep = analyze(l);
    ASSERT_TRUE(rep.steady_state);
    const CMatrix rho = evolve_to(l, density(StateSpec::product_eg().amplitudes()), 20000.0);
    EXPECT_LT((rho - *rep.steady_state).max_abs(), 1e-8);
}
