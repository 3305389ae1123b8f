#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qdcascade/cascade.hpp"
#include "qdcascade/validation.hpp"

using namespace qdcascade;

TEST(BoseOccupation, ZeroTemperature) { EXPECT_EQ(bose_occupation(2.5, 0.0), 0.0); }

TEST(BoseOccupation, ReferencePoint)
{
    // 1 / expm1(2.5 / 861.7333), evaluated independently
    EXPECT_NEAR(bose_occupation(2.5, 10.0), 344.1935617607677, 1e-9);
}

TEST(BoseOccupation, LnTwoGivesOne)
{
    const double t = 10.0;
    const double s = PhysicalConstants::k_B * t * std::log(2.0);
    EXPECT_NEAR(bose_occupation(s, t), 1.0, 1e-14);
}

TEST(BoseOccupation, SeriesBranchIsContinuous)
{
    const double t = 300.0;
    const double kt = PhysicalConstants::k_B * t;
    for (double x : {0.999e-6, 1.001e-6}) {
        const double n = bose_occupation(x * kt, t);
        EXPECT_NEAR(n / (1.0 / std::expm1(x)), 1.0, 1e-12) << x;
    }
}

TEST(BoseOccupation, DivergentAtZeroSplitting)
{
    EXPECT_TRUE(std::isinf(bose_occupation(0.0, 10.0)));
    EXPECT_THROW(bose_occupation(-1.0, 10.0), ParameterError);
}

TEST(PhononRates, ZeroSplittingKillsRates)
{
    CascadeParams p;
    p.fss = 0.0;
    const auto r = phonon_rates(p);
    EXPECT_EQ(r.gamma12, 0.0);
    EXPECT_EQ(r.gamma21, 0.0);
    EXPECT_TRUE(r.degenerate);
}

TEST(PhononRates, ZeroTemperatureOnlyEmission)
{
    CascadeParams p;
    p.temperature = 0.0;
    const auto r = phonon_rates(p);
    EXPECT_EQ(r.gamma12, 0.0);
    EXPECT_NEAR(r.gamma21, 3.125e-4, 1e-18);
}

TEST(PhononRates, ReferencePoint)
{
    const auto r = phonon_rates(CascadeParams{});
    EXPECT_NEAR(r.gamma12, 0.1075604880502399, 1e-12);
    EXPECT_NEAR(r.gamma21, 0.10787298805023991, 1e-12);
    EXPECT_NEAR(r.gamma12 / r.gamma21, std::exp(-2.5 / (PhysicalConstants::k_B * 10.0)), 1e-14);
}

TEST(PhononRates, SmallSplittingLimitIsFinite)
{
    CascadeParams p;
    p.fss = 1e-9;
    p.temperature = 300.0;
    const auto r = phonon_rates(p);
    EXPECT_TRUE(std::isfinite(r.gamma12));
    // kappa N_B -> kappa0 S^2 k_B T
    EXPECT_NEAR(r.gamma12, p.kappa0 * p.fss * p.fss * PhysicalConstants::k_B * 300.0, 1e-20);
}

TEST(PhononRates, DetailedBalanceAndMonotoneInTemperature)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> s_dist(0.01, 10.0), t_dist(0.1, 500.0);
    for (int k = 0; k < 500; ++k) {
        CascadeParams p;
        p.fss = s_dist(rng);
        p.temperature = t_dist(rng);
        const auto r = phonon_rates(p);
        const double boltz = std::exp(-p.fss / (PhysicalConstants::k_B * p.temperature));
        EXPECT_NEAR(r.gamma12 / r.gamma21, boltz, 1e-12 * boltz);
        EXPECT_GE(r.gamma21, r.gamma12);

        CascadeParams hotter = p;
        hotter.temperature *= 1.1;
        const auto rh = phonon_rates(hotter);
        EXPECT_GE(rh.gamma12, r.gamma12);
        EXPECT_GE(rh.gamma21, r.gamma21);
    }
}

TEST(CascadeParams, ValidationRejectsOutOfDomain)
{
    CascadeParams p;
    p.eta = 1.5;
    EXPECT_THROW(p.validate(), ParameterError);
    p = {};
    p.gamma20 = -1.0;
    EXPECT_THROW(build_liouvillian(p), ParameterError);
    p = {};
    p.temperature = std::nan("");
    EXPECT_THROW(phonon_rates(p), ParameterError);
}

TEST(Liouvillian, NoDynamicsWithoutRatesAndSplitting)
{
    CascadeParams p;
    p.gamma32 = p.gamma31 = p.gamma20 = p.gamma10 = 0.0;
    p.kappa0 = 0.0;
    p.fss = 0.0;
    const auto l = build_liouvillian(p);
    const auto out = l * vectorize(DensityMatrix4::identity());
    for (const auto& x : out) EXPECT_EQ(x, cplx{});
}

TEST(Liouvillian, TracelessGenerator)
{
    std::mt19937_64 rng(12);
    const auto l = build_liouvillian(CascadeParams{});
    for (int k = 0; k < 100; ++k) {
        const auto rho = random_density_matrix(rng);
        EXPECT_LT(std::abs(apply(l, rho).trace()), 1e-14);
    }
}

TEST(Liouvillian, GroundStateStationary)
{
    const auto out = build_liouvillian(CascadeParams{}) * vectorize(DensityMatrix4::unit(0, 0));
    for (const auto& x : out) EXPECT_EQ(x, cplx{});
}

TEST(Liouvillian, BiexcitonDecayMatchesRateEquation)
{
    CascadeParams p;
    p.kappa0 = 0.0;
    const auto rho = apply(expm(build_liouvillian(p) * 0.5), DensityMatrix4::unit(3, 3));
    EXPECT_NEAR(rho(3, 3).real(), std::exp(-3.6 * 0.5), 1e-9);
    // exciton populations from the analytic cascade solution
    const double a = 1.8, b = 1.3, c = 3.6, t = 0.5;
    const double x = a / (c - b) * (std::exp(-b * t) - std::exp(-c * t));
    EXPECT_NEAR(rho(2, 2).real(), x, 1e-9);
    EXPECT_NEAR(rho(1, 1).real(), x, 1e-9);
}

TEST(Liouvillian, PreservesTraceHermiticityPositivity)
{
    std::mt19937_64 rng(13);
    for (int k = 0; k < 1000; ++k) {
        const auto pt = random_point(rng);
        const auto l = build_liouvillian(pt.params);
        const auto rho = random_density_matrix(rng);
        for (double t : {0.1, 1.0, 10.0}) {
            const auto out = apply(expm(l * t), rho);
            ASSERT_NEAR(out.trace().real(), 1.0, 1e-9);
            ASSERT_LT(std::abs(out.trace().imag()), 1e-9);
            ASSERT_LT(hermiticity_defect(out), 1e-10);
            ASSERT_GE(oracle::hermitian_eigenvalues(hermitize(out)).back(), -1e-9);
        }
    }
}

TEST(Liouvillian, BiexcitonEnergyIsObservableNeutral)
{
    CascadeParams a, b;
    b.biexciton_energy = 1234.5;
    const auto ra = apply(expm(build_liouvillian(a) * 0.7), DensityMatrix4::unit(3, 3));
    const auto rb = apply(expm(build_liouvillian(b) * 0.7), DensityMatrix4::unit(3, 3));
    EXPECT_LT((ra - rb).max_abs(), 1e-12);
}

TEST(CoherenceDecay, ReferenceValue)
{
    CascadeParams p;
    p.kappa0 = 0.0;
    const cplx z = exciton_coherence_decay(p);
    EXPECT_NEAR(z.real(), -1.3, 1e-14);
    EXPECT_NEAR(z.imag(), 3.7981686199903186, 1e-12);
}

TEST(CoherenceDecay, ZeroWhenNothingHappens)
{
    CascadeParams p;
    p.fss = 0.0;
    p.gamma20 = p.gamma10 = 0.0;
    EXPECT_EQ(exciton_coherence_decay(p), cplx{});
}

TEST(CoherenceDecay, IsEigenvalueOfCoherenceSector)
{
    std::mt19937_64 rng(14);
    for (int k = 0; k < 200; ++k) {
        const auto pt = random_point(rng);
        const auto l = build_liouvillian(pt.params);
        // |1><2| is an eigenvector: L vec(|1><2|) = z vec(|1><2|)
        const std::size_t idx = vec_index(1, 2);
        const cplx z = exciton_coherence_decay(pt.params);
        for (std::size_t i = 0; i < 16; ++i) {
            const cplx expected = i == idx ? z : cplx{};
            EXPECT_LT(std::abs(l(i, idx) - expected), 1e-10);
        }
    }
}
