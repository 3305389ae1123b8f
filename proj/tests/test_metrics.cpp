#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qdcascade/metrics.hpp"
#include "qdcascade/validation.hpp"

using namespace qdcascade;

namespace {

PolarizationMatrix pm(const DensityMatrix4& m) { return {m, Provenance::pol}; }

DensityMatrix4 bell_phi_plus()
{
    DensityMatrix4 m;
    m(0, 0) = m(0, 3) = m(3, 0) = m(3, 3) = 0.5;
    return m;
}

DensityMatrix4 werner(double p)
{
    DensityMatrix4 m = p * bell_phi_plus();
    m += (1.0 - p) * 0.25 * DensityMatrix4::identity();
    return m;
}

DensityMatrix4 local_rotation(const DensityMatrix4& rho, const Matrix<2>& u, const Matrix<2>& v)
{
    Matrix<4> uv;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l) uv(2 * i + k, 2 * j + l) = u(i, j) * v(k, l);
    return uv * rho * uv.adjoint();
}

} // namespace

TEST(Concurrence, BellStateIsMaximal) { EXPECT_NEAR(concurrence(pm(bell_phi_plus())), 1.0, 1e-10); }

TEST(Concurrence, MaximallyMixedIsZero)
{
    EXPECT_NEAR(concurrence(pm(0.25 * DensityMatrix4::identity())), 0.0, 1e-12);
}

TEST(Concurrence, ProductStateIsZero)
{
    EXPECT_NEAR(concurrence(pm(DensityMatrix4::unit(1, 1))), 0.0, 1e-10);
}

TEST(Concurrence, WernerFamily)
{
    for (double p : {0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0})
        EXPECT_NEAR(concurrence(pm(werner(p))), oracle::werner_concurrence(p), 1e-9) << p;
    EXPECT_NEAR(concurrence(pm(werner(0.5))), 0.25, 1e-9);
}

TEST(Concurrence, MixReferenceExample)
{
    const auto t = mix_total(pm(bell_phi_plus()), 0.91, 0.45);
    EXPECT_NEAR(concurrence(t), 0.47241379310344833, 1e-9);
    EXPECT_NEAR(fidelity_bell(t), 0.7362068965517242, 1e-14);
}

TEST(Concurrence, AgreesWithXOracleOnRandomXStates)
{
    std::mt19937_64 rng(41);
    for (int k = 0; k < 10000; ++k) {
        const auto rho = pm(oracle::random_x_state(rng));
        ASSERT_NEAR(concurrence(rho), concurrence_x_oracle(rho), 1e-8) << k;
    }
}

TEST(Concurrence, LocalUnitaryInvariance)
{
    std::mt19937_64 rng(42);
    for (int k = 0; k < 500; ++k) {
        const auto rho = random_density_matrix(rng);
        const auto rotated = local_rotation(rho, random_unitary2(rng), random_unitary2(rng));
        ASSERT_NEAR(concurrence(pm(rho)), concurrence(pm(hermitize(rotated))), 1e-9);
    }
}

TEST(Concurrence, BoundedOnRandomStates)
{
    std::mt19937_64 rng(43);
    for (int k = 0; k < 1000; ++k) {
        const double c = concurrence(pm(random_density_matrix(rng)));
        EXPECT_GE(c, 0.0);
        EXPECT_LE(c, 1.0);
    }
}

TEST(Concurrence, NonPhysicalInputThrows)
{
    // strongly non-positive input gives complex spectrum of rho Y rho* Y
    DensityMatrix4 m;
    m(0, 1) = 1.0;
    m(1, 2) = 1.0;
    m(2, 0) = 1.0;
    m(3, 3) = 1.0;
    EXPECT_THROW(concurrence(pm(m)), NumericError);
}

TEST(XOracle, RejectsNonXForm)
{
    auto m = bell_phi_plus();
    m(1, 2) = 0.1;
    m(2, 1) = 0.1;
    EXPECT_GT(x_form_defect(m), 0.05);
    EXPECT_THROW(concurrence_x_oracle(pm(m)), FormError);
}

TEST(Fidelity, Examples)
{
    EXPECT_NEAR(fidelity_bell(pm(bell_phi_plus())), 1.0, 1e-15);
    EXPECT_NEAR(fidelity_bell(pm(0.25 * DensityMatrix4::identity())), 0.25, 1e-15);
    EXPECT_NEAR(fidelity_bell(pm(DensityMatrix4::unit(1, 1))), 0.0, 1e-15);
    DensityMatrix4 minus = bell_phi_plus();
    minus(0, 3) = minus(3, 0) = -0.5;
    EXPECT_NEAR(fidelity_bell(pm(minus)), 0.0, 1e-15);
}

TEST(Fidelity, Linear)
{
    std::mt19937_64 rng(44);
    const auto a = random_density_matrix(rng);
    const auto b = random_density_matrix(rng);
    EXPECT_NEAR(fidelity_bell(pm(0.4 * a + 0.6 * b)), 0.4 * fidelity_bell(pm(a)) + 0.6 * fidelity_bell(pm(b)), 1e-14);
}

TEST(Purity, Examples)
{
    EXPECT_NEAR(purity(pm(bell_phi_plus())), 1.0, 1e-15);
    EXPECT_NEAR(purity(pm(0.25 * DensityMatrix4::identity())), 0.25, 1e-15);
}

TEST(Report, ConsistentFields)
{
    const auto r = make_report(pm(werner(0.8)));
    EXPECT_NEAR(r.concurrence, 0.7, 1e-9);
    EXPECT_NEAR(r.fidelity, 0.85, 1e-14);
    for (std::size_t i = 0; i + 1 < 4; ++i) EXPECT_GE(r.sqrt_lambda[i], r.sqrt_lambda[i + 1]);
}

TEST(Rho14Analytic, NoDecayNoSplittingGivesWidth)
{
    CascadeParams p;
    p.fss = 0.0;
    p.gamma20 = p.gamma10 = 0.0;
    p.kappa0 = 0.0;
    const auto r = rho14_analytic(p, resolve_gate(p, 0.3, 0.7));
    EXPECT_NEAR(r.raw.real(), 0.7, 1e-14);
    EXPECT_NEAR(r.raw.imag(), 0.0, 1e-14);
    EXPECT_NEAR(r.normalized.real(), 0.5, 1e-14);
}

TEST(Rho14Analytic, WideGateLimit)
{
    CascadeParams p;
    const auto r = rho14_analytic(p, resolve_gate(p, 0.0, 60.0));
    const cplx z = exciton_coherence_decay(p);
    EXPECT_LT(std::abs(r.raw - (-1.0 / z)), 1e-12);
}

TEST(Rho14Analytic, MatchesQuadratureAcrossParameterSpace)
{
    std::mt19937_64 rng(45);
    for (int k = 0; k < 100; ++k) {
        const auto pt = random_point(rng);
        const auto gate = resolve_gate(pt.params, pt.tau_g, pt.w_g);
        const auto raw = assemble_raw_matrix(pt.params, pt.tau_g, pt.w_g);
        const auto a = rho14_analytic(pt.params, gate);
        EXPECT_LT(std::abs(raw.entries(0, 3) - a.normalized), 1e-6 * std::max(std::abs(a.normalized), 1e-3)) << k;
        for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(raw.entries(i, i).real(), a.diagonal[i], 1e-6) << k;
    }
}

TEST(Esd, DefaultOperatingPointDiesAtFiniteTemperature)
{
    CascadeParams p;
    const auto r = esd_temperature(p, 0.5, 0.1, EsdSearch{1.0, 300.0, 0.01, 2.0});
    ASSERT_TRUE(r.found);
    EXPECT_FALSE(r.multi_crossing);
    EXPECT_EQ(r.crossings, 1);
    EXPECT_LE(r.bracket_hi - r.bracket_lo, 0.01);
    EXPECT_GT(concurrence_at(p, 0.5, 0.1, r.bracket_lo), kDeadConcurrence);
    EXPECT_LE(concurrence_at(p, 0.5, 0.1, r.bracket_hi), kDeadConcurrence);
    EXPECT_NEAR(r.temperature, 86.0, 1.0);
}

TEST(Esd, NoiseFreeStillDies)
{
    CascadeParams p;
    p.g_noise = 0.0;
    const auto r = esd_temperature(p, 0.5, 0.1, EsdSearch{1.0, 300.0, 0.05, 4.0});
    ASSERT_TRUE(r.found);
    EXPECT_NEAR(r.temperature, 137.6, 1.0);
}

TEST(Esd, ZeroSplittingNeverDies)
{
    CascadeParams p;
    p.fss = 0.0;
    const auto r = esd_temperature(p, 0.5, 0.1, EsdSearch{1.0, 1000.0, 0.01, 50.0});
    EXPECT_FALSE(r.found);
    EXPECT_FALSE(r.multi_crossing);
}

TEST(Esd, ConcurrenceMonotoneInTemperature)
{
    CascadeParams p;
    p.kappa0 = 1e-3;
    double prev = 2.0;
    for (double t = 0.0; t <= 100.0; t += 5.0) {
        const double c = concurrence_at(p, 0.0, 0.5, t);
        EXPECT_LE(c, prev + 1e-12);
        prev = c;
    }
}

TEST(Esd, RejectsBadSearch)
{
    CascadeParams p;
    EXPECT_THROW(esd_temperature(p, 0.5, 0.1, EsdSearch{10.0, 5.0, 0.01, 2.0}), ParameterError);
    EXPECT_THROW(esd_temperature(p, 0.5, 0.1, EsdSearch{1.0, 5.0, 0.0, 2.0}), ParameterError);
}
