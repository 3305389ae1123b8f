#pragma once

// Randomized invariant checks over the whole pipeline. Used by the
// `validate` subcommand and the acceptance suite.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qdcascade/cascade.hpp"
#include "qdcascade/correlator.hpp"
#include "qdcascade/experiment.hpp"
#include "qdcascade/linalg.hpp"
#include "qdcascade/metrics.hpp"
#include "qdcascade/tomography.hpp"

namespace qdcascade {

struct InvariantCheck {
    std::string name;
    double threshold = 0.0;
    double worst = 0.0;   ///< largest observed violation measure
    bool lower_bound = false; ///< true: worst is a minimum that must stay >= threshold
    std::size_t samples = 0;

    bool passed() const { return lower_bound ? worst >= threshold : worst <= threshold; }
};

struct ValidationReport {
    std::vector<InvariantCheck> checks;
    bool passed() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const InvariantCheck& c) { return c.passed(); });
    }
};

inline DensityMatrix4 random_density_matrix(std::mt19937_64& rng)
{
    std::normal_distribution<double> n01;
    DensityMatrix4 a;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) a(i, j) = cplx{n01(rng), n01(rng)};
    DensityMatrix4 rho = a * a.adjoint();
    rho *= 1.0 / rho.trace().real();
    return hermitize(rho);
}

inline Matrix<2> random_unitary2(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double theta = std::asin(std::sqrt(u01(rng)));
    const cplx ea = std::polar(1.0, ang(rng)), eb = std::polar(1.0, ang(rng)), ec = std::polar(1.0, ang(rng));
    Matrix<2> u;
    u(0, 0) = ea * eb * std::cos(theta);
    u(0, 1) = ea * ec * std::sin(theta);
    u(1, 0) = -ea * std::conj(ec) * std::sin(theta);
    u(1, 1) = ea * std::conj(eb) * std::cos(theta);
    return u;
}

/// Random physically valid point: rates in [0.2, 3] /ns, S in [0, 6] ueV,
/// T in [0, 300] K, kappa0 up to 5x the default, any eta and g in [0, 2].
inline SimulationPoint random_point(std::mt19937_64& rng)
{
    auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    SimulationPoint pt;
    auto& p = pt.params;
    p.gamma32 = uni(0.2, 3.0);
    p.gamma31 = uni(0.2, 3.0);
    p.gamma20 = uni(0.2, 3.0);
    p.gamma10 = uni(0.2, 3.0);
    p.fss = uni(0.0, 6.0);
    p.temperature = uni(0.0, 300.0);
    p.kappa0 = uni(0.0, 1e-4);
    p.eta = uni(0.0, 1.0);
    p.g_noise = uni(0.0, 2.0);
    p.biexciton_energy = uni(-10.0, 10.0);
    pt.tau_g = uni(0.0, 2.0);
    pt.w_g = uni(0.02, 2.0);
    return pt;
}

inline double min_real_eigenvalue(const DensityMatrix4& m)
{
    const Spectrum s = eigenvalues_general(hermitize(m));
    return s.eigenvalues.back().real();
}

/// Runs every invariant over `samples` random points.
inline ValidationReport run_validation(std::size_t samples, std::uint64_t seed = 20100301)
{
    std::mt19937_64 rng(seed);
    InvariantCheck trace{"trace preservation |Tr e^{Lt}rho - 1|", 1e-9};
    InvariantCheck herm{"hermiticity of e^{Lt}rho and rho_pol", 1e-10};
    InvariantCheck pos{"positivity: min eigenvalue of e^{Lt}rho, rho_pol, rho_tot", -1e-9, 0.0, true};
    InvariantCheck xform{"X-form off-diagonal suppression in rho_pol", 1e-8};
    InvariantCheck balance{"detailed balance |gamma12/gamma21 - e^{-S/kT}| (relative)", 1e-12};
    InvariantCheck unit_trace{"unit trace of rho_pol and rho_tot", 1e-10};
    InvariantCheck lu{"concurrence local-unitary invariance", 1e-9};
    InvariantCheck xoracle{"concurrence vs X-state closed form", 1e-8};
    InvariantCheck eq8{"gated rho_14 vs closed form (relative)", 1e-6};
    pos.worst = std::numeric_limits<double>::infinity();

    for (std::size_t s = 0; s < samples; ++s) {
        const SimulationPoint pt = random_point(rng);
        const CascadeParams& p = pt.params;
        const Superoperator16 l = build_liouvillian(p);

        const DensityMatrix4 rho0 = random_density_matrix(rng);
        for (double t : {0.1, 1.0, 10.0}) {
            const DensityMatrix4 rt = apply(expm(l * t), rho0);
            trace.worst = std::max(trace.worst, std::abs(rt.trace() - 1.0));
            herm.worst = std::max(herm.worst, hermiticity_defect(rt));
            pos.worst = std::min(pos.worst, min_real_eigenvalue(rt));
        }
        ++trace.samples, ++herm.samples, ++pos.samples;

        if (p.fss > 0.0 && p.temperature > 0.0) {
            const PhononRates ph = phonon_rates(p);
            if (ph.gamma21 > 0.0) {
                const double boltz = std::exp(-p.fss / (PhysicalConstants::k_B * p.temperature));
                balance.worst = std::max(balance.worst, std::abs(ph.gamma12 / ph.gamma21 - boltz) / boltz);
                ++balance.samples;
            }
        }

        const RawPolarizationMatrix raw = assemble_raw_matrix(l, biexciton_state(), resolve_gate(p, pt.tau_g, pt.w_g));
        const PolarizationMatrix pol = from_raw(raw);
        const PolarizationMatrix tot = mix_total(pol, p.eta, p.g_noise);
        herm.worst = std::max(herm.worst, hermiticity_defect(pol.entries));
        pos.worst = std::min({pos.worst, min_real_eigenvalue(pol.entries), min_real_eigenvalue(tot.entries)});
        xform.worst = std::max(xform.worst, x_form_defect(pol.entries));
        unit_trace.worst = std::max({unit_trace.worst, std::abs(pol.entries.trace() - 1.0),
                                     std::abs(tot.entries.trace() - 1.0)});
        ++xform.samples, ++unit_trace.samples;

        const double c = concurrence(tot);
        const DensityMatrix4 uv = kron(random_unitary2(rng), random_unitary2(rng));
        const PolarizationMatrix rotated{uv * tot.entries * uv.adjoint(), Provenance::total};
        lu.worst = std::max(lu.worst, std::abs(c - concurrence(rotated)));
        xoracle.worst = std::max(xoracle.worst, std::abs(c - concurrence_x_oracle(tot)));
        ++lu.samples, ++xoracle.samples;

        const Rho14Analytic an = rho14_analytic(p, resolve_gate(p, pt.tau_g, pt.w_g));
        eq8.worst = std::max(eq8.worst, std::abs(pol(0, 3) - an.normalized) / std::abs(an.normalized));
        ++eq8.samples;
    }
    return ValidationReport{{trace, herm, pos, xform, balance, unit_trace, lu, xoracle, eq8}};
}

} // namespace qdcascade
