#pragma once

// Four-level biexciton cascade: |0> ground, |1> X_V, |2> X_H, |3> biexciton.
// Energies in ueV, rates in 1/ns, times in ns, temperatures in K.

#include <cmath>
#include <limits>
#include <string>

#include "qdcascade/errors.hpp"
#include "qdcascade/linalg.hpp"

namespace qdcascade {

struct PhysicalConstants {
    static constexpr double hbar = 0.6582119569; ///< ueV * ns
    static constexpr double k_B = 86.17333;      ///< ueV / K
};

enum Level : std::size_t { kGround = 0, kExcitonV = 1, kExcitonH = 2, kBiexciton = 3 };

/// All physical inputs of one simulation point. Defaults are the measured
/// InAs dot parameters with an illustrative phonon coupling.
struct CascadeParams {
    double gamma32 = 1.8;          ///< XX -> X_H
    double gamma31 = 1.8;          ///< XX -> X_V
    double gamma20 = 1.3;          ///< X_H -> G
    double gamma10 = 1.3;          ///< X_V -> G
    double fss = 2.5;              ///< exciton fine-structure splitting S, ueV
    double temperature = 10.0;     ///< K
    double kappa0 = 2e-5;          ///< phonon coupling prefactor, 1/(ns ueV^3); kappa = kappa0 S^3
    double eta = 0.91;             ///< spectral overlap of the exciton lines
    double g_noise = 0.45;         ///< background weight
    double biexciton_energy = 0.0; ///< omega_3 reference, ueV; observable-neutral

    /// Throws ParameterError on any out-of-domain field.
    void validate() const
    {
        auto require = [](bool ok, const char* what) {
            if (!ok) throw ParameterError(what);
        };
        auto finite = [](double x) { return std::isfinite(x); };
        require(finite(gamma32) && gamma32 >= 0, "gamma32 must be a finite rate >= 0");
        require(finite(gamma31) && gamma31 >= 0, "gamma31 must be a finite rate >= 0");
        require(finite(gamma20) && gamma20 >= 0, "gamma20 must be a finite rate >= 0");
        require(finite(gamma10) && gamma10 >= 0, "gamma10 must be a finite rate >= 0");
        require(finite(fss) && fss >= 0, "fss must be finite and >= 0");
        require(finite(temperature) && temperature >= 0, "temperature must be finite and >= 0");
        require(finite(kappa0) && kappa0 >= 0, "kappa0 must be finite and >= 0");
        require(finite(eta) && eta >= 0 && eta <= 1, "eta must lie in [0, 1]");
        require(finite(g_noise) && g_noise >= 0, "g_noise must be finite and >= 0");
        require(finite(biexciton_energy), "biexciton_energy must be finite");
    }
};

struct PhononRates {
    double gamma12 = 0.0; ///< absorption |1> -> |2>
    double gamma21 = 0.0; ///< emission |2> -> |1>
    double n_bose = 0.0;
    /// Set when S = 0 and T > 0: n_bose diverges, the rates are the S -> 0 limit.
    bool degenerate = false;
};

/// Thermal phonon occupation at energy S. Returns +inf for S = 0, T > 0.
inline double bose_occupation(double fss, double temperature)
{
    if (!(fss >= 0) || !(temperature >= 0))
        throw ParameterError("bose_occupation: S and T must be >= 0");
    if (temperature == 0.0) return 0.0;
    if (fss == 0.0) return std::numeric_limits<double>::infinity();
    const double x = fss / (PhysicalConstants::k_B * temperature);
    if (x < 1e-6) return 1.0 / x - 0.5;
    const double em1 = std::expm1(x);
    if (!std::isfinite(em1)) return 0.0;
    return 1.0 / em1;
}

inline PhononRates phonon_rates(const CascadeParams& p)
{
    p.validate();
    PhononRates r;
    const double s = p.fss;
    if (s == 0.0) {
        r.degenerate = p.temperature > 0.0;
        r.n_bose = r.degenerate ? std::numeric_limits<double>::infinity() : 0.0;
        return r;
    }
    const double kappa = p.kappa0 * s * s * s;
    r.n_bose = bose_occupation(s, p.temperature);
    r.gamma12 = kappa * r.n_bose;
    r.gamma21 = kappa * (r.n_bose + 1.0);
    return r;
}

/// Gamma = gamma20 + gamma10 + gamma12 + gamma21, the total exciton coherence loss rate.
inline double exciton_dephasing_total(const CascadeParams& p)
{
    const PhononRates ph = phonon_rates(p);
    return p.gamma20 + p.gamma10 + ph.gamma12 + ph.gamma21;
}

/// Complex eigenvalue i S/hbar - Gamma/2 of the |1><2| coherence.
inline cplx exciton_coherence_decay(const CascadeParams& p)
{
    const double big_gamma = exciton_dephasing_total(p);
    return {-0.5 * big_gamma, p.fss / PhysicalConstants::hbar};
}

/// Index of |i><j| in the column-stacked vector of a 4x4 operator.
constexpr std::size_t vec_index(std::size_t i, std::size_t j) { return i + 4 * j; }

namespace detail {

// gamma * (A . A^+ - 1/2 {A^+A, .}) in column-stacked superoperator form.
inline void add_dissipator(Superoperator16& l, const DensityMatrix4& a, double rate)
{
    if (rate == 0.0) return;
    const DensityMatrix4 id = DensityMatrix4::identity();
    const DensityMatrix4 ada = a.adjoint() * a;
    Superoperator16 d = kron(a.conjugate(), a);
    d -= 0.5 * kron(id, ada);
    d -= 0.5 * kron(ada.transpose(), id);
    d *= rate;
    l += d;
}

} // namespace detail

/// Generator L with d vec(rho)/dt = L vec(rho): coherent part -i[H0, .]/hbar with
/// H0 = diag(0, 0, S, omega3), plus the six GKSL dissipators of the cascade.
inline Superoperator16 build_liouvillian(const CascadeParams& p)
{
    p.validate();
    const PhononRates ph = phonon_rates(p);

    DensityMatrix4 h0;
    h0(kExcitonH, kExcitonH) = p.fss / PhysicalConstants::hbar;
    h0(kBiexciton, kBiexciton) = p.biexciton_energy / PhysicalConstants::hbar;

    const DensityMatrix4 id = DensityMatrix4::identity();
    const cplx minus_i{0.0, -1.0};
    // vec(H rho - rho H) = (I kron H - H^T kron I) vec(rho)
    Superoperator16 l = minus_i * (kron(id, h0) - kron(h0.transpose(), id));

    using M = DensityMatrix4;
    detail::add_dissipator(l, M::unit(kExcitonH, kBiexciton), p.gamma32);
    detail::add_dissipator(l, M::unit(kExcitonV, kBiexciton), p.gamma31);
    detail::add_dissipator(l, M::unit(kGround, kExcitonH), p.gamma20);
    detail::add_dissipator(l, M::unit(kGround, kExcitonV), p.gamma10);
    detail::add_dissipator(l, M::unit(kExcitonV, kExcitonH), ph.gamma21);
    detail::add_dissipator(l, M::unit(kExcitonH, kExcitonV), ph.gamma12);
    return l;
}

/// Apply a superoperator to a 4x4 operator.
inline DensityMatrix4 apply(const Superoperator16& s, const DensityMatrix4& rho)
{
    const auto v = s * vectorize(rho);
    return devectorize<4>(v);
}

} // namespace qdcascade
