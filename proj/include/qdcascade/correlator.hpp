#pragma once

// Two-photon polarization correlations of the cascade via the quantum
// regression theorem, integrated over the detection gate.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "qdcascade/cascade.hpp"
#include "qdcascade/errors.hpp"
#include "qdcascade/linalg.hpp"

namespace qdcascade {

enum class Pol : std::size_t { H = 0, V = 1 };

/// Two-photon basis index: (first photon, second photon) -> HH=0, HV=1, VH=2, VV=3.
constexpr std::size_t pair_index(Pol first, Pol second)
{
    return 2 * static_cast<std::size_t>(first) + static_cast<std::size_t>(second);
}

/// Lowering (emission) dipole operators of the cascade.
struct TransitionOperators {
    DensityMatrix4 sigma_h1 = DensityMatrix4::unit(kExcitonH, kBiexciton);
    DensityMatrix4 sigma_v1 = DensityMatrix4::unit(kExcitonV, kBiexciton);
    DensityMatrix4 sigma_h2 = DensityMatrix4::unit(kGround, kExcitonH);
    DensityMatrix4 sigma_v2 = DensityMatrix4::unit(kGround, kExcitonV);

    const DensityMatrix4& first(Pol p) const { return p == Pol::H ? sigma_h1 : sigma_v1; }
    const DensityMatrix4& second(Pol p) const { return p == Pol::H ? sigma_h2 : sigma_v2; }
};

/// Detection window on the photon-pair delay tau = t' - t, plus the
/// quadrature resolution used to integrate over it.
struct GateWindow {
    double tau_g = 0.0;    ///< gate delay, ns
    double w_g = 0.5;      ///< gate width, ns
    double t_max = 0.0;    ///< horizon of the biexciton-photon time integral, ns
    double dt_outer = 0.0; ///< step of the t grid
    double dt_inner = 0.0; ///< step of the tau grid

    void validate() const
    {
        if (!(std::isfinite(tau_g) && tau_g >= 0.0)) throw ParameterError("gate: tau_g must be >= 0");
        if (!(std::isfinite(w_g) && w_g > 0.0)) throw ParameterError("gate: w_g must be > 0");
        if (!(t_max > 0.0 && dt_outer > 0.0 && dt_inner > 0.0))
            throw ParameterError("gate: quadrature steps not resolved");
    }
};

/// Builds a GateWindow whose steps resolve the dynamics of p: t_max puts the
/// biexciton population below 1e-7 of its initial value; dt_inner is at most
/// 1% of the beat period 2 pi hbar / S and 1% of 1/Gamma.
inline GateWindow resolve_gate(const CascadeParams& p, double tau_g, double w_g, double refine = 1.0)
{
    p.validate();
    GateWindow g;
    g.tau_g = tau_g;
    g.w_g = w_g;
    if (!(std::isfinite(tau_g) && tau_g >= 0.0)) throw ParameterError("gate: tau_g must be >= 0");
    if (!(std::isfinite(w_g) && w_g > 0.0)) throw ParameterError("gate: w_g must be > 0");
    if (!(refine > 0.0)) throw ParameterError("gate: refine factor must be > 0");

    const double xx_decay = p.gamma32 + p.gamma31;
    if (!(xx_decay > 0.0)) throw ParameterError("gate: biexciton decay rate must be > 0");
    g.t_max = std::log(1e7) / xx_decay;
    g.dt_outer = g.t_max / (400.0 * refine);

    double h = w_g / 8.0;
    if (p.fss > 0.0) h = std::min(h, 0.01 * 2.0 * std::numbers::pi * PhysicalConstants::hbar / p.fss);
    const double big_gamma = exciton_dephasing_total(p);
    if (big_gamma > 0.0) h = std::min(h, 0.01 / big_gamma);
    g.dt_inner = h / refine;
    return g;
}

/// Initial state |3><3|: the dot is prepared in the biexciton.
inline DensityMatrix4 biexciton_state() { return DensityMatrix4::unit(kBiexciton, kBiexciton); }

/// <sigma+_mu1(t) sigma+_nu2(t') sigma_zeta2(t') sigma_xi1(t)> for t' = t + tau,
/// i.e. Tr[sigma+_nu2 sigma_zeta2 e^{L tau}(sigma_xi1 rho(t) sigma+_mu1)].
inline cplx two_time_element(const Superoperator16& l, const DensityMatrix4& rho0, Pol mu, Pol nu, Pol xi,
                             Pol zeta, double t, double tau)
{
    if (!(tau >= 0.0)) throw ParameterError("two_time_element: tau must be >= 0 (t' >= t)");
    if (!(t >= 0.0)) throw ParameterError("two_time_element: t must be >= 0");
    const TransitionOperators ops;
    const DensityMatrix4 rho_t = apply(expm(l * t), rho0);
    const DensityMatrix4 seed = ops.first(xi) * rho_t * ops.first(mu).adjoint();
    const DensityMatrix4 moved = apply(expm(l * tau), seed);
    return (ops.second(nu).adjoint() * ops.second(zeta) * moved).trace();
}

struct RawPolarizationMatrix {
    DensityMatrix4 entries;  ///< basis HH, HV, VH, VV
    double raw_trace = 0.0;  ///< trace before normalization (inverse of the prefactor A)
    bool normalized = false;
};

namespace detail {

// Composite Simpson weights for n (even) intervals of width h.
inline double simpson_weight(std::size_t k, std::size_t n, double h)
{
    if (k == 0 || k == n) return h / 3.0;
    return (k % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
}

inline std::size_t even_intervals(double length, double step)
{
    auto n = static_cast<std::size_t>(std::ceil(length / step - 1e-9));
    n = std::max<std::size_t>(n, 2);
    if (n % 2 == 1) ++n;
    return n;
}

} // namespace detail

/// Integrates every two-time element over t in [0, t_max] and
/// tau in [tau_g, tau_g + w_g] with composite Simpson rules, then divides by
/// the trace. The integrand is linear in rho(t), so the t-sum is folded into
/// rho(t) before the tau propagation; this is the same tensor-product Simpson sum.
inline RawPolarizationMatrix assemble_raw_matrix(const Superoperator16& l, const DensityMatrix4& rho0,
                                                 const GateWindow& gate)
{
    gate.validate();
    const TransitionOperators ops;

    // Simpson sum over t of rho(t)
    const std::size_t n_outer = detail::even_intervals(gate.t_max, gate.dt_outer);
    const double h_outer = gate.t_max / static_cast<double>(n_outer);
    const Superoperator16 step_outer = expm(l * h_outer);
    auto rho_vec = vectorize(rho0);
    Vector<16> rho_sum{};
    for (std::size_t k = 0; k <= n_outer; ++k) {
        const double w = detail::simpson_weight(k, n_outer, h_outer);
        for (std::size_t i = 0; i < 16; ++i) rho_sum[i] += w * rho_vec[i];
        rho_vec = step_outer * rho_vec;
    }
    const DensityMatrix4 rho_bar = devectorize<4>(rho_sum);

    const std::size_t n_inner = detail::even_intervals(gate.w_g, gate.dt_inner);
    const double h_inner = gate.w_g / static_cast<double>(n_inner);
    const Superoperator16 step_inner = expm(l * h_inner);
    const Superoperator16 to_gate = expm(l * gate.tau_g);

    // one tau-integrated seed per (mu, xi) pair of first-photon labels
    std::array<std::array<DensityMatrix4, 2>, 2> integrated;
    for (Pol mu : {Pol::H, Pol::V})
        for (Pol xi : {Pol::H, Pol::V}) {
            const DensityMatrix4 seed = ops.first(xi) * rho_bar * ops.first(mu).adjoint();
            auto y = to_gate * vectorize(seed);
            Vector<16> acc{};
            for (std::size_t k = 0; k <= n_inner; ++k) {
                const double w = detail::simpson_weight(k, n_inner, h_inner);
                for (std::size_t i = 0; i < 16; ++i) acc[i] += w * y[i];
                if (k < n_inner) y = step_inner * y;
            }
            integrated[static_cast<std::size_t>(mu)][static_cast<std::size_t>(xi)] = devectorize<4>(acc);
        }

    RawPolarizationMatrix out;
    constexpr std::array<Pol, 2> pols{Pol::H, Pol::V};
    for (Pol mu : pols)
        for (Pol nu : pols)
            for (Pol xi : pols)
                for (Pol zeta : pols) {
                    const std::size_t r = pair_index(mu, nu);
                    const std::size_t c = pair_index(xi, zeta);
                    if (c < r) continue;
                    const auto& z = integrated[static_cast<std::size_t>(mu)][static_cast<std::size_t>(xi)];
                    cplx value = (ops.second(nu).adjoint() * ops.second(zeta) * z).trace();
                    if (r == c) value = value.real();
                    out.entries(r, c) = value;
                    out.entries(c, r) = std::conj(value);
                }

    const double tr = out.entries.trace().real();
    out.raw_trace = tr;
    if (!(tr > 1e-300) || !std::isfinite(tr))
        throw DegenerateGateError("assemble_raw_matrix: gate collects no coincidences (trace " +
                                  std::to_string(tr) + ")");
    out.entries *= 1.0 / tr;
    out.normalized = true;
    if (!out.entries.all_finite()) throw NumericError("assemble_raw_matrix: non-finite entries");
    return out;
}

inline RawPolarizationMatrix assemble_raw_matrix(const CascadeParams& p, double tau_g, double w_g)
{
    return assemble_raw_matrix(build_liouvillian(p), biexciton_state(), resolve_gate(p, tau_g, w_g));
}

} // namespace qdcascade
