#pragma once

// Entanglement and fidelity of two-photon states, the closed-form gated
// exciton coherence, and the sudden-death temperature search.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "qdcascade/cascade.hpp"
#include "qdcascade/correlator.hpp"
#include "qdcascade/errors.hpp"
#include "qdcascade/linalg.hpp"
#include "qdcascade/tomography.hpp"

namespace qdcascade {

/// sigma_y kron sigma_y
inline DensityMatrix4 spin_flip()
{
    DensityMatrix4 y;
    y(0, 3) = -1.0;
    y(1, 2) = 1.0;
    y(2, 1) = 1.0;
    y(3, 0) = -1.0;
    return y;
}

/// Square roots of the eigenvalues of rho (Y rho* Y), descending.
inline std::array<double, 4> wootters_roots(const DensityMatrix4& rho)
{
    const DensityMatrix4 y = spin_flip();
    const DensityMatrix4 m = rho * y * rho.conjugate() * y;
    const Spectrum spec = eigenvalues_general(m);
    std::array<double, 4> roots{};
    for (std::size_t i = 0; i < 4; ++i) {
        const cplx lambda = spec[i];
        if (lambda.real() < -1e-10 || std::abs(lambda.imag()) > 1e-8)
            throw NumericError("concurrence: eigenvalue (" + std::to_string(lambda.real()) + ", " +
                               std::to_string(lambda.imag()) + ") is not a valid density-matrix product value");
        roots[i] = std::sqrt(std::max(0.0, lambda.real()));
    }
    std::sort(roots.begin(), roots.end(), std::greater<>());
    return roots;
}

inline double concurrence_from_roots(const std::array<double, 4>& r)
{
    return std::clamp(r[0] - r[1] - r[2] - r[3], 0.0, 1.0);
}

/// Wootters concurrence.
inline double concurrence(const PolarizationMatrix& rho)
{
    return concurrence_from_roots(wootters_roots(rho.entries));
}

/// Largest modulus among the off-diagonals other than the HH/VV coherence.
inline double x_form_defect(const DensityMatrix4& m)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            if (i == j || (i == 0 && j == 3) || (i == 3 && j == 0))
                continue;
            worst = std::max(worst, std::abs(m(i, j)));
        }
    return worst;
}

/// Closed-form concurrence 2 max(0, |rho_14| - sqrt(rho_22 rho_33)) of a
/// state whose only coherence is rho_14.
inline double concurrence_x_oracle(const PolarizationMatrix& rho)
{
    const auto& m = rho.entries;
    const double defect = x_form_defect(m);
    if (defect > 1e-8)
        throw FormError("concurrence_x_oracle: matrix is not of X form (off-diagonal " + std::to_string(defect) +
                        ")");
    const double pop = std::sqrt(std::max(0.0, m(1, 1).real()) * std::max(0.0, m(2, 2).real()));
    return 2.0 * std::max(0.0, std::abs(m(0, 3)) - pop);
}

/// Fidelity with (|HH> + |VV>)/sqrt(2).
inline double fidelity_bell(const PolarizationMatrix& rho)
{
    const auto& m = rho.entries;
    return 0.5 * (m(0, 0).real() + m(3, 3).real()) + m(0, 3).real();
}

inline double purity(const PolarizationMatrix& rho) { return (rho.entries * rho.entries).trace().real(); }

struct EntanglementReport {
    double concurrence = 0.0;
    double fidelity = 0.0;
    double purity = 0.0;
    std::array<double, 4> sqrt_lambda{}; ///< descending
};

inline EntanglementReport make_report(const PolarizationMatrix& rho)
{
    EntanglementReport r;
    r.sqrt_lambda = wootters_roots(rho.entries);
    r.concurrence = concurrence_from_roots(r.sqrt_lambda);
    r.fidelity = fidelity_bell(rho);
    r.purity = purity(rho);
    return r;
}

// ---------------------------------------------------------------------------
// Closed-form gated exciton coherence

struct Rho14Analytic {
    cplx raw;                       ///< integral of e^{(iS/hbar - Gamma/2) tau} over the gate
    cplx normalized;                ///< raw divided by the analytic gated trace
    std::array<double, 4> diagonal; ///< analytic normalized HH, HV, VH, VV
};

namespace detail {

// integral over [a, a + w] of e^{lambda tau}
inline double exp_integral(double lambda, double a, double w)
{
    if (lambda == 0.0) return w;
    return std::exp(lambda * a) * std::expm1(lambda * w) / lambda;
}

// integral over [a, b] of tau^n e^{m tau}, n = 0..3
inline std::array<double, 4> exp_moments(double m, double a, double b)
{
    std::array<double, 4> mom{};
    if (std::abs(m) * b < 1.0) {
        // power series in m
        for (std::size_t n = 0; n < 4; ++n) {
            double sum = 0.0;
            double coeff = 1.0; // m^j / j!
            for (int j = 0; j < 40; ++j) {
                const double p = static_cast<double>(n) + j + 1.0;
                const double term = coeff * (std::pow(b, p) - std::pow(a, p)) / p;
                sum += term;
                if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
                coeff *= m / (j + 1.0);
            }
            mom[n] = sum;
        }
        return mom;
    }
    mom[0] = exp_integral(m, a, b - a);
    for (std::size_t n = 1; n < 4; ++n) {
        const double edge = std::pow(b, n) * std::exp(m * b) - std::pow(a, n) * std::exp(m * a);
        mom[n] = (edge - static_cast<double>(n) * mom[n - 1]) / m;
    }
    return mom;
}

// integral over [a, a + w] of e^{m tau} sinh(d tau) / d
inline double sinh_integral(double m, double d, double a, double w)
{
    const double b = a + w;
    if (d * b < 1e-3) {
        const auto mom = exp_moments(m, a, b);
        return mom[1] + d * d / 6.0 * mom[3];
    }
    return (exp_integral(m + d, a, w) - exp_integral(m - d, a, w)) / (2.0 * d);
}

inline cplx gated_coherence(cplx z, double a, double w)
{
    const cplx zw = z * w;
    if (std::abs(zw) < 1e-5) return std::exp(z * a) * w * (1.0 + zw / 2.0 + zw * zw / 6.0);
    return std::exp(z * a) * (std::exp(zw) - 1.0) / z;
}

} // namespace detail

/// Closed-form rho_14 over the delay gate [tau_g, tau_g + w_g], with the
/// exciton populations of the gated diagonal solved from the two-level rate
/// equations (no Liouvillian involved).
inline Rho14Analytic rho14_analytic(const CascadeParams& p, const GateWindow& gate)
{
    if (!(gate.w_g > 0.0)) throw ParameterError("rho14_analytic: w_g must be > 0");
    if (!(gate.tau_g >= 0.0)) throw ParameterError("rho14_analytic: tau_g must be >= 0");
    const PhononRates ph = phonon_rates(p);
    const double a = gate.tau_g;
    const double w = gate.w_g;

    Rho14Analytic out;
    out.raw = detail::gated_coherence(exciton_coherence_decay(p), a, w);

    // populations (p_H, p_V): d/dt = M (p_H, p_V)
    const double m00 = -(p.gamma20 + ph.gamma21);
    const double m11 = -(p.gamma10 + ph.gamma12);
    const double m01 = ph.gamma12;
    const double m10 = ph.gamma21;
    const double mean = 0.5 * (m00 + m11);
    const double half_diff = 0.5 * (m00 - m11);
    const double d = std::sqrt(half_diff * half_diff + m01 * m10);

    const double c_part = 0.5 * (detail::exp_integral(mean + d, a, w) + detail::exp_integral(mean - d, a, w));
    const double s_part = detail::sinh_integral(mean, d, a, w);

    const double hh = c_part + s_part * (m00 - mean);
    const double hv = s_part * m10;
    const double vh = s_part * m01;
    const double vv = c_part + s_part * (m11 - mean);
    const double trace = hh + hv + vh + vv;
    if (!(trace > 0.0)) throw DegenerateGateError("rho14_analytic: gated trace is not positive");

    out.normalized = out.raw / trace;
    out.diagonal = {hh / trace, hv / trace, vh / trace, vv / trace};
    return out;
}

// ---------------------------------------------------------------------------
// Sudden-death temperature

struct EsdResult {
    double fss = 0.0;
    double g_noise = 0.0;
    bool found = false;             ///< false: "none-in-range"
    double temperature = 0.0;       ///< midpoint of the final bracket when found
    double bracket_lo = 0.0;        ///< C > 0 here
    double bracket_hi = 0.0;        ///< C <= 1e-12 here
    double tolerance = 0.0;
    bool multi_crossing = false;    ///< C(T) rose somewhere on the scan grid
    int crossings = 0;              ///< number of C>0 -> C=0 transitions on the grid
    std::vector<double> scan_temperatures;
    std::vector<double> scan_concurrence;
};

struct EsdSearch {
    double t_lo = 1.0;
    double t_hi = 1000.0;
    double tolerance = 0.01;
    double coarse_step = 2.0;
};

inline constexpr double kDeadConcurrence = 1e-12;

/// Concurrence of the full measured state at temperature T.
inline double concurrence_at(CascadeParams p, double tau_g, double w_g, double temperature)
{
    p.temperature = temperature;
    return concurrence(total_state(p, tau_g, w_g));
}

/// Coarse scan of C(T) over the search range, then bisection of the first
/// C > 0 -> C = 0 bracket down to the tolerance.
inline EsdResult esd_temperature(const CascadeParams& p, double tau_g, double w_g, const EsdSearch& search)
{
    if (!(search.t_lo >= 0.0 && search.t_hi > search.t_lo))
        throw ParameterError("esd_temperature: temperature range must satisfy 0 <= lo < hi");
    if (!(search.tolerance > 0.0)) throw ParameterError("esd_temperature: tolerance must be > 0");
    if (!(search.coarse_step > 0.0)) throw ParameterError("esd_temperature: coarse step must be > 0");

    EsdResult r;
    r.fss = p.fss;
    r.g_noise = p.g_noise;
    r.tolerance = search.tolerance;

    const auto steps = static_cast<std::size_t>(std::ceil((search.t_hi - search.t_lo) / search.coarse_step - 1e-9));
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = std::min(search.t_hi, search.t_lo + static_cast<double>(k) * search.coarse_step);
        r.scan_temperatures.push_back(t);
        r.scan_concurrence.push_back(concurrence_at(p, tau_g, w_g, t));
    }

    std::ptrdiff_t first = -1;
    const auto& c = r.scan_concurrence;
    for (std::size_t k = 0; k + 1 < c.size(); ++k) {
        if (c[k + 1] > c[k] + kDeadConcurrence) r.multi_crossing = true;
        if (c[k] > kDeadConcurrence && c[k + 1] <= kDeadConcurrence) {
            ++r.crossings;
            if (first < 0) first = static_cast<std::ptrdiff_t>(k);
        }
    }
    if (r.crossings > 1) r.multi_crossing = true;
    if (first < 0) return r;

    double lo = r.scan_temperatures[static_cast<std::size_t>(first)];
    double hi = r.scan_temperatures[static_cast<std::size_t>(first) + 1];
    while (hi - lo > search.tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (concurrence_at(p, tau_g, w_g, mid) > kDeadConcurrence)
            lo = mid;
        else
            hi = mid;
    }
    r.found = true;
    r.bracket_lo = lo;
    r.bracket_hi = hi;
    r.temperature = 0.5 * (lo + hi);
    return r;
}

} // namespace qdcascade
