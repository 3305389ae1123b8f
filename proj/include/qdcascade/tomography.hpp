#pragma once

// The measured two-photon state: coherent cascade part, the spectrally
// distinguishable (no-coherence) part, and flat background.

#include <cmath>
#include <string>

#include "qdcascade/cascade.hpp"
#include "qdcascade/correlator.hpp"
#include "qdcascade/errors.hpp"
#include "qdcascade/linalg.hpp"

namespace qdcascade {

enum class Provenance { pol, noc, noise, total };

inline const char* to_string(Provenance p)
{
    switch (p) {
    case Provenance::pol: return "pol";
    case Provenance::noc: return "noc";
    case Provenance::noise: return "noise";
    case Provenance::total: return "total";
    }
    return "?";
}

/// 4x4 state over |HH>, |HV>, |VH>, |VV>.
struct PolarizationMatrix {
    DensityMatrix4 entries;
    Provenance provenance = Provenance::pol;

    const cplx& operator()(std::size_t i, std::size_t j) const { return entries(i, j); }
};

inline PolarizationMatrix from_raw(const RawPolarizationMatrix& raw)
{
    if (!raw.normalized) throw ParameterError("from_raw: raw matrix is not normalized");
    return {raw.entries, Provenance::pol};
}

inline PolarizationMatrix noise_state()
{
    DensityMatrix4 m = DensityMatrix4::identity();
    m *= 0.25;
    return {m, Provenance::noise};
}

/// Keeps the populations of pol and drops every coherence.
inline PolarizationMatrix make_noc(const PolarizationMatrix& pol)
{
    PolarizationMatrix out{DensityMatrix4{}, Provenance::noc};
    for (std::size_t i = 0; i < 4; ++i) out.entries(i, i) = pol.entries(i, i);
    return out;
}

/// (eta pol + (1 - eta) noc + g identity/4) / (1 + g)
inline PolarizationMatrix mix_total(const PolarizationMatrix& pol, double eta, double g)
{
    if (!(std::isfinite(eta) && eta >= 0.0 && eta <= 1.0))
        throw ParameterError("mix_total: eta must lie in [0, 1], got " + std::to_string(eta));
    if (!(std::isfinite(g) && g >= 0.0))
        throw ParameterError("mix_total: g must be >= 0, got " + std::to_string(g));

    DensityMatrix4 m = eta * pol.entries;
    m += (1.0 - eta) * make_noc(pol).entries;
    m += g * noise_state().entries;
    m *= 1.0 / (1.0 + g);
    return {m, Provenance::total};
}

/// Overlap 4 gamma^2 / (S^2 + 4 gamma^2) of two unit-area Lorentzians of
/// HWHM gamma = linewidth / 2 whose centres are S apart. Convenience only;
/// eta is always an explicit input elsewhere.
inline double overlap_eta_lorentzian(double fss, double linewidth)
{
    if (!(linewidth > 0.0)) throw ParameterError("overlap_eta_lorentzian: linewidth must be > 0");
    if (std::isinf(fss)) return 0.0;
    const double hwhm = 0.5 * linewidth;
    return 4.0 * hwhm * hwhm / (fss * fss + 4.0 * hwhm * hwhm);
}

/// Full measured state for one parameter point and gate.
inline PolarizationMatrix total_state(const CascadeParams& p, double tau_g, double w_g)
{
    const PolarizationMatrix pol = from_raw(assemble_raw_matrix(p, tau_g, w_g));
    return mix_total(pol, p.eta, p.g_noise);
}

} // namespace qdcascade
