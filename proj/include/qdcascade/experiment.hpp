#pragma once

// Parameter points, grid sweeps over them, and the named figure presets.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "qdcascade/cascade.hpp"
#include "qdcascade/correlator.hpp"
#include "qdcascade/errors.hpp"
#include "qdcascade/metrics.hpp"
#include "qdcascade/tomography.hpp"

namespace qdcascade {

/// One fully specified simulation input: physics plus the delay gate.
struct SimulationPoint {
    CascadeParams params;
    double tau_g = 0.0;
    double w_g = 0.5;
};

inline constexpr std::array<std::string_view, 12> kParameterNames = {
    "gamma32", "gamma31", "gamma20",  "gamma10", "fss",   "temperature",
    "kappa0",  "eta",     "g_noise",  "biexciton_energy", "tau_g", "w_g"};

inline bool is_parameter_name(std::string_view name)
{
    return std::find(kParameterNames.begin(), kParameterNames.end(), name) != kParameterNames.end();
}

inline double& parameter_ref(SimulationPoint& pt, std::string_view name)
{
    auto& p = pt.params;
    if (name == "gamma32") return p.gamma32;
    if (name == "gamma31") return p.gamma31;
    if (name == "gamma20") return p.gamma20;
    if (name == "gamma10") return p.gamma10;
    if (name == "fss") return p.fss;
    if (name == "temperature") return p.temperature;
    if (name == "kappa0") return p.kappa0;
    if (name == "eta") return p.eta;
    if (name == "g_noise") return p.g_noise;
    if (name == "biexciton_energy") return p.biexciton_energy;
    if (name == "tau_g") return pt.tau_g;
    if (name == "w_g") return pt.w_g;
    throw ParameterError("unknown parameter '" + std::string(name) + "'");
}

inline void set_parameter(SimulationPoint& pt, std::string_view name, double value)
{
    parameter_ref(pt, name) = value;
}

inline double get_parameter(const SimulationPoint& pt, std::string_view name)
{
    return parameter_ref(const_cast<SimulationPoint&>(pt), name);
}

inline std::string describe(const SimulationPoint& pt)
{
    std::string s = "{";
    for (std::size_t i = 0; i < kParameterNames.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s=%.6g", std::string(kParameterNames[i]).c_str(),
                      get_parameter(pt, kParameterNames[i]));
        if (i) s += ", ";
        s += buf;
    }
    return s + "}";
}

struct PointResult {
    EntanglementReport report;
    PolarizationMatrix rho_pol;
    PolarizationMatrix rho_tot;
};

namespace detail {

template <class F>
auto annotate(const std::string& where, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const DegenerateGateError& e) {
        throw DegenerateGateError(std::string(e.what()) + " at " + where);
    } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " at " + where);
    } catch (const ParameterError& e) {
        throw ParameterError(std::string(e.what()) + " at " + where);
    }
}

} // namespace detail

/// Liouvillian -> gated polarization matrix -> mixing -> metrics.
inline PointResult run_point(const SimulationPoint& pt)
{
    return detail::annotate(describe(pt), [&] {
        PointResult r;
        r.rho_pol = from_raw(assemble_raw_matrix(pt.params, pt.tau_g, pt.w_g));
        r.rho_tot = mix_total(r.rho_pol, pt.params.eta, pt.params.g_noise);
        r.report = make_report(r.rho_tot);
        return r;
    });
}

// ---------------------------------------------------------------------------
// Sweeps

struct Axis {
    std::string name;
    std::vector<double> values;
};

inline std::vector<double> linspace(double start, double stop, std::size_t count)
{
    if (count == 0) throw ParameterError("linspace: count must be > 0");
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = start;
        return v;
    }
    for (std::size_t i = 0; i < count; ++i)
        v[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
    return v;
}

inline constexpr std::array<std::string_view, 6> kMetricNames = {"concurrence", "fidelity",  "purity",
                                                                 "rho14_abs",   "rho14_arg", "diag"};

struct SweepSpec {
    std::vector<Axis> axes;
    SimulationPoint fixed;
    std::vector<std::string> outputs{"concurrence", "fidelity"};

    void validate() const
    {
        if (axes.empty()) throw ParameterError("sweep: at least one axis is required");
        for (const auto& a : axes) {
            if (!is_parameter_name(a.name)) throw ParameterError("sweep: unknown axis parameter '" + a.name + "'");
            if (a.values.empty()) throw ParameterError("sweep: axis '" + a.name + "' has no values");
            for (double v : a.values)
                if (!std::isfinite(v)) throw ParameterError("sweep: axis '" + a.name + "' has a non-finite value");
        }
        for (std::size_t i = 0; i < axes.size(); ++i)
            for (std::size_t j = i + 1; j < axes.size(); ++j)
                if (axes[i].name == axes[j].name) throw ParameterError("sweep: duplicate axis '" + axes[i].name + "'");
        if (outputs.empty()) throw ParameterError("sweep: no outputs requested");
        for (const auto& o : outputs)
            if (std::find(kMetricNames.begin(), kMetricNames.end(), o) == kMetricNames.end())
                throw ParameterError("sweep: unknown output '" + o + "'");
    }
};

struct SweepResult {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> axis_lengths; ///< leading header columns are the axes
};

inline std::vector<std::string> metric_columns(const std::vector<std::string>& outputs)
{
    std::vector<std::string> cols;
    for (const auto& o : outputs) {
        if (o == "diag") {
            for (const char* c : {"diag_hh", "diag_hv", "diag_vh", "diag_vv"}) cols.emplace_back(c);
        } else {
            cols.push_back(o);
        }
    }
    return cols;
}

inline void append_metrics(std::vector<double>& row, const std::vector<std::string>& outputs,
                           const PointResult& r)
{
    for (const auto& o : outputs) {
        if (o == "concurrence") row.push_back(r.report.concurrence);
        else if (o == "fidelity") row.push_back(r.report.fidelity);
        else if (o == "purity") row.push_back(r.report.purity);
        else if (o == "rho14_abs") row.push_back(std::abs(r.rho_tot(0, 3)));
        else if (o == "rho14_arg") row.push_back(std::arg(r.rho_tot(0, 3)));
        else if (o == "diag")
            for (std::size_t i = 0; i < 4; ++i) row.push_back(r.rho_tot(i, i).real());
    }
}

/// Calls fn(i) for i in [0, n) on a pool of worker threads. The first
/// exception thrown stops further work and is rethrown here.
template <class F>
void parallel_for(std::size_t n, F&& fn, unsigned threads = 0)
{
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::size_t error_index = n;
    std::mutex mu;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
                failed.store(true);
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
}

/// Grid point k of a row-major product over the axes (last axis fastest).
inline std::vector<double> grid_coordinates(const std::vector<Axis>& axes, std::size_t k)
{
    std::vector<double> coords(axes.size());
    for (std::size_t a = axes.size(); a-- > 0;) {
        const std::size_t len = axes[a].values.size();
        coords[a] = axes[a].values[k % len];
        k /= len;
    }
    return coords;
}

inline std::size_t grid_size(const std::vector<Axis>& axes)
{
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.values.size();
    return n;
}

inline SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 0)
{
    spec.validate();
    SweepResult result;
    for (const auto& a : spec.axes) {
        result.header.push_back(a.name);
        result.axis_lengths.push_back(a.values.size());
    }
    for (auto& c : metric_columns(spec.outputs)) result.header.push_back(std::move(c));

    const std::size_t n = grid_size(spec.axes);
    result.rows.resize(n);
    parallel_for(
        n,
        [&](std::size_t k) {
            SimulationPoint pt = spec.fixed;
            const auto coords = grid_coordinates(spec.axes, k);
            for (std::size_t a = 0; a < coords.size(); ++a) set_parameter(pt, spec.axes[a].name, coords[a]);
            std::vector<double> row = coords;
            append_metrics(row, spec.outputs, run_point(pt));
            for (double v : row)
                if (!std::isfinite(v)) throw NumericError("sweep: non-finite metric at " + describe(pt));
            result.rows[k] = std::move(row);
        },
        threads);
    return result;
}

// ---------------------------------------------------------------------------
// Sudden-death sweeps

struct EsdSweepSpec {
    SimulationPoint fixed;
    std::vector<double> g_values;
    std::vector<double> fss_values;
    EsdSearch search;
};

/// Columns: g_noise, fss, esd_found, esd_temperature. When no sudden death
/// occurs in range, esd_found = 0 and esd_temperature holds the range ceiling.
inline SweepResult run_esd_sweep(const EsdSweepSpec& spec, unsigned threads = 0)
{
    if (spec.g_values.empty() || spec.fss_values.empty())
        throw ParameterError("esd sweep: g and fss value lists must be non-empty");
    SweepResult result;
    result.header = {"g_noise", "fss", "esd_found", "esd_temperature"};
    result.axis_lengths = {spec.g_values.size(), spec.fss_values.size()};
    const std::vector<Axis> axes{{"g_noise", spec.g_values}, {"fss", spec.fss_values}};
    const std::size_t n = grid_size(axes);
    result.rows.resize(n);
    parallel_for(
        n,
        [&](std::size_t k) {
            SimulationPoint pt = spec.fixed;
            const auto coords = grid_coordinates(axes, k);
            pt.params.g_noise = coords[0];
            pt.params.fss = coords[1];
            const EsdResult e = detail::annotate(describe(pt), [&] {
                return esd_temperature(pt.params, pt.tau_g, pt.w_g, spec.search);
            });
            result.rows[k] = {coords[0], coords[1], e.found ? 1.0 : 0.0,
                              e.found ? e.temperature : spec.search.t_hi};
        },
        threads);
    return result;
}

// ---------------------------------------------------------------------------
// Figure presets

/// One output file of a preset: either a metric sweep or an ESD sweep.
struct Panel {
    std::string name;
    bool is_esd = false;
    SweepSpec sweep;
    EsdSweepSpec esd;
    std::string svg_kind = "line"; ///< "line" or "heatmap"
};

inline constexpr std::array<std::string_view, 7> kPresetNames = {"fig2a", "fig2b", "fig2c", "fig3a",
                                                                 "fig3b", "fig4",  "fig5"};

/// Panels of a named preset, built on top of `base` (default: the measured
/// dot parameters). Throws ParameterError for unknown names.
inline std::vector<Panel> preset_panels(std::string_view name, const SimulationPoint& base = {})
{
    auto sweep_panel = [&](std::string panel_name, std::vector<Axis> axes, std::vector<std::string> outputs,
                           SimulationPoint fixed, std::string kind) {
        Panel p;
        p.name = std::move(panel_name);
        p.sweep.axes = std::move(axes);
        p.sweep.outputs = std::move(outputs);
        p.sweep.fixed = fixed;
        p.svg_kind = std::move(kind);
        return p;
    };

    SimulationPoint pt = base;
    if (name == "fig2a") {
        pt.tau_g = 0.0;
        pt.params.fss = 2.5;
        return {sweep_panel("fig2a", {{"w_g", linspace(0.01, 5.0, 250)}}, {"fidelity", "concurrence"}, pt, "line")};
    }
    if (name == "fig2b" || name == "fig2c") {
        pt.w_g = 0.5;
        pt.params.fss = name == "fig2b" ? 2.5 : 3.6;
        return {sweep_panel(std::string(name), {{"tau_g", linspace(0.0, 4.0, 201)}}, {"fidelity"}, pt, "line")};
    }
    if (name == "fig3a") {
        pt.tau_g = 0.0;
        pt.params.fss = 2.5;
        return {sweep_panel("fig3a", {{"w_g", linspace(0.05, 2.0, 40)}, {"temperature", linspace(0.0, 150.0, 76)}},
                            {"concurrence"}, pt, "heatmap")};
    }
    if (name == "fig3b") {
        pt.w_g = 0.1;
        pt.params.fss = 2.5;
        return {sweep_panel("fig3b", {{"tau_g", linspace(0.0, 3.0, 31)}, {"temperature", linspace(0.0, 150.0, 76)}},
                            {"concurrence"}, pt, "heatmap")};
    }
    if (name == "fig4") {
        std::vector<Panel> panels;
        const std::array<std::pair<double, double>, 4> gates{{{0.1, 0.0}, {0.5, 0.0}, {0.1, 0.5}, {0.5, 0.5}}};
        const char* suffix = "abcd";
        for (std::size_t i = 0; i < gates.size(); ++i) {
            SimulationPoint q = pt;
            q.w_g = gates[i].first;
            q.tau_g = gates[i].second;
            panels.push_back(sweep_panel(std::string("fig4") + suffix[i],
                                         {{"fss", {0.5, 2.5, 3.5, 5.0}}, {"temperature", linspace(0.0, 150.0, 76)}},
                                         {"concurrence"}, q, "line"));
        }
        return panels;
    }
    if (name == "fig5") {
        Panel p;
        p.name = "fig5";
        p.is_esd = true;
        p.esd.fixed = pt;
        p.esd.fixed.tau_g = 0.5;
        p.esd.fixed.w_g = 0.1;
        p.esd.g_values = {0.0, 0.45, 1.0};
        p.esd.fss_values = linspace(0.5, 6.0, 12);
        p.esd.search = EsdSearch{1.0, 1000.0, 0.05, 2.0};
        return {p};
    }
    throw ParameterError("unknown preset '" + std::string(name) + "'");
}

} // namespace qdcascade
