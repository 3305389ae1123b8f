// Command-line front end: simulate, sweep, esd, fig, validate.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qdcascade/qdcascade.hpp"

namespace fs = std::filesystem;
using namespace qdcascade;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParameter = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitIo = 3;

constexpr const char* kOutDirEnv = "QDCASCADE_OUT_DIR";

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& o)
{
    cmd->add_option("-c,--config", o.config_path, "JSON configuration file");
    cmd->add_option("-s,--set", o.overrides, "Parameter override name=value (repeatable)");
}

Config load(const CommonOptions& o)
{
    Config cfg = o.config_path.empty() ? Config{} : load_config(o.config_path);
    if (o.config_path.empty()) cfg.sweep.fixed = cfg.point;
    for (const auto& s : o.overrides) apply_override(cfg, s);
    cfg.point.params.validate();
    return cfg;
}

std::string resolve_out_dir(const std::string& flag)
{
    std::string dir = flag;
    if (dir.empty()) {
        const char* env = std::getenv(kOutDirEnv);
        dir = env && *env ? env : ".";
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
    return dir;
}

void print_matrix(const char* title, const DensityMatrix4& m)
{
    std::printf("%s (basis HH, HV, VH, VV)\n", title);
    for (std::size_t i = 0; i < 4; ++i) {
        std::printf("  ");
        for (std::size_t j = 0; j < 4; ++j) std::printf("% .6f%+.6fi  ", m(i, j).real(), m(i, j).imag());
        std::printf("\n");
    }
}

nlohmann::ordered_json matrix_json(const DensityMatrix4& m)
{
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < 4; ++i) {
        auto row = nlohmann::ordered_json::array();
        for (std::size_t j = 0; j < 4; ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(row);
    }
    return rows;
}

nlohmann::ordered_json point_json(const SimulationPoint& pt)
{
    nlohmann::ordered_json j;
    for (auto name : kParameterNames) j[std::string(name)] = get_parameter(pt, name);
    return j;
}

int cmd_simulate(const CommonOptions& o, bool as_json)
{
    const Config cfg = load(o);
    const PointResult r = run_point(cfg.point);
    if (as_json) {
        nlohmann::ordered_json j;
        j["parameters"] = point_json(cfg.point);
        j["concurrence"] = r.report.concurrence;
        j["fidelity"] = r.report.fidelity;
        j["purity"] = r.report.purity;
        j["sqrt_lambda"] = r.report.sqrt_lambda;
        j["rho_pol"] = matrix_json(r.rho_pol.entries);
        j["rho_tot"] = matrix_json(r.rho_tot.entries);
        std::cout << j.dump(2) << "\n";
        return kExitOk;
    }
    std::printf("parameters %s\n", describe(cfg.point).c_str());
    print_matrix("rho_pol", r.rho_pol.entries);
    print_matrix("rho_tot", r.rho_tot.entries);
    std::printf("concurrence  %s\n", format_number(r.report.concurrence).c_str());
    std::printf("fidelity     %s\n", format_number(r.report.fidelity).c_str());
    std::printf("purity       %s\n", format_number(r.report.purity).c_str());
    std::printf("sqrt_lambda  %s %s %s %s\n", format_number(r.report.sqrt_lambda[0]).c_str(),
                format_number(r.report.sqrt_lambda[1]).c_str(), format_number(r.report.sqrt_lambda[2]).c_str(),
                format_number(r.report.sqrt_lambda[3]).c_str());
    return kExitOk;
}

void write_outputs(const SweepResult& result, const std::string& dir, const std::string& base,
                   const std::vector<std::string>& formats, const std::string& svg_kind, const std::string& metric)
{
    for (const auto& f : formats) {
        const std::string path = (fs::path(dir) / (base + "." + f)).string();
        if (f == "csv") emit_csv(result, path);
        else if (f == "json") emit_json(result, path);
        else if (f == "svg") emit_svg(result, path, svg_kind, metric, base);
        else throw ParameterError("unknown output format '" + f + "'");
        std::printf("wrote %s\n", path.c_str());
    }
}

int cmd_sweep(const CommonOptions& o, const std::string& out_flag, const std::string& name,
              const std::vector<std::string>& formats, std::string svg_kind, const std::string& metric)
{
    const Config cfg = load(o);
    if (!cfg.has_sweep) throw ParameterError("sweep: configuration has no 'sweep' section");
    const SweepResult result = run_sweep(cfg.sweep);
    if (svg_kind.empty()) svg_kind = result.axis_lengths.size() == 2 ? "heatmap" : "line";
    write_outputs(result, resolve_out_dir(out_flag), name, formats, svg_kind, metric);
    return kExitOk;
}

int cmd_esd(const CommonOptions& o, EsdSearch overrides, bool as_json)
{
    const Config cfg = load(o);
    EsdSearch search = cfg.esd;
    if (overrides.t_lo >= 0) search.t_lo = overrides.t_lo;
    if (overrides.t_hi >= 0) search.t_hi = overrides.t_hi;
    if (overrides.tolerance > 0) search.tolerance = overrides.tolerance;
    if (overrides.coarse_step > 0) search.coarse_step = overrides.coarse_step;
    const EsdResult e = esd_temperature(cfg.point.params, cfg.point.tau_g, cfg.point.w_g, search);
    if (as_json) {
        nlohmann::ordered_json j;
        j["fss"] = e.fss;
        j["g_noise"] = e.g_noise;
        j["found"] = e.found;
        if (e.found) {
            j["sudden_death_temperature"] = e.temperature;
            j["bracket"] = {e.bracket_lo, e.bracket_hi};
        } else {
            j["sudden_death_temperature"] = "none-in-range";
        }
        j["tolerance"] = e.tolerance;
        j["multi_crossing"] = e.multi_crossing;
        std::cout << j.dump(2) << "\n";
        return kExitOk;
    }
    std::printf("fss                       %s ueV\n", format_number(e.fss).c_str());
    std::printf("g_noise                   %s\n", format_number(e.g_noise).c_str());
    if (e.found) {
        std::printf("sudden_death_temperature  %s K\n", format_number(e.temperature).c_str());
        std::printf("bracket                   [%s, %s] K\n", format_number(e.bracket_lo).c_str(),
                    format_number(e.bracket_hi).c_str());
    } else {
        std::printf("sudden_death_temperature  none-in-range [%s, %s] K\n", format_number(search.t_lo).c_str(),
                    format_number(search.t_hi).c_str());
    }
    std::printf("tolerance                 %s K\n", format_number(e.tolerance).c_str());
    if (e.multi_crossing) std::printf("warning: concurrence is not monotone in T on the scan grid\n");
    return kExitOk;
}

int cmd_fig(const CommonOptions& o, const std::string& preset, const std::string& out_flag, bool svg)
{
    const Config cfg = load(o);
    std::vector<std::string> names;
    if (preset == "all") {
        for (auto n : kPresetNames) names.emplace_back(n);
    } else {
        names.push_back(preset);
    }
    const std::string dir = resolve_out_dir(out_flag);
    for (const auto& n : names) {
        for (const Panel& panel : preset_panels(n, cfg.point)) {
            const SweepResult result = panel.is_esd ? run_esd_sweep(panel.esd) : run_sweep(panel.sweep);
            std::vector<std::string> formats{"csv"};
            if (svg) formats.emplace_back("svg");
            const std::string metric = panel.is_esd ? "esd_temperature" : result.header[result.axis_lengths.size()];
            write_outputs(result, dir, panel.name, formats, panel.svg_kind, metric);
        }
    }
    return kExitOk;
}

int cmd_validate(std::size_t samples, std::uint64_t seed)
{
    const ValidationReport report = run_validation(samples, seed);
    for (const auto& c : report.checks) {
        std::printf("[%s] %-62s worst %.3e  %s %.1e  (n=%zu)\n", c.passed() ? "PASS" : "FAIL", c.name.c_str(),
                    c.worst, c.lower_bound ? ">=" : "<=", c.threshold, c.samples);
    }
    std::printf("%s\n", report.passed() ? "all invariants hold" : "invariant violations found");
    return report.passed() ? kExitOk : kExitNumeric;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Polarization entanglement of photon pairs from a quantum-dot biexciton cascade"};
    app.require_subcommand(1);

    CommonOptions sim_opts;
    bool sim_json = false;
    auto* sim = app.add_subcommand("simulate", "Evaluate one parameter point");
    add_common(sim, sim_opts);
    sim->add_flag("--json", sim_json, "Print JSON instead of text");

    CommonOptions sweep_opts;
    std::string sweep_out, sweep_name = "sweep", svg_kind, svg_metric;
    std::vector<std::string> sweep_formats{"csv"};
    auto* sweep = app.add_subcommand("sweep", "Grid sweep from the config's 'sweep' section");
    add_common(sweep, sweep_opts);
    sweep->add_option("-o,--out-dir", sweep_out, std::string("Output directory (default: $") + kOutDirEnv + " or .)");
    sweep->add_option("-n,--name", sweep_name, "Base name of output files");
    sweep->add_option("-f,--format", sweep_formats, "Output formats: csv, json, svg")->delimiter(',');
    sweep->add_option("--svg-kind", svg_kind, "line or heatmap (default by axis count)");
    sweep->add_option("--metric", svg_metric, "Metric column drawn in the SVG");

    CommonOptions esd_opts;
    EsdSearch esd_over{-1.0, -1.0, -1.0, -1.0};
    bool esd_json = false;
    auto* esd = app.add_subcommand("esd", "Find the entanglement sudden-death temperature");
    add_common(esd, esd_opts);
    esd->add_option("--t-lo", esd_over.t_lo, "Lower end of the temperature scan, K");
    esd->add_option("--t-hi", esd_over.t_hi, "Upper end of the temperature scan, K");
    esd->add_option("--tol", esd_over.tolerance, "Bisection tolerance, K");
    esd->add_option("--step", esd_over.coarse_step, "Coarse scan step, K");
    esd->add_flag("--json", esd_json, "Print JSON instead of text");

    CommonOptions fig_opts;
    std::string preset, fig_out;
    bool no_svg = false;
    auto* fig = app.add_subcommand("fig", "Run a named figure preset (fig2a ... fig5, or all)");
    add_common(fig, fig_opts);
    fig->add_option("preset", preset, "Preset name")->required();
    fig->add_option("-o,--out-dir", fig_out, std::string("Output directory (default: $") + kOutDirEnv + " or .)");
    fig->add_flag("--no-svg", no_svg, "Only write CSV");

    std::size_t samples = 1000;
    std::uint64_t seed = 20100301;
    auto* validate = app.add_subcommand("validate", "Run the randomized invariant suite");
    validate->add_option("--samples", samples, "Number of random parameter sets");
    validate->add_option("--seed", seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitParameter;
    }

    try {
        if (*sim) return cmd_simulate(sim_opts, sim_json);
        if (*sweep) return cmd_sweep(sweep_opts, sweep_out, sweep_name, sweep_formats, svg_kind, svg_metric);
        if (*esd) return cmd_esd(esd_opts, esd_over, esd_json);
        if (*fig) return cmd_fig(fig_opts, preset, fig_out, !no_svg);
        if (*validate) return cmd_validate(samples, seed);
    } catch (const ParameterError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitParameter;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumeric;
    }
    return kExitParameter;
}
