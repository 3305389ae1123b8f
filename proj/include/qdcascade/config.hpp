#pragma once

// Configuration files. A config is a JSON object with optional sections:
//
//   {
//     "rates":  {"gamma32": 1.8, "gamma31": 1.8, "gamma20": 1.3, "gamma10": 1.3},
//     "levels": {"fss": 2.5, "biexciton_energy": 0.0},
//     "phonon": {"temperature": 10.0, "kappa0": 2e-5},
//     "mixing": {"eta": 0.91, "g_noise": 0.45},
//     "gate":   {"tau_g": 0.0, "w_g": 0.5},
//     "esd":    {"t_lo": 1.0, "t_hi": 1000.0, "tolerance": 0.01, "coarse_step": 2.0},
//     "sweep":  {"axes": [{"name": "temperature", "values": [4, 10, 20]},
//                         {"name": "w_g", "start": 0.05, "stop": 2.0, "count": 40}],
//                "outputs": ["concurrence", "fidelity"]}
//   }
//
// Missing keys keep their defaults; unknown sections or keys are rejected.

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qdcascade/errors.hpp"
#include "qdcascade/experiment.hpp"
#include "qdcascade/metrics.hpp"

namespace qdcascade {

struct Config {
    SimulationPoint point;
    EsdSearch esd;
    bool has_sweep = false;
    SweepSpec sweep; ///< sweep.fixed mirrors `point` after any overrides are applied
};

namespace detail {

inline double number_at(const nlohmann::json& j, const std::string& where)
{
    if (!j.is_number()) throw ParameterError("config: '" + where + "' must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParameterError("config: '" + where + "' must be finite");
    return v;
}

inline void read_parameter_section(const nlohmann::json& sec, const std::string& name,
                                   std::initializer_list<std::string_view> keys, SimulationPoint& pt)
{
    if (!sec.is_object()) throw ParameterError("config: section '" + name + "' must be an object");
    for (const auto& [key, value] : sec.items()) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ParameterError("config: unknown key '" + key + "' in section '" + name + "'");
        set_parameter(pt, key, number_at(value, name + "." + key));
    }
}

inline Axis read_axis(const nlohmann::json& a)
{
    if (!a.is_object()) throw ParameterError("config: each sweep axis must be an object");
    Axis axis;
    for (const auto& [key, _] : a.items())
        if (key != "name" && key != "values" && key != "start" && key != "stop" && key != "count")
            throw ParameterError("config: unknown key '" + key + "' in sweep axis");
    if (!a.contains("name") || !a["name"].is_string()) throw ParameterError("config: sweep axis needs a 'name'");
    axis.name = a["name"].get<std::string>();
    if (!is_parameter_name(axis.name)) throw ParameterError("config: unknown sweep parameter '" + axis.name + "'");
    if (a.contains("values")) {
        if (a.contains("start") || a.contains("stop") || a.contains("count"))
            throw ParameterError("config: axis '" + axis.name + "' mixes 'values' with a range");
        if (!a["values"].is_array()) throw ParameterError("config: axis '" + axis.name + "' values must be an array");
        for (const auto& v : a["values"]) axis.values.push_back(number_at(v, "sweep.axes." + axis.name));
    } else {
        if (!a.contains("start") || !a.contains("stop") || !a.contains("count"))
            throw ParameterError("config: axis '" + axis.name + "' needs 'values' or start/stop/count");
        const double start = number_at(a["start"], axis.name + ".start");
        const double stop = number_at(a["stop"], axis.name + ".stop");
        if (!a["count"].is_number_integer() || a["count"].get<long long>() <= 0)
            throw ParameterError("config: axis '" + axis.name + "' count must be a positive integer");
        axis.values = linspace(start, stop, static_cast<std::size_t>(a["count"].get<long long>()));
    }
    if (axis.values.empty()) throw ParameterError("config: axis '" + axis.name + "' has no values");
    return axis;
}

} // namespace detail

inline Config parse_config(std::string_view text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParameterError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw ParameterError("config: top level must be an object");

    Config cfg;
    for (const auto& [section, body] : j.items()) {
        if (section == "rates") {
            detail::read_parameter_section(body, section, {"gamma32", "gamma31", "gamma20", "gamma10"}, cfg.point);
        } else if (section == "levels") {
            detail::read_parameter_section(body, section, {"fss", "biexciton_energy"}, cfg.point);
        } else if (section == "phonon") {
            detail::read_parameter_section(body, section, {"temperature", "kappa0"}, cfg.point);
        } else if (section == "mixing") {
            detail::read_parameter_section(body, section, {"eta", "g_noise"}, cfg.point);
        } else if (section == "gate") {
            detail::read_parameter_section(body, section, {"tau_g", "w_g"}, cfg.point);
        } else if (section == "esd") {
            if (!body.is_object()) throw ParameterError("config: section 'esd' must be an object");
            for (const auto& [key, value] : body.items()) {
                const double v = detail::number_at(value, "esd." + key);
                if (key == "t_lo") cfg.esd.t_lo = v;
                else if (key == "t_hi") cfg.esd.t_hi = v;
                else if (key == "tolerance") cfg.esd.tolerance = v;
                else if (key == "coarse_step") cfg.esd.coarse_step = v;
                else throw ParameterError("config: unknown key '" + key + "' in section 'esd'");
            }
        } else if (section == "sweep") {
            if (!body.is_object()) throw ParameterError("config: section 'sweep' must be an object");
            cfg.has_sweep = true;
            for (const auto& [key, value] : body.items()) {
                if (key == "axes") {
                    if (!value.is_array()) throw ParameterError("config: sweep.axes must be an array");
                    for (const auto& a : value) cfg.sweep.axes.push_back(detail::read_axis(a));
                } else if (key == "outputs") {
                    if (!value.is_array()) throw ParameterError("config: sweep.outputs must be an array");
                    cfg.sweep.outputs.clear();
                    for (const auto& o : value) {
                        if (!o.is_string()) throw ParameterError("config: sweep.outputs entries must be strings");
                        cfg.sweep.outputs.push_back(o.get<std::string>());
                    }
                } else {
                    throw ParameterError("config: unknown key '" + key + "' in section 'sweep'");
                }
            }
        } else {
            throw ParameterError("config: unknown section '" + section + "'");
        }
    }
    cfg.sweep.fixed = cfg.point;
    if (cfg.has_sweep) cfg.sweep.validate();
    return cfg;
}

inline Config load_config(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

/// Applies a "name=value" override to the point (and to the sweep base).
inline void apply_override(Config& cfg, std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) throw ParameterError("override '" + std::string(assignment) + "' is not name=value");
    const std::string name(assignment.substr(0, eq));
    const std::string text(assignment.substr(eq + 1));
    if (!is_parameter_name(name)) throw ParameterError("override: unknown parameter '" + name + "'");
    double value = 0.0;
    std::size_t used = 0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || !std::isfinite(value))
        throw ParameterError("override: '" + text + "' is not a finite number");
    set_parameter(cfg.point, name, value);
    set_parameter(cfg.sweep.fixed, name, value);
}

} // namespace qdcascade
