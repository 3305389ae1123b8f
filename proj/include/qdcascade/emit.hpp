#pragma once

// CSV / JSON / SVG serialization of sweep results.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qdcascade/errors.hpp"
#include "qdcascade/experiment.hpp"

namespace qdcascade {

/// 12 significant digits; scientific notation when |x| is outside [1e-3, 1e6).
/// Fixed-notation output has trailing zeros trimmed.
inline std::string format_number(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";
    char buf[64];
    const double ax = std::abs(x);
    if (ax < 1e-3 || ax >= 1e6) {
        std::snprintf(buf, sizeof buf, "%.11e", x);
        return buf;
    }
    const int int_digits = static_cast<int>(std::floor(std::log10(ax))) + 1;
    const int decimals = std::max(0, 12 - int_digits);
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    std::string s = buf;
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

inline std::string to_csv(const SweepResult& r)
{
    std::string out;
    for (std::size_t i = 0; i < r.header.size(); ++i) {
        if (i) out += ',';
        out += r.header[i];
    }
    out += '\n';
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_number(row[i]);
        }
        out += '\n';
    }
    return out;
}

inline std::string to_json(const SweepResult& r)
{
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < r.header.size() && i < row.size(); ++i) obj[r.header[i]] = row[i];
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

namespace detail {

struct Rgb {
    int r, g, b;
};

// perceptually ordered 5-stop ramp (dark blue -> yellow)
inline Rgb colormap(double t)
{
    static constexpr Rgb stops[] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
    const double x = t * 4.0;
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(x), 3);
    const double f = x - static_cast<double>(i);
    auto lerp = [f](int a, int b) { return static_cast<int>(std::lround(a + (b - a) * f)); };
    return {lerp(stops[i].r, stops[i + 1].r), lerp(stops[i].g, stops[i + 1].g), lerp(stops[i].b, stops[i + 1].b)};
}

inline std::string svg_escape(std::string_view s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

inline std::string fmt_short(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct Frame {
    double width = 640, height = 420;
    double left = 70, right = 150, top = 30, bottom = 55;
    double x0, x1, y0, y1;

    double px(double x) const
    {
        const double span = x1 > x0 ? x1 - x0 : 1.0;
        return left + (x - x0) / span * (width - left - right);
    }
    double py(double y) const
    {
        const double span = y1 > y0 ? y1 - y0 : 1.0;
        return height - bottom - (y - y0) / span * (height - top - bottom);
    }
};

inline void axes_and_labels(std::ostringstream& o, const Frame& f, std::string_view xlabel, std::string_view ylabel,
                            std::string_view title)
{
    const double xa = f.left, xb = f.width - f.right, ya = f.top, yb = f.height - f.bottom;
    o << "<rect x=\"" << xa << "\" y=\"" << ya << "\" width=\"" << xb - xa << "\" height=\"" << yb - ya
      << "\" fill=\"none\" stroke=\"#000\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = f.x0 + (f.x1 - f.x0) * k / 4.0;
        const double yv = f.y0 + (f.y1 - f.y0) * k / 4.0;
        o << "<text x=\"" << f.px(xv) << "\" y=\"" << yb + 16 << "\" font-size=\"11\" text-anchor=\"middle\">"
          << fmt_short(xv) << "</text>\n";
        o << "<text x=\"" << xa - 6 << "\" y=\"" << f.py(yv) + 4 << "\" font-size=\"11\" text-anchor=\"end\">"
          << fmt_short(yv) << "</text>\n";
    }
    o << "<text x=\"" << (xa + xb) / 2 << "\" y=\"" << f.height - 12
      << "\" font-size=\"13\" text-anchor=\"middle\">" << svg_escape(xlabel) << "</text>\n";
    o << "<text x=\"16\" y=\"" << (ya + yb) / 2 << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (ya + yb) / 2 << ")\">" << svg_escape(ylabel) << "</text>\n";
    o << "<text x=\"" << (xa + xb) / 2 << "\" y=\"18\" font-size=\"14\" text-anchor=\"middle\">" << svg_escape(title)
      << "</text>\n";
}

} // namespace detail

/// Self-contained SVG. "line": one series per metric column (1 axis) or per
/// value of the first axis (2 axes, plotting `metric`). "heatmap": 2 axes,
/// one coloured cell per grid node.
inline std::string to_svg(const SweepResult& r, std::string_view kind, std::string_view metric = {},
                          std::string_view title = {})
{
    const std::size_t n_axes = r.axis_lengths.size();
    if (n_axes == 0 || n_axes > 2)
        throw ParameterError("svg: only 1- or 2-axis sweeps can be drawn (got " + std::to_string(n_axes) + ")");
    if (kind != "line" && kind != "heatmap") throw ParameterError("svg: kind must be 'line' or 'heatmap'");
    if (kind == "heatmap" && n_axes != 2) throw ParameterError("svg: heatmap needs exactly 2 axes");
    if (r.header.size() <= n_axes) throw ParameterError("svg: result has no metric columns");

    std::size_t mcol = n_axes;
    if (!metric.empty()) {
        auto it = std::find(r.header.begin(), r.header.end(), metric);
        if (it == r.header.end() || static_cast<std::size_t>(it - r.header.begin()) < n_axes)
            throw ParameterError("svg: unknown metric column '" + std::string(metric) + "'");
        mcol = static_cast<std::size_t>(it - r.header.begin());
    }

    std::ostringstream o;
    o.precision(6);
    detail::Frame f;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\"" << f.height
      << "\" viewBox=\"0 0 " << f.width << " " << f.height << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";

    static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

    if (kind == "heatmap") {
        const std::size_t nx = r.axis_lengths[1], ny = r.axis_lengths[0];
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& row : r.rows) {
            lo = std::min(lo, row[mcol]);
            hi = std::max(hi, row[mcol]);
        }
        if (!(hi > lo)) hi = lo + 1.0;
        f.x0 = 0;
        f.x1 = static_cast<double>(nx);
        f.y0 = 0;
        f.y1 = static_cast<double>(ny);
        const double cw = f.px(1) - f.px(0), ch = f.py(0) - f.py(1);
        o << "<g shape-rendering=\"crispEdges\">\n";
        for (std::size_t k = 0; k < r.rows.size(); ++k) {
            const std::size_t iy = k / nx, ix = k % nx;
            const auto c = detail::colormap((r.rows[k][mcol] - lo) / (hi - lo));
            o << "<rect class=\"cell\" x=\"" << f.px(static_cast<double>(ix)) << "\" y=\""
              << f.py(static_cast<double>(iy + 1)) << "\" width=\"" << cw << "\" height=\"" << ch << "\" fill=\"rgb("
              << c.r << "," << c.g << "," << c.b << ")\"/>\n";
        }
        o << "</g>\n";
        // axis tick labels in data units
        const double xa = f.left, yb = f.height - f.bottom;
        for (int k = 0; k <= 4; ++k) {
            const std::size_t ix = std::min(nx - 1, static_cast<std::size_t>(k * (nx - 1) / 4));
            const std::size_t iy = std::min(ny - 1, static_cast<std::size_t>(k * (ny - 1) / 4));
            o << "<text x=\"" << f.px(ix + 0.5) << "\" y=\"" << yb + 16 << "\" font-size=\"11\" text-anchor=\"middle\">"
              << detail::fmt_short(r.rows[ix][1]) << "</text>\n";
            o << "<text x=\"" << xa - 6 << "\" y=\"" << f.py(iy + 0.5) + 4
              << "\" font-size=\"11\" text-anchor=\"end\">" << detail::fmt_short(r.rows[iy * nx][0]) << "</text>\n";
        }
        o << "<rect x=\"" << f.left << "\" y=\"" << f.top << "\" width=\"" << f.width - f.left - f.right
          << "\" height=\"" << f.height - f.top - f.bottom << "\" fill=\"none\" stroke=\"#000\"/>\n";
        o << "<text x=\"" << (f.left + f.width - f.right) / 2 << "\" y=\"" << f.height - 12
          << "\" font-size=\"13\" text-anchor=\"middle\">" << detail::svg_escape(r.header[1]) << "</text>\n";
        o << "<text x=\"16\" y=\"" << (f.top + f.height - f.bottom) / 2
          << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
          << (f.top + f.height - f.bottom) / 2 << ")\">" << detail::svg_escape(r.header[0]) << "</text>\n";
        o << "<text x=\"" << (f.left + f.width - f.right) / 2 << "\" y=\"18\" font-size=\"14\" text-anchor=\"middle\">"
          << detail::svg_escape(title.empty() ? r.header[mcol] : std::string(title)) << "</text>\n";
        // colour bar
        const double bx = f.width - f.right + 20, by0 = f.top, by1 = f.height - f.bottom;
        for (int k = 0; k < 50; ++k) {
            const auto c = detail::colormap((k + 0.5) / 50.0);
            const double y = by1 - (by1 - by0) * (k + 1) / 50.0;
            o << "<rect x=\"" << bx << "\" y=\"" << y << "\" width=\"16\" height=\"" << (by1 - by0) / 50.0 + 0.5
              << "\" fill=\"rgb(" << c.r << "," << c.g << "," << c.b << ")\"/>\n";
        }
        o << "<text x=\"" << bx + 22 << "\" y=\"" << by0 + 10 << "\" font-size=\"11\">" << detail::fmt_short(hi)
          << "</text>\n";
        o << "<text x=\"" << bx + 22 << "\" y=\"" << by1 << "\" font-size=\"11\">" << detail::fmt_short(lo)
          << "</text>\n";
        o << "<text x=\"" << bx << "\" y=\"" << by1 + 20 << "\" font-size=\"11\">"
          << detail::svg_escape(r.header[mcol]) << "</text>\n";
        o << "</svg>\n";
        return o.str();
    }

    // line chart
    struct Series {
        std::string label;
        std::vector<std::pair<double, double>> pts;
    };
    std::vector<Series> series;
    const std::size_t xcol = n_axes - 1;
    if (n_axes == 1) {
        const std::size_t first = metric.empty() ? n_axes : mcol;
        const std::size_t last = metric.empty() ? r.header.size() : mcol + 1;
        for (std::size_t c = first; c < last; ++c) {
            Series s{r.header[c], {}};
            for (const auto& row : r.rows) s.pts.emplace_back(row[0], row[c]);
            series.push_back(std::move(s));
        }
    } else {
        const std::size_t nx = r.axis_lengths[1];
        for (std::size_t k = 0; k < r.rows.size(); ++k) {
            if (k % nx == 0) series.push_back({r.header[0] + "=" + detail::fmt_short(r.rows[k][0]), {}});
            series.back().pts.emplace_back(r.rows[k][xcol], r.rows[k][mcol]);
        }
    }

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& s : series)
        for (const auto& [x, y] : s.pts) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (series.empty() || series.front().pts.empty()) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) ymax = ymin + 1.0;
    f.x0 = xmin;
    f.x1 = xmax;
    f.y0 = ymin;
    f.y1 = ymax;

    const std::string ylabel = n_axes == 1 && metric.empty() && series.size() > 1 ? "value" : r.header[mcol];
    detail::axes_and_labels(o, f, r.header[xcol], ylabel, title.empty() ? ylabel : title);
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* colour = palette[i % std::size(palette)];
        o << "<polyline class=\"series\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : series[i].pts) o << f.px(x) << "," << f.py(y) << " ";
        o << "\"/>\n";
        const double ly = f.top + 14 + 16.0 * static_cast<double>(i);
        const double lx = f.width - f.right + 10;
        o << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 18 << "\" y2=\"" << ly - 4
          << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << lx + 22 << "\" y=\"" << ly << "\" font-size=\"11\">"
          << detail::svg_escape(series[i].label) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

inline void write_text_file(const std::string& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << content;
    f.flush();
    if (!f) throw IoError("write to '" + path + "' failed");
}

inline void emit_csv(const SweepResult& r, const std::string& path) { write_text_file(path, to_csv(r)); }
inline void emit_json(const SweepResult& r, const std::string& path) { write_text_file(path, to_json(r)); }
inline void emit_svg(const SweepResult& r, const std::string& path, std::string_view kind,
                     std::string_view metric = {}, std::string_view title = {})
{
    write_text_file(path, to_svg(r, kind, metric, title));
}

} // namespace qdcascade
