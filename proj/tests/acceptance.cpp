// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fail.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qdcascade/qdcascade.hpp"

using namespace qdcascade;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const std::string& id, bool ok, const std::string& detail)
{
    std::printf("%s criterion %s: %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Runs fn; any library exception becomes a FAIL line.
void guarded(const std::string& id, const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const std::exception& e) {
        report(id, false, std::string("exception: ") + e.what());
    }
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double fidelity_at(double tau_g, double w_g, double fss = 2.5)
{
    SimulationPoint pt;
    pt.params.fss = fss;
    pt.tau_g = tau_g;
    pt.w_g = w_g;
    return run_point(pt).report.fidelity;
}

std::vector<double> peaks(const std::vector<double>& x, const std::vector<double>& y)
{
    std::vector<double> out;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (y[i] > y[i - 1] && y[i] >= y[i + 1]) {
            const double denom = y[i - 1] - 2.0 * y[i] + y[i + 1];
            const double shift = denom != 0.0 ? 0.5 * (y[i - 1] - y[i + 1]) / denom : 0.0;
            out.push_back(x[i] + shift * (x[1] - x[0]));
        }
    }
    return out;
}

void criterion1()
{
    const auto t0 = std::chrono::steady_clock::now();
    const double f = fidelity_at(0.0, 0.049);
    const double dt = seconds_since(t0);
    report("1", std::abs(f - 0.73) <= 0.02 && dt < 10.0,
           fmt("fidelity(w_g=49 ps) = %.5f (target 0.73 +- 0.02), %.2f s", f, dt));
}

void criterion2()
{
    bool long_ok = true;
    double worst_long = 0.0;
    for (double w : {5.0, 7.5, 10.0}) {
        const double f = fidelity_at(0.0, w);
        worst_long = std::max(worst_long, f);
        long_ok = long_ok && f < 0.5;
    }
    const auto w = linspace(0.049, 5.0, 200);
    int crossings = 0;
    double crossing_at = 0.0;
    double prev = fidelity_at(0.0, w[0]);
    for (std::size_t i = 1; i < w.size(); ++i) {
        const double f = fidelity_at(0.0, w[i]);
        if ((prev - 0.5) * (f - 0.5) < 0.0 || (f == 0.5)) {
            ++crossings;
            crossing_at = w[i];
        }
        prev = f;
    }
    report("2", long_ok && crossings == 1,
           fmt("max fidelity for w_g >= 5 ns = %.4f, crossings of 0.5 = %.0f (near w_g = %.3f ns)", worst_long,
               crossings, crossing_at));
}

void criterion3()
{
    double spacing[2];
    const double fss[2] = {2.5, 3.6};
    bool ok = true;
    std::string detail;
    for (int k = 0; k < 2; ++k) {
        const auto tau = linspace(0.0, 4.0, 201);
        std::vector<double> f;
        for (double t : tau) f.push_back(fidelity_at(t, 0.5, fss[k]));
        const auto p = peaks(tau, f);
        if (p.size() < 2) {
            report("3", false, "fewer than two fidelity maxima found");
            return;
        }
        spacing[k] = (p.back() - p.front()) / static_cast<double>(p.size() - 1);
        const double expected = 2.0 * std::numbers::pi * PhysicalConstants::hbar / fss[k];
        ok = ok && std::abs(spacing[k] - expected) <= 0.03 * expected;
        detail += fmt("S=%.1f: spacing %.4f ns vs %.4f ns; ", fss[k], spacing[k], expected);
    }
    const double ratio = spacing[0] / spacing[1];
    ok = ok && std::abs(ratio - 3.6 / 2.5) <= 0.02 * 3.6 / 2.5;
    report("3", ok, detail + fmt("ratio %.4f vs %.4f", ratio, 3.6 / 2.5));
}

void criterion4()
{
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double temp : {10.0, 80.0})
        for (double tau_g : linspace(0.0, 2.0, 5))
            for (double w_g : linspace(0.05, 2.0, 5)) {
                CascadeParams p;
                p.temperature = temp;
                const auto numeric = assemble_raw_matrix(p, tau_g, w_g).entries(0, 3);
                const auto exact = rho14_analytic(p, resolve_gate(p, tau_g, w_g)).normalized;
                worst = std::max(worst, std::abs(numeric - exact) / std::abs(exact));
            }
    const double dt = seconds_since(t0);
    report("4", worst <= 1e-6 && dt < 60.0,
           fmt("worst relative rho14 deviation %.3e over 5x5 gates at T = 10, 80 K, %.2f s", worst, dt));
}

void criterion5()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = run_validation(1000);
    const double dt = seconds_since(t0);
    std::string failed;
    for (const auto& c : rep.checks)
        if (!c.passed()) failed += " " + c.name;
    report("5", rep.passed() && dt < 120.0,
           fmt("%.0f invariant checks over 1000 samples, %.2f s", static_cast<double>(rep.checks.size()), dt) +
               (failed.empty() ? "" : "; failing:" + failed));
}

void criterion6()
{
    // (a)
    {
        CascadeParams p;
        bool monotone = true;
        double prev = 2.0;
        for (double t = 0.0; t <= 300.0; t += 2.0) {
            const double c = concurrence_at(p, 0.5, 0.1, t);
            monotone = monotone && c <= prev + 1e-12;
            prev = c;
        }
        const auto e = esd_temperature(p, 0.5, 0.1, EsdSearch{});
        const bool exact_zero = e.found && concurrence_at(p, 0.5, 0.1, e.bracket_hi) == 0.0;
        report("6a", monotone && e.found && exact_zero && !e.multi_crossing,
               fmt("C(T) non-increasing on 0..300 K: %.0f; C = 0 from T_ESD = %.2f K", monotone ? 1.0 : 0.0,
                   e.temperature));
    }
    // (b) and (c)
    const std::vector<double> splittings{1.0, 2.5, 3.5, 5.0};
    for (double g : {0.45, 0.0}) {
        std::vector<EsdResult> res;
        for (double s : splittings) {
            CascadeParams p;
            p.fss = s;
            p.g_noise = g;
            res.push_back(esd_temperature(p, 0.5, 0.1, EsdSearch{}));
        }
        auto t_of = [&](std::size_t i) { return res[i].found ? res[i].temperature : 1e300; };
        bool non_increasing = true;
        for (std::size_t i = 1; i < res.size(); ++i) non_increasing = non_increasing && t_of(i) <= t_of(i - 1);
        std::string detail = fmt("g = %.2f, T_ESD(S = 1, 2.5, 3.5, 5) =", g);
        for (std::size_t i = 0; i < res.size(); ++i)
            detail += res[i].found ? fmt(" %.1f K", res[i].temperature) : std::string(" none");
        report("6b", non_increasing, detail);
        if (g == 0.0) report("6c", res[2].found && res[3].found, detail);
    }
    // (d)
    {
        CascadeParams p;
        p.fss = 0.5;
        const double c4 = concurrence_at(p, 0.0, 0.1, 4.0);
        const double c20 = concurrence_at(p, 0.0, 0.1, 20.0);
        report("6d", std::abs(c20 - c4) < 0.1,
               fmt("S = 0.5 ueV: C(4 K) = %.4f, C(20 K) = %.4f, |dC| = %.4f", c4, c20, std::abs(c20 - c4)));
    }
}

void criterion7()
{
    auto pm = [](const DensityMatrix4& m) { return PolarizationMatrix{m, Provenance::pol}; };
    DensityMatrix4 bell;
    bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
    DensityMatrix4 id4 = 0.25 * DensityMatrix4::identity();
    DensityMatrix4 werner = 0.5 * bell + 0.5 * id4;
    const double c_bell = concurrence(pm(bell));
    const double c_id = concurrence(pm(id4));
    const double c_w = concurrence(pm(werner));
    const double c_mix = concurrence(mix_total(pm(bell), 0.91, 0.45));
    const bool ok = std::abs(c_bell - 1.0) <= 1e-9 && std::abs(c_id) <= 1e-9 && std::abs(c_w - 0.25) <= 1e-9 &&
                    std::abs(c_mix - 0.4724) <= 1e-4;
    report("7", ok, fmt("Bell %.10f, I/4 %.3e, Werner(0.5) %.10f, mixed example %.6f", c_bell, c_id, c_w, c_mix));
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void criterion8()
{
    const fs::path root = fs::temp_directory_path() / "qdcascade_acceptance";
    fs::remove_all(root);
    std::string csv[2];
    for (int k = 0; k < 2; ++k) {
        const fs::path dir = root / std::to_string(k);
        const std::string cmd =
            std::string("\"") + QDCASCADE_CLI_PATH + "\" fig fig2a --no-svg -o \"" + dir.string() + "\" >/dev/null";
        const int status = std::system(cmd.c_str());
        if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
            report("8", false, "fig fig2a exited with failure");
            return;
        }
        csv[k] = slurp(dir / "fig2a.csv");
    }
    fs::remove_all(root);
    report("8", !csv[0].empty() && csv[0] == csv[1],
           fmt("two runs of fig fig2a: %.0f bytes each, identical", static_cast<double>(csv[0].size())));
}

} // namespace

int main()
{
    guarded("1", criterion1);
    guarded("2", criterion2);
    guarded("3", criterion3);
    guarded("4", criterion4);
    guarded("5", criterion5);
    guarded("6", criterion6);
    guarded("7", criterion7);
    guarded("8", criterion8);
    std::printf("%s\n", failures == 0 ? "all acceptance criteria pass" : "some acceptance criteria fail");
    return failures == 0 ? 0 : 1;
}
