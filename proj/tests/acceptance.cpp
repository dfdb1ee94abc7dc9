// one PASS/FAIL line per acceptance criterion
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace giantpcw;
using fixtures::MHz;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("C%-2d %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string f(const char* fmt, auto... v) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, v...);
    return buf;
}

double cb_at(const GiantAtom& a, const BandStructure& bs, const fixtures::Scales& sc) {
    return fixtures::solve(a, bs, sc.L_eff).chi.Cb;
}

// Least-squares line through (x, y); returns slope and R^2.
std::pair<double, double> line_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        sx += x[i], sy += y[i], sxx += x[i] * x[i], sxy += x[i] * y[i], syy += y[i] * y[i];
    const double cxx = sxx - sx * sx / n, cxy = sxy - sx * sy / n, cyy = syy - sy * sy / n;
    return {cxy / cxx, cyy > 0 ? cxy * cxy / (cxx * cyy) : 1.0};
}

void c1() {
    const auto& bs = fixtures::bands();
    const double gap = bs.gap() / (2 * std::numbers::pi * 1e9);
    const auto j = bs.nearest_index(bs.k0());
    const bool at_edge = std::abs(bs.omega[0][j] - bs.band_top()) <= 1e-9 * bs.band_top();
    report(1, at_edge && std::abs(gap - 0.8) <= 0.15 * 0.8,
           f("gap/2pi = %.5f GHz (target 0.8 +/- 15%%), band-1 top at k = km/2: %s", gap, at_edge ? "yes" : "no"));
}

void c2() {
    CircuitParams p;
    p.CJ = 450 * p.Cg;
    CircuitParams p0 = p;
    p0.CJ = 0;
    const int N = 3000;
    const auto m = chain_eigenmodes(p, N), m0 = chain_eigenmodes(p0, N);
    int modes = 0;
    double worst = 1.0;
    for (int n = 1; n < N; ++n) {
        const double k = n * std::numbers::pi / (N * p.d0);
        if (squid_dispersion(p, k) / linear_dispersion(p, k) < 0.9) break;
        ++modes;
        worst = std::min(worst, m.omega(n) / m0.omega(n));
    }
    report(2, modes > 0 && worst >= 0.9,
           f("N = 3000, CJ = 450 Cg: %d modes inside the 0.9 contour, min chain ratio %.4f", modes, worst));
}

void c3() {
    const auto& bs = fixtures::bands(5e-4);
    const auto sc = fixtures::scales(bs);
    const auto a = make_atom({{0.0, fixtures::g_weak}, {0.5 * sc.lm, 3.4 * fixtures::g_weak}}, sc.delta0);
    const auto x = default_xgrid(a, bs, sc.L_eff, 4);
    const auto dense = oracles::dense_bound_state(a, bs, x);
    const auto sol = bound_state(a, bs, x);
    const double fid = oracles::fidelity(dense.phi, sol.phi_total);
    const double de = std::abs(sol.eps_b - dense.eigenvalue) / std::abs(dense.eigenvalue);
    report(3, bs.size() >= 2000 && fid >= 0.99 && de <= 1e-6,
           f("%zu modes, fidelity %.8f, eps_b relative error %.2e", bs.size(), fid, de));
}

void c4() {
    const auto& bs = fixtures::bands();
    const auto sc = fixtures::scales(bs);
    const double g = fixtures::g_weak;
    auto best = [&](double sign) {
        double b = 0.0, xb = 0.0;
        for (int i = 0; i <= 10; ++i) {
            const double xp = sign * (0.65 + 0.01 * i);
            const double cb = cb_at(make_atom({{0.0, g}, {xp * sc.lm, g}}, sc.delta0), bs, sc);
            if (std::abs(cb) > std::abs(b)) b = cb, xb = xp;
        }
        return std::pair{b, xb};
    };
    const auto [bp, xp] = best(1.0);
    const auto [bm, xm] = best(-1.0);
    const double c0 = cb_at(make_atom({{0.0, g}, {0.0, g}}, sc.delta0), bs, sc);
    const bool ok = std::abs(bp) >= 0.9 && std::abs(bm) >= 0.9 && bp * bm < 0 && std::abs(c0) <= 0.02;
    report(4, ok, f("max |Cb| on [0.65, 0.75]: %.4f at %.2f; on [-0.75, -0.65]: %.4f at %.2f; Cb(x+ = 0) = %.2e",
                    bp, xp, bm, xm, c0));
}

void c5() {
    const auto& bs = fixtures::bands();
    const auto sc = fixtures::scales(bs);
    auto cb = [&](double s) {
        return cb_at(make_atom({{0.75 * sc.lm, s * fixtures::g_weak}}, sc.delta0), bs, sc);
    };
    const double c = cb(1.0), ch = cb(0.5), cd = cb(2.0);
    const double dev = std::max(std::abs(ch - c), std::abs(cd - c));
    report(5, std::abs(c + 0.49) <= 0.1 && dev <= 1e-3,
           f("Cb = %.4f (target -0.49 +/- 0.1), change under x0.5 / x2 coupling %.2e", c, dev));
}

void c6() {
    const auto& bs = fixtures::bands();
    const auto sc = fixtures::scales(bs);
    const double g = fixtures::g_weak;
    const double w1 = visibility(fixtures::solve(make_atom({{0.0, g}, {sc.lm, g}}, sc.delta0), bs, sc.L_eff).sol);
    const double w2 = visibility(fixtures::solve(make_atom({{0.0, g}, {2 * sc.lm, g}}, sc.delta0), bs, sc.L_eff).sol);
    report(6, w1 < 0.05 && w2 > 1.8, f("W(lambda_m) = %.4f (< 0.05), W(2 lambda_m) = %.4f (> 1.8)", w1, w2));
}

void c7() {
    const auto& bs = fixtures::bands();
    const auto sc = fixtures::scales(bs);
    auto fit = [&](const GiantAtom& a) {
        const auto s = bound_state(a, bs, default_xgrid(a, bs, sc.L_eff, 16, 8.0));
        const auto d = fit_decay_length(s, sc.lm, 2 * sc.L_eff);
        return std::pair{d.left / sc.L_eff, d.right / sc.L_eff};
    };
    const auto [sl, sr] = fit(make_atom({{0.0, fixtures::g_weak}}, sc.delta0));
    const auto [fl, fr] = fit(make_atom({{0.0, fixtures::g_weak}, {0.5 * sc.lm, 3.4 * fixtures::g_weak}}, sc.delta0));
    const bool ok = std::max({std::abs(sl - 1), std::abs(sr - 1), std::abs(fl - 1), std::abs(fr - 1)}) <= 0.1;
    report(7, ok, f("fit / sqrt(alpha_m/delta0): small atom left %.4f right %.4f; two-leg atom left %.4f right %.4f",
                    sl, sr, fl, fr));
}

void c8() {
    const std::string cfg_path = std::string(GIANTPCW_CONFIGS) + "/shift-scan.ini";
    const auto cfg = load_config(cfg_path, command_schema("shift-scan"));
    const auto t = run_command("shift-scan", cfg);
    const double ratio = t.rows.front()[3];
    std::vector<double> s, ab, ba;
    for (const auto& r : t.rows) s.push_back(r[0]), ab.push_back(std::abs(r[1])), ba.push_back(std::abs(r[2]));
    double cross = NAN;
    for (std::size_t i = 0; i + 1 < s.size() && std::isnan(cross); ++i) {
        const double d0 = ab[i] - ba[i], d1 = ab[i + 1] - ba[i + 1];
        if (d0 == 0) cross = s[i];
        else if (d0 * d1 < 0) cross = s[i] + (s[i + 1] - s[i]) * d0 / (d0 - d1);
    }
    bool linear = false;
    double r2a = 0, r2b = 0, sla = 0, slb = 0;
    if (!std::isnan(cross)) {
        std::vector<double> xs, ya, yb;
        for (std::size_t i = 0; i < s.size(); ++i)
            if (std::abs(s[i] - cross) <= 0.1) xs.push_back(s[i]), ya.push_back(ab[i]), yb.push_back(ba[i]);
        std::tie(sla, r2a) = line_fit(xs, ya);
        std::tie(slb, r2b) = line_fit(xs, yb);
        linear = xs.size() >= 5 && r2a >= 0.98 && r2b >= 0.98 && sla < 0 && slb > 0;
    }
    const bool ok = ratio >= 10 && !std::isnan(cross) && std::abs(cross - 0.25) <= 0.02 && linear;
    report(8, ok, f("|J_AB/J_BA| at ds = 0: %.3f (>= 10); crossing at ds = %.4f lambda_m (0.25 +/- 0.02); "
                    "within 0.1 of it |J_AB| slope %.3g R2 %.4f, |J_BA| slope %.3g R2 %.4f",
                    ratio, cross, sla, r2a, slb, r2b));
}

void c9() {
    const auto& bs = fixtures::bands();
    const auto em = effective_mass_fit(bs, 1, fixtures::fit_window * bs.km());
    const double L = 2 * std::numbers::pi / (bs.k[1] - bs.k[0]);
    const double g0 = 0.8 * MHz;
    const auto p80 = find_poles(g0, em.alpha_m, 80 * MHz, L);
    const double J = p80.z0 / MHz;
    int bad = 0;
    double lo = NAN, hi = NAN, worst = 1.0;
    for (double d = 31; d <= 200; d += 1) {
        const auto pa = find_poles(g0, em.alpha_m, d * MHz, L);
        const bool ok = !pa.z1 && pa.gamma_c == 0.0 && std::abs(pa.res0) >= 0.95;
        worst = std::min(worst, std::abs(pa.res0));
        if (!ok) {
            ++bad;
            if (std::isnan(lo)) lo = d;
            hi = d;
        }
    }
    const bool ok = std::abs(J - 8.0) <= 0.3 * 8.0 && bad == 0;
    report(9, ok, f("J_AB/2pi = z0/2pi = %.3f MHz at 80 MHz (8 +/- 30%%); 31-200 MHz: %d detunings violate "
                    "(from %.0f to %.0f MHz), min |Res(z0)| = %.4f",
                    J, bad, lo, hi, worst));
}

void c10() {
    PumpSchedule s;
    s.J_min = 0.1;
    const auto run = evolve_pump(6, s, 3, 0, s.T / 1e4);
    const double fmin = *std::min_element(run.fidelity_per_cycle.begin(), run.fidelity_per_cycle.end());
    const bool flips = winding_number(0.9, 1.1) == 1 && winding_number(1.1, 0.9) == 0;
    const bool ok = fmin >= 0.9 && run.max_norm_drift <= 1e-8 && flips;
    report(10, ok, f("per-cycle fidelity %.4f %.4f %.4f (>= 0.9), norm drift %.1e, winding flips: %s",
                     run.fidelity_per_cycle[0], run.fidelity_per_cycle[1], run.fidelity_per_cycle[2],
                     run.max_norm_drift, flips ? "yes" : "no"));
}

void c11() {
    int props = 0, failed = 0;
    std::string which;
    for (const auto& [module, ps] : props::suite())
        for (const auto& p : ps) {
            const auto s = props::run(p);
            ++props;
            if (!s.ok() || s.passed + s.failed < p.cases) {
                ++failed;
                which += (which.empty() ? "" : "; ") + module + ": " + p.name +
                         f(" (%d/%d failed)", s.failed, s.passed + s.failed);
            }
        }
    report(11, failed == 0, f("%d properties x >= 100 randomized cases, %d with violations", props, failed) +
                                (which.empty() ? "" : ": " + which));
}

}  // namespace

int main() {
    void (*checks[])() = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11};
    int id = 0;
    for (auto c : checks) {
        ++id;
        try {
            c();
        } catch (const std::exception& e) {
            report(id, false, std::string("error: ") + e.what());
        }
    }
    return failures == 0 ? 0 : 1;
}
